"""Compiled per-epoch kernels over CSR arrays.

Queue layout shared by all local kernels: ``fifo`` is an int64 ring buffer of
capacity n+1, ``in_q`` a uint8 membership array, ``qs = [head, size]``.  Each
epoch kernel dequeues exactly the entries present on entry (the epoch's
S_t); nodes enqueued while processing land behind them and belong to the
next epoch — the same discipline as an explicit epoch sentinel.

Stale entries (|r_u| below threshold at dequeue time) are skipped and do not
contribute to vol(S_t) or gamma_t.  Neighbors are visited in sorted CSR
order, so queue order is deterministic.
"""

import numpy as np
from numba import njit


# --------------------------------------------------------------------------
# local solvers: one kernel call = one epoch
# --------------------------------------------------------------------------

@njit(cache=True)
def appr_epoch(offsets, nbrs, degf, p, z, fifo, in_q, qs, snodes, alpha, eps):
    """One epoch of the residual-push solver on (p, z):
    p_u += alpha*nu; z_v += (1-alpha)*nu/(2 d_u); z_u <- (1-alpha)*nu/2.

    Processed node ids are written to snodes[:processed].
    Returns (processed, vol, gamma_num_z, min_nu, min_z_written).
    """
    cap = fifo.shape[0]
    head = qs[0]
    size = qs[1]
    count = size
    processed = 0
    vol = 0
    gnum = 0.0
    min_nu = np.inf
    min_zw = np.inf
    half = 0.5 * (1.0 - alpha)
    for _ in range(count):
        u = fifo[head]
        head = (head + 1) % cap
        size -= 1
        in_q[u] = 0
        nu = z[u]
        if nu < eps * degf[u]:
            continue  # stale
        snodes[processed] = u
        processed += 1
        vol += int(degf[u])
        gnum += nu
        if nu < min_nu:
            min_nu = nu
        p[u] += alpha * nu
        znew = half * nu
        z[u] = znew
        if znew < min_zw:
            min_zw = znew
        spread = half * nu / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            zv = z[v] + spread
            z[v] = zv
            if zv < min_zw:
                min_zw = zv
            if in_q[v] == 0 and zv >= eps * degf[v]:
                fifo[(head + size) % cap] = v
                size += 1
                in_q[v] = 1
        if in_q[u] == 0 and z[u] >= eps * degf[u]:
            fifo[(head + size) % cap] = u
            size += 1
            in_q[u] = 1
    qs[0] = head
    qs[1] = size
    return processed, vol, gnum, min_nu, min_zw


@njit(cache=True)
def gs_sor_m_epoch(offsets, nbrs, degf, p, z, fifo, in_q, qs, snodes, alpha, omega, eps):
    """One epoch of relaxed coordinate descent on the unsymmetric system
    M pi = e_s, M = alpha^{-1} (I - (1-alpha)(I + A D^{-1})/2):
    step = omega*z_u/M_uu; p_u += step; z -= step * (column u of M).

    Returns (processed, vol, gamma_num_z).
    """
    cap = fifo.shape[0]
    head = qs[0]
    size = qs[1]
    count = size
    processed = 0
    vol = 0
    gnum = 0.0
    step_coef = 2.0 * alpha * omega / (1.0 + alpha)
    spread_coef = omega * (1.0 - alpha) / (1.0 + alpha)
    for _ in range(count):
        u = fifo[head]
        head = (head + 1) % cap
        size -= 1
        in_q[u] = 0
        zu = z[u]
        if abs(zu) < eps * degf[u]:
            continue  # stale
        snodes[processed] = u
        processed += 1
        vol += int(degf[u])
        gnum += abs(zu)
        p[u] += step_coef * zu
        z[u] -= omega * zu
        spread = spread_coef * zu / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            z[v] += spread
            if in_q[v] == 0 and abs(z[v]) >= eps * degf[v]:
                fifo[(head + size) % cap] = v
                size += 1
                in_q[v] = 1
        if in_q[u] == 0 and abs(z[u]) >= eps * degf[u]:
            fifo[(head + size) % cap] = u
            size += 1
            in_q[u] = 1
    qs[0] = head
    qs[1] = size
    return processed, vol, gnum


@njit(cache=True)
def sor_epoch(offsets, nbrs, degf, x, r, fifo, in_q, qs, snodes, omega, push_coef, thr):
    """One epoch of scaled-coordinate relaxation (APPR generalized to any
    omega): x_u += omega*ru; r_u -= omega*ru; r_v += push_coef*ru/d_u.

    push_coef = (1-alpha)*omega/(1+alpha); thr = c*eps.
    Returns (processed, vol, gamma_num).
    """
    cap = fifo.shape[0]
    head = qs[0]
    size = qs[1]
    count = size
    processed = 0
    vol = 0
    gnum = 0.0
    for _ in range(count):
        u = fifo[head]
        head = (head + 1) % cap
        size -= 1
        in_q[u] = 0
        ru = r[u]
        if abs(ru) < thr * degf[u]:
            continue  # stale
        snodes[processed] = u
        processed += 1
        vol += int(degf[u])
        gnum += abs(ru)
        x[u] += omega * ru
        r[u] -= omega * ru
        spread = push_coef * ru / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            r[v] += spread
            if in_q[v] == 0 and abs(r[v]) >= thr * degf[v]:
                fifo[(head + size) % cap] = v
                size += 1
                in_q[v] = 1
        if in_q[u] == 0 and abs(r[u]) >= thr * degf[u]:
            fifo[(head + size) % cap] = u
            size += 1
            in_q[u] = 1
    qs[0] = head
    qs[1] = size
    return processed, vol, gnum


@njit(cache=True)
def gd_epoch(offsets, nbrs, degf, x, r, fifo, in_q, qs, snodes, svals, rho, thr):
    """One epoch of batched local gradient descent: drain the queue into
    (u, r_u) snapshots with x_u += r_u, r_u <- 0; then push
    rho * snapshot / d_u to every neighbor.  gamma uses epoch-start
    snapshots.

    Returns (processed, vol, gamma_num).
    """
    cap = fifo.shape[0]
    head = qs[0]
    size = qs[1]
    count = size
    processed = 0
    vol = 0
    gnum = 0.0
    for _ in range(count):
        u = fifo[head]
        head = (head + 1) % cap
        size -= 1
        in_q[u] = 0
        ru = r[u]
        if abs(ru) < thr * degf[u]:
            continue  # stale
        snodes[processed] = u
        svals[processed] = ru
        processed += 1
        vol += int(degf[u])
        gnum += abs(ru)
        x[u] += ru
        r[u] = 0.0
    for i in range(processed):
        u = snodes[i]
        spread = rho * svals[i] / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            r[v] += spread
            if in_q[v] == 0 and abs(r[v]) >= thr * degf[v]:
                fifo[(head + size) % cap] = v
                size += 1
                in_q[v] = 1
    qs[0] = head
    qs[1] = size
    return processed, vol, gnum


@njit(cache=True)
def mom_epoch(offsets, nbrs, degf, x, r, mom, fifo, in_q, qs,
              snodes, svals, pnodes, pvals, plen,
              coef_r, coef_m, rho, thr, full_support):
    """One epoch of a momentum solver (Chebyshev or heavy-ball coefficients).

    Batch step Delta_u = coef_r*r_u + coef_m*mom_u on the epoch's support,
    applied as x += Delta, r += -Delta + rho*(A D^{-1} push of Delta);
    momentum recursion mom += Delta - Delta_prev with Delta_prev held
    sparsely in (pnodes, pvals)[:plen].

    Returns (processed, vol, gamma_num, new_plen).
    """
    cap = fifo.shape[0]
    head = qs[0]
    size = qs[1]
    n = degf.shape[0]
    processed = 0
    vol = 0
    gnum = 0.0
    if full_support:
        for u in range(n):
            snodes[processed] = u
            svals[processed] = coef_r * r[u] + coef_m * mom[u]
            processed += 1
            vol += int(degf[u])
            gnum += abs(r[u])
        # drop any queued entries; the queue is unused in forced mode
        head = (head + size) % cap
        size = 0
    else:
        count = size
        for _ in range(count):
            u = fifo[head]
            head = (head + 1) % cap
            size -= 1
            in_q[u] = 0
            ru = r[u]
            if abs(ru) < thr * degf[u]:
                continue  # stale
            snodes[processed] = u
            svals[processed] = coef_r * ru + coef_m * mom[u]
            processed += 1
            vol += int(degf[u])
            gnum += abs(ru)
    # apply the restricted step
    for i in range(processed):
        u = snodes[i]
        d = svals[i]
        x[u] += d
        r[u] -= d
        spread = rho * d / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            r[v] += spread
            if (not full_support) and in_q[v] == 0 and abs(r[v]) >= thr * degf[v]:
                fifo[(head + size) % cap] = v
                size += 1
                in_q[v] = 1
    # re-scan the step support: residuals there may have crossed the
    # threshold in either direction (including sign changes)
    if not full_support:
        for i in range(processed):
            u = snodes[i]
            if in_q[u] == 0 and abs(r[u]) >= thr * degf[u]:
                fifo[(head + size) % cap] = u
                size += 1
                in_q[u] = 1
    # momentum recursion
    for i in range(processed):
        mom[snodes[i]] += svals[i]
    for i in range(plen):
        mom[pnodes[i]] -= pvals[i]
    for i in range(processed):
        pnodes[i] = snodes[i]
        pvals[i] = svals[i]
    qs[0] = head
    qs[1] = size
    return processed, vol, gnum, processed


# --------------------------------------------------------------------------
# shared sparse matvecs (globals use the same push pattern as the locals)
# --------------------------------------------------------------------------

@njit(cache=True)
def push_matvec(offsets, nbrs, degf, y, out):
    """out = (A D^{-1}) y — scaled-coordinate operator, 2m operations."""
    out[:] = 0.0
    n = degf.shape[0]
    for u in range(n):
        spread = y[u] / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            out[nbrs[j]] += spread
    return out


@njit(cache=True)
def sym_matvec(offsets, nbrs, inv_sqrt_d, y, out):
    """out = (D^{-1/2} A D^{-1/2}) y — symmetric form for CG."""
    out[:] = 0.0
    n = inv_sqrt_d.shape[0]
    for u in range(n):
        spread = y[u] * inv_sqrt_d[u]
        for j in range(offsets[u], offsets[u + 1]):
            out[nbrs[j]] += spread
    for v in range(n):
        out[v] *= inv_sqrt_d[v]
    return out


@njit(cache=True)
def sor_sweep(offsets, nbrs, degf, x, r, omega, push_coef):
    """One full forward-substitution sweep over nodes 0..n-1 (no thresholds)."""
    n = degf.shape[0]
    for u in range(n):
        ru = r[u]
        x[u] += omega * ru
        r[u] -= omega * ru
        spread = push_coef * ru / degf[u]
        for j in range(offsets[u], offsets[u + 1]):
            r[nbrs[j]] += spread


# --------------------------------------------------------------------------
# sweep cut
# --------------------------------------------------------------------------

@njit(cache=True)
def sweep_prefix_cuts(offsets, nbrs, order):
    """Incremental vol(S) and |boundary(S)| over prefixes of `order`.

    Adding u changes the boundary by d_u - 2*|N(u) ∩ S|.
    """
    n = offsets.shape[0] - 1
    k = order.shape[0]
    in_S = np.zeros(n, dtype=np.uint8)
    vols = np.empty(k, dtype=np.int64)
    bnds = np.empty(k, dtype=np.int64)
    vol = 0
    bnd = 0
    for i in range(k):
        u = order[i]
        du = offsets[u + 1] - offsets[u]
        shared = 0
        for j in range(offsets[u], offsets[u + 1]):
            if in_S[nbrs[j]] == 1:
                shared += 1
        vol += du
        bnd += du - 2 * shared
        in_S[u] = 1
        vols[i] = vol
        bnds[i] = bnd
    return vols, bnds
