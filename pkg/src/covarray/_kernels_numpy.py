"""Pure-numpy kernels — the reference implementations.

coverage_scan
    For every column subset (one row of ``combos``), tally how often each
    t-tuple of symbols occurs; return the global minimum multiplicity, the
    total number of (subset, tuple) misses below ``lam_required``, and the
    first ``witness_cap`` misses in (subset, tuple-index) enumeration order.

rank_scan
    For every column subset, report True when *every* generator's m x t
    submatrix has rank < t over GF(q).  Field arithmetic is table-driven so
    prime-power q works unchanged.

triple_scan
    Maximum bitset triple-intersection size over A x B x C with pairwise
    pruning.  Returns the first witness attaining the maximum in (a, b, c)
    scan order; scanning stops at the first intersection exceeding three.
"""
from __future__ import annotations

import numpy as np


def coverage_scan(rows, combos, v, lam_required, witness_cap):
    n_rows = rows.shape[0]
    n_sub, t = combos.shape
    size = v ** t
    weights = v ** np.arange(t - 1, -1, -1, dtype=np.int64)
    wit_sub: list[int] = []
    wit_tuple: list[int] = []
    miss_count = 0
    lambda_min = n_rows + 1
    rows64 = rows.astype(np.int64)
    for s in range(n_sub):
        idx = rows64[:, combos[s]] @ weights
        counts = np.bincount(idx, minlength=size)
        c_min = int(counts.min())
        if c_min < lambda_min:
            lambda_min = c_min
        if c_min < lam_required:
            missing = np.nonzero(counts < lam_required)[0]
            miss_count += len(missing)
            for m in missing:
                if len(wit_sub) < witness_cap:
                    wit_sub.append(s)
                    wit_tuple.append(int(m))
    return (lambda_min, miss_count,
            np.array(wit_sub, np.int64), np.array(wit_tuple, np.int64))


def _rank_batch(sub, t, add_t, mul_t, inv_t, neg_t):
    """Ranks of a stack of m x t matrices over GF(q), vectorized elimination."""
    a = sub.copy()
    n_mat, m, n = a.shape
    row = np.zeros(n_mat, np.int64)
    rr = np.arange(m)[None, :]
    for col in range(n):
        cand = (a[:, :, col] != 0) & (rr >= row[:, None])
        sidx = np.nonzero(cand.any(axis=1))[0]
        if sidx.size == 0:
            continue
        piv = cand[sidx].argmax(axis=1)
        r0 = row[sidx]
        tmp = a[sidx, r0].copy()
        a[sidx, r0] = a[sidx, piv]
        a[sidx, piv] = tmp
        pivot_rows = mul_t[inv_t[a[sidx, r0, col]][:, None], a[sidx, r0]]
        a[sidx, r0] = pivot_rows
        below = rr > r0[:, None]
        fac = np.where(below, a[sidx, :, col], 0)
        a[sidx] = add_t[a[sidx], mul_t[neg_t[fac][:, :, None], pivot_rows[:, None, :]]]
        row[sidx] = r0 + 1
    return row


def rank_scan(gens, combos, t, add_t, mul_t, inv_t, neg_t, chunk=1 << 16):
    n_gen = gens.shape[0]
    n_sub = combos.shape[0]
    uncovered = np.ones(n_sub, bool)
    for lo in range(0, n_sub, chunk):
        hi = min(lo + chunk, n_sub)
        part = np.ones(hi - lo, bool)
        for g in range(n_gen):
            todo = np.nonzero(part)[0]
            if todo.size == 0:
                break
            sub = gens[g][:, combos[lo:hi][todo]].transpose(1, 0, 2)
            ranks = _rank_batch(sub, t, add_t, mul_t, inv_t, neg_t)
            part[todo[ranks == t]] = False
        uncovered[lo:hi] = part
    return uncovered


def triple_scan(a_bits, b_bits, c_bits):
    na = a_bits.shape[0]
    best = -1
    ia = ib = ic = -1
    for i in range(na):
        ab = a_bits[i][None, :] & b_bits
        pair_cnt = np.bitwise_count(ab).sum(axis=1)
        for j in np.nonzero(pair_cnt > best)[0]:
            if pair_cnt[j] <= best:
                continue
            cnt = np.bitwise_count(ab[j][None, :] & c_bits).sum(axis=1).astype(np.int64)
            viol = np.nonzero(cnt > 3)[0]
            if viol.size:
                l = int(viol[0])
                return int(cnt[l]), i, int(j), l
            m = int(cnt.max()) if cnt.size else -1
            if m > best:
                best = m
                ia, ib, ic = i, int(j), int(cnt.argmax())
    if best < 0:
        best = 0
    return best, ia, ib, ic
