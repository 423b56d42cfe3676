"""Numba-jitted hot kernels.

Same contracts as ``_kernels_numpy``; see that module for the reference
semantics.  First call per signature pays a JIT compile (cached on disk).
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return int((x * _H01) >> np.uint64(56))


@njit(cache=True)
def coverage_scan(rows, combos, v, lam_required, witness_cap):
    n_rows, _ = rows.shape
    n_sub, t = combos.shape
    size = 1
    for _ in range(t):
        size *= v
    weights = np.empty(t, np.int64)
    w = 1
    for i in range(t - 1, -1, -1):
        weights[i] = w
        w *= v
    counts = np.zeros(size, np.int64)
    wit_sub = np.empty(witness_cap, np.int64)
    wit_tuple = np.empty(witness_cap, np.int64)
    n_wit = 0
    miss_count = 0
    lambda_min = n_rows + 1
    for s in range(n_sub):
        for idx in range(size):
            counts[idx] = 0
        for r in range(n_rows):
            idx = 0
            for i in range(t):
                idx += np.int64(rows[r, combos[s, i]]) * weights[i]
            counts[idx] += 1
        for idx in range(size):
            c = counts[idx]
            if c < lambda_min:
                lambda_min = c
            if c < lam_required:
                miss_count += 1
                if n_wit < witness_cap:
                    wit_sub[n_wit] = s
                    wit_tuple[n_wit] = idx
                    n_wit += 1
    return lambda_min, miss_count, wit_sub[:n_wit].copy(), wit_tuple[:n_wit].copy()


@njit(cache=True)
def _submatrix_rank(gen, combo, t, add_t, mul_t, inv_t, neg_t):
    m = gen.shape[0]
    buf = np.empty((m, t), np.uint8)
    for r in range(m):
        for j in range(t):
            buf[r, j] = gen[r, combo[j]]
    rank = 0
    for col in range(t):
        piv = -1
        for r in range(rank, m):
            if buf[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, t):
                tmp = buf[rank, j]
                buf[rank, j] = buf[piv, j]
                buf[piv, j] = tmp
        inv = inv_t[buf[rank, col]]
        for j in range(col, t):
            buf[rank, j] = mul_t[inv, buf[rank, j]]
        for r in range(rank + 1, m):
            f = buf[r, col]
            if f != 0:
                nf = neg_t[f]
                for j in range(col, t):
                    buf[r, j] = add_t[buf[r, j], mul_t[nf, buf[rank, j]]]
        rank += 1
    return rank


@njit(cache=True, parallel=True)
def rank_scan(gens, combos, t, add_t, mul_t, inv_t, neg_t):
    n_gen = gens.shape[0]
    n_sub = combos.shape[0]
    uncovered = np.zeros(n_sub, np.bool_)
    for s in prange(n_sub):
        ok = False
        for g in range(n_gen):
            if _submatrix_rank(gens[g], combos[s], t, add_t, mul_t, inv_t, neg_t) == t:
                ok = True
                break
        if not ok:
            uncovered[s] = True
    return uncovered


@njit(cache=True)
def triple_scan(a_bits, b_bits, c_bits):
    na, w = a_bits.shape
    nb = b_bits.shape[0]
    nc = c_bits.shape[0]
    best = -1
    ia = -1
    ib = -1
    ic = -1
    ab = np.empty(w, np.uint64)
    for i in range(na):
        for j in range(nb):
            cnt = 0
            for k in range(w):
                ab[k] = a_bits[i, k] & b_bits[j, k]
                cnt += _popcount64(ab[k])
            if cnt <= best:
                continue
            for l in range(nc):
                x = 0
                for k in range(w):
                    x += _popcount64(ab[k] & c_bits[l, k])
                if x > best:
                    best = x
                    ia = i
                    ib = j
                    ic = l
                    if best > 3:
                        return best, ia, ib, ic
    if best < 0:
        best = 0
    return best, ia, ib, ic
