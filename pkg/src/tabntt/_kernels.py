"""Compiled inner loops.

Each kernel performs a fixed, data-independent sequence of table reads,
additions and compare/subtract steps per element, so callers can tally
operation counts exactly as (elements x per-element cost).
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _ladder(v, modulus, t):
    # thresholds modulus*2^t, ..., modulus*2, modulus: t + 1 comparisons
    for s in range(t, -1, -1):
        w = v - (modulus << s)
        v = w if w >= 0 else v
    return v


@njit(cache=True)
def reduce_many(v, modulus, t):
    out = np.empty_like(v)
    for i in range(v.size):
        out[i] = _ladder(v[i], modulus, t)
    return out


@njit(cache=True, inline="always")
def _dot4(table, RR, a0, a1, a2, a3, b0, b1, b2, b3):
    # a_i pre-shifted by r; plane l = i + j starts at l*RR.  Unsigned
    # offsets spare numba's negative-index wraparound test on every read.
    u = np.uint64
    R1, R2, R3, R4, R5, R6 = u(RR), u(2 * RR), u(3 * RR), u(4 * RR), u(5 * RR), u(6 * RR)
    a0, a1, a2, a3 = u(a0), u(a1), u(a2), u(a3)
    b0, b1, b2, b3 = u(b0), u(b1), u(b2), u(b3)
    return (
        np.int64(table[a0 + b0]) + table[R1 + a0 + b1] + table[R2 + a0 + b2] + table[R3 + a0 + b3]
        + table[R1 + a1 + b0] + table[R2 + a1 + b1] + table[R3 + a1 + b2] + table[R4 + a1 + b3]
        + table[R2 + a2 + b0] + table[R3 + a2 + b1] + table[R4 + a2 + b2] + table[R5 + a2 + b3]
        + table[R3 + a3 + b0] + table[R4 + a3 + b1] + table[R5 + a3 + b2] + table[R6 + a3 + b3]
    )


@njit(cache=True, inline="always")
def _mulmod(x, y, table, r, d, P, t):
    # table is the flattened (2d, R, R) array; entry (i+j, a_i, b_j)
    RR = 1 << (2 * r)
    mask = (1 << r) - 1
    if d == 4:
        acc = _dot4(
            table, RR,
            (x & mask) << r, ((x >> r) & mask) << r, ((x >> 2 * r) & mask) << r, ((x >> 3 * r) & mask) << r,
            y & mask, (y >> r) & mask, (y >> 2 * r) & mask, (y >> 3 * r) & mask,
        )
        return _ladder(acc, P, t)
    acc = 0
    for i in range(d):
        pos = i * RR + (((x >> (r * i)) & mask) << r)
        yy = y
        for j in range(d):
            acc += table[pos + (yy & mask)]
            pos += RR
            yy >>= r
    return _ladder(acc, P, t)


@njit(cache=True)
def mulmod_many(a, b, table, r, d, P, t):
    out = np.empty_like(a)
    for i in range(a.size):
        out[i] = _mulmod(a[i], b[i], table, r, d, P, t)
    return out


@njit(cache=True)
def twiddle_transpose(y, tw, table, r, d, P, t):
    """out[b, k, j] = y[b, j, k] * tw[j, k] mod P."""
    B, n1, n2 = y.shape
    out = np.empty((B, n2, n1), y.dtype)
    for b in range(B):
        for j in range(n1):
            for k in range(n2):
                out[b, k, j] = _mulmod(y[b, j, k], tw[j, k], table, r, d, P, t)
    return out


@njit(cache=True)
def direct_leaves(x, W, table, r, d, P, t_mul, t_sum):
    """Size-s leaf transforms along the last axis of a (B, C, s) array of any layout."""
    B, C, s = x.shape
    out = np.empty((B, C, s), x.dtype)
    if d != 4:
        for b in range(B):
            for c in range(C):
                for k in range(s):
                    acc = 0
                    for j in range(s):
                        acc += _mulmod(x[b, c, j], W[j, k], table, r, d, P, t_mul)
                    out[b, c, k] = _ladder(acc, P, t_sum)
        return out
    # Same reads as _mulmod.  Entries are symmetric in (a, b), so the constant
    # W digit picks the row: a leaf matrix then touches a few KB of table.
    RR = 1 << (2 * r)
    mask = (1 << r) - 1
    wd = np.empty((s, s, 4), np.int64)
    for j in range(s):
        for k in range(s):
            for i in range(4):
                wd[j, k, i] = ((W[j, k] >> (r * i)) & mask) << r
    xd = np.empty((s, 4), np.int64)
    for b in range(B):
        for c in range(C):
            for j in range(s):
                v = x[b, c, j]
                for i in range(4):
                    xd[j, i] = (v >> (r * i)) & mask
            for k in range(s):
                acc = 0
                for j in range(s):
                    p = _dot4(table, RR, wd[j, k, 0], wd[j, k, 1], wd[j, k, 2], wd[j, k, 3],
                              xd[j, 0], xd[j, 1], xd[j, 2], xd[j, 3])
                    acc += _ladder(p, P, t_mul)
                out[b, c, k] = _ladder(acc, P, t_sum)
    return out


@njit(cache=True)
def decompose_many(c, fwd, qs, r, d, t_dec):
    """Residues of each value modulo each leaf prime: shape (len(c), Z)."""
    Z = qs.size
    mask = (1 << r) - 1
    out = np.empty((c.size, Z), np.int64)
    for i in range(c.size):
        v = c[i]
        for j in range(Z):
            acc = 0
            for k in range(d):
                acc += fwd[k, j, (v >> (r * k)) & mask]
            out[i, j] = _ladder(acc, qs[j], t_dec)
    return out


@njit(cache=True)
def combine_many(res, comb, comb_off, M, t_comb, fold, r, P, t_fold):
    n, Z = res.shape
    mask = (1 << r) - 1
    dM = fold.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        v = 0
        for j in range(Z):
            v += comb[comb_off[j] + res[i, j]]
        v = _ladder(v, M, t_comb)
        w = 0
        for k in range(dM):
            w += fold[k, (v >> (r * k)) & mask]
        out[i] = _ladder(w, P, t_fold)
    return out


@njit(cache=True)
def lookup_leaves(x, qs, fwd, r, d, t_dec, dft, dft_off, comb, comb_off, M, t_comb, fold, P, t_fold):
    B, s = x.shape
    Z = qs.size
    mask = (1 << r) - 1
    dM = fold.shape[0]
    out = np.empty_like(x)
    outs = np.empty((Z, s), np.int64)
    for b in range(B):
        for j in range(Z):
            q = qs[j]
            idx = 0
            for i in range(s):
                v = x[b, i]
                acc = 0
                for k in range(d):
                    acc += fwd[k, j, (v >> (r * k)) & mask]
                idx = idx * q + _ladder(acc, q, t_dec)
            base = dft_off[j] + idx * s
            for k in range(s):
                outs[j, k] = dft[base + k]
        for k in range(s):
            v = 0
            for j in range(Z):
                v += comb[comb_off[j] + outs[j, k]]
            v = _ladder(v, M, t_comb)
            w = 0
            for l in range(dM):
                w += fold[l, (v >> (r * l)) & mask]
            out[b, k] = _ladder(w, P, t_fold)
    return out
