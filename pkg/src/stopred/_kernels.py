"""Compiled inner loops.

Matrices enter the kernels column-packed: ``cols[j, w]`` holds rows
``64*w .. 64*w+63`` of column ``j`` as a bit mask.  A permuted view of a
matrix is ``pcols[p, i] = cols[perm_p[i]]``; peeling a set under that view is
the same as peeling its image under the permutation.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_STOPPING = 0
MODE_PEEL = 1
MODE_AGD = 2
MODE_ML = 3
MODE_SAD = 4
# counts patterns breaking ML-fail => AGD-fail => BP-fail
MODE_NEST = 5

UNKNOWN = 2


def n_words(bits: int) -> int:
    return max(1, (bits + 63) // 64)


def pack_words(rows, n: int) -> np.ndarray:
    """Pack int words (bit i = position i) into a (len, W) uint64 array."""
    W = n_words(n)
    out = np.zeros((len(rows), W), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, r in enumerate(rows):
        for w in range(W):
            out[i, w] = (r >> (64 * w)) & mask
    return out


def pack_columns(M) -> np.ndarray:
    """Column masks of M: entry (j, w) holds rows 64w..64w+63 of column j."""
    return pack_words([M.column(j) for j in range(M.n)], max(1, M.m))


def permuted_columns(M, perms) -> np.ndarray:
    """Stack of column-packed views, one per permutation (image arrays)."""
    cols = pack_columns(M)
    idx = np.asarray([list(p) for p in perms], dtype=np.int64)
    return np.ascontiguousarray(cols[idx])


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def lowest_bit(x):
    b = 0
    while (x >> np.uint64(b)) & np.uint64(1) == 0:
        b += 1
    return b


@njit(cache=True)
def span_weight_counts(basis, n):
    """Weight histogram of the span of independent rows, Gray-code order."""
    k, W = basis.shape
    counts = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(W, dtype=np.uint64)
    counts[0] = 1
    total = np.int64(1) << k
    for i in range(1, total):
        j = 0
        while (i >> j) & 1 == 0:
            j += 1
        wt = 0
        for w in range(W):
            cur[w] ^= basis[j, w]
            wt += popcount64(cur[w])
        counts[wt] += 1
    return counts


@njit(cache=True)
def span_words_of_weight(basis, weight, cap):
    """All span words of a given weight (up to cap), packed."""
    k, W = basis.shape
    out = np.zeros((cap, W), dtype=np.uint64)
    cur = np.zeros(W, dtype=np.uint64)
    found = 0
    if weight == 0:
        found = 1
    total = np.int64(1) << k
    for i in range(1, total):
        j = 0
        while (i >> j) & 1 == 0:
            j += 1
        wt = 0
        for w in range(W):
            cur[w] ^= basis[j, w]
            wt += popcount64(cur[w])
        if wt == weight:
            if found < cap:
                for w in range(W):
                    out[found, w] = cur[w]
            found += 1
    return out, found


def binomial_table(n: int, kmax: int) -> np.ndarray:
    t = np.zeros((n + 2, kmax + 2), dtype=np.int64)
    for a in range(n + 2):
        t[a, 0] = 1
        for b in range(1, min(a, kmax + 1) + 1):
            t[a, b] = t[a - 1, b - 1] + (t[a - 1, b] if b <= a - 1 else 0)
    return t


@njit(cache=True)
def unrank_colex(r, sig, binom, out):
    """Write the colex-rank-r sigma-subset into out[0..sig) (ascending)."""
    for i in range(sig, 0, -1):
        c = i - 1
        while binom[c + 1, i] <= r:
            c += 1
        out[i - 1] = c
        r -= binom[c, i]


@njit(cache=True)
def next_colex(c, sig, n):
    """Advance c to the next subset in colex order; False when exhausted."""
    for i in range(sig):
        lim = c[i + 1] if i + 1 < sig else n
        if c[i] + 1 < lim:
            c[i] += 1
            for j in range(i):
                c[j] = j
            return True
    return False


@njit(cache=True)
def is_stopping(cols, idx, L, once, twice):
    W = cols.shape[1]
    for w in range(W):
        once[w] = 0
        twice[w] = 0
    for a in range(L):
        c = idx[a]
        for w in range(W):
            x = cols[c, w]
            twice[w] |= once[w] & x
            once[w] |= x
    for w in range(W):
        if once[w] & ~twice[w]:
            return False
    return True


@njit(cache=True)
def peel(cols, res, L, once, twice):
    """Peel the erased positions res[0..L) in place; returns (L, rounds)."""
    W = cols.shape[1]
    rounds = 0
    while L > 0:
        for w in range(W):
            once[w] = 0
            twice[w] = 0
        for a in range(L):
            c = res[a]
            for w in range(W):
                x = cols[c, w]
                twice[w] |= once[w] & x
                once[w] |= x
        live = False
        for w in range(W):
            once[w] &= ~twice[w]
            if once[w]:
                live = True
        if not live:
            break
        rounds += 1
        nl = 0
        for a in range(L):
            c = res[a]
            hit = False
            for w in range(W):
                if cols[c, w] & once[w]:
                    hit = True
                    break
            if not hit:
                res[nl] = c
                nl += 1
        L = nl
    return L, rounds


@njit(cache=True)
def agd(pcols, res, L, start, once, twice):
    """Peel under each view in turn until a full cycle makes no progress.

    View 0 is always tried first; then views start, start+1, ... cyclically.
    Returns (residual size, peel rounds, permutations applied).
    """
    P = pcols.shape[0]
    L, rounds = peel(pcols[0], res, L, once, twice)
    if P == 1:
        return L, rounds, 0
    idle = 1
    p = start % P
    if p == 0:
        p = 1
    tried = 0
    last = 0
    while L > 0 and idle < P:
        if p == last:
            p = (p + 1) % P
            continue
        L2, r2 = peel(pcols[p], res, L, once, twice)
        tried += 1
        if L2 < L:
            idle = 1
            rounds += r2
            last = p
        else:
            idle += 1
        L = L2
        p = (p + 1) % P
    return L, rounds, tried


@njit(cache=True)
def columns_dependent(cols, idx, L, basis, piv_w, piv_b):
    """True iff the columns idx[0..L) are linearly dependent over GF(2)."""
    W = cols.shape[1]
    nb = 0
    for a in range(L):
        c = idx[a]
        for w in range(W):
            basis[nb, w] = cols[c, w]
        for j in range(nb):
            if (basis[nb, piv_w[j]] >> np.uint64(piv_b[j])) & np.uint64(1):
                for w in range(W):
                    basis[nb, w] ^= basis[j, w]
        pw = -1
        for w in range(W):
            if basis[nb, w]:
                pw = w
                break
        if pw < 0:
            return True
        piv_w[nb] = pw
        piv_b[nb] = lowest_bit(basis[nb, pw])
        nb += 1
    return False


@njit(cache=True)
def count_range(mode, pcols, n, sig, r0, r1, binom, limit):
    """Count failing sigma-subsets with colex rank in [r0, r1).

    Stops early once ``limit`` failures are found (limit <= 0 means no limit).
    Returns (count, rank of the first failure or -1).
    """
    W = pcols.shape[2]
    c = np.zeros(sig, dtype=np.int64)
    res = np.zeros(sig, dtype=np.int64)
    once = np.zeros(W, dtype=np.uint64)
    twice = np.zeros(W, dtype=np.uint64)
    basis = np.zeros((max(sig, 1), W), dtype=np.uint64)
    piv_w = np.zeros(max(sig, 1), dtype=np.int64)
    piv_b = np.zeros(max(sig, 1), dtype=np.int64)
    P = pcols.shape[0]
    count = 0
    first = -1
    if r0 >= r1:
        return 0, -1
    unrank_colex(r0, sig, binom, c)
    r = r0
    while r < r1:
        fail = False
        if mode == MODE_STOPPING:
            fail = is_stopping(pcols[0], c, sig, once, twice)
        elif mode == MODE_PEEL:
            for a in range(sig):
                res[a] = c[a]
            L, _ = peel(pcols[0], res, sig, once, twice)
            fail = L > 0
        elif mode == MODE_AGD:
            for a in range(sig):
                res[a] = c[a]
            L, _, _ = agd(pcols, res, sig, 1, once, twice)
            fail = L > 0
        elif mode == MODE_ML:
            fail = columns_dependent(pcols[0], c, sig, basis, piv_w, piv_b)
        elif mode == MODE_NEST:
            for a in range(sig):
                res[a] = c[a]
            Lb, _ = peel(pcols[0], res, sig, once, twice)
            for a in range(sig):
                res[a] = c[a]
            La, _, _ = agd(pcols, res, sig, 1, once, twice)
            ml = columns_dependent(pcols[0], c, sig, basis, piv_w, piv_b)
            fail = (ml and La == 0) or (La > 0 and Lb == 0)
        else:
            fail = True
            for p in range(P):
                if not is_stopping(pcols[p], c, sig, once, twice):
                    fail = False
                    break
        if fail:
            if first < 0:
                first = r
            count += 1
            if limit > 0 and count >= limit:
                break
        r += 1
        if r < r1:
            next_colex(c, sig, n)
    return count, first


@njit(cache=True)
def list_stopping(cols, n, sig, binom, cap):
    """All sigma-subsets that are stopping sets of cols (up to cap)."""
    W = cols.shape[1]
    total = binom[n, sig]
    c = np.zeros(sig, dtype=np.int64)
    for i in range(sig):
        c[i] = i
    once = np.zeros(W, dtype=np.uint64)
    twice = np.zeros(W, dtype=np.uint64)
    out = np.zeros((cap, sig), dtype=np.int64)
    found = 0
    for _ in range(total):
        if is_stopping(cols, c, sig, once, twice):
            if found < cap:
                for a in range(sig):
                    out[found, a] = c[a]
            found += 1
        next_colex(c, sig, n)
    return out, found


@njit(cache=True)
def _syndrome(cols, est, S):
    n, W = cols.shape
    for w in range(W):
        S[w] = 0
    for j in range(n):
        if est[j] == 1:
            for w in range(W):
                S[w] ^= cols[j, w]


@njit(cache=True)
def peel_values(cols, res, L, est, once, twice, S):
    """Peel while filling in values; est holds 0/1 or UNKNOWN per position."""
    W = cols.shape[1]
    _syndrome(cols, est, S)
    rounds = 0
    while L > 0:
        for w in range(W):
            once[w] = 0
            twice[w] = 0
        for a in range(L):
            c = res[a]
            for w in range(W):
                x = cols[c, w]
                twice[w] |= once[w] & x
                once[w] |= x
        live = False
        for w in range(W):
            once[w] &= ~twice[w]
            if once[w]:
                live = True
        if not live:
            break
        rounds += 1
        nl = 0
        for a in range(L):
            c = res[a]
            row_w = -1
            for w in range(W):
                if cols[c, w] & once[w]:
                    row_w = w
                    break
            if row_w < 0:
                res[nl] = c
                nl += 1
                continue
            b = lowest_bit(cols[c, row_w] & once[row_w])
            v = (S[row_w] >> np.uint64(b)) & np.uint64(1)
            est[c] = np.uint8(v)
            if v:
                for w in range(W):
                    S[w] ^= cols[c, w]
        L = nl
    return L, rounds


@njit(cache=True)
def agd_values(pcols, res, L, est, start, once, twice, S):
    P = pcols.shape[0]
    L, rounds = peel_values(pcols[0], res, L, est, once, twice, S)
    if P == 1:
        return L, rounds, 0
    idle = 1
    p = start % P
    if p == 0:
        p = 1
    tried = 0
    last = 0
    while L > 0 and idle < P:
        if p == last:
            p = (p + 1) % P
            continue
        L2, r2 = peel_values(pcols[p], res, L, est, once, twice, S)
        tried += 1
        if L2 < L:
            idle = 1
            rounds += r2
            last = p
        else:
            idle += 1
        L = L2
        p = (p + 1) % P
    return L, rounds, tried


@njit(cache=True)
def consistent(pcols, res, L, est, once, S):
    """False iff some fully known check row (in any view) has odd parity."""
    P, n, W = pcols.shape
    for p in range(P):
        _syndrome(pcols[p], est, S)
        for w in range(W):
            once[w] = 0
        for a in range(L):
            for w in range(W):
                once[w] |= pcols[p, res[a], w]
        for w in range(W):
            if S[w] & ~once[w]:
                return False
    return True


@njit(cache=True)
def decode_batch(pcols, erased, starts, est_out, res_len, rounds_out, tried_out):
    """Decode many frames; erased[t] is a 0/1 mask and est_out[t] holds known values."""
    T, n = erased.shape
    W = pcols.shape[2]
    res = np.zeros(n, dtype=np.int64)
    once = np.zeros(W, dtype=np.uint64)
    twice = np.zeros(W, dtype=np.uint64)
    S = np.zeros(W, dtype=np.uint64)
    for t in range(T):
        L = 0
        for j in range(n):
            if erased[t, j]:
                res[L] = j
                L += 1
                est_out[t, j] = UNKNOWN
        L, r, k = agd_values(pcols, res, L, est_out[t], starts[t], once, twice, S)
        res_len[t] = L
        rounds_out[t] = r
        tried_out[t] = k
