"""Redundant parity-check matrix constructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .codebook import Code, Cog, Field2m, bch_pcm, hamming_standard_pcm
from .gf2 import BitMatrix, BitWord, independent_rows, matmul, rank, rotate, support_of
from .stopping import (
    ENUMERATION_GUARD,
    GuardError,
    StoppingDistance,
    has_stopping_distance,
    list_stopping_sets,
    stopping_distance,
)


class ConstructionError(ValueError):
    pass


@dataclass
class ConstructionReport:
    matrix: BitMatrix
    stopping_distance: StoppingDistance | None
    description: dict = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return self.matrix.m

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def to_json(self) -> dict:
        sd = self.stopping_distance
        return {
            "rows": self.rows,
            "rank": self.rank,
            "stopping_distance": None if sd is None else sd.value,
            "stopping_distance_exact": None if sd is None else sd.exact,
            "stopping_distance_checked_to": None if sd is None else sd.checked,
            **self.description,
        }


def _check_rows(H: BitMatrix, code: Code | None):
    if code is None:
        return
    if not all(code.dual_contains(r) for r in H.rows):
        raise ConstructionError("a row is not a dual codeword")
    if rank(H) != code.n - code.k:
        raise ConstructionError(f"rank {rank(H)} differs from n - k = {code.n - code.k}")


def _word(cog) -> BitWord:
    return cog.word if isinstance(cog, Cog) else cog


def cyclic_rows(word: BitWord, m: int) -> BitMatrix:
    return BitMatrix(word.length, tuple(rotate(word.bits, s, word.length) for s in range(m)))


def cyclic_pcm(cog, m: int, code: Code | None = None, cap: int = 0) -> ConstructionReport:
    """Rows are shifts 0..m-1 of the cog; stopping distance checked up to ``cap``."""
    w = _word(cog)
    n = w.length
    if not 1 <= m <= n:
        raise ConstructionError("m must lie in 1..n")
    H = cyclic_rows(w, m)
    target = code.n - code.k if code is not None else rank(cyclic_rows(w, n))
    if rank(H) < target:
        raise ConstructionError(f"{m} shifts have rank {rank(H)} < {target}")
    _check_rows(H, code)
    sd = stopping_distance(H, cap) if cap else None
    return ConstructionReport(H, sd, {"method": "cyclic", "m": m})


def extend_with_parity(H: BitMatrix, extended_code: Code | None = None) -> BitMatrix:
    """Append an overall parity bit at index n to every row."""
    n = H.n
    out = BitMatrix(n + 1, tuple(r | ((r.bit_count() & 1) << n) for r in H.rows))
    if extended_code is not None and not all(extended_code.dual_contains(r) for r in out.rows):
        raise ConstructionError("extended rows are not dual codewords of the extended code")
    return out


@dataclass
class SearchResult:
    ell: int
    per_cog: list[tuple[Cog, int | None]]

    @property
    def minimum(self) -> int | None:
        vals = [m for _, m in self.per_cog if m is not None]
        return min(vals) if vals else None


def min_rows_for(word: BitWord, ell: int, m_lo: int, m_max: int, target_rank: int,
                 guard: int = ENUMERATION_GUARD) -> int | None:
    """Least m in [m_lo, m_max] whose first m shifts have full rank and stopping distance >= ell."""
    n = word.length
    shifts = [rotate(word.bits, s, n) for s in range(n)]
    lo = m_lo
    while lo <= m_max and rank(BitMatrix(n, tuple(shifts[:lo]))) < target_rank:
        lo += 1
    if lo > m_max:
        return None

    def ok(m):
        return has_stopping_distance(BitMatrix(n, tuple(shifts[:m])), ell, guard)

    if not ok(m_max):
        return None
    hi = m_max
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return hi


def search_min_rows(cogs, ell: int, m_max: int, n_minus_k: int,
                    guard: int = ENUMERATION_GUARD) -> SearchResult:
    """Per-cog least number of consecutive shifts reaching stopping distance ell."""
    out = []
    for c in cogs:
        c = c if isinstance(c, Cog) else Cog(c)
        out.append((c, min_rows_for(c.word, ell, n_minus_k, m_max, n_minus_k, guard)))
    return SearchResult(ell, out)


def generic_erasure_set(mbar: int, sbar: int) -> BitMatrix:
    """All length-mbar vectors with a_1 = 1 and weight <= sbar, by weight then position."""
    if not 1 <= sbar <= mbar:
        raise ValueError("need 1 <= sbar <= mbar")
    rows = []
    for extra in range(sbar):
        for rest in combinations(range(1, mbar), extra):
            rows.append(1 | sum(1 << i for i in rest))
    return BitMatrix(mbar, tuple(rows))


def apply_generic_set(A: BitMatrix, H: BitMatrix) -> BitMatrix:
    return matmul(A, H)


def closure_sums(H: BitMatrix, ell: int, guard: int = 10**6) -> BitMatrix:
    """All nonzero sums of at most ell-2 distinct rows of H."""
    if ell < 3:
        raise ValueError("ell must be at least 3")
    total = sum(comb(H.m, i) for i in range(1, ell - 1))
    if total > guard:
        raise GuardError(f"{total} row sums exceed the guard {guard}")
    rows = []
    for size in range(1, ell - 1):
        for combo in combinations(H.rows, size):
            acc = 0
            for r in combo:
                acc ^= r
            if acc:
                rows.append(acc)
    return BitMatrix(H.n, tuple(rows))


def walsh_hadamard(F: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of an integer vector of length 2^r."""
    a = F.astype(np.int64).copy()
    h = 1
    N = a.shape[0]
    while h < N:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        a = a.reshape(N)
        h *= 2
    return a


def resolve_counts(sets: np.ndarray, colvals: np.ndarray, dim: int) -> np.ndarray:
    """For every coefficient vector u in GF(2)^dim, the number of sets resolved by u*B.

    ``colvals[p]`` is column p of the basis B packed as a dim-bit integer.  A set S
    is resolved by u when exactly one p in S has <u, colvals[p]> = 1.  Expanding
    that indicator in characters gives sum over T subset of S of
    (|S| - 2|T|) * chi_{xor_T}(u) / 2^|S|.
    """
    F = np.zeros(1 << dim, dtype=np.int64)
    if len(sets) == 0:
        return F
    sig = sets.shape[1]
    vals = colvals[sets]
    for mask in range(1 << sig):
        t = bin(mask).count("1")
        key = np.zeros(len(sets), dtype=np.int64)
        for i in range(sig):
            if (mask >> i) & 1:
                key ^= vals[:, i]
        np.add.at(F, key, sig - 2 * t)
    counts = walsh_hadamard(F)
    return counts >> sig


def _resolved_mask(sets: np.ndarray, word_cols: np.ndarray) -> np.ndarray:
    return word_cols[sets].sum(axis=1) == 1


@dataclass
class GreedyStall(ConstructionError):
    residual: list


def _greedy(basis_rows: list[int], n: int, sets_by_size: dict[int, np.ndarray],
            pool_filter=None) -> list[int]:
    """Greedily add dual words until every listed set is resolved."""
    dim = len(basis_rows)
    colvals = np.zeros(n, dtype=np.int64)
    for i, r in enumerate(basis_rows):
        for p in support_of(r):
            colvals[p] |= 1 << i
    added = []
    for sig in sorted(sets_by_size):
        sets = sets_by_size[sig]
        while len(sets):
            counts = resolve_counts(sets, colvals, dim)
            if pool_filter is not None:
                counts = np.where(pool_filter, counts, -1)
            best = counts.max()
            if best <= 0:
                raise GreedyStall("greedy search stalled", [tuple(s) for s in sets[:20]])
            ties = np.flatnonzero(counts == best)
            words = []
            for u in ties:
                x = 0
                for i in support_of(int(u)):
                    x ^= basis_rows[i]
                words.append((tuple(support_of(x)), x))
            _, word = min(words)
            added.append(word)
            word_cols = np.array([(word >> p) & 1 for p in range(n)], dtype=np.int64)
            sets = sets[~_resolved_mask(sets, word_cols)]
    return added


def _sets_array(sets, sig) -> np.ndarray:
    return np.array(sets, dtype=np.int64).reshape(-1, sig)


def _span_words(basis: list[int]) -> list[int]:
    words = [0] * (1 << len(basis))
    for u in range(1, len(words)):
        low = (u & -u).bit_length() - 1
        words[u] = words[u ^ (1 << low)] ^ basis[low]
    return words


GHT_POOLS = ("min-weight", "all", "pair-sums")


def generalized_ht_bch(field: Field2m, code: Code | None = None, pool: str = "min-weight",
                       verify: bool = True) -> ConstructionReport:
    """Redundant parity-check matrix for the double-error-correcting BCH code.

    Steps: generic (m, 4) set on the Hamming matrix; the alpha^{3j} rows;
    rows resolving weight-3 Hamming codewords with alpha^{3a} = alpha^{3b}
    (only when 3 divides n); greedy rows for the remaining stopping sets of
    size 3, then size 4.  Greedy candidates are chosen by ``pool``: dual words
    of minimum weight, every nonzero dual word, or sums of one generic row and
    one alpha^{3j} row.
    """
    if pool not in GHT_POOLS:
        raise ValueError(f"pool must be one of {GHT_POOLS}")
    n = field.order
    m = field.m
    H_hs = hamming_standard_pcm(m, field)
    H_hg = apply_generic_set(generic_erasure_set(m, 4), H_hs)
    H_bch = bch_pcm(field, [3])
    basis = independent_rows(H_hs.rows + H_bch.rows)
    if code is not None and len(basis) != code.n - code.k:
        raise ConstructionError("basis rank differs from n - k")
    rows = list(H_hg.rows) + list(H_bch.rows)
    steps = {"step1_rows": H_hg.m, "step2_rows": H_bch.m}

    words = _span_words(basis)
    pair_sums = {x ^ y for x in H_hg.rows for y in H_bch.rows}
    pair_filter = np.array([w in pair_sums for w in words])
    if pool == "all":
        pool_filter = np.ones(len(words), dtype=bool)
    elif pool == "min-weight":
        wts = np.array([w.bit_count() for w in words])
        pool_filter = wts == wts[1:].min()
    else:
        pool_filter = pair_filter
    pool_filter[0] = False

    step3 = []
    if n % 3 == 0:
        targets = set()
        for a in range(n):
            for b in range(a + 1, n):
                if (3 * a - 3 * b) % n == 0:
                    c = field.log[field.alpha(a) ^ field.alpha(b)]
                    targets.add(tuple(sorted((a, b, c))))
        steps["step3_targets"] = len(targets)
        step3 = _greedy(basis, n, {3: _sets_array(sorted(targets), 3)}, pair_filter)
    rows += step3
    steps["step3_rows"] = len(step3)

    if list_stopping_sets(BitMatrix(n, tuple(rows)), 1) or list_stopping_sets(BitMatrix(n, tuple(rows)), 2):
        raise ConstructionError("stopping sets of size below 3 remain")
    milestones = {}
    for sig in (3, 4):
        sets = _sets_array(list_stopping_sets(BitMatrix(n, tuple(rows)), sig), sig)
        steps[f"unresolved_size{sig}_before_greedy"] = int(len(sets))
        rows += _greedy(basis, n, {sig: sets}, pool_filter)
        milestones[sig + 1] = len(rows)
    H = BitMatrix(n, tuple(rows))
    sd = None
    if verify:
        sd = stopping_distance(H, 4)
        if sd.value < 5:
            raise ConstructionError("construction did not reach stopping distance 5")
    _check_rows(H, code)
    return ConstructionReport(H, sd, {"method": "ght", "pool": pool, "rows_for_distance": milestones, **steps})
