"""Stopping sets and counts of the erasure patterns a matrix resolves."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np
from numba import njit

from . import _kernels
from .gf2 import BitMatrix, BitWord, rotate
from .parallel import count_failures

ENUMERATION_GUARD = 10**8


class GuardError(ValueError):
    """Raised when an exhaustive computation exceeds its operation budget."""


def binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


@dataclass(frozen=True)
class Restriction:
    H: BitMatrix
    columns: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(sorted(set(self.columns)))
        if not cols:
            raise ValueError("restriction needs at least one column")
        if cols[0] < 0 or cols[-1] >= self.H.n:
            raise IndexError("column index out of range")
        object.__setattr__(self, "columns", cols)

    def row_weights(self) -> list[int]:
        mask = sum(1 << j for j in self.columns)
        return [(r & mask).bit_count() for r in self.H.rows]


class IntersectionProfile(NamedTuple):
    kappa: int
    oo: int
    oz: int
    zo: int
    zz: int


@dataclass(frozen=True)
class StoppingDistance:
    """Smallest stopping-set size, or a lower bound when none was found up to ``checked``."""

    value: int
    exact: bool
    checked: int

    def at_least(self, ell: int) -> bool:
        return self.value >= ell

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


def is_stopping_set(H: BitMatrix, I) -> bool:
    r = Restriction(H, tuple(I))
    return all(w != 1 for w in r.row_weights())


def _check_guard(n: int, sig: int, guard: int = ENUMERATION_GUARD):
    if comb(n, sig) > guard:
        raise GuardError(f"C({n},{sig}) = {comb(n, sig)} exceeds the guard {guard}")


def count_unresolved(H: BitMatrix, sigma: int, guard: int = ENUMERATION_GUARD) -> int:
    """Number of sigma-subsets of columns that are stopping sets of H."""
    if sigma < 1 or sigma > H.n:
        return 0
    _check_guard(H.n, sigma, guard)
    cols = _kernels.pack_columns(H)[None]
    return count_failures(_kernels.MODE_STOPPING, cols, H.n, sigma)


def first_stopping_set(H: BitMatrix, sigma: int, guard: int = ENUMERATION_GUARD):
    """A sigma-subset that is a stopping set, or None."""
    _check_guard(H.n, sigma, guard)
    cols = _kernels.pack_columns(H)[None]
    hit = count_failures(_kernels.MODE_STOPPING, cols, H.n, sigma, limit=1, want_first=True)
    if hit is None:
        return None
    c = np.zeros(sigma, dtype=np.int64)
    _kernels.unrank_colex(hit, sigma, _kernels.binomial_table(H.n, sigma), c)
    return [int(x) for x in c]


def stopping_distance(H: BitMatrix, cap: int | None = None, guard: int = ENUMERATION_GUARD) -> StoppingDistance:
    cap = H.n if cap is None else cap
    if cap > H.n:
        raise ValueError("cap exceeds n")
    for s in range(1, cap + 1):
        if first_stopping_set(H, s, guard) is not None:
            return StoppingDistance(s, True, s)
    return StoppingDistance(cap + 1, False, cap)


def has_stopping_distance(H: BitMatrix, ell: int, guard: int = ENUMERATION_GUARD) -> bool:
    """True iff H has no stopping set of size below ell."""
    return stopping_distance(H, ell - 1, guard).value >= ell


def list_stopping_sets(H: BitMatrix, sigma: int, guard: int = ENUMERATION_GUARD) -> list[tuple[int, ...]]:
    _check_guard(H.n, sigma, guard)
    cols = _kernels.pack_columns(H)
    table = _kernels.binomial_table(H.n, sigma)
    cap = 1024
    while True:
        out, found = _kernels.list_stopping(cols, H.n, sigma, table, cap)
        if found <= cap:
            return [tuple(int(x) for x in row) for row in out[:found]]
        cap = found


def resolved_by_row(n: int, w: int, sigma: int) -> int:
    if not 0 <= w <= n:
        raise ValueError("row weight out of range")
    return w * binom(n - w, sigma - 1)


def resolved_by_pair(p, sigma: int) -> int:
    oo, oz, zo, zz = tuple(p)[-4:]
    return oo * binom(zz, sigma - 1) + oz * zo * binom(zz, sigma - 2)


def pair_profile(h1: int, h2: int, n: int) -> tuple[int, int, int, int]:
    mask = (1 << n) - 1
    return ((h1 & h2).bit_count(), (h1 & ~h2 & mask).bit_count(),
            (~h1 & h2 & mask).bit_count(), (~h1 & ~h2 & mask).bit_count())


def xy_kappa(h: BitWord, kappa: int) -> IntersectionProfile:
    n = h.length
    if not 1 <= kappa <= n - 1:
        raise ValueError("kappa must lie in 1..n-1")
    # pair (a, a + kappa): compare h with h moved back by kappa
    partner = rotate(h.bits, -kappa, n)
    return IntersectionProfile(kappa, *pair_profile(h.bits, partner, n))


@njit(cache=True)
def _resolver_histogram(cols, n, sig, m):
    W = cols.shape[1]
    hist = np.zeros(m + 1, dtype=np.int64)
    c = np.arange(sig)
    once = np.zeros(W, dtype=np.uint64)
    twice = np.zeros(W, dtype=np.uint64)
    while True:
        for w in range(W):
            once[w] = 0
            twice[w] = 0
        for a in range(sig):
            for w in range(W):
                x = cols[c[a], w]
                twice[w] |= once[w] & x
                once[w] |= x
        r = 0
        for w in range(W):
            r += _kernels.popcount64(once[w] & ~twice[w])
        hist[r] += 1
        if not _kernels.next_colex(c, sig, n):
            break
    return hist


def pie_union_exact(H: BitMatrix, sigma: int, j_max: int | None = None,
                    guard: int = 10**7) -> list[int]:
    """Partial sums S_{sigma,j}, j = 1..j_max, of the inclusion-exclusion expansion.

    S_j counts pairs (row set R with |R| = j, sigma-subset I) with every row of R
    resolving I.  Each I with r resolving rows contributes C(r, j), so one pass
    over the sigma-subsets yields every S_j exactly.
    """
    m = H.m
    j_max = m if j_max is None else j_max
    if comb(H.n, sigma) > guard:
        raise GuardError("subset count exceeds the guard")
    hist = _resolver_histogram(_kernels.pack_columns(H), H.n, sigma, m)
    return [sum(int(hist[r]) * binom(r, j) for r in range(m + 1)) for j in range(1, j_max + 1)]


def pie_alternating(S: list[int]) -> int:
    return sum((-1) ** j * s for j, s in enumerate(S))


def bonferroni_upper_cyclic(h: BitWord, m: int, sigma: int) -> Fraction:
    n = h.length
    if not 1 <= m <= n:
        raise ValueError("m must lie in 1..n")
    single = resolved_by_row(n, h.weight, sigma)
    pairs = sum((m - k) * resolved_by_pair(xy_kappa(h, k), sigma) for k in range(1, m))
    return m * single - Fraction(2, m) * pairs


def write_counts_csv(path_or_file, counts: dict[int, int]) -> None:
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    f = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(f)
        w.writerow(["sigma", "count"])
        for s in sorted(counts):
            w.writerow([s, counts[s]])
    finally:
        if own:
            f.close()
