"""Binary linear algebra over GF(2) with words stored as Python ints.

Bit ``i`` of the integer is position ``i`` of the word, and position 0 is the
leftmost printed symbol.  Matrices are tuples of such integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

SPAN_GUARD = 24


class DimensionError(ValueError):
    """Raised when a span would exceed the enumeration guard."""


@dataclass(frozen=True)
class BitWord:
    length: int
    bits: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond the word length")

    @classmethod
    def from_string(cls, s: str) -> "BitWord":
        s = "".join(s.split())
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), sum(1 << i for i, ch in enumerate(s) if ch == "1"))

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "BitWord":
        bits = 0
        for i in support:
            if not 0 <= i < n:
                raise IndexError(i)
            bits |= 1 << i
        return cls(n, bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return support_of(self.bits)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitWord") -> "BitWord":
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitWord(self.length, self.bits ^ other.bits)

    def __str__(self) -> str:
        return word_to_string(self.bits, self.length)


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix needs at least one column")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.n:
                raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        words = [BitWord.from_string(s) for s in lines]
        if not words:
            raise ValueError("no rows given")
        n = words[0].length
        if any(w.length != n for w in words):
            raise ValueError("rows differ in length")
        return cls(n, tuple(w.bits for w in words))

    @classmethod
    def from_words(cls, words: Iterable[BitWord]) -> "BitMatrix":
        words = list(words)
        return cls(words[0].length, tuple(w.bits for w in words))

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        return cls(a.shape[1], tuple(sum(1 << j for j in np.flatnonzero(row)) for row in a))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @property
    def m(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitWord:
        return BitWord(self.n, self.rows[i])

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.m, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in support_of(r):
                out[i, j] = 1
        return out

    def column(self, j: int) -> int:
        """Column ``j`` as an int whose bit ``i`` is row ``i``."""
        c = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if other.n != self.n:
            raise ValueError("column counts differ")
        return BitMatrix(self.n, self.rows + other.rows)

    def to_text(self) -> str:
        return "\n".join(word_to_string(r, self.n) for r in self.rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = []
        for raw in text.splitlines():
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            lines.append(s)
        return cls.from_strings(lines)

    def __str__(self) -> str:
        return self.to_text().rstrip("\n")


@dataclass(frozen=True)
class WeightEnumerator:
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must cover weights 0..n")

    @property
    def size(self) -> int:
        return sum(self.counts)

    def __getitem__(self, w: int) -> int:
        return self.counts[w]

    def nonzero(self) -> dict[int, int]:
        return {w: a for w, a in enumerate(self.counts) if a}


def support_of(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def word_to_string(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def read_matrix(path) -> BitMatrix:
    return BitMatrix.from_text(Path(path).read_text())


def write_matrix(path, M: BitMatrix, comment: str | None = None) -> None:
    head = "".join(f"# {line}\n" for line in comment.splitlines()) if comment else ""
    Path(path).write_text(head + M.to_text())


def _rref_rows(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    work = [r for r in rows if r]
    out: list[int] = []
    pivots: list[int] = []
    for col in range(n):
        bit = 1 << col
        for idx, r in enumerate(work):
            if r & bit:
                piv = work.pop(idx)
                break
        else:
            continue
        work = [r ^ piv if r & bit else r for r in work]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    return out, pivots


def rank(M: BitMatrix) -> int:
    return len(independent_rows(M.rows))


def independent_rows(rows: Iterable[int]) -> list[int]:
    """Echelon XOR basis of the given rows, keyed by lowest set bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            if low in basis:
                r ^= basis[low]
            else:
                basis[low] = r
                break
    return list(basis.values())


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int]]:
    rows, pivots = _rref_rows(list(M.rows), M.n)
    if not rows:
        return BitMatrix(M.n, tuple(0 for _ in M.rows)), []
    return BitMatrix(M.n, tuple(rows) + tuple(0 for _ in range(M.m - len(rows)))), pivots


def nullspace_basis(M: BitMatrix) -> BitMatrix:
    rows, pivots = _rref_rows(list(M.rows), M.n)
    pivset = set(pivots)
    basis = []
    for f in range(M.n):
        if f in pivset:
            continue
        v = 1 << f
        for r, p in zip(rows, pivots):
            if (r >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(M.n, tuple(basis))


def in_span(v: int, rows: Iterable[int]) -> bool:
    rows = list(rows)
    return len(independent_rows(rows + [v])) == len(independent_rows(rows))


def syndrome_zero(H: BitMatrix, words: Iterable[int]) -> bool:
    """True iff every word is orthogonal to every row of H."""
    return all((h & w).bit_count() % 2 == 0 for w in words for h in H.rows)


def enumerate_span(basis: BitMatrix) -> Iterator[BitWord]:
    """All words of the row span in Gray-code order."""
    rows = independent_rows(basis.rows)
    if len(rows) > SPAN_GUARD:
        raise DimensionError(f"span dimension {len(rows)} exceeds guard {SPAN_GUARD}")
    x = 0
    yield BitWord(basis.n, 0)
    for i in range(1, 1 << len(rows)):
        x ^= rows[(i & -i).bit_length() - 1]
        yield BitWord(basis.n, x)


def weight_enumerator(basis: BitMatrix) -> WeightEnumerator:
    rows = independent_rows(basis.rows)
    if len(rows) > SPAN_GUARD:
        raise DimensionError(f"span dimension {len(rows)} exceeds guard {SPAN_GUARD}")
    from . import _kernels

    counts = _kernels.span_weight_counts(_kernels.pack_words(rows, basis.n), basis.n)
    return WeightEnumerator(basis.n, tuple(int(c) for c in counts))


def krawtchouk(n: int, j: int, i: int) -> int:
    return sum((-1) ** s * comb(i, s) * comb(n - i, j - s) for s in range(j + 1))


def macwilliams(dual_enum: WeightEnumerator, n: int, k: int) -> WeightEnumerator:
    """Weight enumerator of the k-dimensional dual of an (n, n-k) code."""
    if dual_enum.n != n or dual_enum.size != 1 << (n - k):
        raise ValueError("enumerator does not describe an (n, n-k) code")
    size = dual_enum.size
    out = []
    for j in range(n + 1):
        total = sum(b * krawtchouk(n, j, i) for i, b in enumerate(dual_enum.counts) if b)
        if total % size:
            raise ValueError("non-integral transform; enumerator is not of a linear code")
        out.append(total // size)
    return WeightEnumerator(n, tuple(out))


def cyclic_shift(v: BitWord, s: int) -> BitWord:
    return BitWord(v.length, rotate(v.bits, s, v.length))


def rotate(x: int, s: int, n: int) -> int:
    """Move the symbol at position i to position i + s (mod n)."""
    s %= n
    mask = (1 << n) - 1
    return ((x << s) | (x >> (n - s))) & mask


def matmul(A: BitMatrix, H: BitMatrix) -> BitMatrix:
    """Rows ``a*H`` for each row ``a`` of A, with bit j of ``a`` selecting row j of H."""
    if A.n != H.m:
        raise ValueError("A column count must equal H row count")
    out = []
    for a in A.rows:
        acc = 0
        for j in support_of(a):
            acc ^= H.rows[j]
        out.append(acc)
    return BitMatrix(H.n, tuple(out))
