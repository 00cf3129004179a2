"""Erasure decoders built on peeling, with automorphism and guessing extensions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .bounds import BoundResult
from .codebook import Code, canonical_rotation
from .gf2 import BitMatrix, independent_rows, rank, support_of
from .parallel import count_failures
from .stopping import ENUMERATION_GUARD, GuardError


class AutomorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Perm:
    """Bijection of {0..n-1}; ``image[i]`` is where position i goes."""

    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError("not a permutation")

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __iter__(self):
        return iter(self.image)

    def compose(self, other: "Perm") -> "Perm":
        """self after other: i -> self(other(i))."""
        return Perm(tuple(self.image[j] for j in other.image))

    def __mul__(self, other: "Perm") -> "Perm":
        return self.compose(other)

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Perm(tuple(inv))

    def power(self, e: int) -> "Perm":
        out = Perm.identity(self.n)
        base = self if e >= 0 else self.inverse()
        for _ in range(abs(e)):
            out = base.compose(out)
        return out

    def apply_word(self, x: int) -> int:
        """Move the symbol at position i to position image[i]."""
        out = 0
        for i in support_of(x):
            out |= 1 << self.image[i]
        return out

    def apply_matrix(self, H: BitMatrix) -> BitMatrix:
        return BitMatrix(H.n, tuple(self.apply_word(r) for r in H.rows))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.n):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.image[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.image[j]
            out.append(tuple(cyc))
        return out

    def to_cycles(self, fixed: bool = True) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles() if fixed or len(c) > 1)

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Perm":
        """Parse cycle notation such as "(0 1 2)(3)" or "(0,12)(1,13)"; unlisted points are fixed."""
        image = list(range(n))
        seen = set()
        body = text.replace("\u00a0", " ").strip()
        for grp in re.findall(r"\(([^()]*)\)", body):
            pts = [int(t) for t in re.split(r"[\s,]+", grp.strip()) if t]
            for p in pts:
                if not 0 <= p < n or p in seen:
                    raise ValueError(f"bad or repeated point {p} in cycle notation")
                seen.add(p)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                image[a] = b
        if re.sub(r"\(([^()]*)\)", "", body).strip():
            raise ValueError("text outside cycles")
        return cls(tuple(image))

    def __str__(self) -> str:
        return self.to_cycles()


@dataclass(frozen=True)
class ErasurePattern:
    n: int
    erased: frozenset

    def __post_init__(self):
        object.__setattr__(self, "erased", frozenset(int(i) for i in self.erased))
        if any(not 0 <= i < self.n for i in self.erased):
            raise IndexError("erased position out of range")

    @classmethod
    def of(cls, n: int, positions) -> "ErasurePattern":
        return cls(n, frozenset(positions))

    def __len__(self) -> int:
        return len(self.erased)


@dataclass
class DecodeOutcome:
    erased: frozenset
    residual: frozenset
    iterations: int = 0
    perms_tried: int = 0
    values: dict | None = None
    guessed: bool = False
    depth_exhausted: bool = False

    @property
    def recovered(self) -> frozenset:
        return self.erased - self.residual

    @property
    def success(self) -> bool:
        return not self.residual


@dataclass(frozen=True)
class MLResult:
    recoverable: frozenset
    unrecoverable: frozenset

    @property
    def correctable(self) -> bool:
        return not self.unrecoverable


def _pattern(E, n) -> ErasurePattern:
    return E if isinstance(E, ErasurePattern) else ErasurePattern.of(n, E)


def _scratch(W):
    return (np.zeros(W, dtype=np.uint64), np.zeros(W, dtype=np.uint64), np.zeros(W, dtype=np.uint64))


def _est_array(n, word, erased):
    est = np.full(n, _kernels.UNKNOWN, dtype=np.uint8)
    if word is not None:
        for i in range(n):
            if i not in erased:
                est[i] = (word >> i) & 1 if isinstance(word, int) else int(word[i])
    return est


def peel(H: BitMatrix, E, word=None) -> DecodeOutcome:
    """Edge-removal decoding; with ``word`` the erased values are filled in too."""
    return agd_decode(H, E, perms=[Perm.identity(H.n)], word=word)


def ml_recoverable(code: Code | BitMatrix, E) -> MLResult:
    """Positions of E fixed by every codeword supported inside E.

    Accepts a code or any parity-check matrix of it.
    """
    H = code if isinstance(code, BitMatrix) else code.parity
    E = _pattern(E, H.n)
    cols = [(e, H.column(e)) for e in sorted(E.erased)]
    basis: dict[int, tuple[int, int]] = {}
    touched = 0
    for e, v in cols:
        combo = 1 << e
        while v:
            low = v & -v
            if low in basis:
                bv, bc = basis[low]
                v ^= bv
                combo ^= bc
            else:
                basis[low] = (v, combo)
                break
        if v == 0:
            touched |= combo
    bad = frozenset(support_of(touched))
    return MLResult(E.erased - bad, bad)


def multiplicative_order(a: int, n: int) -> int:
    x, c = a % n, 1
    while x != 1:
        x = (x * a) % n
        c += 1
        if c > n:
            raise ValueError(f"{a} is not invertible mod {n}")
    return c


def c1_c2_perms(n: int, extended: bool = False) -> tuple[list[Perm], list[Perm]]:
    """Cyclic shifts and doubling maps; extended codes fix position n-1."""
    core = n - 1 if extended else n
    if core % 2 == 0:
        raise ValueError("the cyclic part must have odd length")
    c = multiplicative_order(2, core)
    tail = (n - 1,) if extended else ()
    C1 = [Perm(tuple((i + s) % core for i in range(core)) + tail) for s in range(core)]
    C2 = [Perm(tuple((i * pow(2, j, core)) % core for i in range(core)) + tail) for j in range(c)]
    return C1, C2


def agd_b_perms(n: int, extended: bool = False) -> list[Perm]:
    """All shifts under each doubling map: zeta^j gamma^i, C1 exhausted before C2 advances."""
    C1, C2 = c1_c2_perms(n, extended)
    return [z.compose(g) for z in C2 for g in C1]


def wolfmann_perms() -> list[Perm]:
    theta = Perm.from_cycles("".join(f"({i},{i + 12})" for i in range(12)), 24)
    psi = Perm.from_cycles("(3,6,15,9,21,18,12)(4,7,16,10,22,19,13)(5,8,17,11,23,20,14)", 24)
    return [theta.power(i).compose(psi.power(j)) for i in range(2) for j in range(7)]


def is_automorphism(code: Code, p: Perm) -> bool:
    return all(code.contains(p.apply_word(g)) for g in code.generator.rows)


def stack_images(H: BitMatrix, perms) -> BitMatrix:
    rows = []
    for p in perms:
        rows.extend(p.apply_matrix(H).rows)
    return BitMatrix(H.n, tuple(rows))


def _ordered(perms, order, rng):
    perms = list(perms)
    ident = Perm.identity(perms[0].n)
    rest = [p for p in perms if p != ident]
    if order == "random":
        rest = [rest[i] for i in rng.permutation(len(rest))]
    elif order != "exhaustive":
        raise ValueError("order must be 'exhaustive' or 'random'")
    return [ident] + rest


def agd_decode(H: BitMatrix, E, strategy: str = "A", perms=None, guessing: bool = False,
               order: str = "exhaustive", seed: int | None = None, word=None,
               code: Code | None = None, depth: int = 2) -> DecodeOutcome:
    """Peel; on a stall re-peel under the next permutation until a full cycle makes no progress.

    ``perms`` defaults to C1 for strategy A and to the compositions with C2 for B.
    The identity always comes first.  With ``code`` every permutation is
    checked to be an automorphism.  ``word`` supplies the values of the
    non-erased positions so recovered values can be reported.
    """
    n = H.n
    E = _pattern(E, n)
    if perms is None:
        perms = c1_c2_perms(n)[0] if strategy == "A" else agd_b_perms(n)
    if code is not None:
        bad = [p for p in perms if not is_automorphism(code, p)]
        if bad:
            raise AutomorphismError(f"{bad[0]} is not an automorphism")
    rng = np.random.default_rng(seed)
    plist = _ordered(perms, order, rng)
    pcols = _kernels.permuted_columns(H, plist)
    ctx = _Ctx(pcols, n)
    res = np.array(sorted(E.erased), dtype=np.int64)
    est = _est_array(n, word, E.erased)
    L, rounds, tried = ctx.run(res, len(res), est)
    out = DecodeOutcome(E.erased, frozenset(int(x) for x in res[:L]), int(rounds), int(tried))
    if word is not None:
        out.values = {i: int(est[i]) for i in E.erased if est[i] != _kernels.UNKNOWN}
    if guessing and L:
        out = guess_extend(H, out, perms=plist, word=word, depth=depth)
    return out


class _Ctx:
    def __init__(self, pcols, n):
        self.pcols = pcols
        self.n = n
        self.once, self.twice, self.S = _scratch(pcols.shape[2])

    def run(self, res, L, est):
        return _kernels.agd_values(self.pcols, res, L, est, 1, self.once, self.twice, self.S)

    def consistent(self, res, L, est):
        return _kernels.consistent(self.pcols, res, L, est, self.once, self.S)


CONTRA, COMPLETE, OPEN = "contradiction", "complete", "open"


def pick_guess_position(H: BitMatrix, residual) -> int:
    """Residual position on the most checks that see exactly two residual positions."""
    rmask = sum(1 << i for i in residual)
    score = {i: 0 for i in residual}
    for r in H.rows:
        x = r & rmask
        if x.bit_count() == 2:
            for i in support_of(x):
                score[i] += 1
    return min(residual, key=lambda i: (-score[i], i))


def _explore(ctx, H, res, L, est, depth):
    if not ctx.consistent(res, L, est):
        return CONTRA, None
    if L == 0:
        return COMPLETE, est
    if depth == 0:
        return OPEN, None
    j = pick_guess_position(H, [int(x) for x in res[:L]])
    results = []
    for v in (0, 1):
        est2 = est.copy()
        est2[j] = v
        res2 = np.array([x for x in res[:L] if x != j], dtype=np.int64)
        L2, _, _ = ctx.run(res2, len(res2), est2)
        results.append(_explore(ctx, H, res2, L2, est2, depth - 1))
    kinds = [k for k, _ in results]
    if kinds.count(CONTRA) == 2:
        return CONTRA, None
    if sorted(kinds) == [COMPLETE, CONTRA]:
        return results[kinds.index(COMPLETE)]
    return OPEN, None


class Guesser:
    """Depth-limited branching on residual positions over a fixed set of views."""

    def __init__(self, H: BitMatrix, perms=None, depth: int = 2):
        self.H = H
        plist = list(perms) if perms is not None else [Perm.identity(H.n)]
        self.ctx = _Ctx(_kernels.permuted_columns(H, plist), H.n)
        self.depth = depth

    def complete(self, est, residual):
        """(kind, values): values is the completed estimate when kind is COMPLETE."""
        res = np.array(sorted(residual), dtype=np.int64)
        return _explore(self.ctx, self.H, res, len(res), est.copy(), self.depth)


def guess_extend(H: BitMatrix, outcome: DecodeOutcome, perms=None, word=None, depth: int = 2) -> DecodeOutcome:
    """Branch on residual positions; accept only a unique consistent completion.

    Works on values, so ``word`` (the values at non-erased positions) is
    required unless the residual is empty.  When the search cannot single out
    one completion the outcome is returned unchanged with ``depth_exhausted``
    set if the depth limit cut the search short.
    """
    if outcome.success:
        return outcome
    if word is None:
        raise ValueError("guessing needs the received values")
    est = _est_array(H.n, word, outcome.erased)
    for i, v in (outcome.values or {}).items():
        est[i] = v
    kind, final = Guesser(H, perms, depth).complete(est, outcome.residual)
    if kind == COMPLETE:
        vals = {i: int(final[i]) for i in outcome.erased}
        return DecodeOutcome(outcome.erased, frozenset(), outcome.iterations, outcome.perms_tried, vals, guessed=True)
    return DecodeOutcome(outcome.erased, outcome.residual, outcome.iterations, outcome.perms_tried,
                         outcome.values, guessed=True, depth_exhausted=(kind == OPEN))


def verify_sad(H: BitMatrix, perms, s: int, guard: int = ENUMERATION_GUARD):
    """(True, None) iff every set of at most s positions has an image that is not a stopping set."""
    n = H.n
    if sum(comb(n, b) for b in range(1, s + 1)) > guard:
        raise GuardError("subset count exceeds the guard")
    pcols = _kernels.permuted_columns(H, list(perms))
    for b in range(1, s + 1):
        hit = count_failures(_kernels.MODE_SAD, pcols, n, b, limit=1, want_first=True)
        if hit is not None:
            c = np.zeros(b, dtype=np.int64)
            _kernels.unrank_colex(hit, b, _kernels.binomial_table(n, b), c)
            return False, tuple(int(x) for x in c)
    return True, None


def verify_pd(n: int, check_positions, perms, s: int, guard: int = ENUMERATION_GUARD):
    """(True, None) iff every set of at most s positions is moved into the check positions by some permutation."""
    P = set(check_positions)
    if sum(comb(n, b) for b in range(1, s + 1)) > guard:
        raise GuardError("subset count exceeds the guard")
    allowed = [sum(1 << i for i in range(n) if p(i) in P) for p in perms]
    for b in range(1, s + 1):
        for I in combinations(range(n), b):
            m = sum(1 << i for i in I)
            if not any(m & a == m for a in allowed):
                return False, I
    return True, None


def rho_from_sad(n: int, k: int, sad_size: int, s: int | None = None) -> BoundResult:
    target = f"rho_{s + 1}" if s is not None else "rho_(s+1)"
    return BoundResult((n - k) * sad_size, "upper", target, "stack of all automorphism images")


def agd_b_matrix(code: Code, cogs, second_weight_words=None) -> BitMatrix:
    """Greedy AGD_B matrix: cogs from distinct doubling orbits, then rank completion.

    ``cogs`` are minimum-weight orbit representatives; ``second_weight_words``
    (dual codewords of the next weight) are used only to complete the rank.
    """
    n = code.n
    _, C2 = c1_c2_perms(n)
    target = n - code.k
    chosen: list[int] = []
    classes: set[int] = set()
    for cg in cogs:
        w = cg.word.bits if hasattr(cg, "word") else int(cg)
        canon = canonical_rotation(w, n)
        if canon in classes:
            continue
        if rank(BitMatrix(n, tuple(chosen + [w]))) == len(chosen) + 1:
            chosen.append(w)
            classes |= {canonical_rotation(z.apply_word(w), n) for z in C2}
        if len(chosen) == target:
            break
    for w in sorted(second_weight_words or [], key=lambda x: tuple(support_of(x))):
        if len(independent_rows(chosen)) == target:
            break
        if len(independent_rows(chosen + [w])) > len(independent_rows(chosen)):
            chosen.append(w)
    H = BitMatrix(n, tuple(chosen))
    if rank(H) != target:
        raise ValueError("could not complete the matrix to full rank")
    return H


@dataclass
class DecoderSpec:
    """A matrix plus the permutation list used for exhaustive or Monte Carlo runs."""

    name: str
    H: BitMatrix
    perms: list = field(default_factory=list)
    mode: int = _kernels.MODE_PEEL

    def pcols(self):
        plist = self.perms or [Perm.identity(self.H.n)]
        return _kernels.permuted_columns(self.H, plist)
