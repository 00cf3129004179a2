"""Code families and their cyclic orbit generators (cogs), plus fixture matrices."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .gf2 import (
    BitMatrix,
    BitWord,
    independent_rows,
    nullspace_basis,
    rank,
    rotate,
    syndrome_zero,
    weight_enumerator,
    word_to_string,
)

# Primitive polynomials, bit i = coefficient of x^i.  These choices make the
# octal cogs listed below land in the corresponding dual codes.
PRIMITIVE_POLYNOMIALS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
}

GOLAY_GENERATOR = (0, 2, 4, 5, 6, 10, 11)

# Published cogs in octal, most significant bit first.
OCTAL_COGS = {
    ("golay23", "A"): "2 1 2 1 3 5 0 0",
    ("golay23", "D"): "3 4 6 0 3 2 0 0",
    ("bch31", "A"): "1 4 1 4 0 5 0 0 0 2 2",
    ("bch31", "B"): "1 4 0 6 1 0 4 1 0 2 0",
    ("bch31", "C"): "1 5 0 0 0 5 0 0 4 1 4",
    ("bch31", "D"): "1 5 0 4 0 2 0 0 1 3 0",
    ("hamming63", "A"): "4 1 4 2 4 7 5 0 7 1 1 3 3 5 4 6 5 3 7 4 0",
    ("hamming127", "A"): "1 0 4 6 1 3 5 3 3 0 1 4 6 5 1 6 3 6 6 4 1 2 5 7 5 1 2 1 5 6 1 7 7 0 3 5 7 1 3 1 1 0 0",
    ("bch127", "A"): "1 7 6 4 0 3 0 6 5 4 4 5 4 0 7 5 0 4 5 4 7 6 5 1 6 1 6 0 2 0 4 2 6 5 2 4 2 4 4 0 0 5 6",
    ("bch127", "B"): "1 7 2 4 2 5 0 2 6 1 2 1 5 4 1 1 1 1 5 2 6 1 0 7 2 1 2 5 5 1 6 1 4 0 4 6 5 4 1 4 2 7 4",
    ("bch127", "C"): "1 7 5 2 6 5 5 3 3 6 4 6 1 3 1 2 6 4 2 1 0 7 1 1 7 0 4 0 2 4 0 2 5 4 0 3 0 4 5 2 2 4 2",
    ("bch127", "D"): "1 7 5 1 7 0 3 1 2 5 2 6 7 3 4 6 5 0 2 1 0 2 0 7 0 3 6 5 4 0 6 1 2 2 1 0 1 4 3 0 6 4 4",
}

_H24_21ROW = """
100001100101100010100000
010000110010110001010000
001000011001011000101000
000100001100101100010100
000010000110010110001010
100001000011001011000100
010000100001100101100010
101000010000110010110000
010100001000011001011000
001010000100001100101100
000101000010000110010110
100010100001000011001010
110001010000100001100100
011000101000010000110010
101100010100001000011000
010110001010000100001100
001011000101000010000110
100101100010100001000010
110010110001010000100000
011001011000101000010000
101011100011000000000001
"""

_H24_STAR = """
111000001001100000100001
110000100001001110000001
110100101010010000000001
111000110000000000010101
110001000101010000000101
110100010100000010100001
011000100001010001001001
110110000001000000011001
111101000000001001000001
110010000010001000100101
001100101001001000010001
001101010011001000000010
"""


class Field2m:
    """GF(2^m) with log/antilog tables; elements are ints in polynomial basis."""

    def __init__(self, m: int, poly: int | None = None):
        if poly is None:
            poly = PRIMITIVE_POLYNOMIALS[m]
        if poly.bit_length() != m + 1:
            raise ValueError("polynomial degree must equal m")
        self.m = m
        self.poly = poly
        self.order = (1 << m) - 1
        self.exp = [0] * (2 * self.order)
        self.log = [-1] * (1 << m)
        x = 1
        for i in range(self.order):
            if self.log[x] != -1:
                raise ValueError(f"polynomial {bin(poly)} is not primitive")
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x >> m:
                x ^= poly
        for i in range(self.order, 2 * self.order):
            self.exp[i] = self.exp[i - self.order]

    def alpha(self, e: int) -> int:
        return self.exp[e % self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % self.order]


@dataclass(frozen=True)
class Code:
    name: str
    n: int
    k: int
    generator: BitMatrix
    parity: BitMatrix
    d: int | None = None
    cyclic: bool = False
    extended: bool = False
    data: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if rank(self.generator) != self.k:
            raise ValueError("generator rank differs from k")
        if rank(self.parity) != self.n - self.k:
            raise ValueError("parity rank differs from n - k")
        if not syndrome_zero(self.parity, self.generator.rows):
            raise ValueError("generator rows fail the parity checks")
        if self.cyclic:
            if not syndrome_zero(self.parity, [rotate(g, 1, self.n) for g in self.generator.rows]):
                raise ValueError("code tagged cyclic is not shift-invariant")

    def contains(self, word: int) -> bool:
        return all((h & word).bit_count() % 2 == 0 for h in self.parity.rows)

    def dual_contains(self, word: int) -> bool:
        return all((g & word).bit_count() % 2 == 0 for g in self.generator.rows)

    def with_distance(self) -> "Code":
        return self if self.d is not None else replace(self, d=minimum_distance(self))


def code_from_parity(name, H: BitMatrix, *, cyclic=False, extended=False, d=None, data=None) -> Code:
    rows = independent_rows(H.rows)
    G = nullspace_basis(BitMatrix(H.n, tuple(rows)))
    return Code(name, H.n, G.m, G, H, d=d, cyclic=cyclic, extended=extended, data=data or {})


def code_from_generator(name, G: BitMatrix, **kw) -> Code:
    rows = independent_rows(G.rows)
    Gb = BitMatrix(G.n, tuple(rows))
    H = nullspace_basis(Gb)
    return Code(name, G.n, Gb.m, Gb, H, **kw)


def minimum_distance(code: Code) -> int:
    if code.k <= 24:
        enum = weight_enumerator(code.generator)
    elif code.n - code.k <= 24:
        from .gf2 import macwilliams

        enum = macwilliams(weight_enumerator(code.parity), code.n, code.k)
    else:
        raise ValueError("both code and dual exceed the enumeration guard")
    return next(w for w in range(1, code.n + 1) if enum[w])


def cyclic_generator_matrix(n: int, exponents) -> BitMatrix:
    g = sum(1 << e for e in exponents)
    deg = max(exponents)
    return BitMatrix(n, tuple(g << i for i in range(n - deg)))


def poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def hamming_standard_pcm(m: int, field: Field2m | None = None) -> BitMatrix:
    if m < 2:
        raise ValueError("m must be at least 2")
    return bch_pcm(field or Field2m(m), [1])


def bch_pcm(field: Field2m, exponents) -> BitMatrix:
    exponents = list(exponents)
    if not exponents:
        raise ValueError("exponent list must be nonempty")
    n = field.order
    rows = []
    for e in exponents:
        if not 1 <= e <= n - 1:
            raise ValueError(f"exponent {e} outside [1, {n - 1}]")
        vals = [field.alpha(e * j) for j in range(n)]
        for b in range(field.m):
            rows.append(sum(1 << j for j, v in enumerate(vals) if (v >> b) & 1))
    return BitMatrix(n, tuple(rows))


def hamming(m: int) -> Code:
    return code_from_parity(f"hamming{(1 << m) - 1}", hamming_standard_pcm(m), cyclic=True, d=3)


def bch_code(m: int, exponents, name: str | None = None, d: int | None = None) -> Code:
    F = Field2m(m)
    H = bch_pcm(F, exponents)
    rows = independent_rows(H.rows)
    return code_from_parity(name or f"bch{F.order}", BitMatrix(H.n, tuple(rows)), cyclic=True, d=d,
                            data={"field": F, "exponents": tuple(exponents)})


def golay(extended: bool = False) -> Code:
    G = cyclic_generator_matrix(23, GOLAY_GENERATOR)
    if not extended:
        return code_from_generator("golay23", G, d=7, cyclic=True)
    rows = tuple(g | ((g.bit_count() & 1) << 23) for g in G.rows)
    return code_from_generator("golay24", BitMatrix(24, rows), d=8, extended=True)


def quadratic_residues(n: int) -> set[int]:
    return {(i * i) % n for i in range(1, n)}


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def qr_code(n: int) -> tuple[Code, BitWord]:
    """Quadratic residue code whose dual is spanned by shifts of 1 + sum x^nu, nu a nonresidue."""
    if not _is_prime(n) or n % 4 != 3:
        raise ValueError("n must be a prime congruent to 3 mod 4")
    nonres = set(range(1, n)) - quadratic_residues(n)
    idem = BitWord.from_support(n, {0} | nonres)
    H = BitMatrix(n, tuple(rotate(idem.bits, s, n) for s in range(n)))
    code = code_from_parity(f"qr{n}", BitMatrix(n, tuple(independent_rows(H.rows))), cyclic=True)
    return code, idem


def singer_difference_set(s: int) -> tuple[int, list[int]]:
    """Singer (q^2+q+1, q+1, 1) difference set with q = 2^s."""
    q = 1 << s
    F = Field2m(3 * s)
    n = q * q + q + 1

    def trace(x):
        # trace from GF(q^3) down to GF(q)
        return x ^ F.power(x, q) ^ F.power(x, q * q)

    D = sorted({i % n for i in range(F.order) if trace(F.alpha(i)) == 0})
    if len(D) != q + 1:
        raise ValueError("difference-set construction failed")
    reps = [0] * n
    for a in D:
        for b in D:
            if a != b:
                reps[(a - b) % n] += 1
    if any(reps[i] != 1 for i in range(1, n)):
        raise ValueError("constructed set is not a (v, k, 1) difference set")
    return n, D


def cds_code(s: int) -> Code:
    if s < 1:
        raise ValueError("s must be at least 1")
    n, D = singer_difference_set(s)
    z = sum(1 << d for d in D)
    h = poly_gcd((1 << n) | 1, z)
    H = BitMatrix(n, tuple(rotate(z, i, n) for i in range(n)))
    rows = independent_rows(H.rows)
    code = code_from_parity(f"cds{n}", BitMatrix(n, tuple(rows)), cyclic=True,
                            data={"difference_set": D, "z": z, "h": h, "lambda": 1})
    # rows generate the ideal of h, so the code dimension is deg h
    if code.k != h.bit_length() - 1:
        raise ValueError("dimension disagrees with deg h")
    return code


def simplex(s: int) -> Code:
    if s < 2:
        raise ValueError("s must be at least 2")
    H = hamming_standard_pcm(s)
    return code_from_generator(f"simplex{(1 << s) - 1}", H, d=1 << (s - 1), cyclic=True)


def parse_octal_cog(digits: str, n: int) -> BitWord:
    ds = [ch for ch in digits if not ch.isspace()]
    if any(ch not in "01234567" for ch in ds):
        raise ValueError("not an octal string")
    pad = 3 * len(ds) - n
    if pad < 0 or pad >= 3:
        raise ValueError(f"{len(ds)} octal digits do not fit length {n}")
    value = int("".join(ds), 8)
    if value >> n:
        raise ValueError("nonzero pad bits")
    if value == 0:
        raise ValueError("cog must be nonzero")
    # the most significant kept bit is position 0
    return BitWord(n, sum(1 << j for j in range(n) if (value >> (n - 1 - j)) & 1))


def format_octal_cog(word: BitWord) -> str:
    n = word.length
    ndig = -(-n // 3)
    value = sum(1 << (n - 1 - j) for j in word.support())
    return " ".join(format(value, f"0{ndig}o"))


def parse_cog(text: str, n: int) -> BitWord:
    """Accept an octal cog or a plain 0/1 string of length n."""
    s = "".join(text.split())
    if len(s) == n and set(s) <= {"0", "1"}:
        return BitWord.from_string(s)
    return parse_octal_cog(text, n)


@dataclass(frozen=True)
class Cog:
    word: BitWord
    orbit: int = -1
    family: int = -1

    def __post_init__(self):
        if self.word.bits == 0:
            raise ValueError("a cog must be nonzero")

    @property
    def weight(self) -> int:
        return self.word.weight

    @property
    def n(self) -> int:
        return self.word.length


@dataclass(frozen=True)
class CogOrbit:
    cog: Cog
    members: tuple[int, ...]


def canonical_rotation(x: int, n: int) -> int:
    """Lexicographically smallest rotation when read from position 0."""
    best = None
    best_s = None
    for s in range(n):
        r = rotate(x, s, n)
        key = word_to_string(r, n)
        if best_s is None or key < best_s:
            best, best_s = r, key
    return best


def dual_words_of_weight(basis: BitMatrix, w: int) -> list[int]:
    rows = independent_rows(basis.rows)
    if len(rows) > 24:
        raise ValueError("dual dimension exceeds the enumeration guard")
    packed = _kernels.pack_words(rows, basis.n)
    total_guess = 1 << 16
    while True:
        out, found = _kernels.span_words_of_weight(packed, w, total_guess)
        if found <= total_guess:
            break
        total_guess = found
    words = []
    for i in range(found):
        x = 0
        for j, part in enumerate(out[i]):
            x |= int(part) << (64 * j)
        words.append(x)
    return words


def cog_orbits(dual: BitMatrix, w: int) -> list[CogOrbit]:
    n = dual.n
    remaining = set(dual_words_of_weight(dual, w))
    orbits = []
    while remaining:
        x = next(iter(remaining))
        members = {rotate(x, s, n) for s in range(n)}
        remaining -= members
        orbits.append(canonical_rotation(x, n))
        orbits[-1] = (orbits[-1], tuple(sorted(members)))
    orbits.sort(key=lambda t: word_to_string(t[0], n))
    return [CogOrbit(Cog(BitWord(n, c), orbit=i), members) for i, (c, members) in enumerate(orbits)]


def profile_signature(word: BitWord) -> tuple:
    from .stopping import xy_kappa

    return tuple(sorted(tuple(xy_kappa(word, k))[1:] for k in range(1, word.length)))


def cog_families(cogs) -> list[list[Cog]]:
    cogs = list(cogs)
    if len({c.n for c in cogs}) > 1:
        raise ValueError("cogs differ in length")
    groups: dict[tuple, list[Cog]] = {}
    for c in cogs:
        groups.setdefault(profile_signature(c.word), []).append(c)
    out = []
    for fid, sig in enumerate(sorted(groups, key=lambda s: min(word_to_string(c.word.bits, c.n) for c in groups[s]))):
        out.append([replace(c, family=fid) for c in groups[sig]])
    return out


def wolfmann_matrix() -> BitMatrix:
    A = np.array([[1, 1, 1], [1, 0, 0], [1, 0, 1]], dtype=np.int64)
    I3 = np.eye(3, dtype=np.int64)
    A2 = (A @ A) % 2
    A4 = (A2 @ A2) % 2
    layout = [[I3, A, A2, A4], [A, I3, A4, A2], [A2, A4, I3, A], [A4, A2, A, I3]]
    M = np.block(layout) % 2
    return BitMatrix.from_array(np.hstack([np.eye(12, dtype=np.int64), M]))


FIXTURES = ("wolfmann", "h24_21row", "h24_star")


def fixture(name: str) -> BitMatrix:
    if name == "wolfmann":
        return wolfmann_matrix()
    if name == "h24_21row":
        return BitMatrix.from_text(_H24_21ROW)
    if name == "h24_star":
        return BitMatrix.from_text(_H24_STAR)
    raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")


def named_cog(code_name: str, label: str) -> Cog:
    n = {"golay23": 23, "bch31": 31, "hamming63": 63, "hamming127": 127, "bch127": 127}[code_name]
    return Cog(parse_octal_cog(OCTAL_COGS[(code_name, label)], n))


CATALOG = {
    "hamming7": lambda: hamming(3),
    "hamming15": lambda: hamming(4),
    "hamming31": lambda: hamming(5),
    "hamming63": lambda: hamming(6),
    "hamming127": lambda: hamming(7),
    "golay23": lambda: golay(False),
    "golay24": lambda: golay(True),
    "bch31": lambda: bch_code(5, [1, 3, 5], d=7),
    "bch127": lambda: bch_code(7, [1, 3], d=5),
    "qr23": lambda: qr_code(23)[0],
    "qr31": lambda: qr_code(31)[0],
    "qr47": lambda: qr_code(47)[0],
    "cds21": lambda: cds_code(2),
    "simplex7": lambda: simplex(3),
    "simplex15": lambda: simplex(4),
}

_cache: dict[str, Code] = {}


def catalog_code(name: str) -> Code:
    if name not in CATALOG:
        raise KeyError(f"unknown code {name!r}; choose from {sorted(CATALOG)}")
    if name not in _cache:
        _cache[name] = CATALOG[name]()
    return _cache[name]


def validate_named_cogs() -> dict[tuple[str, str], bool]:
    """Check every published cog is a dual codeword of its catalog code."""
    out = {}
    for (cname, label) in OCTAL_COGS:
        code = catalog_code(cname)
        out[(cname, label)] = code.dual_contains(named_cog(cname, label).word.bits)
    return out


def n_cyclic_orbit(x: int, n: int) -> int:
    """Size of the cyclic orbit of x."""
    for s in range(1, n + 1):
        if n % s == 0 and rotate(x, s, n) == x:
            return s
    return n


__all__ = [
    "Field2m", "Code", "Cog", "CogOrbit", "PRIMITIVE_POLYNOMIALS", "OCTAL_COGS",
    "hamming_standard_pcm", "bch_pcm", "hamming", "bch_code", "golay", "qr_code", "cds_code",
    "simplex", "parse_octal_cog", "format_octal_cog", "parse_cog", "cog_orbits", "cog_families",
    "fixture", "named_cog", "catalog_code", "code_from_parity", "code_from_generator",
    "minimum_distance", "singer_difference_set", "wolfmann_matrix", "canonical_rotation",
    "dual_words_of_weight", "catalog_code", "CATALOG", "FIXTURES",
]
