"""Closed-form bounds on stopping redundancy and cyclic matrix sizes.

Counting is exact.  Logarithmic bounds are evaluated with ``decimal`` at
``LOG_PRECISION`` significant digits; a result within ``CEIL_GUARD`` of an
integer is reported as unstable rather than silently rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

LOG_PRECISION = 60
CEIL_GUARD = Decimal("1e-40")


class BoundRangeError(ValueError):
    pass


@dataclass(frozen=True)
class BoundResult:
    value: int | None
    kind: str
    target: str
    provenance: str
    detail: dict | None = None

    @property
    def vacuous(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "n/a" if self.value is None else str(self.value)


def _C(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _dceil(x: Decimal) -> int:
    near = x.to_integral_value()
    if abs(x - near) < CEIL_GUARD:
        raise ArithmeticError(f"value {x} too close to an integer for a stable ceiling")
    return int(x.to_integral_value(rounding="ROUND_CEILING"))


def omega_sigma(n: int, sigma: int, d_dual: int) -> int:
    return max(-(-(n + 1) // sigma) - 1, d_dual)


def lb_schwartz_vardy(n: int, k: int, d_dual: int, ell: int) -> BoundResult:
    best = n - k
    terms = {}
    for s in range(1, ell):
        w = omega_sigma(n, s, d_dual)
        den = w * _C(n - w, s - 1)
        if den <= 0:
            continue
        t = _ceil(Fraction(_C(n, s), den))
        terms[s] = t
        best = max(best, t)
    return BoundResult(best, "lower", f"rho_{ell}", "row-weight counting bound", {"terms": terms})


def lb_bonferroni_constweight(n: int, omega: int, profiles, ell: int) -> BoundResult:
    from .stopping import resolved_by_pair

    if not 0 < omega <= n:
        raise BoundRangeError("omega must lie in 1..n")
    profiles = [tuple(p)[-4:] for p in profiles]
    best = None
    for s in range(1, ell):
        sp = max((resolved_by_pair(p, s) for p in profiles), default=0)
        den = omega * _C(n - omega, s - 1) - sp
        if den <= 0:
            continue
        v = _ceil(Fraction(_C(n, s) - sp, den))
        best = v if best is None else max(best, v)
    return BoundResult(best, "lower", f"rho_{ell}", "second-order Bonferroni, constant row weight")


def _check_lll_range(ell: int, d: int | None):
    if ell < 2:
        raise BoundRangeError("ell must be at least 2")
    if d is not None and ell > (d + 1) // 2:
        raise BoundRangeError(f"ell={ell} exceeds floor((d+1)/2) for d={d}")


def ub_lll(n: int, k: int, ell: int, d: int | None = None) -> BoundResult:
    _check_lll_range(ell, d)
    t = ell - 1
    dep = sum(_C(n, j) - _C(n - j, j) for j in range(1, t + 1))
    with localcontext() as ctx:
        ctx.prec = LOG_PRECISION
        num = 1 + Decimal(dep).ln()
        den = -(1 - Decimal(t) / Decimal(2**t)).ln()
        m = _dceil(num / den)
    return BoundResult(m + n - k - ell + 1, "upper", f"rho_{ell}", "local lemma bound",
                       {"rows_before_completion": m})


def ub_lll_hp(n: int, k: int, ell: int, eps, d: int | None = None) -> BoundResult:
    _check_lll_range(ell, d)
    eps = Decimal(str(eps))
    if not 0 < eps < 1:
        raise BoundRangeError("eps must lie in (0, 1)")
    t = ell - 1
    N = sum(_C(n, j) for j in range(1, t + 1))
    dep = sum(_C(n, j) - _C(n - j, j) - 1 for j in range(1, t + 1))
    with localcontext() as ctx:
        ctx.prec = LOG_PRECISION
        x = eps / Decimal(N)
        num = x.ln() + Decimal(dep) * (1 - x).ln()
        den = (1 - Decimal(t) / Decimal(2**t)).ln()
        m = _dceil(num / den)
    return BoundResult(m + n - k - ell + 1, "upper", f"rho_{ell}", "high-probability random rows",
                       {"rows_before_completion": m})


def ub_sum_rows(r: int, ell: int) -> BoundResult:
    if r < 1 or ell < 3:
        raise BoundRangeError("need r >= 1 and ell >= 3")
    return BoundResult(sum(_C(r, i) for i in range(1, ell - 1)), "upper", f"rho_{ell}",
                       "all sums of at most ell-2 basis rows")


def _mu_ratio(n: int, s: int, row_weight: int, M) -> Fraction | None:
    den = row_weight * _C(n - row_weight, s - 1) - M
    if den <= 0:
        return None
    return Fraction(_C(n, s) - M, 1) / den


def lb_mu_qr(n: int, ell: int) -> BoundResult:
    if n % 4 != 3 or n < 7 or any(n % p == 0 for p in range(2, int(n**0.5) + 1)):
        raise BoundRangeError("n must be a prime congruent to 3 mod 4")
    t = Fraction(n + 1, 4)
    best = None
    for s in range(1, ell):
        M = t * (_C((n - 3) // 4, s - 1) + t * _C((n - 3) // 4, s - 2))
        r = _mu_ratio(n, s, (n + 1) // 2, M)
        if r is None:
            continue
        best = _ceil(r) if best is None else max(best, _ceil(r))
    return BoundResult(best, "lower", f"mu_{ell}", "cyclic matrix from the quadratic residue idempotent")


def lb_mu_cds(n: int, k: int, lam: int, ell: int) -> BoundResult:
    best = None
    zz = n - 2 * k + lam
    for s in range(1, ell):
        M = lam * _C(zz, s - 1) + (k - lam) ** 2 * _C(zz, s - 2)
        r = _mu_ratio(n, s, k, M)
        if r is None:
            continue
        best = _ceil(r) if best is None else max(best, _ceil(r))
    return BoundResult(best, "lower", f"mu_{ell}", "cyclic matrix from a difference-set polynomial")


def schoenheim(n: int, k: int, d: int) -> BoundResult:
    if k < d - 1:
        raise BoundRangeError("need k >= d - 1")
    v = 1
    for i in range(d - 2, -1, -1):
        v = _ceil(Fraction(n - i, k - i) * v)
    return BoundResult(v, "lower", "automorphism count", "nested covering bound with ceilings")


def ml_union_bound_fer(enum, ep: float) -> float:
    if not 0 < ep < 1:
        raise BoundRangeError("ep must lie in (0, 1)")
    return float(sum(a * Fraction(ep) ** w for w, a in enumerate(enum.counts) if w >= 1 and a))


def bound_table(code_name: str, n: int, k: int, d: int, d_dual: int, ells, eps=Decimal("0.001"),
                extra: dict | None = None) -> list[tuple[int, str, BoundResult]]:
    """Every applicable bound for a code, as (ell, name, result) rows."""
    rows = []
    is_qr = n % 4 == 3 and all(n % p for p in range(2, int(n**0.5) + 1)) and k == (n + 1) // 2
    for ell in ells:
        if ell <= d:
            rows.append((ell, "lb_schwartz_vardy", lb_schwartz_vardy(n, k, d_dual, ell)))
        if ell >= 3:
            rows.append((ell, "ub_sum_rows", ub_sum_rows(n - k, ell)))
        if 2 <= ell <= (d + 1) // 2:
            rows.append((ell, "ub_lll", ub_lll(n, k, ell, d)))
            rows.append((ell, "ub_lll_hp", ub_lll_hp(n, k, ell, eps, d)))
        if is_qr:
            rows.append((ell, "lb_mu_qr", lb_mu_qr(n, ell)))
        for name, fn in (extra or {}).items():
            rows.append((ell, name, fn(ell)))
    return rows
