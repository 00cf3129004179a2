"""Experiment drivers behind the command line."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from . import _kernels
from .bounds import BoundResult, bound_table, lb_mu_cds
from .codebook import Code, Cog, catalog_code, cog_orbits, dual_words_of_weight, fixture
from .construct import SearchResult, search_min_rows
from .decoder import (
    COMPLETE,
    DecoderSpec,
    Guesser,
    Perm,
    agd_b_matrix,
    agd_b_perms,
    c1_c2_perms,
    ml_recoverable,
)
from .gf2 import BitMatrix, rank, weight_enumerator
from .parallel import count_failures
from .stopping import ENUMERATION_GUARD, GuardError

DECODERS = ("bp", "agd-a", "agd-b", "ml")
BATCH = 50_000


class IncompleteReportError(ValueError):
    pass


@dataclass
class ErasureReport:
    code: str
    decoder: str
    n: int
    counts: dict[int, int]
    saturated_from: int
    totals: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.totals:
            self.totals = {s: comb(self.n, s) for s in self.counts}
        for s, c in self.counts.items():
            if not 0 <= c <= comb(self.n, s):
                raise ValueError(f"count {c} out of range at sigma={s}")

    def count(self, sigma: int) -> int:
        if sigma in self.counts:
            return self.counts[sigma]
        if sigma == 0:
            return 0
        if sigma >= self.saturated_from:
            return comb(self.n, sigma)
        raise IncompleteReportError(f"no count for sigma={sigma}")


@dataclass
class SimRecord:
    ep: float
    trials: int
    n: int
    residual_erasures: int
    frame_errors: int
    total_iterations: int
    seed: int | None
    wrong_bits: int = 0

    @property
    def bit_errors(self) -> float:
        # an unresolved erasure is a coin flip, so half of them count as errors
        return self.residual_erasures / 2

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n) if self.trials else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0

    @property
    def avg_iterations(self) -> float:
        return self.total_iterations / self.trials if self.trials else 0.0


def min_dual_weight(code: Code) -> int:
    enum = weight_enumerator(code.parity)
    return next(w for w in range(1, code.n + 1) if enum[w])


def _second_dual_weight(code: Code) -> int | None:
    enum = weight_enumerator(code.parity)
    ws = [w for w in range(1, code.n + 1) if enum[w]]
    return ws[1] if len(ws) > 1 else None


def default_matrix(code: Code, decoder: str) -> BitMatrix:
    """Matrix used when none is given: h24_star for the extended Golay code, an AGD_B matrix for agd-b."""
    if code.name == "golay24":
        return fixture("h24_star")
    if decoder == "agd-b" and code.cyclic:
        w = min_dual_weight(code)
        cogs = [o.cog for o in cog_orbits(code.parity, w)]
        w2 = _second_dual_weight(code)
        extra = dual_words_of_weight(code.parity, w2) if w2 else []
        return agd_b_matrix(code, cogs, extra)
    return code.parity


def decoder_spec(code: Code, decoder: str, H: BitMatrix | None = None) -> DecoderSpec:
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}")
    H = default_matrix(code, decoder) if H is None else H
    if rank(H) != code.n - code.k or not all(code.dual_contains(r) for r in H.rows):
        raise ValueError("matrix is not a parity-check matrix of the code")
    ident = [Perm.identity(code.n)]
    if decoder == "bp":
        return DecoderSpec("bp", H, ident, _kernels.MODE_PEEL)
    if decoder == "ml":
        return DecoderSpec("ml", H, ident, _kernels.MODE_ML)
    if not (code.cyclic or code.extended):
        raise ValueError("automorphism decoders need a cyclic or extended cyclic code")
    if decoder == "agd-a":
        perms = c1_c2_perms(code.n, code.extended)[0]
    else:
        perms = agd_b_perms(code.n, code.extended)
    return DecoderSpec(decoder, H, perms, _kernels.MODE_AGD)


def cmd_enumerate(code: Code, spec: DecoderSpec, sigmas, workers: int | None = None,
                  guard: int = ENUMERATION_GUARD) -> ErasureReport:
    n = code.n
    sigmas = list(sigmas)
    for s in sigmas:
        if comb(n, s) > guard:
            raise GuardError(f"C({n},{s}) exceeds the guard {guard}")
    pcols = spec.pcols()
    counts = {s: count_failures(spec.mode, pcols, n, s, workers=workers) for s in sigmas}
    return ErasureReport(code.name, spec.name, n, counts, code.n - code.k + 1)


def analytic_fer(report: ErasureReport, ep: float) -> float:
    """Exact frame error rate: sum over sigma of count(sigma) ep^sigma (1-ep)^(n-sigma)."""
    n = report.n
    return float(sum(report.count(s) * ep**s * (1 - ep) ** (n - s) for s in range(1, n + 1)))


def _ml_batch(H, erased, est, cw):
    # ML leaves exactly the positions covered by codewords inside the erasure
    T, n = erased.shape
    res = np.zeros(T, dtype=np.int64)
    for t in range(T):
        E = np.flatnonzero(erased[t])
        bad = ml_recoverable(H, E).unrecoverable
        ok = [i for i in E if i not in bad]
        est[t, ok] = cw[t, ok]
        est[t, list(bad)] = _kernels.UNKNOWN
        res[t] = len(bad)
    return res


def cmd_simulate(code: Code, spec: DecoderSpec, eps, trials: int, seed: int | None = None,
                 guessing: bool = False, depth: int = 2, batch: int = BATCH) -> list[SimRecord]:
    """Independent erasure trials per ep on random codewords; deterministic for a fixed seed."""
    if trials < 1:
        raise ValueError("trials must be positive")
    n, k = code.n, code.k
    G = code.generator.to_array().astype(np.int64)
    pcols = spec.pcols()
    P = pcols.shape[0]
    guesser = Guesser(spec.H, spec.perms or None, depth) if guessing else None
    rng = np.random.default_rng(seed)
    out = []
    for ep in eps:
        rec = SimRecord(float(ep), trials, n, 0, 0, 0, seed)
        done = 0
        while done < trials:
            T = min(batch, trials - done)
            cw = ((rng.integers(0, 2, size=(T, k)) @ G) % 2).astype(np.uint8)
            erased = (rng.random((T, n)) < ep).astype(np.uint8)
            starts = rng.integers(0, P, size=T).astype(np.int64)
            est = cw.copy()
            rounds = np.zeros(T, dtype=np.int64)
            if spec.mode == _kernels.MODE_ML:
                res_len = _ml_batch(spec.H, erased, est, cw)
            else:
                res_len = np.zeros(T, dtype=np.int64)
                tried = np.zeros(T, dtype=np.int64)
                _kernels.decode_batch(pcols, erased, starts, est, res_len, rounds, tried)
            if guesser is not None:
                for t in np.flatnonzero(res_len):
                    residual = [int(i) for i in np.flatnonzero(est[t] == _kernels.UNKNOWN)]
                    kind, final = guesser.complete(est[t], residual)
                    if kind == COMPLETE:
                        est[t] = final
                        res_len[t] = 0
            known = est != _kernels.UNKNOWN
            rec.wrong_bits += int(np.count_nonzero(known & (est != cw)))
            rec.residual_erasures += int(res_len.sum())
            rec.frame_errors += int(np.count_nonzero(res_len))
            rec.total_iterations += int(rounds.sum())
            done += T
        out.append(rec)
    return out


def cmd_bounds(code: Code, ells=None, eps=0.001) -> list[tuple[int, str, BoundResult]]:
    d = code.with_distance().d
    d_dual = min_dual_weight(code)
    ells = list(ells) if ells is not None else list(range(2, d + 1))
    extra = {}
    if code.name.startswith("cds"):
        w = d_dual
        lam = code.data.get("lambda")
        if lam is not None:
            extra["lb_mu_cds"] = lambda ell, w=w, lam=lam: lb_mu_cds(code.n, w, lam, ell)
    return bound_table(code.name, code.n, code.k, d, d_dual, ells, eps, extra)


def cmd_search(code: Code, ells, m_max: int | None = None, cogs=None) -> list[SearchResult]:
    """Per-cog minimal row counts; every minimum-weight cog orbit unless ``cogs`` is given."""
    if cogs is None:
        cogs = [o.cog for o in cog_orbits(code.parity, min_dual_weight(code))]
    cogs = [c if isinstance(c, Cog) else Cog(c) for c in cogs]
    m_max = code.n if m_max is None else m_max
    return [search_min_rows(cogs, ell, m_max, code.n - code.k) for ell in ells]


def resolve_code(name: str) -> Code:
    return catalog_code(name)


def enumerate_rows(report: ErasureReport):
    return [{"sigma": s, "total": report.totals[s], "uncorrectable": report.counts[s]}
            for s in sorted(report.counts)]


def simulate_rows(records):
    return [{"ep": r.ep, "trials": r.trials, "bit_errors": r.bit_errors, "frame_errors": r.frame_errors,
             "avg_iterations": r.avg_iterations, "seed": r.seed} for r in records]


def bounds_rows(rows):
    return [{"ell": ell, "bound": name, "kind": b.kind, "value": str(b)} for ell, name, b in rows]


def search_rows(results):
    out = []
    for r in results:
        for cog, m in r.per_cog:
            out.append({"ell": r.ell, "cog": str(cog.word), "rows": "" if m is None else m})
    return out


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError("format must be csv or json")
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def report_json(report: ErasureReport) -> str:
    return json.dumps(asdict(report), indent=2)
