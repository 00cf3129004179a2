"""Command-line front end: ``stopred <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .codebook import FIXTURES, OCTAL_COGS, CATALOG, Cog, catalog_code, fixture, named_cog, parse_cog
from .construct import (
    apply_generic_set,
    closure_sums,
    cyclic_pcm,
    ConstructionReport,
    generalized_ht_bch,
    generic_erasure_set,
    GHT_POOLS,
)
from .decoder import Perm, c1_c2_perms, verify_pd, verify_sad, wolfmann_perms
from .gf2 import BitMatrix, read_matrix, write_matrix
from .harness import (
    DECODERS,
    bounds_rows,
    cmd_bounds,
    cmd_enumerate,
    cmd_search,
    cmd_simulate,
    decoder_spec,
    enumerate_rows,
    render,
    search_rows,
    simulate_rows,
)
from .stopping import stopping_distance

GROUPS = ("c1", "c1c2", "wolfmann")


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.replace(" ", ",").split(",") if t]


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def load_matrix(spec: str | None) -> BitMatrix | None:
    """A matrix file path or one of the built-in fixture names."""
    if spec is None:
        return None
    if spec in FIXTURES and not Path(spec).exists():
        return fixture(spec)
    return read_matrix(spec)


def _cog(args, n: int) -> Cog | None:
    if args.cog:
        return Cog(parse_cog(args.cog, n))
    if getattr(args, "cog_id", None):
        return named_cog(args.code, args.cog_id)
    return None


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _perms(group: str, n: int, extended: bool, perm_file: str | None):
    if perm_file:
        lines = [ln.strip() for ln in Path(perm_file).read_text().splitlines()]
        return [Perm.from_cycles(ln, n) for ln in lines if ln and not ln.startswith("#")]
    if group == "wolfmann":
        return wolfmann_perms()
    C1, C2 = c1_c2_perms(n, extended)
    if group == "c1":
        return C1
    return [z.compose(g) for z in C2 for g in C1]


def run_enumerate(args) -> int:
    code = catalog_code(args.code)
    if args.guess:
        raise SystemExit("exhaustive enumeration does not support --guess")
    spec = decoder_spec(code, args.decoder, load_matrix(args.matrix))
    top = args.sigma_max if args.sigma_max is not None else code.n - code.k
    report = cmd_enumerate(code, spec, range(1, top + 1))
    _emit(args, render(enumerate_rows(report), args.format))
    return 0


def run_simulate(args) -> int:
    code = catalog_code(args.code)
    spec = decoder_spec(code, args.decoder, load_matrix(args.matrix))
    recs = cmd_simulate(code, spec, _float_list(args.ep), args.trials, args.seed, guessing=args.guess)
    bad = sum(r.wrong_bits for r in recs)
    if bad:
        print(f"error: {bad} decoded bits disagree with the transmitted codeword", file=sys.stderr)
        return 2
    _emit(args, render(simulate_rows(recs), args.format))
    return 0


def run_bounds(args) -> int:
    code = catalog_code(args.code)
    ells = _int_list(args.ell) if args.ell else None
    _emit(args, render(bounds_rows(cmd_bounds(code, ells)), args.format))
    return 0


def run_search(args) -> int:
    code = catalog_code(args.code)
    cog = _cog(args, code.n)
    ells = _int_list(args.ell) if args.ell else list(range(3, (code.with_distance().d or 3) + 1))
    res = cmd_search(code, ells, args.m_max, None if cog is None else [cog])
    _emit(args, render(search_rows(res), args.format))
    return 0


def run_construct(args) -> int:
    code = catalog_code(args.code)
    check = args.check_to
    if args.method == "cyclic":
        cog = _cog(args, code.n)
        if cog is None:
            raise SystemExit("cyclic construction needs --cog or --cog-id")
        m = args.m if args.m is not None else code.n - code.k
        rep = cyclic_pcm(cog, m, code, cap=check)
    elif args.method == "generic":
        H = code.parity
        A = generic_erasure_set(H.m, args.sbar)
        M = apply_generic_set(A, H)
        rep = ConstructionReport(M, stopping_distance(M, check) if check else None,
                                 {"method": "generic", "sbar": args.sbar})
    elif args.method == "closure":
        ell = args.ell_value or 3
        M = closure_sums(code.parity, ell)
        rep = ConstructionReport(M, stopping_distance(M, check) if check else None,
                                 {"method": "closure", "ell": ell})
    else:
        field = code.data.get("field")
        if field is None or tuple(code.data.get("exponents", ())) != (1, 3):
            raise SystemExit("the generalized construction needs a double-error-correcting BCH code")
        rep = generalized_ht_bch(field, code, pool=args.pool, verify=bool(check))
    if args.matrix_out:
        write_matrix(args.matrix_out, rep.matrix, f"{code.name} {args.method}")
    elif not args.out:
        print(rep.matrix.to_text(), file=sys.stderr)
    _emit(args, json.dumps(rep.to_json(), indent=2, default=str) + "\n")
    return 0


def run_verify_sad(args) -> int:
    code = catalog_code(args.code)
    H = load_matrix(args.matrix) or (fixture("h24_star") if code.name == "golay24" else code.parity)
    perms = _perms(args.group, code.n, code.extended, args.perms)
    ok, witness = verify_sad(H, perms, args.s)
    out = {"s": args.s, "permutations": len(perms), "rows": H.m, "sad": ok,
           "counterexample": None if witness is None else list(witness)}
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0 if ok else 1


def run_verify_pd(args) -> int:
    code = catalog_code(args.code)
    perms = _perms(args.group, code.n, code.extended, args.perms)
    P = _int_list(args.check_positions) if args.check_positions else list(range(code.k, code.n))
    ok, witness = verify_pd(code.n, P, perms, args.s)
    out = {"s": args.s, "permutations": len(perms), "check_positions": P, "pd": ok,
           "counterexample": None if witness is None else list(witness)}
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stopred", description="Stopping redundancy and erasure decoding toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--code", required=True, choices=sorted(CATALOG))
        sp.add_argument("--out", help="write output here instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("enumerate", help="exhaustive uncorrectable-pattern counts")
    common(sp)
    sp.add_argument("--matrix", help="matrix file or fixture name")
    sp.add_argument("--decoder", choices=DECODERS, default="bp")
    sp.add_argument("--guess", action="store_true")
    sp.add_argument("--sigma-max", type=int)
    sp.set_defaults(func=run_enumerate)

    sp = sub.add_parser("simulate", help="Monte Carlo erasure-channel simulation")
    common(sp)
    sp.add_argument("--matrix")
    sp.add_argument("--decoder", choices=DECODERS, default="bp")
    sp.add_argument("--guess", action="store_true", help="branch on stalled frames")
    sp.add_argument("--ep", default="0.1,0.2,0.3", help="comma-separated erasure probabilities")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=run_simulate)

    sp = sub.add_parser("bounds", help="bound table")
    common(sp)
    sp.add_argument("--ell", help="list or range, e.g. 2-7")
    sp.set_defaults(func=run_bounds)

    sp = sub.add_parser("search", help="minimal cyclic matrix sizes per cog")
    common(sp)
    sp.add_argument("--cog", help="octal cog, most significant bit first")
    sp.add_argument("--cog-id", choices=sorted({lab for _, lab in OCTAL_COGS}))
    sp.add_argument("--ell", help="list or range, e.g. 4-7")
    sp.add_argument("--m-max", type=int)
    sp.set_defaults(func=run_search)

    sp = sub.add_parser("construct", help="build a redundant parity-check matrix")
    common(sp, fmt=False)
    sp.add_argument("--method", choices=("cyclic", "generic", "ght", "closure"), required=True)
    sp.add_argument("--cog")
    sp.add_argument("--cog-id", choices=sorted({lab for _, lab in OCTAL_COGS}))
    sp.add_argument("--m", type=int, help="number of cyclic shifts")
    sp.add_argument("--ell", dest="ell_value", type=int, help="target stopping distance for closure sums")
    sp.add_argument("--sbar", type=int, default=3, help="weight limit of the generic set")
    sp.add_argument("--pool", choices=GHT_POOLS, default="min-weight")
    sp.add_argument("--check-to", type=int, default=0, help="check stopping sets up to this size")
    sp.add_argument("--matrix-out", help="matrix file to write")
    sp.set_defaults(func=run_construct)

    for name, fn, text in (("verify-sad", run_verify_sad, "check an s-SAD permutation set"),
                           ("verify-pd", run_verify_pd, "check a PD permutation set")):
        sp = sub.add_parser(name, help=text)
        common(sp, fmt=False)
        if name == "verify-sad":
            sp.add_argument("--matrix", help="matrix file or fixture name")
        else:
            sp.add_argument("--check-positions", help="list or range; default the last n-k positions")
        sp.add_argument("--group", choices=GROUPS, default="c1")
        sp.add_argument("--perms", help="file with one permutation per line in cycle notation")
        sp.add_argument("-s", type=int, default=3)
        sp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
