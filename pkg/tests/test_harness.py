import csv
import io
import json
from math import comb

import pytest

from stopred import _kernels
from stopred.bounds import ml_union_bound_fer
from stopred.cli import main
from stopred.codebook import catalog_code, code_from_parity, fixture, named_cog
from stopred.construct import cyclic_pcm
from stopred.decoder import DecoderSpec, Perm
from stopred.gf2 import BitMatrix, rank, weight_enumerator, write_matrix
from stopred.harness import (
    ErasureReport,
    IncompleteReportError,
    analytic_fer,
    cmd_enumerate,
    cmd_simulate,
    decoder_spec,
    enumerate_rows,
    render,
)
from stopred.parallel import count_failures

G24 = catalog_code("golay24")


def test_zero_erasure_probability():
    spec = decoder_spec(G24, "bp")
    (rec,) = cmd_simulate(G24, spec, [0.0], 2000, seed=3)
    assert (rec.frame_errors, rec.bit_errors, rec.avg_iterations) == (0, 0, 0)


def test_simulation_is_deterministic():
    spec = decoder_spec(G24, "agd-a")
    a = cmd_simulate(G24, spec, [0.3], 5000, seed=42)
    b = cmd_simulate(G24, spec, [0.3], 5000, seed=42)
    assert a == b
    c = cmd_simulate(G24, spec, [0.3], 5000, seed=43)
    assert a != c


def test_guessing_never_hurts():
    spec = decoder_spec(G24, "bp")
    plain = cmd_simulate(G24, spec, [0.35], 5000, seed=5)[0]
    guess = cmd_simulate(G24, spec, [0.35], 5000, seed=5, guessing=True)[0]
    assert guess.frame_errors <= plain.frame_errors
    assert guess.wrong_bits == plain.wrong_bits == 0


def test_ml_simulation_matches_agd_scale():
    ml = cmd_simulate(G24, decoder_spec(G24, "ml"), [0.4], 3000, seed=9)[0]
    bp = cmd_simulate(G24, decoder_spec(G24, "bp"), [0.4], 3000, seed=9)[0]
    assert ml.wrong_bits == 0 and ml.frame_errors <= bp.frame_errors


def test_report_requires_counts_below_saturation():
    rep = ErasureReport("golay24", "ml", 24, {s: 0 for s in range(1, 8)}, 13)
    assert rep.count(20) == comb(24, 20)
    with pytest.raises(IncompleteReportError):
        rep.count(9)
    with pytest.raises(IncompleteReportError):
        analytic_fer(rep, 0.1)
    with pytest.raises(ValueError):
        ErasureReport("x", "bp", 4, {2: 7}, 3)


def test_analytic_fer():
    zero = ErasureReport("golay24", "ml", 24, {s: 0 for s in range(1, 25)}, 25)
    assert analytic_fer(zero, 0.2) == 0
    pc = _kernels.permuted_columns(fixture("h24_star"), [Perm.identity(24)])
    counts = {s: count_failures(_kernels.MODE_ML, pc, 24, s) for s in range(1, 13)}
    assert counts[8] == 759
    rep = ErasureReport("golay24", "ml", 24, counts, 13)
    enum = weight_enumerator(G24.generator)
    for ep in (0.001, 0.01, 0.05):
        assert analytic_fer(rep, ep) <= ml_union_bound_fer(enum, ep)
    assert analytic_fer(rep, 1e-4) == pytest.approx(759 * 1e-32, rel=1e-2)


def test_workers_do_not_change_counts():
    spec = decoder_spec(G24, "bp")
    one = cmd_enumerate(G24, spec, range(1, 6), workers=1)
    many = cmd_enumerate(G24, spec, range(1, 6), workers=3)
    assert one.counts == many.counts


def test_decoder_spec_validation():
    with pytest.raises(ValueError):
        decoder_spec(G24, "bp", BitMatrix.identity(24))
    with pytest.raises(ValueError):
        decoder_spec(G24, "nope")
    wolf = code_from_parity("wolfmann", fixture("wolfmann"))
    with pytest.raises(ValueError):
        decoder_spec(wolf, "agd-a", fixture("wolfmann"))


def test_render_formats():
    rep = ErasureReport("golay24", "bp", 24, {1: 0, 2: 0, 3: 7}, 13)
    text = render(enumerate_rows(rep), "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[2] == {"sigma": "3", "total": "2024", "uncorrectable": "7"}
    assert json.loads(render(enumerate_rows(rep), "json"))[2]["uncorrectable"] == 7
    with pytest.raises(ValueError):
        render([], "xml")


def test_redundant_rows_lower_ber_bch127():
    code = catalog_code("bch127")
    cog = named_cog("bch127", "A")
    small = cyclic_pcm(cog, 14, code).matrix
    assert rank(small) == 14
    big = cyclic_pcm(cog, 34, code).matrix
    ident = [Perm.identity(127)]
    rs = cmd_simulate(code, DecoderSpec("bp", small, ident), [0.08], 3000, seed=1)[0]
    rb = cmd_simulate(code, DecoderSpec("bp", big, ident), [0.08], 3000, seed=1)[0]
    assert rb.ber < rs.ber
    assert rb.wrong_bits == rs.wrong_bits == 0


def test_cli_enumerate(capsys):
    assert main(["enumerate", "--code", "golay24", "--sigma-max", "4"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [int(r["uncorrectable"]) for r in rows] == [0, 0, 7, 190]


def test_cli_enumerate_rejects_guess():
    with pytest.raises(SystemExit):
        main(["enumerate", "--code", "golay24", "--guess", "--sigma-max", "3"])


def test_cli_simulate_json(tmp_path):
    out = tmp_path / "s.json"
    assert main(["simulate", "--code", "golay24", "--decoder", "agd-a", "--ep", "0.2",
                 "--trials", "1000", "--seed", "4", "--format", "json", "--out", str(out)]) == 0
    rec = json.loads(out.read_text())[0]
    assert set(rec) == {"ep", "trials", "bit_errors", "frame_errors", "avg_iterations", "seed"}
    assert rec["trials"] == 1000 and rec["seed"] == 4


def test_cli_matrix_file(tmp_path, capsys):
    p = tmp_path / "h.txt"
    write_matrix(p, fixture("h24_star"), "test")
    assert main(["enumerate", "--code", "golay24", "--matrix", str(p), "--sigma-max", "3"]) == 0
    assert capsys.readouterr().out.strip().endswith("3,2024,7")


def test_cli_bounds_and_search(capsys):
    assert main(["bounds", "--code", "golay23", "--ell", "4"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert any(r["bound"] == "lb_schwartz_vardy" and r["value"] == "11" for r in rows)
    assert main(["search", "--code", "golay23", "--cog-id", "A", "--ell", "4-5"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["rows"] for r in rows] == ["11", "16"]


def test_cli_construct(tmp_path):
    mfile, out = tmp_path / "m.txt", tmp_path / "r.json"
    assert main(["construct", "--code", "golay23", "--method", "cyclic", "--cog-id", "A", "--m", "16",
                 "--check-to", "4", "--matrix-out", str(mfile), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["rows"] == 16 and rep["rank"] == 11
    assert mfile.exists()


def test_cli_verify(capsys, tmp_path):
    pf = tmp_path / "perms.txt"
    pf.write_text("# identity only\n(0)\n")
    assert main(["verify-sad", "--code", "golay24", "--matrix", "wolfmann", "--group", "wolfmann", "-s", "7"]) == 0
    assert json.loads(capsys.readouterr().out)["sad"] is True
    assert main(["verify-pd", "--code", "golay24", "--group", "wolfmann", "-s", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["pd"] is True
    assert main(["verify-sad", "--code", "golay24", "--group", "c1", "-s", "3",
                 "--perms", str(pf)]) == 1
    assert len(json.loads(capsys.readouterr().out)["counterexample"]) == 3
