from itertools import combinations

import numpy as np
import pytest

from stopred.codebook import Field2m, catalog_code, fixture, hamming_standard_pcm, named_cog
from stopred.construct import (
    ConstructionError,
    apply_generic_set,
    closure_sums,
    cyclic_pcm,
    extend_with_parity,
    generalized_ht_bch,
    generic_erasure_set,
    min_rows_for,
    resolve_counts,
    search_min_rows,
    walsh_hadamard,
)
from stopred.gf2 import BitMatrix, rank
from stopred.stopping import has_stopping_distance, list_stopping_sets, stopping_distance

GOLAY_A = named_cog("golay23", "A")


@pytest.mark.parametrize("m,ell", [(16, 5), (18, 6)])
def test_cyclic_golay_cog_a(m, ell):
    rep = cyclic_pcm(GOLAY_A, m, catalog_code("golay23"), cap=ell - 1)
    assert rep.stopping_distance.value >= ell
    assert rep.rank == 11


def test_cyclic_rejects_low_rank():
    with pytest.raises(ConstructionError):
        cyclic_pcm(GOLAY_A, 5, catalog_code("golay23"))


def test_report_json_fields():
    rep = cyclic_pcm(GOLAY_A, 16, catalog_code("golay23"), cap=4)
    js = rep.to_json()
    assert (js["rows"], js["rank"], js["stopping_distance_checked_to"]) == (16, 11, 4)


def test_extend_with_parity_matches_fixture_rows():
    base = fixture("h24_21row")
    shifts = BitMatrix(23, tuple(r & ((1 << 23) - 1) for r in base.rows[:20]))
    ext = extend_with_parity(shifts, catalog_code("golay24"))
    assert ext.rows == base.rows[:20]
    # even-weight rows all end in 0, so the odd last row is needed for rank 12
    assert rank(ext) == 11
    assert rank(BitMatrix(24, ext.rows + base.rows[20:])) == 12


def test_extend_even_rows_get_zero():
    H = BitMatrix(4, (0b0011, 0b0111))
    assert extend_with_parity(H).rows == (0b00011, 0b10111)


def test_search_golay_cog_a_row():
    res = [search_min_rows([GOLAY_A], ell, 23, 11) for ell in range(4, 8)]
    assert [r.minimum for r in res] == [11, 16, 18, 23]


def test_search_unreachable_is_none():
    assert min_rows_for(GOLAY_A.word, 6, 11, 11, 11) is None


def test_generic_sets():
    assert generic_erasure_set(6, 3).m == 16
    assert generic_erasure_set(7, 3).m == 22
    assert generic_erasure_set(5, 1).rows == (1,)
    H = hamming_standard_pcm(4)
    assert apply_generic_set(BitMatrix.identity(4), H) == H


def test_generic_hamming63_unresolved_are_codewords():
    H = apply_generic_set(generic_erasure_set(6, 3), hamming_standard_pcm(6))
    sets = list_stopping_sets(H, 3)
    assert len(sets) == 651
    code = catalog_code("hamming63")
    assert all(code.contains(sum(1 << i for i in s)) for s in sets)


def test_cube_roots_of_unity_sum():
    F = Field2m(6)
    assert F.alpha(21) ^ F.alpha(42) == 1


def test_closure_sums():
    H7 = catalog_code("hamming7").parity
    assert closure_sums(H7, 3) == H7
    assert stopping_distance(closure_sums(H7, 3)).value == 3
    G = closure_sums(catalog_code("golay23").parity, 7)
    assert G.m == 1023
    assert has_stopping_distance(G, 7)


def test_walsh_hadamard_involution():
    x = np.arange(16) % 5 - 2
    assert np.array_equal(walsh_hadamard(walsh_hadamard(x)), 16 * x)


def test_resolve_counts_matches_brute_force():
    rng = np.random.default_rng(3)
    n, dim = 10, 4
    basis = [int(x) for x in rng.integers(1, 1 << n, size=dim)]
    colvals = np.array([sum(((b >> p) & 1) << i for i, b in enumerate(basis)) for p in range(n)])
    for sig in (2, 3):
        sets = np.array(list(combinations(range(n), sig)))
        counts = resolve_counts(sets, colvals, dim)
        for u in range(1 << dim):
            w = 0
            for i in range(dim):
                if (u >> i) & 1:
                    w ^= basis[i]
            brute = sum(1 for s in sets if sum((w >> int(p)) & 1 for p in s) == 1)
            assert counts[u] == brute


def test_generalized_construction_n63():
    rep = generalized_ht_bch(Field2m(6))
    d = rep.description
    assert d["step3_targets"] == 21
    assert rep.stopping_distance.value >= 5
    assert d["rows_for_distance"][4] <= d["rows_for_distance"][5] == rep.rows
    assert rep.rank == 12
