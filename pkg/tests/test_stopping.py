from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from stopred.codebook import catalog_code, cog_families, cog_orbits, fixture, named_cog, qr_code
from stopred.construct import cyclic_rows
from stopred.decoder import stack_images, wolfmann_perms
from stopred.gf2 import BitMatrix, BitWord
from stopred.stopping import (
    GuardError,
    bonferroni_upper_cyclic,
    count_unresolved,
    first_stopping_set,
    is_stopping_set,
    list_stopping_sets,
    pie_alternating,
    pie_union_exact,
    resolved_by_pair,
    resolved_by_row,
    stopping_distance,
    write_counts_csv,
    xy_kappa,
)

EXAMPLE1 = BitMatrix.from_strings(["10001", "10010"])


def resolved_exact(H, sigma):
    return comb(H.n, sigma) - count_unresolved(H, sigma)


def test_example1_predicates():
    assert not is_stopping_set(EXAMPLE1, {0, 1, 2})
    assert is_stopping_set(EXAMPLE1, {1, 2})


def test_example1_jointly_resolved_sets():
    a, b = EXAMPLE1.rows
    both = [I for I in combinations(range(5), 3)
            if sum((a >> i) & 1 for i in I) == 1 and sum((b >> i) & 1 for i in I) == 1]
    assert both == [(0, 1, 2), (1, 3, 4), (2, 3, 4)]


def test_codeword_supports_are_stopping_sets():
    c = catalog_code("hamming15")
    for x in range(1, 1 << 11):
        w = 0
        for i, g in enumerate(c.generator.rows):
            if (x >> i) & 1:
                w ^= g
        assert is_stopping_set(c.parity, BitWord(15, w).support())


def test_stopping_distances():
    W = fixture("wolfmann")
    assert stopping_distance(stack_images(W, wolfmann_perms()), 8).value == 8
    A = named_cog("golay23", "A").word
    sd = stopping_distance(cyclic_rows(A, 23), 7)
    assert sd.value == 7 and sd.exact
    assert stopping_distance(catalog_code("hamming31").parity).value == 3


def test_first_stopping_set_is_a_stopping_set():
    H = fixture("h24_star")
    I = first_stopping_set(H, 3)
    assert I is not None and is_stopping_set(H, I)
    assert len(list_stopping_sets(H, 3)) == 7


def test_count_unresolved_examples():
    from stopred.codebook import hamming_standard_pcm
    from stopred.construct import apply_generic_set, cyclic_pcm, generic_erasure_set

    Hs = hamming_standard_pcm(6)
    assert count_unresolved(apply_generic_set(generic_erasure_set(6, 3), Hs), 3) == 651
    code = catalog_code("hamming63")
    assert count_unresolved(cyclic_pcm(named_cog("hamming63", "A"), 16, code).matrix, 3) == 655
    assert count_unresolved(Hs, 1) == 0


def test_guard():
    with pytest.raises(GuardError):
        count_unresolved(catalog_code("bch127").parity, 6, guard=10**6)


def test_resolved_by_row_examples():
    assert resolved_by_row(5, 2, 3) == 6
    row = 0b00011
    brute = sum(1 for I in combinations(range(5), 3) if sum((row >> i) & 1 for i in I) == 1)
    assert brute == 6
    assert resolved_by_row(9, 4, 1) == 4
    assert resolved_by_row(7, 7, 3) == 0


def test_resolved_by_pair_examples():
    assert resolved_by_pair((0, 8, 8, 7), 3) == 448
    assert resolved_by_pair((3, 1, 1, 4), 1) == 3


def test_xy_kappa_golay_families():
    cogs = [o.cog for o in cog_orbits(catalog_code("golay23").parity, 8)]
    want = {
        frozenset({((0, 8, 8, 7), 2), ((4, 4, 4, 11), 8), ((2, 6, 6, 9), 12)}),
        frozenset({((4, 4, 4, 11), 6), ((2, 6, 6, 9), 16)}),
    }
    got = set()
    for fam in cog_families(cogs):
        profiles = {frozenset(Counter(tuple(xy_kappa(c.word, k))[1:] for k in range(1, 23)).items())
                    for c in fam}
        assert len(profiles) == 1
        got |= profiles
    assert got == want


def test_xy_kappa_bch31():
    cog = named_cog("bch31", "A").word
    prof = Counter(tuple(xy_kappa(cog, k))[1:] for k in range(1, 31))
    assert prof == Counter({(4, 4, 4, 19): 2, (0, 8, 8, 15): 4, (2, 6, 6, 17): 24})


def test_xy_kappa_qr_idempotent():
    _, idem = qr_code(23)
    assert {tuple(xy_kappa(idem, k))[1:] for k in range(1, 23)} == {(6, 6, 6, 5)}


def test_xy_kappa_matches_pair_count():
    cog = named_cog("golay23", "A").word
    for k in range(1, 23):
        p = xy_kappa(cog, k)
        a = cog.bits
        b = BitWord(23, sum(1 << ((i + k) % 23) for i in cog.support())).bits
        brute = sum(1 for I in combinations(range(23), 2)
                    if sum((a >> i) & 1 for i in I) == 1 and sum((b >> i) & 1 for i in I) == 1)
        assert resolved_by_pair(p, 2) == brute


@pytest.mark.parametrize("sigma", [2, 3, 4])
def test_pie_full_depth_is_exact(sigma):
    H = catalog_code("hamming7").parity
    H = BitMatrix(7, H.rows + (H.rows[0] ^ H.rows[1],))
    S = pie_union_exact(H, sigma)
    assert pie_alternating(S) == resolved_exact(H, sigma)
    assert S[0] == sum(resolved_by_row(7, r.bit_count(), sigma) for r in H.rows)


def test_pie_single_row_exact():
    H = BitMatrix(7, (0b1010101,))
    S = pie_union_exact(H, 3)
    assert S == [resolved_exact(H, 3)]


@pytest.mark.parametrize("m", [11, 16])
@pytest.mark.parametrize("sigma", [3, 4])
def test_bonferroni_upper(m, sigma):
    A = named_cog("golay23", "A").word
    ub = bonferroni_upper_cyclic(A, m, sigma)
    assert ub >= resolved_exact(cyclic_rows(A, m), sigma)


def test_bonferroni_single_row():
    A = named_cog("golay23", "A").word
    assert bonferroni_upper_cyclic(A, 1, 3) == Fraction(resolved_by_row(23, 8, 3))


def test_write_counts_csv(tmp_path):
    p = tmp_path / "c.csv"
    write_counts_csv(p, {4: 10, 3: 7})
    assert p.read_text().splitlines() == ["sigma,count", "3,7", "4,10"]
