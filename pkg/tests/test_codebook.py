from itertools import combinations

import pytest

from stopred.codebook import (
    CATALOG,
    Cog,
    Field2m,
    GOLAY_GENERATOR,
    bch_code,
    bch_pcm,
    canonical_rotation,
    catalog_code,
    cds_code,
    cog_families,
    cog_orbits,
    fixture,
    format_octal_cog,
    golay,
    hamming_standard_pcm,
    named_cog,
    parse_octal_cog,
    qr_code,
    quadratic_residues,
    simplex,
    singer_difference_set,
    validate_named_cogs,
)
from stopred.decoder import c1_c2_perms
from stopred.gf2 import BitMatrix, rank, rotate, weight_enumerator
from stopred.stopping import pair_profile


def test_hamming_columns_distinct():
    H = hamming_standard_pcm(3)
    cols = {H.column(j) for j in range(7)}
    assert H.m == 3 and len(cols) == 7 and 0 not in cols


def test_bch_with_exponent_one_is_hamming():
    F = Field2m(5)
    assert bch_pcm(F, [1]) == hamming_standard_pcm(5, F)


def test_bch127_parameters():
    c = catalog_code("bch127")
    assert (c.n, c.k) == (127, 113)
    assert rank(c.parity) == 14
    assert c.with_distance().d == 5


def test_bch31_parameters():
    c = bch_code(5, [1, 3, 5])
    assert (c.n, c.k) == (31, 16)
    assert c.with_distance().d == 7


def test_field_rejects_non_primitive():
    with pytest.raises(ValueError):
        Field2m(4, 0b11111)  # x^4+x^3+x^2+x+1 has order 5


def test_golay_parameters():
    g = golay(False)
    assert (g.n, g.k) == (23, 12)
    assert weight_enumerator(g.parity)[8] == 506
    e = golay(True)
    enum = weight_enumerator(e.generator)
    assert (e.n, e.k) == (24, 12)
    assert enum[8] == 759
    assert all(a == 0 for w, a in enumerate(enum.counts) if w % 2)


def test_qr_codes():
    q23, idem = qr_code(23)
    assert idem.weight == 12
    assert weight_enumerator(q23.generator) == weight_enumerator(golay(False).generator)
    q47, _ = qr_code(47)
    assert (q47.n, q47.k, q47.with_distance().d) == (47, 24, 11)
    assert len(quadratic_residues(23)) == 11


def test_singer_difference_set():
    n, D = singer_difference_set(2)
    assert n == 21 and len(D) == 5
    diffs = [(a - b) % n for a in D for b in D if a != b]
    assert sorted(diffs) == list(range(1, n))


def test_cds_dimension_from_h():
    c = cds_code(2)
    h = c.data["h"]
    assert c.k == h.bit_length() - 1
    assert c.n - c.k == rank(c.parity)
    assert (c.n, c.k, c.with_distance().d) == (21, 11, 6)


@pytest.mark.parametrize("s", [3, 4])
def test_simplex_constant_weight_and_intersections(s):
    c = simplex(s)
    enum = weight_enumerator(c.generator)
    assert enum.nonzero() == {0: 1, 2 ** (s - 1): 2**s - 1}
    words = [x for x in range(1, 1 << c.n) if c.contains(x)]
    for a, b in combinations(words, 2):
        oo, _, _, zz = pair_profile(a, b, c.n)
        assert oo == 2 ** (s - 2)
        assert zz == 2 ** (s - 2) - 1


def test_octal_cog_parsing():
    w = parse_octal_cog("2 1 2 1 3 5 0 0", 23)
    assert w.support() == [0, 4, 6, 10, 12, 13, 14, 16]
    assert format_octal_cog(w) == "2 1 2 1 3 5 0 0"
    assert named_cog("bch127", "A").word.weight == 56
    with pytest.raises(ValueError):
        parse_octal_cog("0 0", 6)


def test_published_cogs_are_dual_codewords():
    assert all(validate_named_cogs().values())


def test_orbit_counts_small():
    orbs = cog_orbits(catalog_code("golay23").parity, 8)
    assert len(orbs) == 22
    assert all(len(o.members) == 23 for o in orbs)
    assert len(cog_orbits(catalog_code("bch31").parity, 8)) == 15


def test_canonical_rotation_is_orbit_invariant():
    x = named_cog("golay23", "A").word.bits
    c = canonical_rotation(x, 23)
    assert all(canonical_rotation(rotate(x, s, 23), 23) == c for s in range(23))


def test_golay_families_closed_under_doubling():
    cogs = [o.cog for o in cog_orbits(catalog_code("golay23").parity, 8)]
    fams = cog_families(cogs)
    assert sorted(len(f) for f in fams) == [11, 11]
    _, C2 = c1_c2_perms(23)
    for fam in fams:
        canon = {canonical_rotation(c.word.bits, 23) for c in fam}
        for c in fam:
            for z in C2:
                assert canonical_rotation(z.apply_word(c.word.bits), 23) in canon


def test_bch31_single_family_and_singleton():
    cogs = [o.cog for o in cog_orbits(catalog_code("bch31").parity, 8)]
    assert [len(f) for f in cog_families(cogs)] == [15]
    assert len(cog_families([cogs[0]])) == 1


def test_wolfmann_fixture_structure():
    W = fixture("wolfmann")
    assert (W.m, W.n) == (12, 24)
    assert all((r & 0xFFF) == 1 << i for i, r in enumerate(W.rows))


def test_h24_star_rows_are_weight8_dual_words():
    H = fixture("h24_star")
    g = catalog_code("golay24")
    assert (H.m, H.n) == (12, 24)
    assert all(r.bit_count() == 8 and g.dual_contains(r) for r in H.rows)
    assert rank(H) == 12


def test_h24_21row_layout():
    F = fixture("h24_21row")
    g = catalog_code("golay24")
    assert (F.m, F.n, rank(F)) == (21, 24, 12)
    base = sum(1 << e for e in (0, 5, 6, 9, 11, 12, 16, 18))
    mask = (1 << 23) - 1
    for i, r in enumerate(F.rows[:20]):
        assert r & mask == rotate(base, i, 23) and not r >> 23
    assert F.rows[20] == sum(1 << e for e in GOLAY_GENERATOR) | 1 << 23
    assert all(g.dual_contains(r) for r in F.rows)


def test_catalog_builds():
    for name in CATALOG:
        c = catalog_code(name)
        assert c.n - c.k == rank(c.parity)


def test_cog_requires_nonzero():
    with pytest.raises(ValueError):
        Cog(BitMatrix(5, (0,)).row(0))
