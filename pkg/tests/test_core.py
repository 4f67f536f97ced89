import pytest
from hypothesis import given, strategies as st

from bn_atlas.core import (
    LocusId,
    PointedLocusId,
    RamificationSequence,
    VanishingSequence,
    adjusted_rho,
    bn_number,
    canonicalize,
    expected_codimension,
    is_realizable,
    rho,
    serre_dual,
    trivial_containments,
)
from bn_atlas.errors import DomainError


def direct_rho(g, r, d):
    # independent restatement: g minus (r+1) times h^1
    h1 = g - d + r
    return g - sum(h1 for _ in range(r + 1))


@pytest.mark.parametrize(
    "triple, expected",
    [((4, 1, 2), -2), ((7, 2, 6), -2), ((42, 6, 41), -7), ((12, 2, 9), -3), ((20, 4, 19), -5)],
)
def test_rho_known_values(triple, expected):
    assert rho(*triple) == expected


@given(st.integers(2, 500), st.integers(0, 800))
def test_rho_r_zero_is_degree(g, d):
    assert rho(g, 0, d) == d


@given(st.integers(2, 10**6), st.integers(0, 2000), st.integers(0, 2000))
def test_rho_matches_direct_formula(g, r, d):
    assert rho(g, r, d) == direct_rho(g, r, d)


@pytest.mark.parametrize("bad", [(1, 1, 1), (0, 0, 0), (5, -1, 2), (5, 1, -3), (10**9 + 1, 1, 1)])
def test_rho_rejects_out_of_domain(bad):
    with pytest.raises(DomainError):
        rho(*bad)


def test_rho_rejects_non_integers():
    with pytest.raises(DomainError):
        rho(5.0, 1, 2)
    with pytest.raises(DomainError):
        rho(True, 1, 2)


def test_rho_at_the_bound_does_not_overflow():
    g = 10**9
    assert rho(g, 2 * 10**9, 0) == g - (2 * 10**9 + 1) * (g + 2 * 10**9)


def test_expected_codimension():
    assert expected_codimension(42, 6, 41) == 7
    assert expected_codimension(12, 2, 10) == 0
    assert expected_codimension(12, 1, 11) == 0


def test_locus_serialization_round_trip():
    L = LocusId(12, 3, 11)
    assert L.to_dict() == {"g": 12, "r": 3, "d": 11}
    assert LocusId.from_dict(L.to_dict()) == L
    assert L.label() == "M^3_{12,11}"
    assert L.key() == "12_3_11"


def test_canonical_flag_requires_small_degree():
    with pytest.raises(DomainError):
        LocusId(7, 2, 8, canonical=True)


def test_adjusted_rho_examples():
    assert adjusted_rho(PointedLocusId(LocusId(4, 1, 2))) == -2
    weierstrass = PointedLocusId(LocusId(2, 1, 2), (RamificationSequence((0, 1), 1, 2),))
    assert adjusted_rho(weierstrass) == -1
    base = LocusId(7, 2, 6)
    assert adjusted_rho(PointedLocusId.from_vanishing(base, [(2, 4, 6)])) == -11
    assert adjusted_rho(PointedLocusId.from_vanishing(base, [(0, 2, 4)])) == -5


def test_vanishing_to_ramification_example():
    v = VanishingSequence((2, 4, 6), 2, 6)
    assert v.to_ramification().entries == (2, 3, 4)
    assert v.weight == 9


def test_pointed_locus_rejects_type_mismatch():
    with pytest.raises(DomainError):
        PointedLocusId(LocusId(7, 2, 6), (RamificationSequence((0, 1), 1, 2),))


@pytest.mark.parametrize(
    "entries, r, d",
    [((0, 1), 2, 6), ((0, 5), 1, 4), ((1, 0), 1, 4), ((-1, 0), 1, 4)],
)
def test_ramification_validation_is_strict(entries, r, d):
    with pytest.raises(DomainError):
        RamificationSequence(entries, r, d)


@pytest.mark.parametrize("entries", [(0, 0, 1), (0, 2, 1), (0, 1, 7), (-1, 0, 1)])
def test_vanishing_validation_is_strict(entries):
    with pytest.raises(DomainError):
        VanishingSequence(entries, 2, 6)


@st.composite
def ramification(draw):
    r = draw(st.integers(0, 6))
    d = draw(st.integers(r, 30))
    b = sorted(draw(st.lists(st.integers(0, d - r), min_size=r + 1, max_size=r + 1)))
    return RamificationSequence(tuple(b), r, d)


@given(ramification())
def test_ramification_vanishing_bijection(b):
    v = b.to_vanishing()
    assert v.to_ramification() == b
    assert b.weight == sum(v.entries) - b.r * (b.r + 1) // 2 == v.weight


@given(st.integers(2, 60), st.integers(0, 12), st.integers(0, 120))
def test_adjusted_rho_without_marks_is_rho(g, r, d):
    assert adjusted_rho(PointedLocusId(LocusId(g, r, d))) == rho(g, r, d)


def test_serre_dual_examples():
    # g - d + r - 1 = 2 for (7,2,6) and 3 for (15,3,14): both are self-dual (d = g-1)
    assert serre_dual(LocusId(7, 2, 6)) == LocusId(7, 2, 6)
    assert serre_dual(LocusId(15, 3, 14)) == LocusId(15, 3, 14)
    assert serre_dual(LocusId(7, 2, 8)) == LocusId(7, 0, 4)
    assert serre_dual(LocusId(14, 4, 15)) == LocusId(14, 2, 11)


@pytest.mark.parametrize("g, r", [(5, 1), (12, 3), (40, 6)])
def test_serre_dual_self_dual_at_g_minus_one(g, r):
    assert serre_dual(LocusId(g, r, g - 1)) == LocusId(g, r, g - 1)


def test_serre_dual_domain():
    with pytest.raises(DomainError):
        serre_dual(LocusId(7, 2, 13))
    with pytest.raises(DomainError):
        serre_dual(LocusId(7, 0, 10))


def test_serre_dual_exhaustive_invariance():
    for g in range(2, 201):
        for d in range(0, 2 * g - 1):
            for r in range(max(0, d - g + 1), g + 1):
                r_dual, d_dual = g - d + r - 1, 2 * g - 2 - d
                assert bn_number(g, r_dual, d_dual) == bn_number(g, r, d)
                assert (g - d_dual + r_dual - 1, 2 * g - 2 - d_dual) == (r, d)


@given(st.integers(2, 300).flatmap(lambda g: st.tuples(st.just(g), st.integers(0, 2 * g - 2), st.integers(0, g))))
def test_serre_dual_involution(t):
    g, d, r = t
    if g - d + r - 1 < 0:
        return
    L = LocusId(g, r, d)
    assert serre_dual(serre_dual(L)) == L
    assert serre_dual(L).rho == L.rho


@pytest.mark.parametrize(
    "given_, expected",
    [((7, 3, 6), (7, 3, 6)), ((7, 2, 8), (7, 0, 4)), ((12, 3, 11), (12, 3, 11))],
)
def test_canonicalize_examples(given_, expected):
    c = canonicalize(LocusId(*given_))
    assert c.as_tuple() == expected
    assert c.canonical


@given(st.integers(2, 200).flatmap(lambda g: st.tuples(st.just(g), st.integers(0, g), st.integers(0, 2 * g - 2))))
def test_canonicalize_idempotent(t):
    g, r, d = t
    if g - d + r - 1 < 0:
        return
    c = canonicalize(LocusId(g, r, d))
    assert canonicalize(c) == c
    assert c.d <= g - 1
    assert c.rho == rho(g, r, d)


def test_trivial_containments_examples():
    out = trivial_containments(LocusId(12, 3, 10))
    assert [(t.target.as_tuple(), t.rule) for t in out] == [
        ((12, 3, 11), "add-basepoint"),
        ((12, 2, 9), "remove-non-basepoint"),
    ]
    assert [t.rho for t in out] == [-4, -3]

    out = trivial_containments(LocusId(12, 3, 11))
    assert [(t.target.as_tuple(), t.rule, t.rho) for t in out] == [((12, 3, 12), "add-basepoint", 0)]

    out = trivial_containments(LocusId(4, 1, 2))
    assert [(t.target.as_tuple(), t.rho) for t in out] == [((4, 1, 3), 0)]


def test_trivial_containments_needs_negative_rho():
    with pytest.raises(DomainError):
        trivial_containments(LocusId(12, 1, 7))


def test_realizability():
    assert is_realizable(2, 1, 2)
    assert not is_realizable(2, 1, 1)
    assert is_realizable(4, 1, 2)
    assert not is_realizable(7, 3, 5)
    assert is_realizable(0, 1, 1)
    assert not is_realizable(1, 1, 1)
    assert is_realizable(1, 1, 2)
    # r = 0 and d > 2g-2 are always fine
    assert is_realizable(5, 0, 0)
    assert is_realizable(3, 2, 6)


def test_bn_number_accepts_degenerate_genus():
    assert bn_number(0, 2, 2) == 0
    assert bn_number(1, 1, 2) == 1
