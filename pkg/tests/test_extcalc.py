from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from pfwin.errors import CertificationError
from pfwin.extcalc import (
    PFAFFIAN_TWIST_SIGN,
    ext_G,
    graded_hom_dim,
    higher_ext_vanishes_XG,
    higher_ext_vanishes_XP,
    lemma_bound_check,
    pfaffian_contributions,
    xg_scan_bound,
)
from pfwin.bwb import cohomology_S_bundle
from pfwin.weights import SBundle, weyl_dim
from pfwin.windows import build_window, valid_triples

O = SBundle(0, 0)
S = SBundle(1, 0)


def test_ext_examples():
    assert ext_G(O, O).as_dict() == {0: 1}
    assert ext_G(S, S).as_dict() == {0: 1}
    assert ext_G(O, SBundle(0, -7)).as_dict() == {10: 1}


@settings(max_examples=200)
@given(st.integers(0, 3), st.integers(-6, 6), st.integers(0, 3), st.integers(-6, 6))
def test_ext_dual_symmetry(l, m, lp, mp):
    e, f = SBundle(l, m), SBundle(lp, mp)
    assert ext_G(e, f) == ext_G(f.dual(), e.dual())


def test_xg_examples():
    assert higher_ext_vanishes_XG(SBundle(1, -3), SBundle(1, -3)).verdict
    assert higher_ext_vanishes_XG(O, O).verdict
    cert = higher_ext_vanishes_XG(O, SBundle(0, -7))
    assert not cert.verdict
    assert (cert.witness.n, cert.witness.degree) == (0, 10)


@settings(max_examples=150)
@given(st.integers(0, 3), st.integers(-10, 10), st.integers(0, 3), st.integers(-10, 10))
def test_xg_bound_is_dominance_threshold(l, m, lp, mp):
    """Past the bound every summand is H^0-only, checked 20 grades further."""
    e, f = SBundle(l, m), SBundle(lp, mp)
    bound = xg_scan_bound(e, f)
    for k in range(bound, bound + 21):
        assert set(ext_G(e, f.twist(k)).as_dict()) <= {0}


def _gl2_invariants(n):
    """SL(S)-invariant dimension of Sym^n(S ⊗ C^7) from the torus character alone."""
    if n % 2:
        return 0
    weight = lambda a: comb(a + 6, 6) * comb(n - a + 6, 6)  # monomials with a factors of x1
    h = n // 2
    return weight(h) - (weight(h + 1) if h + 1 <= n else 0)


def test_contributions_trivial_pair_against_character():
    contribs = pfaffian_contributions(O, O, max_degree=6)
    for c in contribs:
        assert c.partition == (c.degree // 2,) * 2 if c.degree else c.partition == ()
        assert c.twist == -(c.degree // 2)
        assert c.multiplicity == weyl_dim(c.partition, 7)
    for n in range(7):
        total = sum(c.multiplicity for c in contribs if c.degree == n)
        assert total == _gl2_invariants(n)


def test_contributions_sorted_by_twist():
    c = pfaffian_contributions(SBundle(1, -2), SBundle(2, 0), max_degree=6)
    assert [x.twist for x in c] == sorted(x.twist for x in c)


def test_window_pair_has_no_top_twist():
    contribs = pfaffian_contributions(SBundle(2, -6), O)
    assert all(c.twist < 7 for c in contribs)
    assert all(c.twist < 7 for c in pfaffian_contributions(SBundle(2, -6), O, max_degree=12))


def test_violating_pair():
    e, f = SBundle(1, -3), SBundle(1, 4)
    assert any(c.twist == 7 for c in pfaffian_contributions(e, f))
    cert = higher_ext_vanishes_XP(e, f)
    assert not cert.verdict and cert.witness.degree == 6


@pytest.mark.parametrize("m", [(0, 0, 0), (6, 7, 8)])
def test_xp_sweep(m):
    gens = build_window(m).generators
    assert all(higher_ext_vanishes_XP(e, f) for e in gens for f in gens)


def test_flipped_sign_fails_w0_sweep():
    gens = build_window((0, 0, 0)).generators
    outcomes = []
    for e in gens[:3]:
        for f in gens[:3]:
            try:
                outcomes.append(higher_ext_vanishes_XP(e, f, sign=-PFAFFIAN_TWIST_SIGN).verdict)
            except CertificationError:
                outcomes.append(False)
    assert not all(outcomes)


def test_lemma_bound_check():
    assert lemma_bound_check(build_window((0, 0, 0)).generators)
    assert lemma_bound_check(build_window((6, 7, 8)).generators)
    assert not lemma_bound_check([SBundle(1, 0), SBundle(1, 7)])


def test_graded_hom_examples():
    g, p = graded_hom_dim(O, O, 0)
    assert g == p == [1]
    g, p = graded_hom_dim(O, O, 6)
    assert g == p
    g, p = graded_hom_dim(S, SBundle(2, -1), 6)
    assert g == p


def test_graded_hom_g_side_oracle():
    # Hom(O, O(k)) on G is ∧-power sections: dim Σ^{(k,k)} C^7
    g, _ = graded_hom_dim(O, O, 4)
    assert g == [comb(k + 6, 6) * weyl_dim((k, k), 7) for k in range(5)]


@settings(max_examples=30)
@given(st.sampled_from(valid_triples(-3, 3)))
def test_both_phases_vanish_on_random_windows(m):
    gens = build_window(m).generators
    for e in gens[::4]:
        for f in gens[::3]:
            assert higher_ext_vanishes_XG(e, f).verdict
            assert higher_ext_vanishes_XP(e, f).verdict


# vanishing on odd Grassmannians ----------------------------------------------


@settings(max_examples=300)
@given(
    st.sampled_from([5, 7, 9]),
    st.integers(0, 3),
    st.integers(0, 3),
    st.integers(-3, 3),
    st.integers(-3, 3),
)
def test_odd_grassmannian_vanishing(n, l, lp, m, mp):
    top = (n - 2) // 2
    l, lp = min(l, top), min(lp, top)
    m, mp = min(m, mp), max(m, mp)
    t, tp = SBundle(l, m + l), SBundle(lp, mp + lp)
    assert not ext_G(t, tp, n).higher()
    assert not ext_G(SBundle(l, m), SBundle(lp, mp), n).higher()
    assert not ext_G(SBundle(l, m), SBundle(lp, mp + lp - l), n).higher()


def test_collection_a_diagonals():
    """No higher Ext from a generator to anything on a line weakly to its right."""
    gens = build_window((0, 0, 0)).generators
    for e in gens:
        for f in gens:
            if f.m >= e.m or f.m - f.l >= e.m - e.l:
                assert not ext_G(e, f).higher()


def test_pushdown_cohomology_used():
    assert cohomology_S_bundle(O).dims == {0: 1}
