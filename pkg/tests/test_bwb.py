from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from pfwin.bwb import (
    HomogeneousBundle,
    bwb_cohomology,
    cohomology_S_bundle,
    euler_characteristic_oracle,
    p6_line_cohomology,
    projective_line_cohomology,
    s_bundle_weight,
)
from pfwin.errors import InvalidInputError
from pfwin.weights import SBundle


def g27(l, m):
    return cohomology_S_bundle(SBundle(l, m)).dims


# calibration anchors ---------------------------------------------------------


def test_anchor_structure_sheaf():
    assert bwb_cohomology(HomogeneousBundle(2, 7, (0, 0), (0,) * 5)).dims == {0: 1}


def test_anchor_canonical_bundle():
    assert g27(0, -7) == {10: 1}


def test_anchor_dual_tautological():
    assert g27(1, 1) == {0: 7}


def test_anchor_tautological():
    assert g27(1, 0) == {}


def test_anchor_projective_line():
    assert projective_line_cohomology(-1, 2).dims == {}
    assert projective_line_cohomology(-2, 2).dims == {1: 1}


def test_anchor_p6():
    assert p6_line_cohomology(-7).dims == {6: 1}


def test_plucker_sections():
    assert g27(0, 1) == {0: 21}


@pytest.mark.parametrize("k", range(1, 7))
def test_intermediate_line_bundles_vanish(k):
    assert g27(0, -k) == {}


def test_p6_closed_form_examples():
    assert p6_line_cohomology(0).dims == {0: 1}
    assert p6_line_cohomology(-3).dims == {}


@pytest.mark.parametrize("d", range(-20, 15))
def test_p6_closed_form_matches_bwb(d):
    assert p6_line_cohomology(d).dims == projective_line_cohomology(d, 7).dims


def test_canonical_label():
    (deg, term), = cohomology_S_bundle(SBundle(0, -7)).terms
    # a power of det V^v: one-dimensional
    assert deg == 10 and term.label() == ((), -2) and term.dim == 1
    (deg, term), = cohomology_S_bundle(SBundle(1, 1)).terms
    assert deg == 0 and term.label() == ((1,), 0)


# properties ------------------------------------------------------------------


def weights(k, n, lo=-8, hi=8):
    return st.tuples(
        st.lists(st.integers(lo, hi), min_size=k, max_size=k).map(lambda x: tuple(sorted(x, reverse=True))),
        st.lists(st.integers(lo, hi), min_size=n - k, max_size=n - k).map(
            lambda x: tuple(sorted(x, reverse=True))
        ),
    )


@st.composite
def homogeneous(draw):
    k = draw(st.sampled_from([1, 2]))
    n = draw(st.sampled_from([n for n in (2, 5, 7, 9) if n > k]))
    alpha, beta = draw(weights(k, n))
    return HomogeneousBundle(k, n, alpha, beta)


@settings(max_examples=600)
@given(homogeneous())
def test_single_degree_and_euler(b):
    prof = bwb_cohomology(b)
    assert len(prof.dims) <= 1
    for deg, term in prof:
        assert 0 <= deg <= b.dim_base
        assert term.dim >= 1
    assert prof.euler() == euler_characteristic_oracle(b)


@settings(max_examples=300)
@given(st.integers(0, 4), st.integers(-12, 6))
def test_serre_duality_on_g27(l, m):
    e = SBundle(l, m)
    dual = e.dual().twist(-7)
    a = cohomology_S_bundle(e).dims
    b = cohomology_S_bundle(dual).dims
    assert a == {10 - d: k for d, k in b.items()}


def test_invalid_weights():
    with pytest.raises(InvalidInputError):
        HomogeneousBundle(2, 7, (0, 1), (0,) * 5)
    with pytest.raises(InvalidInputError):
        HomogeneousBundle(2, 7, (0,), (0,) * 5)
    with pytest.raises(InvalidInputError):
        HomogeneousBundle(3, 3, (0, 0, 0), ())


def test_s_bundle_weight_convention():
    assert s_bundle_weight(SBundle(2, 3)).alpha == (3, 1)


def test_h0_of_symmetric_powers_of_dual():
    # H^0(Sym^l S^v) = Sym^l V^v
    for l in range(6):
        assert g27(l, l) == {0: comb(l + 6, 6)}
