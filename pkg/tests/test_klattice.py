from functools import lru_cache

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from pfwin import intlinalg as la
from pfwin.errors import InconsistencyError
from pfwin.klattice import (
    KOSZUL_SIGN,
    SHIFT_OBJECTS,
    base_gram,
    basis,
    build_cy3_lattice,
    chi_G,
    chi_Y,
    chi_Y_koszul_sum,
    chi_Y_matrix,
    class_of,
    gram,
    intertwine_check,
    jshriek_class,
    kapranov_basis,
    kapranov_fullness_certificate,
    line_twist_matrix,
    pinned_koszul_sign,
    preserves_form,
    prop_images_check,
    restriction_intertwine_check,
    serre_mutation_identity,
    spherical_pattern_holds,
    transfer_matrix,
    transfer_matrix_only,
    transvection_matrix,
    twist_maps_window,
    window_lattices_agree_w3,
)
from pfwin.weights import SBundle
from pfwin.windows import build_window, notation_window, valid_triples

O = SBundle(0, 0)
bundles = st.builds(SBundle, st.integers(0, 2), st.integers(-8, 8))


def test_chi_G_examples():
    assert chi_G(O, O) == 1
    assert chi_G(O, SBundle(0, 1)) == 21  # Plücker coordinates
    assert chi_G(O, SBundle(1, 1)) == 7  # H^0(S^v) = C^7
    assert chi_G(O, SBundle(0, -7)) == 1  # H^10(ω)


def test_class_of_basis_vectors():
    for i, e in enumerate(basis()):
        v = class_of(e)
        assert v[i] == 1 and sum(abs(x) for x in v) == 1


def test_gram_entry_and_det():
    g = base_gram()
    i, j = basis().index(SBundle(0, -1)), basis().index(O)
    assert g[i, j] == 21
    assert la.det(g) == 1


@pytest.mark.parametrize("m", [(0, 0, 0), (6, 7, 8), (-1, -1, 0)])
def test_gram_in_exceptional_order(m):
    g = gram(build_window(m))
    assert g.is_unit_upper_triangular() and g.det == 1


def test_gram_rejects_bad_order():
    w = notation_window(0)
    with pytest.raises(InconsistencyError):
        gram(w, list(reversed(sorted(w.generators))))
    with pytest.raises(InconsistencyError):
        gram(w, list(w.generators)[:-1] + [SBundle(0, 5)])


def test_kapranov_self_certificate():
    k = kapranov_basis()
    assert len(k) == 21
    cert = kapranov_fullness_certificate(k)
    assert la.equal(cert.coordinates, la.identity(21)) and cert.verdict


@settings(max_examples=20)
@given(st.sampled_from(valid_triples(-3, 3)))
def test_window_full_and_serre(m):
    w = build_window(m)
    assert kapranov_fullness_certificate(w).verdict
    assert serre_mutation_identity(w)


def test_non_full_collection_detected():
    gens = list(notation_window(0).generators)
    gens[0] = gens[1]
    assert not kapranov_fullness_certificate(gens).verdict


@settings(max_examples=500)
@given(bundles, bundles)
def test_chi_Y_antisymmetric(e, f):
    assert chi_Y(e, f) == -chi_Y(f, e)


@settings(max_examples=60)
@given(bundles, bundles)
def test_chi_Y_against_koszul_sum(e, f):
    assert chi_Y(e, f) == chi_Y_koszul_sum(e, f)


# Riemann-Roch on Y from Schubert calculus, independent of the Ext engine ---------


@lru_cache(maxsize=None)
def _chains(a, b):
    """Saturated chains from (a, b) up to the full 2x5 box, adding one box at a time."""
    if (a, b) == (5, 5):
        return 1
    out = 0
    if a < 5:
        out += _chains(a + 1, b)
    if b < a:
        out += _chains(a, b + 1)
    return out


def _y_invariants():
    h, q = sp.symbols("h q")
    t = sp.symbols("t")
    # T_G ⊕ End S = S^v ⊗ C^7; divide out the normal bundle O(1)^7
    total = (1 + t * h + t**2 * q) ** 7 / (1 - t**2 * (h**2 - 4 * q)) / (1 + t * h) ** 7
    c2 = sp.expand(sp.series(total, t, 0, 3).removeO().coeff(t, 2))
    # on Y, monomials of degree 3 in h, q pair against h^7 on G
    degree = _chains(0, 0)  # h^10
    qdeg = _chains(1, 1)  # q h^8
    c2h = sp.Poly(sp.expand(c2 * h), h, q)
    c2_dot_h = sum(
        coeff * (degree if (i, j) == (3, 0) else qdeg if (i, j) == (1, 1) else None)
        for (i, j), coeff in c2h.terms()
    )
    return degree, int(c2_dot_h)


def test_schubert_invariants():
    assert _y_invariants() == (42, 84)


@pytest.mark.parametrize("k", range(-6, 7))
def test_riemann_roch_lines(k):
    deg, c2h = _y_invariants()
    # χ(O_Y(k)) = H^3 k^3 / 6 + c2.H k / 12 on a CY3
    expected = sp.Rational(deg, 6) * k**3 + sp.Rational(c2h, 12) * k
    assert chi_Y(O, SBundle(0, k)) == expected == 7 * k**3 + 7 * k


def test_spherical_patterns():
    for e in SHIFT_OBJECTS + (SBundle(1, -3),):
        assert spherical_pattern_holds(e)
        assert chi_Y(e, e) == 0


def test_lattice_shape():
    lat = build_cy3_lattice()
    assert lat.rank == 4
    assert lat.invariant_factors == (7, 7, 14, 14)
    assert lat.discriminant == 9604
    assert la.equal(lat.J, -lat.J.T)
    assert abs(la.det(lat.P)) == 1


def test_res_pairing_matches_chi_Y():
    lat = build_cy3_lattice()
    m = chi_Y_matrix()
    rng = np.random.default_rng(3)
    for _ in range(100):
        x = la.as_int_matrix(rng.integers(-5, 6, size=(21, 1)).tolist())[:, 0]
        y = la.as_int_matrix(rng.integers(-5, 6, size=(21, 1)).tolist())[:, 0]
        assert lat.pair(lat.restrict(x), lat.restrict(y)) == int(x.dot(m.dot(y)))


def test_radical_is_killed():
    lat = build_cy3_lattice()
    assert not chi_Y_matrix().dot(lat.radical).any()


@pytest.mark.parametrize("l", [0, 1, 2])
def test_transvections(l):
    lat = build_cy3_lattice()
    tw = transvection_matrix(l)
    assert preserves_form(tw, lat.J)
    # χ_Y(E, E) = 0 makes the twist unipotent of order two
    n = tw - la.identity(lat.rank)
    assert la.equal(n.dot(n), la.zeros(lat.rank))
    e = lat.restrict(SHIFT_OBJECTS[l])
    assert la.equal(tw.dot(e), e)


def test_koszul_sign_pinned():
    assert pinned_koszul_sign() == KOSZUL_SIGN == -1
    assert prop_images_check()
    assert not prop_images_check(-KOSZUL_SIGN)


def test_jshriek_restricts_to_zero():
    lat = build_cy3_lattice()
    for e in SHIFT_OBJECTS:
        assert not lat.res.dot(jshriek_class(e)).any()


@pytest.mark.parametrize("l", [0, 1, 2])
def test_transfer_report(l):
    r = transfer_matrix(l)
    assert r.ok
    assert r.moved == (SHIFT_OBJECTS[l],)
    assert la.det(transfer_matrix_only(l)) == 1


@pytest.mark.parametrize("l", [0, 1, 2])
def test_pushforward_intertwines(l):
    assert intertwine_check(l)


@pytest.mark.parametrize("l, failures", [(0, 20), (1, 20), (2, 19)])
def test_restriction_does_not_intertwine(l, failures):
    r = restriction_intertwine_check(l)
    assert not r.holds
    assert len(r.failing_generators) == failures
    # Tr^0 fixes O(-1) but the transvection does not
    if l == 0:
        assert SBundle(0, -1) in r.failing_generators
        assert chi_Y(O, SBundle(0, -1)) == -14


def test_line_twists():
    lat = build_cy3_lattice()
    t0, y0 = line_twist_matrix(0)
    assert la.equal(t0, la.identity(21)) and la.equal(y0, la.identity(lat.rank))
    for k in (1, 2, 5):
        t, y = line_twist_matrix(k)
        ti, yi = line_twist_matrix(-k)
        assert la.equal(t.dot(ti), la.identity(21))
        assert la.equal(y.dot(yi), la.identity(lat.rank))
        assert preserves_form(y, lat.J)
    assert window_lattices_agree_w3()
    assert not twist_maps_window(1, notation_window(0), notation_window(3))
