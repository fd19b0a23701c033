import random

import pytest
from hypothesis import given, settings, strategies as st

from pfwin import intlinalg as la
from pfwin.errors import WordError
from pfwin.klattice import build_cy3_lattice, preserves_form, transvection_matrix
from pfwin.skms import (
    BIG_CIRCLE,
    LOOP_NAMES,
    Token,
    assign_representation,
    calibrate_pole,
    check_relations,
    endpoints,
    evaluate_direct,
    evaluate_loop,
    evaluate_path,
    format_word,
    free_reduce,
    inverse_word,
    is_loop,
    parse_word,
    random_loop,
    reduce_path,
)

loop_tokens = st.builds(Token, st.sampled_from(LOOP_NAMES), st.just(-1), st.booleans())
loop_words = st.lists(loop_tokens, max_size=6).map(tuple)


def _ident():
    return la.identity(build_cy3_lattice().rank)


def test_parse_and_format():
    w = parse_word("psi3^-1 psi0 gG^-1")
    assert w == (Token("psi", 3, True), Token("psi", 0, False), Token("gG", -1, True))
    assert format_word(w) == "psi3^-1 psi0 gG^-1"
    assert parse_word("") == ()


@pytest.mark.parametrize("bad", ["g3", "psi4", "psi", "gG^1", "x", "psi-1"])
def test_parse_rejects(bad):
    with pytest.raises(WordError):
        parse_word(bad)


def test_endpoints():
    assert endpoints(parse_word("psi0")) == ("mG", "mP")
    assert is_loop(parse_word("psi1^-1 psi0"))
    with pytest.raises(WordError):
        endpoints(parse_word("psi0 psi1"))


def test_reduce_examples():
    assert format_word(reduce_path(parse_word("psi3^-1 psi0"))) == "g2 g1 g0"
    assert format_word(reduce_path(parse_word("psi0^-1 psi2"))) == "g0^-1 g1^-1"
    assert reduce_path(parse_word("psi1^-1 psi1")) == ()
    assert format_word(reduce_path(parse_word("gG psi1^-1 psi0 g0^-1"))) == "gG"


def test_reduce_rejects_open_path():
    with pytest.raises(WordError):
        reduce_path(parse_word("psi0"))
    with pytest.raises(WordError):
        evaluate_path("psi2 psi1^-1")


def test_evaluate_loop_rejects_edges():
    with pytest.raises(WordError):
        evaluate_loop("psi0^-1 psi1")


def test_free_reduce():
    assert free_reduce(parse_word("g0 g0^-1 g1")) == parse_word("g1")
    assert free_reduce(parse_word("g0 g1 g1^-1 g0^-1")) == ()


@settings(max_examples=60)
@given(loop_words, loop_words)
def test_homomorphism(a, b):
    assert la.equal(evaluate_loop(a + b), evaluate_loop(a).dot(evaluate_loop(b)))
    assert la.equal(evaluate_loop(a).dot(evaluate_loop(inverse_word(a))), _ident())


def test_form_preserved():
    j = build_cy3_lattice().J
    for m in assign_representation().matrices.values():
        assert preserves_form(m, j)


def test_calibration():
    cal = calibrate_pole()
    assert cal.sign == 1
    assert cal.tried == {1: True, -1: False}


def test_big_circle():
    assert la.equal(evaluate_loop(BIG_CIRCLE), _ident())
    assert la.equal(evaluate_direct(BIG_CIRCLE), _ident())


@pytest.mark.parametrize("l", [0, 1, 2])
def test_window_shift_loops(l):
    w = f"psi{l + 1}^-1 psi{l}"
    assert la.equal(evaluate_direct(w), transvection_matrix(l))
    assert la.equal(evaluate_path(w), transvection_matrix(l))


def test_random_words_agree():
    rng = random.Random(11)
    for _ in range(40):
        w = random_loop(rng)
        assert la.equal(evaluate_path(w), evaluate_direct(w)), format_word(w)


def test_direct_rejects_open_path():
    with pytest.raises(WordError):
        evaluate_direct("psi0")


def test_check_relations():
    r = check_relations(samples=30, seed=5)
    assert r.ok and r.first_disagreement is None
    assert r.to_json()["pole_sign"] == 1
