"""Monodromy of the five-punctured sphere on the numerical lattice of Y.

Words are written in composition order: the rightmost token acts first. Tokens
are ``gG g0 g1 g2 gP`` (loops at the G-basepoint) and ``psi0..psi3`` (edges
from the G-basepoint to the P-basepoint), each optionally suffixed ``^-1``.

Two evaluations are provided. ``evaluate_loop`` multiplies the lattice
matrices of loop generators after ``reduce_path`` has removed every edge
symbol. ``evaluate_direct`` never rewrites: it realises each edge on Z^21
through the window-shift transfers, with ``psi0`` as the identity gauge, and
pulls back along ``k_*``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import intlinalg as la
from .errors import InconsistencyError, WordError
from .klattice import (
    build_cy3_lattice,
    line_twist_matrix,
    preserves_form,
    transfer_matrix_only,
    transvection_matrix,
)

G_BASE = "mG"
P_BASE = "mP"
LOOP_NAMES = ("gG", "g0", "g1", "g2", "gP")
EDGE_COUNT = 4
BIG_CIRCLE = "gP gG g2 g1 g0"
#: twist by O(-1) on the P side, written at the G-basepoint via the pole relation
P_SIDE_TWIST = -1


class Token(NamedTuple):
    name: str  # "gG", "g0", ..., or "psi"
    index: int  # edge index for psi, -1 otherwise
    inverse: bool

    def __str__(self) -> str:
        base = f"psi{self.index}" if self.name == "psi" else self.name
        return base + ("^-1" if self.inverse else "")

    def inv(self) -> "Token":
        return Token(self.name, self.index, not self.inverse)

    @property
    def is_edge(self) -> bool:
        return self.name == "psi"

    def source(self) -> str:
        if not self.is_edge:
            return G_BASE
        return P_BASE if self.inverse else G_BASE

    def target(self) -> str:
        if not self.is_edge:
            return G_BASE
        return G_BASE if self.inverse else P_BASE


Word = tuple[Token, ...]


def parse_token(text: str) -> Token:
    body, inverse = text, False
    if text.endswith("^-1"):
        body, inverse = text[:-3], True
    if body in LOOP_NAMES:
        return Token(body, -1, inverse)
    if body.startswith("psi") and body[3:].isdigit() and int(body[3:]) < EDGE_COUNT:
        return Token("psi", int(body[3:]), inverse)
    raise WordError(f"unknown token {text!r}")


def parse_word(text: str) -> Word:
    return tuple(parse_token(t) for t in text.split())


def format_word(word: Iterable[Token]) -> str:
    return " ".join(str(t) for t in word)


def inverse_word(word: Sequence[Token]) -> Word:
    return tuple(t.inv() for t in reversed(word))


def endpoints(word: Sequence[Token]) -> tuple[str, str]:
    """``(source, target)`` of a composable word; the empty word is a loop at G."""
    if not word:
        return G_BASE, G_BASE
    here = word[-1].source()
    for t in reversed(word):
        if t.source() != here:
            raise WordError(f"token {t} cannot follow a path ending at {here}")
        here = t.target()
    return word[-1].source(), here


def is_loop(word: Sequence[Token]) -> bool:
    return endpoints(word) == (G_BASE, G_BASE)


def free_reduce(word: Sequence[Token]) -> Word:
    out: list[Token] = []
    for t in word:
        if out and out[-1] == t.inv():
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def edge_pair(a: int, b: int) -> Word:
    """``(psi_a)^-1 psi_b`` as a word in ``g0, g1, g2``."""
    if a > b:
        return tuple(Token(f"g{k}", -1, False) for k in range(a - 1, b - 1, -1))
    return tuple(Token(f"g{k}", -1, True) for k in range(a, b))


def reduce_path(word: Sequence[Token]) -> Word:
    """Eliminate every edge symbol; only G-based loops have such a form."""
    src, dst = endpoints(word)
    if (src, dst) != (G_BASE, G_BASE):
        raise WordError(f"path runs from {src} to {dst}; only loops at {G_BASE} reduce")
    out: list[Token] = []
    i = len(word) - 1
    while i >= 0:
        t = word[i]
        if not t.is_edge:
            out.append(t)
            i -= 1
            continue
        # a G-based loop only leaves G through psi_b and comes back by psi_a^-1
        nxt = word[i - 1] if i >= 1 else None
        if t.inverse or nxt is None or not (nxt.is_edge and nxt.inverse):
            raise WordError(f"edge {t} is not followed by a returning edge")
        out.extend(reversed(edge_pair(nxt.index, t.index)))
        i -= 2
    return free_reduce(tuple(reversed(out)))


@dataclass(frozen=True)
class Representation:
    pole_sign: int
    matrices: dict[str, np.ndarray] = field(repr=False)

    def matrix(self, t: Token) -> np.ndarray:
        if t.is_edge:
            raise WordError(f"edge {t} has no matrix at a single basepoint")
        m = self.matrices[t.name]
        return la.inverse_integer(m) if t.inverse else m


def _product(mats: Iterable[np.ndarray], n: int) -> np.ndarray:
    out = la.identity(n)
    for m in mats:
        out = out.dot(m)
    return out


def _representation(pole_sign: int) -> Representation:
    lat = build_cy3_lattice()
    tw = [transvection_matrix(l) for l in range(3)]
    _, gg = line_twist_matrix(pole_sign)
    _, pside = line_twist_matrix(P_SIDE_TWIST)
    # psi3 = O_P(1) psi0 O_G(1) turns the P-side twist into (g2 g1 g0)^-1 ⊗ O(-1)
    gp = la.inverse_integer(_product([tw[2], tw[1], tw[0]], lat.rank)).dot(pside)
    return Representation(pole_sign, {"gG": gg, "g0": tw[0], "g1": tw[1], "g2": tw[2], "gP": gp})


def evaluate_with(rep: Representation, word: Sequence[Token]) -> np.ndarray:
    n = build_cy3_lattice().rank
    if any(t.is_edge for t in word):
        raise WordError("evaluate_loop needs a word without edge symbols; call reduce_path first")
    return _product((rep.matrix(t) for t in word), n)


@dataclass(frozen=True)
class PoleCalibration:
    sign: int
    tried: dict[int, bool]


@lru_cache(maxsize=1)
def calibrate_pole() -> PoleCalibration:
    """Pick the sign of the G-pole twist for which the big circle is trivial."""
    big = parse_word(BIG_CIRCLE)
    n = build_cy3_lattice().rank
    tried = {s: la.equal(evaluate_with(_representation(s), big), la.identity(n)) for s in (1, -1)}
    good = [s for s, ok in tried.items() if ok]
    if len(good) != 1:
        raise InconsistencyError(f"pole calibration expected one working sign, got {tried}")
    return PoleCalibration(good[0], tried)


@lru_cache(maxsize=1)
def assign_representation() -> Representation:
    return _representation(calibrate_pole().sign)


def evaluate_loop(word: Sequence[Token] | str) -> np.ndarray:
    if isinstance(word, str):
        word = parse_word(word)
    return evaluate_with(assign_representation(), word)


def evaluate_path(word: Sequence[Token] | str) -> np.ndarray:
    """Reduce then evaluate."""
    if isinstance(word, str):
        word = parse_word(word)
    return evaluate_loop(reduce_path(word))


# Direct route on Z^21 -----------------------------------------------------


@lru_cache(maxsize=1)
def _pull_back_solver() -> tuple[np.ndarray, np.ndarray]:
    push = build_cy3_lattice().pushforward
    return push, push.T.dot(push)


def pull_back(v: np.ndarray) -> np.ndarray:
    """Solve ``k_* y = v`` exactly; ``v`` must lie in the image."""
    push, normal = _pull_back_solver()
    y = la.solve_rational(normal, push.T.dot(v))
    flat = y.reshape(-1)
    if any(x.denominator != 1 for x in flat):
        raise InconsistencyError("vector is not the pushforward of a lattice class")
    out = np.empty(y.shape, dtype=object)
    out.reshape(-1)[:] = [int(x) for x in flat]
    if not la.equal(push.dot(out), v):
        raise InconsistencyError("vector is not in the image of k_*")
    return out


def _conjugate_down(m21: np.ndarray) -> np.ndarray:
    """``k_*^{-1} ∘ m ∘ k_*`` for ``m`` preserving the image of ``k_*``."""
    return pull_back(m21.dot(build_cy3_lattice().pushforward))


@lru_cache(maxsize=1)
def _direct_edge_maps() -> tuple[np.ndarray, ...]:
    """Edge ``psi_k`` on Z^21 in the gauge ``psi0 = id``: ``(Tr^{k-1} ... Tr^0)^{-1}``."""
    n = transfer_matrix_only(0).shape[0]
    maps = [la.identity(n)]
    acc = la.identity(n)
    for l in range(EDGE_COUNT - 1):
        acc = transfer_matrix_only(l).dot(acc)
        maps.append(la.inverse_integer(acc))
    return tuple(maps)


@lru_cache(maxsize=1)
def _direct_tokens() -> dict[str, np.ndarray]:
    sign = calibrate_pole().sign
    t_pole, _ = line_twist_matrix(sign)
    t_p, _ = line_twist_matrix(P_SIDE_TWIST)
    edges = _direct_edge_maps()
    out = {f"g{l}": transfer_matrix_only(l) for l in range(3)}
    out["gG"] = t_pole
    out["gP"] = edges[3].dot(t_p)
    for k, m in enumerate(edges):
        out[f"psi{k}"] = m
    return out


def evaluate_direct(word: Sequence[Token] | str) -> np.ndarray:
    """Evaluate a loop at G without rewriting, through Z^21."""
    if isinstance(word, str):
        word = parse_word(word)
    if not is_loop(word):
        raise WordError("direct evaluation is defined for loops at the G-basepoint only")
    mats = _direct_tokens()
    n = transfer_matrix_only(0).shape[0]
    acc = la.identity(n)
    for t in word:
        key = f"psi{t.index}" if t.is_edge else t.name
        m = mats[key]
        acc = acc.dot(la.inverse_integer(m) if t.inverse else m)
    return _conjugate_down(acc)


def random_loop(rng: random.Random, max_len: int = 8) -> Word:
    """A random composable loop at G mixing loop generators and edge pairs."""
    out: list[Token] = []
    for _ in range(rng.randint(0, max_len)):
        if rng.random() < 0.5:
            out.append(Token(rng.choice(LOOP_NAMES), -1, rng.random() < 0.5))
        else:
            a, b = rng.randrange(EDGE_COUNT), rng.randrange(EDGE_COUNT)
            out.extend([Token("psi", a, True), Token("psi", b, False)])
    return tuple(out)


@dataclass(frozen=True)
class RelationReport:
    pole_sign: int
    pole_tried: dict[int, bool]
    big_circle: bool
    big_circle_direct: bool
    window_shifts: dict[int, bool]
    relation_completing_pole: bool
    form_preserved: bool
    random_words: int
    random_agree: bool
    first_disagreement: str | None

    @property
    def ok(self) -> bool:
        return (
            self.big_circle
            and self.big_circle_direct
            and all(self.window_shifts.values())
            and self.relation_completing_pole
            and self.form_preserved
            and self.random_agree
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "pole_sign": self.pole_sign,
            "pole_tried": {str(k): v for k, v in sorted(self.pole_tried.items())},
            "big_circle": self.big_circle,
            "big_circle_direct": self.big_circle_direct,
            "window_shifts": {str(k): v for k, v in sorted(self.window_shifts.items())},
            "relation_completing_pole": self.relation_completing_pole,
            "form_preserved": self.form_preserved,
            "random_words": self.random_words,
            "random_agree": self.random_agree,
            "first_disagreement": self.first_disagreement,
        }


def check_relations(samples: int = 100, seed: int = 0) -> RelationReport:
    lat = build_cy3_lattice()
    n = lat.rank
    ident = la.identity(n)
    rep = assign_representation()
    cal = calibrate_pole()
    big = parse_word(BIG_CIRCLE)
    big_ok = la.equal(evaluate_loop(big), ident)
    big_direct = la.equal(evaluate_direct(big), ident)
    shifts = {}
    for l in range(EDGE_COUNT - 1):
        w = (Token("psi", l + 1, True), Token("psi", l, False))
        shifts[l] = la.equal(evaluate_direct(w), transvection_matrix(l)) and la.equal(
            evaluate_path(w), transvection_matrix(l)
        )
    completing = la.inverse_integer(
        _product([rep.matrices[k] for k in ("gG", "g2", "g1", "g0")], n)
    )
    completing_ok = la.equal(completing, rep.matrices["gP"])
    form_ok = all(preserves_form(m, lat.J) for m in rep.matrices.values())
    rng = random.Random(seed)
    first_bad = None
    for _ in range(samples):
        w = random_loop(rng)
        if not la.equal(evaluate_path(w), evaluate_direct(w)):
            first_bad = format_word(w)
            break
    return RelationReport(
        cal.sign, dict(cal.tried), big_ok, big_direct, shifts, completing_ok, form_ok,
        samples, first_bad is None, first_bad,
    )
