"""``K_0(G(2,7)) = Z^21`` with its Euler form, and the numerical lattice of the CY3 section.

Classes are integer column vectors in the basis given by the generators of
``W^(0,0,0)`` sorted by ``(l, m)``. The class of a bundle ``x`` is recovered
from the numbers ``χ(E_i, x)`` by inverting the (unimodular) Gram matrix.

``Y`` is the zero locus of a section of ``O(1)^{⊕7}``; its structure sheaf has
the Koszul class ``Λ = Σ (-1)^i C(7,i) [O(-i)]`` and ``χ_Y(x, y) = χ_G(x, Λ y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence, Union

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from . import intlinalg as la
from .errors import CertificationError, InconsistencyError, SignConventionError
from .extcalc import ext_G
from .weights import SBundle
from .windows import (
    NOTATION_WINDOWS,
    WindowSpec,
    build_window,
    check_exceptionality,
    notation_window,
)

CODIM = 7
SERRE_TWIST = -7
#: sign of ``[j_! E]`` relative to ``Σ_i (-1)^i C(7,i) [E(i-7)]``; ``(-1)^7`` from the shift [-7]
KOSZUL_SIGN = -1
#: the three objects moved by the window shifts ``W^l -> W^{l+1}``
SHIFT_OBJECTS = (SBundle(0, 0), SBundle(1, 0), SBundle(2, 0))

KClass = np.ndarray
ClassLike = Union[SBundle, np.ndarray]


@lru_cache(maxsize=1)
def basis() -> tuple[SBundle, ...]:
    return build_window((0, 0, 0)).generators


def basis_index(e: SBundle) -> int:
    return basis().index(e)


def euler_G(e: SBundle, f: SBundle) -> int:
    return ext_G(e, f).euler()


def euler_matrix(rows: Sequence[SBundle], cols: Sequence[SBundle]) -> np.ndarray:
    return la.as_int_matrix([[euler_G(e, f) for f in cols] for e in rows])


@lru_cache(maxsize=1)
def _g0() -> np.ndarray:
    b = basis()
    return euler_matrix(b, b)


def base_gram() -> np.ndarray:
    return _g0().copy()


@lru_cache(maxsize=1)
def _g0_inv() -> np.ndarray:
    return la.inverse_integer(_g0())


@lru_cache(maxsize=None)
def _class_tuple(e: SBundle) -> tuple[int, ...]:
    v = la.as_int_matrix([[euler_G(b, e)] for b in basis()])
    return tuple(int(x) for x in _g0_inv().dot(v)[:, 0])


def class_of(e: SBundle) -> KClass:
    out = np.empty(len(basis()), dtype=object)
    out[:] = list(_class_tuple(e))
    return out


def _vec(x: ClassLike) -> KClass:
    return class_of(x) if isinstance(x, SBundle) else x


def chi_G(x: ClassLike, y: ClassLike) -> int:
    """Euler pairing on G(2,7); bilinear in class vectors."""
    if isinstance(x, SBundle) and isinstance(y, SBundle):
        return euler_G(x, y)
    return int(_vec(x).dot(_g0().dot(_vec(y))))


@lru_cache(maxsize=None)
def _twist(k: int) -> np.ndarray:
    cols = [class_of(e.twist(k)) for e in basis()]
    return np.column_stack(cols)


def twist_matrix(k: int) -> np.ndarray:
    """``⊗ O(k)`` on Z^21."""
    return _twist(k).copy()


@dataclass(frozen=True)
class EulerMatrix:
    order: tuple[SBundle, ...]
    matrix: np.ndarray

    @property
    def det(self) -> int:
        return la.det(self.matrix)

    def is_unit_upper_triangular(self) -> bool:
        return la.is_unit_upper_triangular(self.matrix)


def gram(w: WindowSpec, order: Sequence[SBundle] | None = None) -> EulerMatrix:
    """Gram matrix of ``χ`` in an exceptional order; unit upper-triangular or an error."""
    if order is None:
        order = check_exceptionality(w).order
    order = tuple(order)
    if set(order) != set(w.generators):
        raise InconsistencyError("order is not a permutation of the window generators")
    g = EulerMatrix(order, euler_matrix(order, order))
    if not g.is_unit_upper_triangular():
        raise InconsistencyError(f"Gram matrix of {w.label()} is not unit upper-triangular")
    return g


def kapranov_basis() -> tuple[SBundle, ...]:
    """``Σ^{(a,b)} S^v = Sym^{a-b} S(a)`` for ``5 >= a >= b >= 0``."""
    return tuple(sorted(SBundle(a - b, a) for a in range(6) for b in range(a + 1)))


@lru_cache(maxsize=1)
def _kapranov_gram() -> np.ndarray:
    k = kapranov_basis()
    return euler_matrix(k, k)


@dataclass(frozen=True)
class FullnessCertificate:
    generators: tuple[SBundle, ...]
    coordinates: np.ndarray  # column j: generator j in the Kapranov basis
    det: int

    @property
    def verdict(self) -> bool:
        return abs(self.det) == 1


def kapranov_coordinates(gens: Sequence[SBundle]) -> np.ndarray:
    k = kapranov_basis()
    rhs = euler_matrix(k, gens)
    return la.solve_integer(_kapranov_gram(), rhs)


def kapranov_fullness_certificate(w: WindowSpec | Sequence[SBundle]) -> FullnessCertificate:
    gens = tuple(w.generators if isinstance(w, WindowSpec) else w)
    coords = kapranov_coordinates(gens)
    return FullnessCertificate(gens, coords, la.det(coords))


def left_mutation(e: ClassLike, x: KClass) -> KClass:
    """``L_E(x) = x - χ(E, x) [E]``."""
    ev = _vec(e)
    return x - chi_G(ev, x) * ev


def serre_mutation_identity_of(order: Sequence[SBundle]) -> bool:
    """Carry the last object left across the whole order; compare with ``E ⊗ O(-7)``.

    The shift ``[10]`` is even so no sign enters.
    """
    last = order[-1]
    x = class_of(last)
    for e in reversed(order[:-1]):
        x = left_mutation(e, x)
    return la.equal(x, class_of(last.twist(SERRE_TWIST)))


def serre_mutation_identity(w: WindowSpec) -> bool:
    return serre_mutation_identity_of(check_exceptionality(w).order)


@lru_cache(maxsize=1)
def _koszul_operator() -> np.ndarray:
    n = len(basis())
    out = la.zeros(n)
    for i in range(CODIM + 1):
        out = out + (-1) ** i * comb(CODIM, i) * _twist(-i)
    return out


def koszul_operator() -> np.ndarray:
    """``x -> x ⊗ [O_Y]`` on Z^21, also ``k_* k^*``."""
    return _koszul_operator().copy()


def koszul_class(e: ClassLike) -> KClass:
    """``[k_* k^* E] = Σ (-1)^i C(7,i) [E(-i)]``."""
    return _koszul_operator().dot(_vec(e))


def jshriek_class(e: SBundle, sign: int = KOSZUL_SIGN) -> KClass:
    """``[j_! E] = [j_*(E(-7))[-7]]`` via the Koszul resolution of the zero section."""
    out = la.zeros(len(basis()), 1)[:, 0]
    for i in range(CODIM + 1):
        out = out + (-1) ** i * comb(CODIM, i) * class_of(e.twist(i - CODIM))
    return sign * out


def prop_images_check(sign: int = KOSZUL_SIGN, objects: Sequence[SBundle] = SHIFT_OBJECTS) -> bool:
    return all(la.equal(koszul_class(e), jshriek_class(e, sign)) for e in objects)


def require_sign_convention() -> None:
    if not prop_images_check():
        raise SignConventionError("j_! classes disagree with the Koszul classes under KOSZUL_SIGN")


def pinned_koszul_sign() -> int:
    """The unique sign for which ``prop_images_check`` passes."""
    good = [s for s in (1, -1) if prop_images_check(s)]
    if len(good) != 1:
        raise SignConventionError(f"expected exactly one admissible sign, found {good}")
    return good[0]


def chi_Y(x: ClassLike, y: ClassLike) -> int:
    """``χ_Y(x|_Y, y|_Y) = Σ_i (-1)^i C(7,i) χ_G(x, y(-i))``."""
    return chi_G(_vec(x), koszul_class(y))


def chi_Y_koszul_sum(e: SBundle, f: SBundle) -> int:
    """The same pairing straight from the Ext engine, without class vectors."""
    return sum((-1) ** i * comb(CODIM, i) * euler_G(e, f.twist(-i)) for i in range(CODIM + 1))


def chi_Y_matrix() -> np.ndarray:
    return _g0().dot(_koszul_operator())


def spherical_ext_pattern(e: SBundle) -> list[dict[int, int]]:
    """``Ext_G(E, E(-i))`` for ``i = 0..7``."""
    return [ext_G(e, e.twist(-i)).as_dict() for i in range(CODIM + 1)]


def spherical_pattern_holds(e: SBundle) -> bool:
    pat = spherical_ext_pattern(e)
    return pat[0] == {0: 1} and all(p == {} for p in pat[1:CODIM]) and pat[CODIM] == {10: 1}


@dataclass(frozen=True)
class CY3Lattice:
    rank: int
    P: np.ndarray  # unimodular change of basis from the Smith decomposition
    P_inv: np.ndarray
    J: np.ndarray
    invariant_factors: tuple[int, ...]

    @property
    def res(self) -> np.ndarray:
        """``r x 21``: Z^21 coordinates -> lattice coordinates."""
        return self.P_inv[: self.rank, :]

    @property
    def pushforward(self) -> np.ndarray:
        """``21 x r``: ``k_*`` from the lattice back to Z^21."""
        return _koszul_operator().dot(self.P[:, : self.rank])

    @property
    def radical(self) -> np.ndarray:
        return self.P[:, self.rank:]

    @property
    def discriminant(self) -> int:
        return la.det(self.J)

    def restrict(self, x: ClassLike) -> np.ndarray:
        return self.res.dot(_vec(x))

    def pair(self, a: np.ndarray, b: np.ndarray) -> int:
        return int(a.dot(self.J.dot(b)))


def _to_obj(m: Matrix) -> np.ndarray:
    return la.as_int_matrix(m.tolist())


@lru_cache(maxsize=1)
def build_cy3_lattice() -> CY3Lattice:
    m = chi_Y_matrix()
    if not la.equal(m, -m.T):
        raise InconsistencyError("χ_Y matrix is not antisymmetric")
    smf, _, t = smith_normal_decomp(Matrix(la.to_lists(m)))
    diag = [int(smf[i, i]) for i in range(min(smf.shape))]
    r = sum(1 for d in diag if d != 0)
    if r % 2:
        raise InconsistencyError(f"antisymmetric pairing has odd rank {r}")
    p = _to_obj(t)
    p_inv = la.inverse_integer(p)
    p1 = p[:, :r]
    j = p1.T.dot(m).dot(p1)
    if not la.equal(j, -j.T):
        raise InconsistencyError("induced pairing is not antisymmetric")
    if _koszul_operator().dot(p[:, r:]).any():
        raise InconsistencyError("radical of χ_Y is not killed by the Koszul operator")
    return CY3Lattice(r, p, p_inv, j, tuple(abs(d) for d in diag if d))


def transvection_matrix(l: int) -> np.ndarray:
    """Class-level ``Tw(E_l|_Y)``: ``x -> x - χ_Y(E, x) E``."""
    lat = build_cy3_lattice()
    e = lat.restrict(SHIFT_OBJECTS[l]).reshape(-1, 1)
    return la.identity(lat.rank) - e.dot(e.T.dot(lat.J))


def preserves_form(m: np.ndarray, j: np.ndarray) -> bool:
    return la.equal(m.T.dot(j).dot(m), j)


def transfer_matrix_only(l: int) -> np.ndarray:
    """``Tr^l(x) = x - χ_G(E_l, x) [j_! E_l]`` on Z^21."""
    e = SHIFT_OBJECTS[l]
    row = class_of(e).dot(_g0()).reshape(1, -1)
    return la.identity(len(basis())) - jshriek_class(e).reshape(-1, 1).dot(row)


@dataclass(frozen=True)
class TransferReport:
    l: int
    matrix: np.ndarray
    fixed: tuple[SBundle, ...]
    moved: tuple[SBundle, ...]
    image_coordinates: np.ndarray  # images of W^l generators in the W^{l+1} basis
    image_in_target: bool
    moved_image_on_target_generators: bool
    det: int

    @property
    def ok(self) -> bool:
        return (
            len(self.fixed) == 20
            and self.image_in_target
            and self.moved_image_on_target_generators
            and self.det == 1
        )


def window_class_matrix(gens: Sequence[SBundle]) -> np.ndarray:
    return np.column_stack([class_of(e) for e in gens])


def window_coordinates(gens: Sequence[SBundle], x: np.ndarray) -> np.ndarray:
    """Coordinates of Z^21 vectors in the basis given by ``gens`` (must be integral)."""
    return la.solve_integer(window_class_matrix(gens), x)


def transfer_matrix(l: int) -> TransferReport:
    if l not in (0, 1, 2):
        raise ValueError(f"l must be 0, 1 or 2, got {l!r}")
    tr = transfer_matrix_only(l)
    src = notation_window(l).generators
    dst = notation_window(l + 1).generators
    fixed, moved = [], []
    for g in src:
        (fixed if la.equal(tr.dot(class_of(g)), class_of(g)) else moved).append(g)
    images = tr.dot(window_class_matrix(src))
    try:
        coords = window_coordinates(dst, images)
        in_target = la.equal(window_class_matrix(dst).dot(coords), images)
    except CertificationError:
        coords, in_target = la.zeros(len(dst), len(src)), False
    # Tr^l(E_l) = Σ_{i>=1} (-1)^{i+1} C(7,i) E_l(-i): every term is a generator of W^{l+1}
    e = SHIFT_OBJECTS[l]
    expected = {e.twist(-i): (-1) ** (i + 1) * comb(CODIM, i) for i in range(1, CODIM + 1)}
    on_target = all(t in dst for t in expected)
    if in_target and on_target:
        col = coords[:, src.index(e)]
        got = {dst[i]: int(c) for i, c in enumerate(col) if c != 0}
        on_target = got == expected
    return TransferReport(l, tr, tuple(fixed), tuple(moved), coords, in_target, on_target, la.det(tr))


def intertwine_check(l: int) -> bool:
    """``Tr^l ∘ k_* = k_* ∘ Tw^l`` as maps from the Y-lattice to Z^21."""
    lat = build_cy3_lattice()
    push = lat.pushforward
    return la.equal(transfer_matrix_only(l).dot(push), push.dot(transvection_matrix(l)))


@dataclass(frozen=True)
class RestrictionIntertwine:
    l: int
    holds: bool
    failing_generators: tuple[SBundle, ...]

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "holds": self.holds,
            "failing_generators": [str(e) for e in self.failing_generators],
        }


def restriction_intertwine_check(l: int) -> RestrictionIntertwine:
    """``res ∘ Tr^l = Tw^l ∘ res`` generator by generator on ``W^l``."""
    lat = build_cy3_lattice()
    lhs = lat.res.dot(transfer_matrix_only(l))
    rhs = transvection_matrix(l).dot(lat.res)
    bad = tuple(
        g for g in notation_window(l).generators
        if not la.equal(lhs.dot(class_of(g)), rhs.dot(class_of(g)))
    )
    return RestrictionIntertwine(l, not bad, bad)


def line_twist_matrix(k: int) -> tuple[np.ndarray, np.ndarray]:
    """``⊗ O(k)`` on Z^21 and the induced map on the Y-lattice."""
    lat = build_cy3_lattice()
    t = twist_matrix(k)
    return t, lat.res.dot(t).dot(lat.P[:, : lat.rank])


def twist_maps_window(k: int, src: WindowSpec, dst: WindowSpec) -> bool:
    """``⊗ O(k)`` sends the classes of ``src`` bijectively onto those of ``dst``."""
    t = twist_matrix(k)
    images = {tuple(int(v) for v in t.dot(class_of(g))) for g in src.generators}
    targets = {tuple(int(v) for v in class_of(g)) for g in dst.generators}
    return images == targets and abs(la.det(t)) == 1


def window_lattices_agree_w3() -> bool:
    return twist_maps_window(-1, notation_window(0), notation_window(3))


def is_window_index(k: int) -> bool:
    return k in NOTATION_WINDOWS
