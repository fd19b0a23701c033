"""Ext engines on G(2,7) and on the two Landau-Ginzburg phases.

Grassmannian phase: ``X_G`` is the total space of ``O(-1)^{⊕7}`` over G, so
``RHom_{X_G}(e, f) = ⊕_{n>=0} C(n+6, 6) · RHom_G(e, f(n))``.

Pfaffian phase: fibre coordinates contribute ``Sym^N(S ⊗ C^7)``. After
Clebsch-Gordan, only summands ``Sym^{l''} S(m'')`` with ``l'' = l`` carry
SL(S)-invariants; each such summand pushes down to ``RΓ(P^6, O(±(m''-m)))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, NamedTuple, Sequence

from .bwb import cohomology_S_bundle, p6_line_cohomology
from .errors import CertificationError
from .weights import SBundle, cauchy_sym, cg_decompose, sheaf_hom

#: ``δ_* O(k) = O_{P^6}(PFAFFIAN_TWIST_SIGN * k)``: O(1) on the Pfaffian stack is
#: ∧²S^v while O_{P^6}(1) is ∧²S.
PFAFFIAN_TWIST_SIGN = -1

AMBIENT_DIM = 7
PFAFFIAN_BASE_DIM = 6


def _sign(sign: int | None) -> int:
    # read at call time so a test harness can flip the module constant
    return PFAFFIAN_TWIST_SIGN if sign is None else sign


@dataclass(frozen=True)
class ExtProfile:
    """Finitely supported map degree -> dimension."""

    dims: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "ExtProfile":
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.dims)

    def __getitem__(self, degree: int) -> int:
        return self.as_dict().get(degree, 0)

    def __bool__(self) -> bool:
        return bool(self.dims)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.dims)

    def euler(self) -> int:
        return sum((-1) ** d * k for d, k in self.dims)

    def higher(self) -> dict[int, int]:
        return {d: k for d, k in self.dims if d > 0}

    def to_json(self) -> list[dict[str, int]]:
        return [{"degree": d, "dim": k} for d, k in self.dims]


@dataclass(frozen=True)
class Witness:
    n: int
    summand: SBundle
    degree: int
    dim: int

    def to_json(self) -> dict:
        return {"n": self.n, "summand": str(self.summand), "degree": self.degree, "dim": self.dim}


@dataclass(frozen=True)
class VanishingCertificate:
    verdict: bool
    checked_range: tuple[int, int]
    bound: int
    witness: Witness | None = None
    scanned: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not self.verdict and self.witness is None:
            raise CertificationError("negative verdict without witness")

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked_range": list(self.checked_range),
            "bound": self.bound,
            "witness": self.witness.to_json() if self.witness else None,
        }


class InvariantContribution(NamedTuple):
    """One SL(S)-invariant piece of the Pfaffian-side expansion.

    ``twist`` is ``m'' - m``; the piece contributes
    ``multiplicity · RΓ(P^6, O(sign · twist))``.
    """

    degree: int  # N, the Sym^N grade of the fibre coordinates
    partition: tuple[int, ...]
    t: int
    twist: int
    multiplicity: int


def ext_G(e: SBundle, f: SBundle, n: int = AMBIENT_DIM) -> ExtProfile:
    """``Ext^*_{G(2,n)}(e, f)``."""
    acc: dict[int, int] = {}
    for summand, mult in sheaf_hom(e, f).items():
        for degree, term in cohomology_S_bundle(summand, n):
            acc[degree] = acc.get(degree, 0) + mult * term.dim
    return ExtProfile.from_dict(acc)


def hom_summands(e: SBundle, f: SBundle) -> list[SBundle]:
    return [b for b, _ in sheaf_hom(e, f).items()]


def xg_scan_bound(e: SBundle, f: SBundle) -> int:
    """Least ``N0 >= 0`` such that every summand of ``e^v ⊗ f(n)`` is dominant for n >= N0.

    Summand ``Sym^j S(c)`` has weight ``(c, c - j)``; it is dominant (only H^0)
    iff ``c >= j``, and ``c`` grows with n.
    """
    return max([0] + [b.l - b.m for b in hom_summands(e, f)])


def higher_ext_vanishes_XG(
    e: SBundle, f: SBundle, n: int = AMBIENT_DIM, margin: int = 0
) -> VanishingCertificate:
    """Decide ``Ext^{>0}_G(e, f(k)) = 0`` for every ``k >= 0``."""
    bound = xg_scan_bound(e, f)
    for summand in hom_summands(e, f):
        tail = summand.twist(bound)
        prof = cohomology_S_bundle(tail, n)
        if any(d > 0 for d, _ in prof):
            raise CertificationError(f"summand {tail} is not H^0-only at the claimed bound {bound}")
    hi = bound + margin
    for k in range(hi + 1):
        for summand in hom_summands(e, f):
            for degree, term in cohomology_S_bundle(summand.twist(k), n):
                if degree > 0:
                    return VanishingCertificate(
                        False, (0, hi), bound, Witness(k, summand.twist(k), degree, term.dim)
                    )
    return VanishingCertificate(True, (0, hi), bound)


def _contributions_in_degree(e: SBundle, f: SBundle, degree: int) -> list[InvariantContribution]:
    out = []
    for lam, piece, mult in cauchy_sym(degree, AMBIENT_DIM):
        # f ⊗ Σ^λ S = ⊕_t Sym^{l'+a-2t} S (m' - λ2 - t)
        for summand, _ in cg_decompose(f.l, piece.l).twist(f.m + piece.m).items():
            if summand.l != e.l:
                continue
            t = (f.l + piece.l - summand.l) // 2
            out.append(InvariantContribution(degree, lam, t, summand.m - e.m, mult))
    return out


def pfaffian_scan_bound(e: SBundle, f: SBundle, sign: int | None = None) -> int | None:
    """Largest grade that can carry ``H^6``, or ``None`` when no such bound exists.

    A contribution in grade N has ``twist = (m'-m) - (N - l + l')/2``.
    """
    sign = _sign(sign)
    if sign < 0:
        return max(0, 2 * (f.m - e.m - 7) + e.l - f.l)
    return None


def pfaffian_contributions(
    e: SBundle, f: SBundle, max_degree: int | None = None, sign: int | None = None
) -> list[InvariantContribution]:
    """All invariant contributions in grades ``0..max_degree``.

    With ``max_degree=None`` the grade range is the one that can carry top
    cohomology on P^6 under the pinned sign.
    """
    sign = _sign(sign)
    if max_degree is None:
        max_degree = pfaffian_scan_bound(e, f, sign)
        if max_degree is None:
            raise CertificationError("no finite grade bound for top cohomology under this sign")
    out: list[InvariantContribution] = []
    for degree in range(max_degree + 1):
        out.extend(_contributions_in_degree(e, f, degree))
    out.sort(key=lambda c: (c.twist, c.degree, c.partition, c.t))
    return out


def contribution_cohomology(c: InvariantContribution, sign: int | None = None) -> ExtProfile:
    prof = p6_line_cohomology(_sign(sign) * c.twist)
    return ExtProfile.from_dict({d: c.multiplicity * t.dim for d, t in prof})


def higher_ext_vanishes_XP(
    e: SBundle,
    f: SBundle,
    sign: int | None = None,
    horizon: int = 64,
) -> VanishingCertificate:
    """Decide ``Ext^{>0}_{X_P}(e, f) = 0``.

    Under the pinned sign the grade scan is cut off by ``pfaffian_scan_bound``.
    Without a bound the scan runs to ``horizon`` looking for a witness and
    raises if none turns up.
    """
    sign = _sign(sign)
    bound = pfaffian_scan_bound(e, f, sign)
    hi = bound if bound is not None else horizon
    for degree in range(hi + 1):
        for c in _contributions_in_degree(e, f, degree):
            prof = contribution_cohomology(c, sign)
            for d, k in prof:
                if d > 0:
                    summand = SBundle(e.l, e.m + c.twist)
                    return VanishingCertificate(False, (0, hi), hi, Witness(degree, summand, d, k))
    if bound is None:
        raise CertificationError(f"no witness up to grade {horizon} and no certified bound")
    return VanishingCertificate(True, (0, hi), bound)


def lemma_bound_holds(e: SBundle, f: SBundle) -> bool:
    return f.m - e.m < max(f.l - e.l, 0) + 7


def lemma_bound_check(generators: Iterable[SBundle]) -> bool:
    """Brute-force ``m' - m < max(l' - l, 0) + 7`` over ordered generator pairs."""
    gens = list(generators)
    return all(lemma_bound_holds(e, f) for e in gens for f in gens)


def graded_hom_dim(
    e: SBundle, f: SBundle, n_max: int, sign: int | None = None
) -> tuple[list[int], list[int]]:
    """Per-grade Hom dimensions computed on each phase.

    The grade is the O(1)-weight ``k`` of the fibre coordinates of ``X_G``.
    G side: ``C(k+6, 6) · h^0(G, e^v ⊗ f(k))``. P side: invariant
    contributions whose pushdown is ``O_{P^6}(k)``; these live in fibre
    grade ``N = 2k + l - l' + 2(m' - m)``.
    """
    sign = _sign(sign)
    g_side = []
    p_side = []
    for k in range(n_max + 1):
        h0 = ext_G(e, f.twist(k))[0]
        g_side.append(comb(k + 6, 6) * h0)
        degree = 2 * k + e.l - f.l + 2 * (f.m - e.m)
        total = 0
        if degree >= 0:
            for c in _contributions_in_degree(e, f, degree):
                if sign * c.twist == k:
                    total += contribution_cohomology(c, sign)[0]
        p_side.append(total)
    return g_side, p_side


def sweep(
    pairs: Sequence[tuple[SBundle, SBundle]], phase: str, **kwargs
) -> list[tuple[SBundle, SBundle, VanishingCertificate]]:
    engine = {"XG": higher_ext_vanishes_XG, "XP": higher_ext_vanishes_XP}[phase]
    return [(e, f, engine(e, f, **kwargs)) for e, f in pairs]
