"""Borel-Weil-Bott on Grassmannians.

Weight convention (fixed here and nowhere else): ``HomogeneousBundle(k, n,
alpha, beta)`` is ``Σ^alpha S^v ⊗ Σ^beta Q^v`` on G(k, n), with S the rank-k
tautological subbundle and Q = V/S. The concatenated weight ``alpha|beta``
is fed to the dotted Weyl action; a regular result describes a
representation ``Σ^μ V^v``.

Under this convention ``Sym^l S(m)`` on G(2, n) has ``alpha = (m, m - l)``,
``beta = 0``, and ``O_{P^{n-1}}(d)`` is ``alpha = (d,)`` on G(1, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator

from .errors import InvalidInputError
from .weights import Partition, SBundle, weyl_dim


@dataclass(frozen=True)
class HomogeneousBundle:
    k: int
    n: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and isinstance(self.n, int)) or not 0 < self.k < self.n:
            raise InvalidInputError(f"need 0 < k < n, got k={self.k!r}, n={self.n!r}")
        alpha = tuple(self.alpha)
        beta = tuple(self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if len(alpha) != self.k or len(beta) != self.n - self.k:
            raise InvalidInputError(
                f"weight blocks must have lengths {self.k} and {self.n - self.k}, got {alpha}, {beta}"
            )
        for block in (alpha, beta):
            if any(not isinstance(x, int) for x in block):
                raise InvalidInputError(f"weights must be integers: {block!r}")
            if any(block[i] < block[i + 1] for i in range(len(block) - 1)):
                raise InvalidInputError(f"weight block {block} is not weakly decreasing")

    @property
    def weight(self) -> tuple[int, ...]:
        return self.alpha + self.beta

    @property
    def dim_base(self) -> int:
        return self.k * (self.n - self.k)


@dataclass(frozen=True)
class CohomologyTerm:
    weight: tuple[int, ...]  # dominant GL(n) weight, entries may be negative
    dim: int

    def label(self) -> tuple[Partition, int]:
        """``(partition, c)`` with ``Σ^weight V^v = Σ^partition V^v ⊗ det(V^v)^c``."""
        c = min(self.weight) if self.weight else 0
        lam = tuple(w - c for w in self.weight)
        while lam and lam[-1] == 0:
            lam = lam[:-1]
        return lam, c


@dataclass(frozen=True)
class CohomologyProfile:
    """Cohomology of one bundle: degree -> (irrep label, dimension)."""

    terms: tuple[tuple[int, CohomologyTerm], ...] = ()

    @property
    def dims(self) -> dict[int, int]:
        return {d: t.dim for d, t in self.terms}

    def __iter__(self) -> Iterator[tuple[int, CohomologyTerm]]:
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def euler(self) -> int:
        return sum((-1) ** d * t.dim for d, t in self.terms)

    def to_json(self) -> list[dict[str, int]]:
        return [{"degree": d, "dim": t.dim} for d, t in sorted(self.terms)]


def rho(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


@lru_cache(maxsize=None)
def _bwb(k: int, n: int, alpha: tuple[int, ...], beta: tuple[int, ...]) -> CohomologyProfile:
    shifted = [w + r for w, r in zip(alpha + beta, rho(n))]
    if len(set(shifted)) < n:
        return CohomologyProfile()
    inversions = sum(1 for i in range(n) for j in range(i + 1, n) if shifted[i] < shifted[j])
    mu = tuple(s - r for s, r in zip(sorted(shifted, reverse=True), rho(n)))
    c = min(mu)
    dim = weyl_dim(tuple(x - c for x in mu), n)
    return CohomologyProfile(((inversions, CohomologyTerm(mu, dim)),))


def bwb_cohomology(b: HomogeneousBundle) -> CohomologyProfile:
    """Cohomology of an irreducible homogeneous bundle via the dotted Weyl action."""
    return _bwb(b.k, b.n, b.alpha, b.beta)


def s_bundle_weight(e: SBundle, n: int = 7) -> HomogeneousBundle:
    return HomogeneousBundle(2, n, (e.m, e.m - e.l), (0,) * (n - 2))


def cohomology_S_bundle(e: SBundle, n: int = 7) -> CohomologyProfile:
    """``H^*(G(2, n), Sym^l S(m))``."""
    return bwb_cohomology(s_bundle_weight(e, n))


def p6_line_cohomology(d: int) -> CohomologyProfile:
    """``H^*(P^6, O(d))`` in closed form."""
    if d >= 0:
        return CohomologyProfile(((0, CohomologyTerm((d,) + (0,) * 6, comb(d + 6, 6))),))
    if d <= -7:
        # Σ^μ V^v with μ = (-1,...,-1, d+6): dim C(-d-1, 6)
        return CohomologyProfile(((6, CohomologyTerm((-1,) * 6 + (d + 6,), comb(-d - 1, 6))),))
    return CohomologyProfile()


def projective_line_cohomology(d: int, n: int = 7) -> CohomologyProfile:
    """``H^*(P^{n-1}, O(d))`` through BWB on G(1, n)."""
    return bwb_cohomology(HomogeneousBundle(1, n, (d,), (0,) * (n - 1)))


def euler_characteristic_oracle(b: HomogeneousBundle) -> int:
    """Weyl's dimension polynomial at a possibly non-dominant weight.

    Independent of the sorting step: equals ``Σ (-1)^i h^i`` by the Weyl
    character formula.
    """
    w = b.weight
    n = b.n
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= w[i] - w[j] + j - i
            den *= j - i
    return num // den


def cache_info():
    return _bwb.cache_info()
