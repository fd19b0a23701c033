"""Exact GL-weight calculus for the rank-2 bundles ``Sym^l S(m)``.

Conventions used everywhere in the package:

* ``S`` is the rank-2 tautological subbundle and ``O(1) = det S^v``, so
  ``det S = O(-1)`` and ``S^v = S(1)``.
* ``SBundle(l, m)`` denotes ``Sym^l S (m) = Sym^l S ⊗ O(m)``.
* A Schur functor ``Σ^λ S`` with two rows is normalised at once to
  ``Sym^{λ1-λ2} S (-λ2)``; partitions never carry negative parts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidInputError

Partition = tuple[int, ...]


@dataclass(frozen=True, order=True)
class SBundle:
    """``Sym^l S(m)`` on G(2, n) or on one of the Landau-Ginzburg phases."""

    l: int
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or not isinstance(self.m, int):
            raise InvalidInputError(f"SBundle fields must be integers, got {self.l!r}, {self.m!r}")
        if self.l < 0:
            raise InvalidInputError(f"symmetric-power degree must be >= 0, got {self.l}")

    @property
    def rank(self) -> int:
        return self.l + 1

    def twist(self, k: int) -> "SBundle":
        return SBundle(self.l, self.m + k)

    def dual(self) -> "SBundle":
        """``(Sym^l S(m))^v = Sym^l S^v(-m) = Sym^l S(l - m)``."""
        return dual_to_S_form(self.l, -self.m)

    def __str__(self) -> str:
        if self.l == 0:
            return f"O({self.m})"
        if self.l == 1:
            return f"S({self.m})"
        return f"Sym^{self.l} S({self.m})"


class VirtualBundle:
    """Finite formal sum of ``SBundle`` terms with integer multiplicities.

    Zero multiplicities are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[SBundle, int] | Iterable[tuple[SBundle, int]] | None = None):
        acc: Counter[SBundle] = Counter()
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for bundle, mult in items:
                acc[bundle] += mult
        self._terms = {b: c for b, c in sorted(acc.items()) if c != 0}

    @classmethod
    def of(cls, bundle: SBundle, mult: int = 1) -> "VirtualBundle":
        return cls({bundle: mult})

    @property
    def terms(self) -> dict[SBundle, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[SBundle, int]]:
        return iter(self._terms.items())

    def rank(self) -> int:
        return sum(b.rank * c for b, c in self._terms.items())

    def twist(self, k: int) -> "VirtualBundle":
        return VirtualBundle({b.twist(k): c for b, c in self._terms.items()})

    def __add__(self, other: "VirtualBundle") -> "VirtualBundle":
        return VirtualBundle(list(self.items()) + list(other.items()))

    def __neg__(self) -> "VirtualBundle":
        return VirtualBundle({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "VirtualBundle") -> "VirtualBundle":
        return self + (-other)

    def scale(self, k: int) -> "VirtualBundle":
        return VirtualBundle({b: k * c for b, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VirtualBundle) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "VirtualBundle(0)"
        parts = [f"{c}*{b}" if c != 1 else str(b) for b, c in self._terms.items()]
        return "VirtualBundle(" + " + ".join(parts) + ")"


class CauchyTerm(NamedTuple):
    partition: Partition
    bundle: SBundle
    multiplicity: int


def _check_degree(*degrees: int) -> None:
    for d in degrees:
        if not isinstance(d, int) or d < 0:
            raise InvalidInputError(f"degree must be a non-negative integer, got {d!r}")


def cg_decompose(a: int, b: int) -> VirtualBundle:
    """Clebsch-Gordan: ``Sym^a S ⊗ Sym^b S = ⊕_t Sym^{a+b-2t} S (-t)``."""
    _check_degree(a, b)
    return VirtualBundle({SBundle(a + b - 2 * t, -t): 1 for t in range(min(a, b) + 1)})


def tensor(e: SBundle, f: SBundle) -> VirtualBundle:
    """Decompose ``e ⊗ f`` into ``SBundle`` summands."""
    return cg_decompose(e.l, f.l).twist(e.m + f.m)


def dual_to_S_form(l: int, m: int) -> SBundle:
    """Rewrite ``Sym^l S^v (m)`` as ``Sym^l S (m + l)``."""
    _check_degree(l)
    return SBundle(l, m + l)


def sheaf_hom(e: SBundle, f: SBundle) -> VirtualBundle:
    """``e^v ⊗ f`` as a direct sum of ``SBundle`` terms."""
    return tensor(e.dual(), f)


def normalize_partition(parts: Iterable[int]) -> Partition:
    lam = tuple(parts)
    if any(not isinstance(p, int) for p in lam):
        raise InvalidInputError(f"partition entries must be integers: {lam!r}")
    if any(p < 0 for p in lam):
        raise InvalidInputError(f"partition entries must be >= 0: {lam!r}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise InvalidInputError(f"partition must be weakly decreasing: {lam!r}")
    while lam and lam[-1] == 0:
        lam = lam[:-1]
    return lam


def weyl_dim(lam: Iterable[int], n: int) -> int:
    """Dimension of the GL(n)-irrep ``Σ^λ C^n``."""
    lam = normalize_partition(lam)
    if n < 0 or len(lam) > n:
        raise InvalidInputError(f"partition {lam} has more than {n} parts")
    full = lam + (0,) * (n - len(lam))
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= full[i] - full[j] + j - i
            den *= j - i
    return num // den


def two_row_partitions(n: int, max_rows: int = 2) -> list[Partition]:
    """Partitions of ``n`` with at most ``min(2, max_rows)`` rows, largest first row first."""
    _check_degree(n)
    rows = min(2, max_rows)
    if rows == 1:
        return [normalize_partition((n,))]
    return [normalize_partition((n - k, k)) for k in range(n // 2 + 1)]


def schur_to_sbundle(lam: Partition) -> SBundle:
    lam = normalize_partition(lam)
    if len(lam) > 2:
        raise InvalidInputError(f"Σ^λ S needs at most two rows, got {lam}")
    first = lam[0] if lam else 0
    second = lam[1] if len(lam) > 1 else 0
    return SBundle(first - second, -second)


def cauchy_sym(n: int, d: int) -> list[CauchyTerm]:
    """``Sym^n(S ⊗ C^d) = ⊕_λ Σ^λ S ⊗ Σ^λ C^d`` over two-row partitions of n."""
    _check_degree(n)
    if not isinstance(d, int) or d < 1:
        raise InvalidInputError(f"auxiliary dimension must be >= 1, got {d!r}")
    out = []
    for lam in two_row_partitions(n, d):
        out.append(CauchyTerm(lam, schur_to_sbundle(lam), weyl_dim(lam, d)))
    return out


def koszul_terms(r: int, step: int = -1, base: SBundle | None = None) -> list[VirtualBundle]:
    """Terms ``∧^i (O(step)^{⊕r}) ⊗ base`` for ``i = 0..r``."""
    if not isinstance(r, int) or r < 1:
        raise InvalidInputError(f"Koszul rank must be >= 1, got {r!r}")
    base = base if base is not None else SBundle(0, 0)
    return [VirtualBundle.of(base.twist(step * i), comb(r, i)) for i in range(r + 1)]
