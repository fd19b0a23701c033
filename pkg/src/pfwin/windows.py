"""Window collections ``W^m`` on G(2,7), their exceptional orders and the mutation chain.

A window is fixed by a triple ``(m0, m1, m2)`` with ``m0 <= m1 <= m2`` and
``m_{l+1} <= m_l + 1``; row ``l`` holds ``Sym^l S(m)`` for ``m_l - 7 < m <= m_l``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InconsistencyError, InvalidInputError, InvalidWindowError
from .extcalc import ExtProfile, ext_G
from .weights import SBundle

ROWS = 3
ROW_LENGTH = 7
SERRE_TWIST = -7
GRASSMANNIAN_DIM = 10

#: windows used by the monodromy statements, indexed 0..3
NOTATION_WINDOWS: dict[int, tuple[int, int, int]] = {
    0: (0, 0, 0),
    1: (-1, 0, 0),
    2: (-1, -1, 0),
    3: (-1, -1, -1),
}
ADS_WINDOW = (6, 7, 8)


def validate_triple(m: Sequence[int]) -> tuple[int, int, int]:
    m = tuple(m)
    if len(m) != ROWS or any(not isinstance(x, int) or isinstance(x, bool) for x in m):
        raise InvalidInputError(f"window needs three integers, got {m!r}")
    for l in range(ROWS - 1):
        if m[l] > m[l + 1]:
            raise InvalidWindowError(f"m{l} <= m{l + 1} violated: {m[l]} > {m[l + 1]}")
        if m[l + 1] > m[l] + 1:
            raise InvalidWindowError(f"m{l + 1} <= m{l} + 1 violated: {m[l + 1]} > {m[l]} + 1")
    return m  # type: ignore[return-value]


@dataclass(frozen=True)
class WindowSpec:
    m: tuple[int, int, int]
    generators: tuple[SBundle, ...]

    def __contains__(self, e: object) -> bool:
        return e in self.generators

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def row(self, l: int) -> list[SBundle]:
        return [e for e in self.generators if e.l == l]

    def twist(self, k: int) -> "WindowSpec":
        return build_window(tuple(x + k for x in self.m))

    def label(self) -> str:
        return "W(" + ",".join(str(x) for x in self.m) + ")"


def window_generators(m: Sequence[int]) -> tuple[SBundle, ...]:
    return tuple(
        SBundle(l, k) for l in range(ROWS) for k in range(m[l] - ROW_LENGTH + 1, m[l] + 1)
    )


def build_window(m: Sequence[int]) -> WindowSpec:
    """Build ``W^m``; generators are stored sorted by ``(l, m)``."""
    m = validate_triple(m)
    gens = window_generators(m)
    if len(set(gens)) != ROWS * ROW_LENGTH:
        raise InconsistencyError(f"window {m} has duplicate generators")
    return WindowSpec(m, gens)


def notation_window(k: int) -> WindowSpec:
    if k not in NOTATION_WINDOWS:
        raise InvalidInputError(f"named windows are W^0..W^3, got {k!r}")
    return build_window(NOTATION_WINDOWS[k])


def named_windows() -> dict[str, WindowSpec]:
    out = {f"W{k}": notation_window(k) for k in NOTATION_WINDOWS}
    out["ADS"] = build_window(ADS_WINDOW)
    return out


def window_from_generators(gens: Iterable[SBundle]) -> WindowSpec | None:
    """Identify a 21-element generator set as a window, or return ``None``."""
    gens = set(gens)
    if len(gens) != ROWS * ROW_LENGTH:
        return None
    tops = []
    for l in range(ROWS):
        row = sorted(e.m for e in gens if e.l == l)
        if len(row) != ROW_LENGTH or row != list(range(row[0], row[0] + ROW_LENGTH)):
            return None
        tops.append(row[-1])
    try:
        return build_window(tops)
    except InvalidWindowError:
        return None


def valid_triples(lo: int, hi: int) -> list[tuple[int, int, int]]:
    return [
        (a, b, c)
        for a in range(lo, hi + 1)
        for b in (a, a + 1)
        for c in (b, b + 1)
        if c <= hi
    ]


@dataclass(frozen=True)
class ExceptionalityReport:
    m: tuple[int, int, int] | None
    order: tuple[SBundle, ...]
    edges: tuple[tuple[SBundle, SBundle], ...]
    endomorphisms: dict[SBundle, ExtProfile] = field(repr=False)
    acyclic: bool
    exceptional_objects: bool
    backward_vanishing: bool
    cycle: tuple[SBundle, ...] | None
    lefschetz_order_valid: bool
    tie_break: str = "lexicographic (l, m)"

    @property
    def verdict(self) -> bool:
        return self.acyclic and self.exceptional_objects and self.backward_vanishing

    def to_json(self) -> dict:
        return {
            "m": list(self.m) if self.m is not None else None,
            "verdict": self.verdict,
            "order": [str(e) for e in self.order],
            "edge_count": len(self.edges),
            "acyclic": self.acyclic,
            "exceptional_objects": self.exceptional_objects,
            "backward_vanishing": self.backward_vanishing,
            "cycle": [str(e) for e in self.cycle] if self.cycle else None,
            "lefschetz_order_valid": self.lefschetz_order_valid,
            "tie_break": self.tie_break,
        }


def ext_grid(gens: Sequence[SBundle]) -> dict[tuple[SBundle, SBundle], ExtProfile]:
    return {(e, f): ext_G(e, f) for e in gens for f in gens}


def _find_cycle(nodes: Sequence[SBundle], succ: dict[SBundle, list[SBundle]]) -> tuple[SBundle, ...]:
    colour = {v: 0 for v in nodes}
    stack: list[SBundle] = []

    def visit(v: SBundle) -> tuple[SBundle, ...] | None:
        colour[v] = 1
        stack.append(v)
        for w in succ[v]:
            if colour[w] == 1:
                return tuple(stack[stack.index(w):])
            if colour[w] == 0:
                found = visit(w)
                if found:
                    return found
        stack.pop()
        colour[v] = 2
        return None

    for v in nodes:
        if colour[v] == 0:
            found = visit(v)
            if found:
                return found
    return ()


def topological_order(
    nodes: Sequence[SBundle], edges: Iterable[tuple[SBundle, SBundle]]
) -> tuple[list[SBundle], tuple[SBundle, ...] | None]:
    """Kahn's algorithm, smallest ``(l, m)`` first among available nodes."""
    succ: dict[SBundle, list[SBundle]] = {v: [] for v in nodes}
    indeg = {v: 0 for v in nodes}
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    heap = [v for v in nodes if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) < len(nodes):
        return order, _find_cycle(sorted(nodes), succ)
    return order, None


def lefschetz_order(m: Sequence[int]) -> list[SBundle]:
    """Blocks ``O(m0+k), S(m1+k), Sym^2 S(m2+k)`` for ``k = -6..0``."""
    return [SBundle(l, m[l] + k) for k in range(-ROW_LENGTH + 1, 1) for l in range(ROWS)]


def order_is_exceptional(
    order: Sequence[SBundle], grid: dict[tuple[SBundle, SBundle], ExtProfile]
) -> bool:
    return all(not grid[order[j], order[i]] for i in range(len(order)) for j in range(i + 1, len(order)))


def check_exceptionality_of(
    gens: Sequence[SBundle], m: tuple[int, int, int] | None = None
) -> ExceptionalityReport:
    gens = sorted(gens)
    grid = ext_grid(gens)
    edges = tuple((e, f) for (e, f), prof in sorted(grid.items()) if e != f and prof)
    order, cycle = topological_order(gens, edges)
    endo = {e: grid[e, e] for e in gens}
    exceptional_objects = all(p.as_dict() == {0: 1} for p in endo.values())
    acyclic = cycle is None
    backward = acyclic and order_is_exceptional(order, grid)
    lefschetz = m is not None and order_is_exceptional(lefschetz_order(m), grid)
    return ExceptionalityReport(
        m, tuple(order), edges, endo, acyclic, exceptional_objects, backward, cycle or None, lefschetz
    )


def check_exceptionality(w: WindowSpec) -> ExceptionalityReport:
    return check_exceptionality_of(w.generators, w.m)


def is_sink(e: SBundle, gens: Sequence[SBundle]) -> bool:
    """``Ext^*(e, f) = 0`` for every other generator, so ``e`` may be ordered last."""
    return all(not ext_G(e, f) for f in gens if f != e)


def mutate_at(gens: Sequence[SBundle], e: SBundle) -> tuple[SBundle, ...]:
    """Move ``e`` to the far left: it becomes ``e ⊗ ω = e(-7)`` (up to the even shift)."""
    if e not in gens:
        raise InvalidInputError(f"{e} is not a generator")
    if not is_sink(e, gens):
        raise InconsistencyError(f"{e} cannot be placed last, so the mutation is not a Serre move")
    return tuple(sorted([g for g in gens if g != e] + [e.twist(SERRE_TWIST)]))


@dataclass(frozen=True)
class MutationStep:
    source: str
    target: str
    mutated: SBundle
    generators: tuple[SBundle, ...]
    expected: tuple[int, int, int]
    matches_expected: bool
    k_identity: bool

    @property
    def ok(self) -> bool:
        return self.matches_expected and self.k_identity

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "mutated": str(self.mutated),
            "result": list(self.expected) if self.matches_expected else None,
            "expected": list(self.expected),
            "matches_expected": self.matches_expected,
            "k_identity": self.k_identity,
        }


#: collections A..E as window triples
COLLECTIONS: dict[str, tuple[int, int, int]] = {
    "A": (0, 0, 0),
    "B": (-1, 0, 0),
    "C": (-1, -1, 0),
    "D": (-1, -1, -1),
    "E": (-2, -1, 0),
}

MUTATION_SCRIPT: tuple[tuple[str, str, SBundle], ...] = (
    ("A", "B", SBundle(0, 0)),
    ("B", "C", SBundle(1, 0)),
    ("C", "D", SBundle(2, 0)),
    ("C", "E", SBundle(0, -1)),
)


def mutation_chain() -> list[MutationStep]:
    """Replay A->B->C->D and C->E and check each result both as a set and in K_0."""
    from .klattice import serre_mutation_identity_of

    steps = []
    for src, dst, e in MUTATION_SCRIPT:
        gens = build_window(COLLECTIONS[src]).generators
        out = mutate_at(gens, e)
        expected = build_window(COLLECTIONS[dst])
        report = check_exceptionality_of(gens, COLLECTIONS[src])
        # order with e last, the rest in derived order
        order = [g for g in report.order if g != e] + [e]
        steps.append(
            MutationStep(
                src, dst, e, out, expected.m,
                set(out) == set(expected.generators),
                serre_mutation_identity_of(order),
            )
        )
    return steps


def d_is_twist_of_a() -> bool:
    a = build_window(COLLECTIONS["A"])
    d = build_window(COLLECTIONS["D"])
    return set(d.generators) == {e.twist(-1) for e in a.generators}
