"""Quiver data model, weight arithmetic, and the built-in quiver families.

Vertices are labeled 1..N.  Arrow order is significant everywhere: exponent
vectors, zero patterns and serialized reports all follow the order of the
``arrows`` tuple.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    name: str


@dataclass(frozen=True)
class Quiver:
    """Directed multigraph on vertices 1..vertex_count.

    Construction only enforces that endpoints are in range; structural
    properties (acyclicity, connectivity, unique source) are reported by
    :func:`validate` so that defective inputs can be diagnosed instead of
    rejected blindly.
    """

    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count and 1 <= a.target <= self.vertex_count):
                raise ValueError(f"arrow {a.name}: endpoint outside 1..{self.vertex_count}")

    @property
    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)

    def outgoing(self, vertex: int) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.arrows) if a.source == vertex)

    def incoming(self, vertex: int) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.arrows) if a.target == vertex)

    def topological_order(self) -> list[int]:
        """Vertices in a source-to-sink order; raises on a directed cycle."""
        indeg = {v: 0 for v in range(1, self.vertex_count + 1)}
        for a in self.arrows:
            indeg[a.target] += 1
        queue = deque(sorted(v for v, d in indeg.items() if d == 0))
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            for i in self.outgoing(v):
                t = self.arrows[i].target
                indeg[t] -= 1
                if indeg[t] == 0:
                    queue.append(t)
        if len(order) != self.vertex_count:
            raise ValueError("quiver has a directed cycle")
        return order

    def to_json_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "arrows": [{"src": a.source, "dst": a.target, "name": a.name} for a in self.arrows],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Quiver":
        arrows = tuple(Arrow(a["src"], a["dst"], a["name"]) for a in data["arrows"])
        return cls(int(data["vertices"]), arrows)


@dataclass(frozen=True)
class Weight:
    """Integer vector over vertices with zero sum; the stability parameter."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if sum(self.entries) != 0:
            raise ValueError(f"weight entries must sum to zero, got {self.entries}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def scaled(self, k: int) -> "Weight":
        return Weight(tuple(k * e for e in self.entries))


def validate(q: Quiver) -> list[str]:
    """Diagnostic report for a quiver; an empty list means valid.

    Checks acyclicity, connectivity of the underlying undirected graph,
    distinctness of arrow names, and the quiver-of-sections convention that
    vertex 1 is the unique source.
    """
    report = []
    try:
        q.topological_order()
    except ValueError:
        report.append("acyclicity: directed cycle detected")

    seen = {1}
    frontier = deque([1])
    neighbours: dict[int, set[int]] = {v: set() for v in range(1, q.vertex_count + 1)}
    for a in q.arrows:
        neighbours[a.source].add(a.target)
        neighbours[a.target].add(a.source)
    while frontier:
        v = frontier.popleft()
        for w in neighbours[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    if len(seen) != q.vertex_count:
        missing = sorted(set(range(1, q.vertex_count + 1)) - seen)
        report.append(f"connectivity: vertices {missing} unreachable from vertex 1")

    targets = {a.target for a in q.arrows}
    sources = sorted(v for v in range(1, q.vertex_count + 1) if v not in targets)
    if sources != [1]:
        report.append(f"unique source: expected [1], found sources {sources}")

    names = [a.name for a in q.arrows]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        report.append(f"arrow names: duplicates {dupes}")
    return report


def toric_form(w: Weight) -> tuple[int, ...]:
    """Negated partial sums (-t1, -t1-t2, ...) of length N-1."""
    out = []
    acc = 0
    for e in w.entries[:-1]:
        acc += e
        out.append(-acc)
    return tuple(out)


def weight_from_toric_form(v: Sequence[int]) -> Weight:
    """Inverse of :func:`toric_form`; the empty vector gives the zero weight."""
    v = tuple(int(x) for x in v)
    if not v:
        return Weight((0,))
    entries = [-v[0]]
    for k in range(1, len(v)):
        entries.append(v[k - 1] - v[k])
    entries.append(v[-1])
    return Weight(tuple(entries))


def is_admissible(w: Weight) -> bool:
    """True when every toric-form entry is strictly positive."""
    return all(t > 0 for t in toric_form(w))


def blowup_quiver(n: int, m: int) -> Quiver:
    """Three-vertex quiver with arrows x0..xm: 1->3, e: 1->2, x(m+1)..xn: 2->3.

    Requires n >= 2 and 0 <= m <= n-2.  The arrow order shown above is the
    canonical order for all exponent vectors and zero patterns.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if not (0 <= m <= n - 2):
        raise ValueError(f"m must satisfy 0 <= m <= n-2, got m={m}, n={n}")
    arrows = [Arrow(1, 3, f"x{i}") for i in range(m + 1)]
    arrows.append(Arrow(1, 2, "e"))
    arrows.extend(Arrow(2, 3, f"x{i}") for i in range(m + 1, n + 1))
    return Quiver(3, tuple(arrows))


def kronecker_quiver(n: int) -> Quiver:
    """Two vertices joined by n+1 parallel arrows x0..xn; requires n >= 2."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    return Quiver(2, tuple(Arrow(1, 2, f"x{i}") for i in range(n + 1)))
