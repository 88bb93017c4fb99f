"""Monomial semi-invariants as lattice points of flow polytopes.

A monomial in the arrow coordinates has a vertex weight (inflow minus
outflow of its exponents at each vertex).  The weight-r*w monomials form a
basis of the degree-r piece of the graded semi-invariant ring, and they are
exactly the lattice points of the flow polytope {x >= 0, div(x) = r*w}.
Both descriptions are implemented so they can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Iterator, Optional, Sequence

from .lattice import rank, solve_unique, vec_sub
from .quiver import Quiver, Weight
from .stability import ThinRep

Monomial = tuple  # nonnegative integer exponent per arrow, canonical order


class EmptyPolytopeError(ValueError):
    pass


def divergence_matrix(q: Quiver) -> tuple[tuple[int, ...], ...]:
    """Rows indexed by vertices, columns by arrows; +1 at targets, -1 at sources."""
    rows = []
    for v in range(1, q.vertex_count + 1):
        row = [0] * len(q.arrows)
        for j, a in enumerate(q.arrows):
            if a.target == v:
                row[j] += 1
            if a.source == v:
                row[j] -= 1
        rows.append(tuple(row))
    return tuple(rows)


def monomial_weight(q: Quiver, mo: Sequence[int]) -> Weight:
    """Vertex weight of an exponent vector; entries always sum to zero."""
    if len(mo) != len(q.arrows):
        raise ValueError(f"exponent length {len(mo)} != arrow count {len(q.arrows)}")
    entries = [0] * q.vertex_count
    for j, a in enumerate(q.arrows):
        entries[a.target - 1] += mo[j]
        entries[a.source - 1] -= mo[j]
    return Weight(tuple(entries))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All weak compositions of total into the given number of parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def semi_invariant_basis(q: Quiver, w: Weight, r: int) -> list[Monomial]:
    """All monomials of weight r*w, in graded-lex order on the arrow order.

    Enumerates flows vertex by vertex in topological order: once the inflow
    of a vertex is fixed, its outflow is forced and gets distributed over the
    outgoing arrows.  Requires an acyclic quiver.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if len(w) != q.vertex_count:
        raise ValueError(f"weight length {len(w)} != vertex count {q.vertex_count}")
    target = [r * e for e in w.entries]
    order = q.topological_order()
    out_arrows = {v: q.outgoing(v) for v in order}
    in_arrows = {v: q.incoming(v) for v in order}

    results: list[Monomial] = []
    exps = [0] * len(q.arrows)

    def fill(pos: int) -> None:
        if pos == len(order):
            results.append(tuple(exps))
            return
        v = order[pos]
        inflow = sum(exps[j] for j in in_arrows[v])
        demand = inflow - target[v - 1]
        if demand < 0:
            return
        outs = out_arrows[v]
        if not outs:
            if demand == 0:
                fill(pos + 1)
            return
        for comp in _compositions(demand, len(outs)):
            for j, e in zip(outs, comp):
                exps[j] = e
            fill(pos + 1)
        for j in outs:
            exps[j] = 0

    fill(0)
    results.sort(key=lambda mo: (sum(mo), tuple(-e for e in mo)))
    return results


def hilbert_function(q: Quiver, w: Weight, r_max: int) -> list[int]:
    """Graded dimensions dim B(r*w) for r = 0..r_max; entry 0 is 1."""
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    return [len(semi_invariant_basis(q, w, r)) for r in range(r_max + 1)]


def degree_one_generation(q: Quiver, w: Weight, r_max: int) -> bool:
    """Whether every B((r+1)w) monomial splits off a B(w) factor, r < r_max."""
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    degree_one = semi_invariant_basis(q, w, 1)
    for r in range(1, r_max):
        for mo in semi_invariant_basis(q, w, r + 1):
            if not any(all(a >= b for a, b in zip(mo, f)) for f in degree_one):
                return False
    return True


def evaluate_point(rep: ThinRep, basis: Sequence[Monomial]) -> Optional[tuple[Fraction, ...]]:
    """Evaluate basis monomials at the representation's arrow scalars.

    Returns projective coordinates up to common scaling, or None when every
    monomial vanishes (the representation is unstable for that weight).
    """
    coords = []
    for mo in basis:
        if len(mo) != len(rep):
            raise ValueError(f"monomial length {len(mo)} != representation size {len(rep)}")
        value = Fraction(1)
        for v, e in zip(rep.values, mo):
            if e:
                value *= v ** e
        coords.append(value)
    if all(c == 0 for c in coords):
        return None
    return tuple(coords)


def projective_equal(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """Equality of projective points given by coordinate vectors."""
    if len(u) != len(v):
        return False
    if all(a == 0 for a in u) or all(b == 0 for b in v):
        raise ValueError("projective coordinates must not be identically zero")
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


@dataclass(frozen=True)
class FlowPolytope:
    """{x >= 0, div(x) = weight} in the arrow coordinates of a quiver."""

    quiver: Quiver
    weight: Weight
    vertices: tuple[tuple, ...]

    @property
    def expected_dim(self) -> int:
        return len(self.quiver.arrows) - self.quiver.vertex_count + 1

    def dimension(self) -> int:
        """Affine dimension of the vertex set; -1 when empty."""
        if not self.vertices:
            return -1
        diffs = [vec_sub(v, self.vertices[0]) for v in self.vertices[1:]]
        return rank(diffs) if diffs else 0

    def to_json_dict(self) -> dict:
        return {
            "equalities": [list(row) for row in divergence_matrix(self.quiver)],
            "rhs": list(self.weight.entries),
            "vertices": [[_num_to_json(x) for x in v] for v in self.vertices],
        }


def _num_to_json(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else [f.numerator, f.denominator]


def flow_polytope(q: Quiver, w: Weight) -> FlowPolytope:
    """Vertex enumeration of the flow polytope, exact over the rationals.

    A vertex is a basic feasible solution: a column subset of the divergence
    map of full rank whose unique solution is nonnegative.  The divergence
    matrix is an incidence matrix, so vertices come out integral, but the
    arithmetic stays rational throughout.
    """
    if len(w) != q.vertex_count:
        raise ValueError(f"weight length {len(w)} != vertex count {q.vertex_count}")
    d = divergence_matrix(q)
    na = len(q.arrows)
    rk = rank(d)
    target = list(w.entries)
    seen = set()
    for cols in combinations(range(na), rk):
        sub = [[row[c] for c in cols] for row in d]
        sol = solve_unique(sub, target)
        if sol is None or any(x < 0 for x in sol):
            continue
        vertex = [Fraction(0)] * na
        for c, x in zip(cols, sol):
            vertex[c] = x
        vertex = tuple(int(x) if x.denominator == 1 else x for x in vertex)
        seen.add(vertex)
    return FlowPolytope(q, w, tuple(sorted(seen)))


def lattice_points(poly: FlowPolytope) -> list[Monomial]:
    """Integer points of a flow polytope by box scan over its vertices.

    Independent of the composition-based enumeration in
    :func:`semi_invariant_basis`; the two must agree on integral polytopes.
    """
    if not poly.vertices:
        return []
    na = len(poly.quiver.arrows)
    lo = [min(floor(Fraction(v[j])) for v in poly.vertices) for j in range(na)]
    hi = [max(ceil(Fraction(v[j])) for v in poly.vertices) for j in range(na)]
    d = divergence_matrix(poly.quiver)
    points = []

    def scan(j: int, current: list[int]) -> None:
        if j == na:
            diverg = [sum(row[i] * current[i] for i in range(na)) for row in d]
            if diverg == list(poly.weight.entries):
                points.append(tuple(current))
            return
        for x in range(max(lo[j], 0), hi[j] + 1):
            current.append(x)
            scan(j + 1, current)
            current.pop()

    scan(0, [])
    points.sort(key=lambda mo: (sum(mo), tuple(-e for e in mo)))
    return points
