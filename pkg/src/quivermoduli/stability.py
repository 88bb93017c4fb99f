"""Stability of thin representations: supports, classification, chambers.

For dimension vector (1,...,1) a subrepresentation is determined by its
vertex support, and whether a support occurs depends only on which arrow
scalars vanish.  Everything here therefore works on zero patterns, which
makes exhaustive classification over all 2^#arrows patterns exact and fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Optional, Sequence

from .lattice import dot, primitive, fourier_motzkin_witness
from .quiver import Quiver, Weight, blowup_quiver, toric_form, weight_from_toric_form

DEFAULT_PATTERN_BOUND = 20


class Stability(str, Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly-semistable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class ThinRep:
    """One exact rational scalar per arrow, in canonical arrow order."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ZeroPattern:
    """Zero/nonzero flag per arrow; True means the scalar is nonzero."""

    nonzero: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "nonzero", tuple(bool(b) for b in self.nonzero))

    def __len__(self) -> int:
        return len(self.nonzero)

    @classmethod
    def from_index(cls, k: int, length: int) -> "ZeroPattern":
        """Pattern whose bit-string (arrow 0 leftmost) is k written in binary."""
        return cls(tuple(bool((k >> (length - 1 - j)) & 1) for j in range(length)))

    @classmethod
    def from_string(cls, bits: str) -> "ZeroPattern":
        return cls(tuple(c == "1" for c in bits))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.nonzero)


def pattern_of(rep: ThinRep) -> ZeroPattern:
    return ZeroPattern(tuple(v != 0 for v in rep.values))


def _subset_vertices(mask: int, n: int) -> frozenset[int]:
    return frozenset(v for v in range(1, n + 1) if (mask >> (v - 1)) & 1)


def _exit_masks(q: Quiver) -> dict[int, int]:
    """For each proper nonempty vertex-subset mask, the arrow mask leaving it.

    Arrow j occupies bit (A-1-j) so that pattern integers read as bit-strings
    in canonical arrow order.
    """
    n = q.vertex_count
    na = len(q.arrows)
    masks = {}
    for smask in range(1, (1 << n) - 1):
        exits = 0
        for j, a in enumerate(q.arrows):
            inside_src = (smask >> (a.source - 1)) & 1
            inside_tgt = (smask >> (a.target - 1)) & 1
            if inside_src and not inside_tgt:
                exits |= 1 << (na - 1 - j)
        masks[smask] = exits
    return masks


def _pattern_int(p: ZeroPattern) -> int:
    k = 0
    for b in p.nonzero:
        k = (k << 1) | int(b)
    return k


def subrep_supports(q: Quiver, p: ZeroPattern) -> set[frozenset[int]]:
    """Proper nonempty vertex subsets closed under the nonzero arrows.

    These are exactly the supports of nontrivial proper subrepresentations of
    any thin representation with the given zero pattern.
    """
    if len(p) != len(q.arrows):
        raise ValueError(f"pattern length {len(p)} != arrow count {len(q.arrows)}")
    pint = _pattern_int(p)
    return {
        _subset_vertices(smask, q.vertex_count)
        for smask, exits in _exit_masks(q).items()
        if pint & exits == 0
    }


def theta_value(w: Weight, s: frozenset[int] | set[int]) -> int:
    """Sum of weight entries over a vertex subset (1-based indices)."""
    for v in s:
        if not (1 <= v <= len(w)):
            raise ValueError(f"vertex {v} outside 1..{len(w)}")
    return sum(w[v - 1] for v in s)


def _classify(pint: int, subset_data: list[tuple[int, int]]) -> Stability:
    has_zero = False
    for exits, theta in subset_data:
        if pint & exits == 0:
            if theta < 0:
                return Stability.UNSTABLE
            if theta == 0:
                has_zero = True
    return Stability.STRICTLY_SEMISTABLE if has_zero else Stability.STABLE


def _subset_data(q: Quiver, w: Weight) -> list[tuple[int, int]]:
    return [
        (exits, theta_value(w, _subset_vertices(smask, q.vertex_count)))
        for smask, exits in _exit_masks(q).items()
    ]


def semistability(q: Quiver, p: ZeroPattern, w: Weight) -> Stability:
    """Classify one zero pattern against one weight."""
    if len(p) != len(q.arrows):
        raise ValueError(f"pattern length {len(p)} != arrow count {len(q.arrows)}")
    if len(w) != q.vertex_count:
        raise ValueError(f"weight length {len(w)} != vertex count {q.vertex_count}")
    return _classify(_pattern_int(p), _subset_data(q, w))


def fine_moduli_check(w: Weight) -> bool:
    """True when no proper nonempty vertex subset has weight sum zero.

    In that case semistable and stable coincide and the moduli space is fine.
    """
    n = len(w)
    for smask in range(1, (1 << n) - 1):
        if sum(w[v] for v in range(n) if (smask >> v) & 1) == 0:
            return False
    return True


def classify_patterns(
    q: Quiver, w: Weight, bound: int = DEFAULT_PATTERN_BOUND
) -> dict[ZeroPattern, Stability]:
    """Total classification of all 2^#arrows zero patterns.

    Iteration order is deterministic: patterns as binary numbers in canonical
    arrow order, ascending.
    """
    na = len(q.arrows)
    if na > bound:
        raise ValueError(f"arrow count {na} exceeds enumeration bound {bound}")
    if len(w) != q.vertex_count:
        raise ValueError(f"weight length {len(w)} != vertex count {q.vertex_count}")
    data = _subset_data(q, w)
    return {
        ZeroPattern.from_index(k, na): _classify(k, data)
        for k in range(1 << na)
    }


def closed_form_stability(n: int, m: int, p: ZeroPattern, regime: str) -> Stability:
    """Closed-form stability for the three-vertex blowup quiver.

    regime "chamber" covers weights (-p, p-q, q) with 0 < p < q: a pattern
    with e nonzero is stable iff some late x is nonzero; with e zero it is
    stable iff both an early and a late x are nonzero; otherwise unstable.

    regime "wall" covers weights (-p, 0, p) with p > 0: semistable iff some
    early x is nonzero or e together with some late x is nonzero.  The
    closed form only decides semistability, so the stable versus strictly
    semistable split is delegated to :func:`semistability`.
    """
    if len(p) != n + 2:
        raise ValueError(f"pattern length {len(p)} != {n + 2}")
    early = any(p.nonzero[i] for i in range(m + 1))
    e = p.nonzero[m + 1]
    late = any(p.nonzero[i] for i in range(m + 2, n + 2))
    if regime == "chamber":
        if e:
            return Stability.STABLE if late else Stability.UNSTABLE
        return Stability.STABLE if (early and late) else Stability.UNSTABLE
    if regime == "wall":
        if early or (e and late):
            return semistability(blowup_quiver(n, m), p, Weight((-1, 0, 1)))
        return Stability.UNSTABLE
    raise ValueError(f"unknown regime {regime!r}, expected 'chamber' or 'wall'")


# --- wall and chamber decomposition of weight space -------------------------

@dataclass(frozen=True)
class Wall:
    subset: tuple[int, ...]
    normal: tuple[int, ...]  # functional on toric-form coordinates
    realizable: bool


@dataclass(frozen=True)
class Chamber:
    signs: tuple[int, ...]  # one sign per hyperplane, aligned with hyperplanes
    toric_point: tuple[int, ...]
    representative: Weight


@dataclass(frozen=True)
class ChamberDecomposition:
    walls: tuple[Wall, ...]
    hyperplanes: tuple[tuple[int, ...], ...]
    chambers: tuple[Chamber, ...]

    def to_json_dict(self) -> dict:
        return {
            "walls": [
                {"subset": list(w.subset), "normal": list(w.normal), "realizable": w.realizable}
                for w in self.walls
            ],
            "hyperplanes": [list(h) for h in self.hyperplanes],
            "chambers": [
                {
                    "signs": list(c.signs),
                    "toric_point": list(c.toric_point),
                    "representative": list(c.representative.entries),
                }
                for c in self.chambers
            ],
        }


def _subset_functional(subset: Sequence[int], n: int) -> tuple[int, ...]:
    """theta(S) as a linear functional on toric-form coordinates t1..t(n-1)."""
    coeffs = [0] * (n - 1)
    for v in subset:
        if v == 1:
            coeffs[0] -= 1
        elif v == n:
            coeffs[n - 2] += 1
        else:
            coeffs[v - 2] += 1
            coeffs[v - 1] -= 1
    return tuple(coeffs)


def _canonical_hyperplane(normal: Sequence[int]) -> tuple[int, ...]:
    prim = primitive(normal)
    first = next((a for a in prim if a != 0), 0)
    return prim if first > 0 else tuple(-a for a in prim)


def _wall_interior_point(
    normal: tuple[int, ...], others: list[tuple[int, ...]]
) -> Optional[tuple[int, ...]]:
    """Small integer toric point on one hyperplane, off all the others."""
    dim = len(normal)
    for radius in (2, 4, 8, 16):
        for t in product(range(-radius, radius + 1), repeat=dim):
            if t == (0,) * dim or dot(normal, t) != 0:
                continue
            if all(dot(h, t) != 0 for h in others):
                return t
    return None


def chamber_decomposition(q: Quiver, bound: int = DEFAULT_PATTERN_BOUND) -> ChamberDecomposition:
    """Candidate walls with realizability flags plus the chambers they bound.

    Walls are indexed by proper nonempty vertex subsets; chambers are the
    connected components of the complement of all candidate hyperplanes,
    each reported by an interior integer representative.  Exact output is
    limited to weight-lattice rank <= 3 (four vertices).
    """
    n = q.vertex_count
    if n > 4:
        raise ValueError(f"chamber decomposition supports at most 4 vertices, got {n}")
    na = len(q.arrows)
    if na > bound:
        raise ValueError(f"arrow count {na} exceeds enumeration bound {bound}")
    dim = n - 1

    subsets = []
    for smask in range(1, (1 << n) - 1):
        subset = tuple(v for v in range(1, n + 1) if (smask >> (v - 1)) & 1)
        subsets.append((subset, _subset_functional(subset, n)))

    hyperplanes = sorted({_canonical_hyperplane(f) for _, f in subsets})
    exit_masks = _exit_masks(q)

    walls = []
    for subset, functional in subsets:
        canon = _canonical_hyperplane(functional)
        others = [h for h in hyperplanes if h != canon]
        point = _wall_interior_point(functional, others)
        realizable = False
        if point is not None:
            w = weight_from_toric_form(point)
            data = _subset_data(q, w)
            smask = 0
            for v in subset:
                smask |= 1 << (v - 1)
            target_exits = exit_masks[smask]
            for k in range(1 << na):
                if k & target_exits == 0 and _classify(k, data) != Stability.UNSTABLE:
                    realizable = True
                    break
        walls.append(Wall(subset, functional, realizable))

    chambers = []
    if dim == 0:
        chambers.append(Chamber((), (), weight_from_toric_form(())))
    else:
        for signs in product((1, -1), repeat=len(hyperplanes)):
            ineqs = [(tuple(s * c for c in h), 1) for s, h in zip(signs, hyperplanes)]
            witness = fourier_motzkin_witness(ineqs, dim)
            if witness is None:
                continue
            lcm = 1
            for f in witness:
                d = Fraction(f).denominator
                lcm = lcm * d // gcd(lcm, d)
            point = tuple(int(Fraction(f) * lcm) for f in witness)
            assert all(s * dot(h, point) > 0 for s, h in zip(signs, hyperplanes))
            chambers.append(Chamber(signs, point, weight_from_toric_form(point)))

    return ChamberDecomposition(tuple(walls), tuple(hyperplanes), tuple(chambers))
