"""Fans, reference fans, normal fans, fan isomorphism, and toric cohomology.

Fans are stored as primitive integer rays plus maximal cones (tuples of ray
indices).  All computations are exact; the only nontrivial algorithms are
facet enumeration of small cones and polytopes, a brute-force search for
unimodular fan isomorphisms, and the character-by-character computation of
line-bundle cohomology through reduced simplicial cohomology.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import ceil, floor, gcd
from typing import Optional, Sequence

from .lattice import (
    clear_denominators,
    det,
    dot,
    identity,
    independent_subset,
    integer_box,
    inverse,
    matmul,
    matvec,
    primitive,
    rank,
    rational_kernel_basis,
    saturated_span,
    solve_unique,
    transpose,
    vec_sub,
)
from .semiinvariants import EmptyPolytopeError, FlowPolytope

ToricDivisor = tuple  # integer coefficient per ray, aligned with fan.rays


class DegeneratePolytopeError(ValueError):
    def __init__(self, expected_dim: int, actual_dim: int):
        super().__init__(f"polytope has dimension {actual_dim}, expected {expected_dim}")
        self.expected_dim = expected_dim
        self.actual_dim = actual_dim


@dataclass(frozen=True)
class FanMeta:
    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    hyperplane_ray: Optional[int] = None
    exceptional_ray: Optional[int] = None


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    meta: Optional[FanMeta] = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(c)) for c in self.max_cones))
        for r in self.rays:
            if len(r) != self.rank:
                raise ValueError(f"ray {r} does not have length {self.rank}")
            if r != primitive(r) or all(x == 0 for x in r):
                raise ValueError(f"ray {r} is not primitive")

    def cone_ray_vectors(self, cone: Sequence[int]) -> tuple:
        return tuple(self.rays[i] for i in cone)

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.max_cones],
        }


def fan_equal(f1: Fan, f2: Fan) -> bool:
    """Equality as fans: same rays and same maximal cones, order ignored."""
    if f1.rank != f2.rank:
        return False
    if set(f1.rays) != set(f2.rays):
        return False
    cones1 = {frozenset(f1.cone_ray_vectors(c)) for c in f1.max_cones}
    cones2 = {frozenset(f2.cone_ray_vectors(c)) for c in f2.max_cones}
    return cones1 == cones2


def projective_space_fan(n: int) -> Fan:
    """Rays e1..en plus -(e1+...+en); maximal cones are all n-subsets.

    n = 0 gives the rank-zero fan of a point, used for product fans.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fan(0, (), ((),), FanMeta("projective_space", n=0))
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = tuple(c for c in combinations(range(n + 1), n))
    return Fan(n, tuple(rays), cones, FanMeta("projective_space", n=n, hyperplane_ray=n))


def _cone_coefficients(f: Fan, cone: Sequence[int], v: Sequence[int]) -> Optional[tuple]:
    """Coefficients of v on a simplicial full cone, or None when outside."""
    mat = transpose(f.cone_ray_vectors(cone))
    sol = solve_unique(mat, v)
    if sol is None or any(x < 0 for x in sol):
        return None
    return sol


def star_subdivision(f: Fan, v: Sequence[int]) -> Fan:
    """Refine a simplicial fan by inserting the ray v through a cone interior."""
    v = primitive(tuple(int(x) for x in v))
    if all(x == 0 for x in v):
        raise ValueError("subdivision ray must be nonzero")
    if v in f.rays:
        raise ValueError(f"ray {v} already belongs to the fan")
    new_index = len(f.rays)
    new_cones = []
    touched = False
    for cone in f.max_cones:
        if len(cone) != f.rank:
            raise ValueError("star subdivision requires simplicial full-dimensional cones")
        coeffs = _cone_coefficients(f, cone, v)
        if coeffs is None:
            new_cones.append(cone)
            continue
        touched = True
        support = [cone[i] for i, x in enumerate(coeffs) if x > 0]
        for drop in support:
            new_cones.append(tuple(sorted([i for i in cone if i != drop] + [new_index])))
    if not touched:
        raise ValueError(f"ray {v} lies outside the support of the fan")
    return Fan(f.rank, f.rays + (v,), tuple(new_cones))


def blowup_fan(n: int, m: int) -> Fan:
    """Star subdivision of the projective-space fan at e(m+1)+...+en.

    Models the blowup of n-dimensional projective space along the linear
    subspace where the last n-m coordinates vanish.  Rays: e1..en, the
    negative-sum ray, then the exceptional ray; n+2 rays in total.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if not (0 <= m <= n - 2):
        raise ValueError(f"m must satisfy 0 <= m <= n-2, got m={m}, n={n}")
    base = projective_space_fan(n)
    v_e = tuple(1 if m + 1 <= i + 1 <= n else 0 for i in range(n))
    fan = star_subdivision(base, v_e)
    meta = FanMeta("blowup", n=n, m=m, hyperplane_ray=n, exceptional_ray=n + 1)
    return Fan(fan.rank, fan.rays, fan.max_cones, meta)


def is_smooth(f: Fan) -> bool:
    """Each maximal cone's rays must form a lattice basis of their span."""
    for cone in f.max_cones:
        vecs = f.cone_ray_vectors(cone)
        k = len(vecs)
        if k == 0:
            continue
        if rank(vecs) != k:
            return False
        g = 0
        for rows in combinations(range(f.rank), k):
            minor = det([[vecs[i][r] for r in rows] for i in range(k)])
            g = gcd(g, int(minor))
        if g != 1:
            return False
    return True


def _cone_facet_normals(f: Fan, cone: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(inner normal, rays on the facet) pairs for a full-dimensional cone."""
    vecs = f.cone_ray_vectors(cone)
    d = f.rank
    if d == 0:
        return []
    facets = {}
    for sub in combinations(range(len(vecs)), d - 1):
        kernel = rational_kernel_basis([vecs[i] for i in sub]) if sub else \
            rational_kernel_basis([(0,) * d])
        if len(kernel) != 1:
            continue
        normal = clear_denominators(kernel[0])
        values = [dot(normal, v) for v in vecs]
        if all(x >= 0 for x in values):
            pass
        elif all(x <= 0 for x in values):
            normal = tuple(-x for x in normal)
            values = [-x for x in values]
        else:
            continue
        on_facet = tuple(sorted(cone[i] for i, x in enumerate(values) if x == 0))
        facets[normal] = on_facet
    return sorted(facets.items())


def is_complete(f: Fan) -> bool:
    """Support covers the whole space.

    Checks that maximal cones are full-dimensional, audits that every facet
    of a maximal cone is shared by exactly one other maximal cone, and
    covers a deterministic pseudo-random point sample as a final sanity
    check.
    """
    if f.rank == 0:
        return True
    if not f.max_cones:
        return False
    cone_facets = []
    facet_count: dict[tuple, int] = {}
    for cone in f.max_cones:
        vecs = f.cone_ray_vectors(cone)
        if rank(vecs) != f.rank:
            return False
        facets = _cone_facet_normals(f, cone)
        cone_facets.append([normal for normal, _ in facets])
        for _, on_facet in facets:
            facet_count[on_facet] = facet_count.get(on_facet, 0) + 1
    if any(count != 2 for count in facet_count.values()):
        return False
    rng = random.Random(20201)
    for _ in range(40):
        point = tuple(rng.randint(-9, 9) for _ in range(f.rank))
        if all(x == 0 for x in point):
            continue
        if not any(all(dot(nrm, point) >= 0 for nrm in normals) for normals in cone_facets):
            return False
    return True


# --- normal fans -------------------------------------------------------------

def _affine_lattice_coordinates(points: Sequence[Sequence]) -> list[tuple]:
    """Re-express points in a lattice basis of their affine hull.

    The hull lattice is the saturation of the span of the differences, so
    the new coordinates are honest lattice coordinates and the ambient
    dimension drops to the affine dimension.
    """
    origin = points[0]
    diffs = [vec_sub(p, origin) for p in points[1:]]
    int_diffs = [clear_denominators(dv) for dv in diffs if any(x != 0 for x in dv)]
    basis = saturated_span(int_diffs, len(origin))
    if not basis:
        return [() for _ in points]
    mat = transpose(basis)
    coords = []
    for p in points:
        sol = solve_unique(mat, vec_sub(p, origin))
        assert sol is not None, "point outside the affine hull lattice"
        coords.append(sol)
    return coords


def _polytope_facets(points: Sequence[tuple], d: int) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facets (inner normal, offset) of a full-dimensional polytope.

    Candidate hyperplanes run through affinely independent d-subsets of the
    vertices; a candidate is a facet when every vertex lies on the inner
    side.  Sized for the small vertex counts of flow polytopes.
    """
    facets = {}
    for sub in combinations(range(len(points)), d):
        base = points[sub[0]]
        diffs = [vec_sub(points[i], base) for i in sub[1:]]
        kernel = rational_kernel_basis(diffs) if diffs else rational_kernel_basis([(0,) * d])
        if len(kernel) != 1:
            continue
        normal = clear_denominators(kernel[0])
        offset = Fraction(dot(normal, base))
        values = [dot(normal, p) - offset for p in points]
        if all(x >= 0 for x in values):
            pass
        elif all(x <= 0 for x in values):
            normal = tuple(-x for x in normal)
            offset = -offset
        else:
            continue
        facets[(normal, offset)] = True
    return sorted(facets.keys())


def normal_fan_of_points(points: Sequence[Sequence]) -> Fan:
    """Inner normal fan of the convex hull of the given points.

    The fan lives in the lattice dual to the affine-hull lattice of the
    points; a single point yields the rank-zero fan.
    """
    pts = sorted({tuple(p) for p in points})
    if not pts:
        raise EmptyPolytopeError("cannot take the normal fan of an empty polytope")
    coords = _affine_lattice_coordinates(pts)
    d = len(coords[0])
    if d == 0:
        return Fan(0, (), ((),))
    # drop interior points: only vertices of the hull carry normal cones
    facets = _polytope_facets(coords, d)
    rays = tuple(normal for normal, _ in facets)
    cones = []
    for p in coords:
        active = tuple(i for i, (normal, offset) in enumerate(facets)
                       if dot(normal, p) == offset)
        if len(active) >= d and rank([rays[i] for i in active]) == d:
            cones.append(active)
    seen = set()
    max_cones = []
    for c in cones:
        if c not in seen:
            seen.add(c)
            max_cones.append(c)
    return Fan(d, rays, tuple(max_cones))


def normal_fan(poly: FlowPolytope) -> Fan:
    """Normal fan of a flow polytope in its expected dimension.

    Degenerate input (a wall weight can drop the dimension) raises
    DegeneratePolytopeError instead of returning a fan of the wrong rank.
    """
    if not poly.vertices:
        raise EmptyPolytopeError("flow polytope is empty")
    actual = poly.dimension()
    if actual != poly.expected_dim:
        raise DegeneratePolytopeError(poly.expected_dim, actual)
    return normal_fan_of_points(poly.vertices)


# --- fan isomorphism ---------------------------------------------------------

def transform_fan(matrix: Sequence[Sequence[int]], f: Fan) -> Fan:
    """Apply a unimodular matrix to every ray, keeping the cone structure."""
    rays = tuple(tuple(int(x) for x in matvec(matrix, r)) for r in f.rays)
    return Fan(f.rank, rays, f.max_cones)


def fans_isomorphic(f1: Fan, f2: Fan) -> Optional[tuple]:
    """Unimodular matrix sending f1 onto f2, or None.

    The matrix is pinned down by the images of a ray basis; candidates are
    pruned by how many maximal cones contain each ray, then verified on the
    whole ray set and on the cone structure.
    """
    if f1.rank != f2.rank:
        raise ValueError(f"rank mismatch: {f1.rank} != {f2.rank}")
    if len(f1.rays) != len(f2.rays) or len(f1.max_cones) != len(f2.max_cones):
        return None
    if sorted(len(c) for c in f1.max_cones) != sorted(len(c) for c in f2.max_cones):
        return None
    d = f1.rank
    if d == 0:
        return ()

    def degrees(f: Fan) -> list[int]:
        return [sum(1 for c in f.max_cones if i in c) for i in range(len(f.rays))]

    deg1, deg2 = degrees(f1), degrees(f2)
    if sorted(deg1) != sorted(deg2):
        return None

    basis_idx = independent_subset(f1.rays, d)
    if basis_idx is None:
        raise ValueError("rays of the first fan do not span the lattice")
    b1 = transpose([f1.rays[i] for i in basis_idx])
    b1_inv = inverse(b1)
    assert b1_inv is not None
    ray_index2 = {r: i for i, r in enumerate(f2.rays)}
    cones2 = {frozenset(c) for c in f2.max_cones}

    candidate_pools = [
        [j for j in range(len(f2.rays)) if deg2[j] == deg1[i]]
        for i in basis_idx
    ]
    for choice in permutations(range(len(f2.rays)), d):
        if any(choice[k] not in candidate_pools[k] for k in range(d)):
            continue
        c2 = transpose([f2.rays[j] for j in choice])
        m = matmul(c2, b1_inv)
        if any(Fraction(x).denominator != 1 for row in m for x in row):
            continue
        m = tuple(tuple(int(x) for x in row) for row in m)
        if abs(det(m)) != 1:
            continue
        mapping = []
        ok = True
        for r in f1.rays:
            img = matvec(m, r)
            j = ray_index2.get(img)
            if j is None:
                ok = False
                break
            mapping.append(j)
        if not ok or len(set(mapping)) != len(mapping):
            continue
        mapped_cones = {frozenset(mapping[i] for i in c) for c in f1.max_cones}
        if mapped_cones == cones2:
            return m
    return None


def is_star_subdivision_blowdown(f_src: Fan, f_dst: Fan) -> tuple[bool, Optional[tuple]]:
    """Recognize f_src as the star subdivision of f_dst at a single new ray.

    Both fans must live in the same lattice (identity map intended).  On
    success the second component is the contracted ray.
    """
    if f_src.rank != f_dst.rank:
        raise ValueError(f"rank mismatch: {f_src.rank} != {f_dst.rank}")
    src_rays, dst_rays = set(f_src.rays), set(f_dst.rays)
    extra = src_rays - dst_rays
    if dst_rays - src_rays or len(extra) != 1:
        return False, None
    v = next(iter(extra))
    try:
        expected = star_subdivision(f_dst, v)
    except ValueError:
        return False, None
    if fan_equal(expected, f_src):
        return True, v
    return False, None


def product_fan(f1: Fan, f2: Fan) -> Fan:
    """Fan of the product variety: block-padded rays, unions of cones."""
    r1, r2 = f1.rank, f2.rank
    rays = [tuple(r) + (0,) * r2 for r in f1.rays]
    rays += [(0,) * r1 + tuple(r) for r in f2.rays]
    offset = len(f1.rays)
    cones = tuple(
        tuple(sorted(tuple(c1) + tuple(i + offset for i in c2)))
        for c1 in f1.max_cones
        for c2 in f2.max_cones
    )
    return Fan(r1 + r2, tuple(rays), cones)


# --- divisors and cohomology -------------------------------------------------

def divisor_class(f: Fan, a: int, b: int) -> ToricDivisor:
    """Representative of a*H + b*E on a blowup fan.

    H is the pulled-back hyperplane (coefficient on the negative-sum ray,
    which misses the subdivided cone, so no exceptional correction is
    needed); E is the exceptional ray divisor.
    """
    if f.meta is None or f.meta.kind != "blowup":
        raise ValueError("divisor_class needs a fan produced by blowup_fan")
    coeffs = [0] * len(f.rays)
    coeffs[f.meta.hyperplane_ray] += a
    coeffs[f.meta.exceptional_ray] += b
    return tuple(coeffs)


def hyperplane_class(f: Fan, a: int) -> ToricDivisor:
    """a times the hyperplane divisor on a projective-space or blowup fan."""
    if f.meta is None or f.meta.hyperplane_ray is None:
        raise ValueError("fan does not designate a hyperplane ray")
    coeffs = [0] * len(f.rays)
    coeffs[f.meta.hyperplane_ray] += a
    return tuple(coeffs)


def canonical_divisor(f: Fan) -> ToricDivisor:
    return tuple(-1 for _ in f.rays)


def divisor_sub(d1: ToricDivisor, d2: ToricDivisor) -> ToricDivisor:
    return tuple(a - b for a, b in zip(d1, d2))


def divisor_neg(d: ToricDivisor) -> ToricDivisor:
    return tuple(-a for a in d)


def _character_box(f: Fan, d: ToricDivisor) -> Optional[tuple[list[int], list[int]]]:
    """Bounding box containing every character with a nonzero contribution.

    Vertices of the hyperplane arrangement <u, ray> = -coefficient bound all
    bounded sign-pattern regions; a padding of one absorbs strictness.  For
    complete fans the unbounded regions contribute nothing.
    """
    corners = []
    for sub in combinations(range(len(f.rays)), f.rank):
        mat = [f.rays[i] for i in sub]
        rhs = [-d[i] for i in sub]
        sol = solve_unique(mat, rhs)
        if sol is not None:
            corners.append(sol)
    if not corners:
        return None
    lo = [floor(min(c[i] for c in corners)) - 1 for i in range(f.rank)]
    hi = [ceil(max(c[i] for c in corners)) + 1 for i in range(f.rank)]
    return lo, hi


def _reduced_betti(face_sets: set[frozenset], top_dim: int) -> list[int]:
    """Reduced rational Betti numbers b[-1]..b[top_dim] of a simplicial complex.

    Index shift: entry k of the returned list is b_(k-1).
    """
    by_dim: dict[int, list[frozenset]] = {}
    for s in face_sets:
        by_dim.setdefault(len(s) - 1, []).append(s)
    for k in by_dim:
        by_dim[k].sort(key=lambda s: tuple(sorted(s)))
    index = {k: {s: i for i, s in enumerate(faces)} for k, faces in by_dim.items()}

    def boundary_rank(k: int) -> int:
        # rank of d_k : C_k -> C_(k-1)
        if k - 1 not in by_dim or k not in by_dim:
            return 0
        rows = []
        for s in by_dim[k]:
            elems = sorted(s)
            row = [0] * len(by_dim[k - 1])
            for pos, e in enumerate(elems):
                face = frozenset(x for x in elems if x != e)
                row[index[k - 1][face]] = (-1) ** pos
            rows.append(row)
        return rank(transpose(rows))

    betti = []
    ranks = {k: boundary_rank(k) for k in range(0, top_dim + 2)}
    for k in range(-1, top_dim + 1):
        nk = len(by_dim.get(k, []))
        betti.append(nk - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return betti


def cohomology(f: Fan, d: ToricDivisor) -> tuple[int, ...]:
    """Dimensions (h^0, ..., h^rank) of the line bundle of a divisor.

    For each character u the rays with <u, ray> < -coefficient span a
    subcomplex of the fan's nerve; its reduced cohomology in degree p-1
    contributes to h^p.  Characters are grouped by that violation pattern so
    each pattern's complex is only analyzed once.
    """
    if len(d) != len(f.rays):
        raise ValueError(f"divisor length {len(d)} != ray count {len(f.rays)}")
    if f.rank == 0:
        return (1,)
    if not is_smooth(f) or not is_complete(f):
        raise ValueError("cohomology requires a smooth complete fan")
    box = _character_box(f, d)
    if box is None:
        raise ValueError("fan rays do not span; no character box")
    lo, hi = box
    pattern_counts: dict[frozenset, int] = {}
    for u in integer_box(lo, hi):
        violating = frozenset(i for i, r in enumerate(f.rays) if dot(u, r) < -d[i])
        pattern_counts[violating] = pattern_counts.get(violating, 0) + 1
    h = [0] * (f.rank + 1)
    for violating, count in pattern_counts.items():
        faces = {frozenset()}
        for cone in f.max_cones:
            zc = sorted(set(cone) & violating)
            for k in range(1, len(zc) + 1):
                for sub in combinations(zc, k):
                    faces.add(frozenset(sub))
        betti = _reduced_betti(faces, f.rank - 1)
        for p in range(f.rank + 1):
            h[p] += count * betti[p]
    return tuple(h)


def divisor_lattice_points(f: Fan, d: ToricDivisor) -> list[tuple[int, ...]]:
    """Global-section characters: u with <u, ray> >= -coefficient for all rays."""
    if len(d) != len(f.rays):
        raise ValueError(f"divisor length {len(d)} != ray count {len(f.rays)}")
    if f.rank == 0:
        return [()]
    box = _character_box(f, d)
    if box is None:
        raise ValueError("fan rays do not span; no character box")
    lo, hi = box
    points = [
        u for u in integer_box(lo, hi)
        if all(dot(u, r) >= -d[i] for i, r in enumerate(f.rays))
    ]
    points.sort()
    return points
