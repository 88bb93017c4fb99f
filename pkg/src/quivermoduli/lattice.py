"""Exact linear algebra on small dense integer and rational matrices.

Matrices are sequences of row sequences over int or Fraction.  Everything
in this package works at rank <= 8, so plain Gaussian elimination with
exact arithmetic is the right tool; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(k, v: Sequence) -> tuple:
    return tuple(k * a for a in v)


def vec_neg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def matvec(m: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def matmul(a: Matrix, b: Matrix) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Matrix) -> tuple:
    return tuple(tuple(col) for col in zip(*m))


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def primitive(v: Sequence[int]) -> tuple:
    """Divide an integer vector by the gcd of its entries; zero stays zero."""
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        return tuple(v)
    return tuple(a // g for a in v)


def clear_denominators(v: Sequence) -> tuple:
    """Scale a rational vector to a primitive integer vector (same ray)."""
    fracs = [Fraction(a) for a in v]
    lcm = 1
    for f in fracs:
        d = f.denominator
        lcm = lcm * d // gcd(lcm, d)
    return primitive(tuple(int(f * lcm) for f in fracs))


def _echelon(rows: list) -> list:
    """Row-reduce in place over the rationals, returning pivot columns."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = Fraction(1, 1) / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(m: Matrix) -> int:
    rows = [[Fraction(a) for a in row] for row in m]
    if not rows:
        return 0
    return len(_echelon(rows))


def det(m: Matrix) -> Fraction:
    n = len(m)
    rows = [[Fraction(a) for a in row] for row in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            sign = -sign
        result *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return result * sign


def solve_unique(a: Matrix, b: Sequence) -> Optional[tuple]:
    """Solve a x = b when the solution is unique, else None.

    Accepts rectangular systems; None covers both inconsistency and free
    variables.
    """
    nrows = len(a)
    if nrows == 0:
        return None
    ncols = len(a[0])
    rows = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    pivots = _echelon(rows)
    if ncols in pivots:
        return None  # pivot in the augmented column: inconsistent
    if len(pivots) < ncols:
        return None  # free variables
    sol = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        sol[c] = rows[r][ncols]
    return tuple(sol)


def rational_kernel_basis(m: Matrix) -> list:
    """Basis of the rational kernel {x : m x = 0}, one tuple per basis vector."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rows = [[Fraction(a) for a in row] for row in m]
    pivots = _echelon(rows) if nrows else []
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return basis


def inverse(m: Matrix) -> Optional[tuple]:
    """Exact inverse of a square matrix, or None when singular."""
    n = len(m)
    rows = [[Fraction(a) for a in row] + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(m)]
    pivots = _echelon(rows)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(rows[i][n:]) for i in range(n))


def integer_kernel(m: Matrix) -> list:
    """Basis of the integer kernel {x in Z^n : m x = 0}.

    Unimodular column reduction; the result generates the full saturated
    kernel lattice, not just a finite-index sublattice.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    a = [list(row) for row in m]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    active = list(range(ncols))
    for r in range(nrows):
        nz = [c for c in active if a[r][c] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda c: abs(a[r][c]))
            c1, c2 = nz[0], nz[1]
            q = a[r][c2] // a[r][c1]
            for i in range(nrows):
                a[i][c2] -= q * a[i][c1]
            for i in range(ncols):
                u[i][c2] -= q * u[i][c1]
            nz = [c for c in active if a[r][c] != 0]
        if nz:
            active.remove(nz[0])
    return [tuple(u[i][c] for i in range(ncols)) for c in active]


def saturated_span(vectors: Sequence[Sequence[int]], ambient_dim: int) -> list:
    """Lattice basis of (Q-span of the vectors) intersected with Z^n."""
    vecs = [tuple(v) for v in vectors if any(a != 0 for a in v)]
    if not vecs:
        return []
    perp = integer_kernel(vecs)
    if not perp:
        return [tuple(int(a) for a in row) for row in identity(ambient_dim)]
    return integer_kernel(perp)


def fourier_motzkin_witness(ineqs: Sequence[tuple], nvars: int) -> Optional[tuple]:
    """Find x with coeffs . x >= const for every (coeffs, const), or None.

    Plain Fourier-Motzkin elimination with exact rationals; fine for the
    three-variable systems produced by chamber enumeration.
    """
    ineqs = [(tuple(Fraction(c) for c in coeffs), Fraction(const))
             for coeffs, const in ineqs]
    if nvars == 0:
        return () if all(const <= 0 for _, const in ineqs) else None
    pos, neg, zero = [], [], []
    for coeffs, const in ineqs:
        a = coeffs[nvars - 1]
        if a > 0:
            pos.append((coeffs, const))
        elif a < 0:
            neg.append((coeffs, const))
        else:
            zero.append((coeffs[:-1], const))
    projected = list(zero)
    for pc, pk in pos:
        for nc, nk in neg:
            ap, an = pc[nvars - 1], -nc[nvars - 1]
            coeffs = tuple(an * p + ap * q for p, q in zip(pc[:-1], nc[:-1]))
            projected.append((coeffs, an * pk + ap * nk))
    partial = fourier_motzkin_witness(projected, nvars - 1)
    if partial is None:
        return None
    lower = [(const - dot(coeffs[:-1], partial)) / coeffs[nvars - 1] for coeffs, const in pos]
    upper = [(const - dot(coeffs[:-1], partial)) / coeffs[nvars - 1] for coeffs, const in neg]
    if lower and upper:
        value = (max(lower) + min(upper)) / 2
    elif lower:
        value = max(lower) + 1
    elif upper:
        value = min(upper) - 1
    else:
        value = Fraction(0)
    return partial + (value,)


def integer_box(lo: Sequence[int], hi: Sequence[int]) -> Iterator[tuple]:
    """Iterate integer points of the closed box [lo, hi], last axis fastest."""
    if len(lo) == 0:
        yield ()
        return
    for rest in integer_box(lo[:-1], hi[:-1]):
        for x in range(lo[-1], hi[-1] + 1):
            yield rest + (x,)


def independent_subset(vectors: Sequence[Sequence], size: int) -> Optional[list]:
    """Indices of the first greedy linearly independent subset of given size."""
    chosen: list[int] = []
    for i, v in enumerate(vectors):
        if len(chosen) == size:
            break
        trial = [vectors[j] for j in chosen] + [v]
        if rank(trial) == len(trial):
            chosen.append(i)
    return chosen if len(chosen) == size else None
