"""Shared hypothesis strategies for quivers, weights, patterns and scalars."""

from fractions import Fraction

from hypothesis import strategies as st

from quivermoduli.quiver import Arrow, Quiver, Weight, weight_from_toric_form
from quivermoduli.stability import ThinRep, ZeroPattern


@st.composite
def quivers(draw, min_vertices=2, max_vertices=5, max_arrows=10):
    """Connected acyclic quivers: a spanning tree plus random forward arrows."""
    n = draw(st.integers(min_vertices, max_vertices))
    edges = []
    for v in range(2, n + 1):
        u = draw(st.integers(1, v - 1))
        edges.append((u, v))
    room = max_arrows - len(edges)
    extra = draw(
        st.lists(
            st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda e: e[0] < e[1]),
            max_size=max(room, 0),
        )
    )
    edges.extend(extra)
    arrows = tuple(Arrow(s, t, f"a{i}") for i, (s, t) in enumerate(edges))
    return Quiver(n, arrows)


def weights_for(n, span=6):
    """Weights of length n through random toric forms (bijective, sum zero)."""
    return st.lists(
        st.integers(-span, span), min_size=n - 1, max_size=n - 1
    ).map(weight_from_toric_form)


@st.composite
def quiver_weight_pairs(draw, **kwargs):
    q = draw(quivers(**kwargs))
    w = draw(weights_for(q.vertex_count))
    return q, w


def patterns_for(q):
    na = len(q.arrows)
    return st.integers(0, (1 << na) - 1).map(lambda k: ZeroPattern.from_index(k, na))


def fractions(height=6):
    return st.builds(
        Fraction,
        st.integers(-height, height),
        st.integers(1, height),
    )


@st.composite
def reps_for(draw, q):
    values = draw(
        st.lists(fractions(), min_size=len(q.arrows), max_size=len(q.arrows))
    )
    return ThinRep(tuple(values))


def nonzero_fractions(height=6):
    return st.builds(
        Fraction,
        st.integers(-height, height).filter(lambda x: x != 0),
        st.integers(1, height),
    )
