"""Quivers of sections of line-bundle collections on toric varieties.

Sections of a difference bundle are lattice characters, so multiplication of
sections is character addition and all irreducibility questions are decided
exactly.  The emitted quiver follows the opposite-algebra convention: the
arrows from i to j come from the difference of the bundles in reversed
positions, which makes the three-bundle collection {O, O(H-E), O(H)} on a
blowup fan reproduce the three-vertex blowup quiver directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .lattice import vec_add
from .quiver import Arrow, Quiver
from .toric import Fan, ToricDivisor, cohomology, divisor_lattice_points, divisor_sub, is_complete, is_smooth


@dataclass(frozen=True)
class LineBundleCollection:
    fan: Fan
    bundles: tuple[ToricDivisor, ...]

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(tuple(b) for b in self.bundles))
        for b in self.bundles:
            if len(b) != len(self.fan.rays):
                raise ValueError(f"divisor {b} not sized to {len(self.fan.rays)} rays")

    def __len__(self) -> int:
        return len(self.bundles)


def section_basis(f: Fan, d: ToricDivisor) -> list[tuple[int, ...]]:
    """Characters spanning the global sections of the divisor's line bundle."""
    if not is_complete(f):
        raise ValueError("section_basis requires a complete fan")
    return divisor_lattice_points(f, d)


def _difference(c: LineBundleCollection, i: int, j: int) -> ToricDivisor:
    """Divisor carrying the arrows i -> j under the opposite-algebra indexing."""
    k = len(c)
    return divisor_sub(c.bundles[k - i], c.bundles[k - j])


def irreducible_sections(c: LineBundleCollection, i: int, j: int) -> list[tuple[int, ...]]:
    """Section characters from i to j not factoring through any middle vertex.

    A character is reducible when it is the sum of an (i,k)-character and a
    (k,j)-character for some intermediate k; exactness of character
    arithmetic makes this a finite set computation.
    """
    if not (1 <= i < j <= len(c)):
        raise ValueError(f"need 1 <= i < j <= {len(c)}, got ({i}, {j})")
    total = section_basis(c.fan, _difference(c, i, j))
    reducible = set()
    for mid in range(i + 1, j):
        first = section_basis(c.fan, _difference(c, i, mid))
        second = section_basis(c.fan, _difference(c, mid, j))
        for u in first:
            for v in second:
                reducible.add(vec_add(u, v))
    return [u for u in total if u not in reducible]


def quiver_of_sections(c: LineBundleCollection) -> Quiver:
    """Quiver with one vertex per bundle and arrows the irreducible sections.

    The collection must be ordered so that sections only exist in the
    forward direction; backward sections raise.  Arrows are grouped by
    source-target pair in lexicographic pair order and named s<i><j>_<t>.
    """
    k = len(c)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            backward = section_basis(c.fan, _difference(c, j, i))
            if backward:
                raise ValueError(
                    f"collection not suitably ordered: sections from {j} back to {i}"
                )
    arrows = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for t, _ in enumerate(irreducible_sections(c, i, j)):
                arrows.append(Arrow(i, j, f"s{i}{j}_{t}"))
    return Quiver(k, tuple(arrows))


def _arrow_characters(c: LineBundleCollection) -> list[tuple[int, int, str, tuple[int, ...]]]:
    out = []
    for i in range(1, len(c) + 1):
        for j in range(i + 1, len(c) + 1):
            for t, u in enumerate(irreducible_sections(c, i, j)):
                out.append((i, j, f"s{i}{j}_{t}", u))
    return out


def bound_ideal(c: LineBundleCollection, q: Quiver) -> list[dict]:
    """Binomial relations between parallel paths carrying the same character.

    Enumerates every path of the section quiver, groups parallel paths by
    total character, and emits one relation pairing each later path with the
    first path of its group.  Empty means the quiver has no relations.
    """
    chars = _arrow_characters(c)
    if len(chars) != len(q.arrows):
        raise ValueError("quiver does not match the collection's section quiver")
    by_name = {name: (i, j, u) for i, j, name, u in chars}
    for a in q.arrows:
        if a.name not in by_name or by_name[a.name][:2] != (a.source, a.target):
            raise ValueError("quiver does not match the collection's section quiver")

    arrows_from: dict[int, list[Arrow]] = {}
    for a in q.arrows:
        arrows_from.setdefault(a.source, []).append(a)

    paths: dict[tuple[int, int], list[tuple[tuple[str, ...], tuple[int, ...]]]] = {}

    def walk(vertex: int, names: tuple[str, ...], char: tuple[int, ...]) -> None:
        for a in arrows_from.get(vertex, []):
            new_names = names + (a.name,)
            new_char = vec_add(char, by_name[a.name][2])
            start = by_name[new_names[0]][0]
            paths.setdefault((start, a.target), []).append((new_names, new_char))
            walk(a.target, new_names, new_char)

    zero = (0,) * c.fan.rank
    for v in range(1, q.vertex_count + 1):
        walk(v, (), zero)

    relations = []
    for (i, j), plist in sorted(paths.items()):
        groups: dict[tuple[int, ...], list[tuple[str, ...]]] = {}
        for names, char in plist:
            groups.setdefault(char, []).append(names)
        for char, members in sorted(groups.items()):
            members.sort()
            for later in members[1:]:
                relations.append({
                    "source": i,
                    "target": j,
                    "character": list(char),
                    "paths": [list(members[0]), list(later)],
                })
    return relations


def is_strong_exceptional(c: LineBundleCollection) -> tuple[bool, list[dict]]:
    """Check the collection ordering for strong exceptionality.

    Forward differences may have no higher cohomology, backward differences
    no cohomology at all, and each bundle only scalar endomorphisms.  Returns
    the verdict plus a per-pair cohomology report.
    """
    if not is_smooth(c.fan) or not is_complete(c.fan):
        raise ValueError("strong exceptionality check requires a smooth complete fan")
    report = []
    ok = True
    trivial = tuple(0 for _ in c.fan.rays)
    for i in range(1, len(c) + 1):
        h_self = cohomology(c.fan, trivial)
        good = h_self[0] == 1 and all(x == 0 for x in h_self[1:])
        ok = ok and good
        report.append({"pair": [i, i], "h": list(h_self), "ok": good})
    for i in range(1, len(c) + 1):
        for j in range(i + 1, len(c) + 1):
            forward = cohomology(c.fan, divisor_sub(c.bundles[j - 1], c.bundles[i - 1]))
            backward = cohomology(c.fan, divisor_sub(c.bundles[i - 1], c.bundles[j - 1]))
            good = all(x == 0 for x in forward[1:]) and all(x == 0 for x in backward)
            ok = ok and good
            report.append({
                "pair": [i, j],
                "forward": list(forward),
                "backward": list(backward),
                "ok": good,
            })
    return ok, report


def blowup_collection(f: Fan) -> LineBundleCollection:
    """The length-three collection {O, O(H-E), O(H)} on a blowup fan."""
    from .toric import divisor_class
    return LineBundleCollection(
        f,
        (
            tuple(0 for _ in f.rays),
            divisor_class(f, 1, -1),
            divisor_class(f, 1, 0),
        ),
    )
