"""Repeating local action patterns and transported half spaces.

Two vertices carry the same pattern for a family F when their labeled
n-neighborhoods are isomorphic via the generator-equivariant bijection
h(w.v1) = w.v2 and every element of F uses the same piece word at
corresponding points.  A matched vertex z receives a transported half
space: mark B+ = h(Y n B_n(p)) and B- = h(Y^c n B_n(p)), grow each side
by paths avoiding the other, and keep the side containing the plus end
of the geodesic window.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .cocycle import HalfSpace, n_phi, r_constant, stabilizer_test
from .errors import (
    NoRepetition,
    PatternMismatch,
    PreconditionNphi,
    RimContact,
    TransportFailure,
)
from .full_group import apply_element, displacement_bound
from .line_geometry import GeodesicSegment, project_to_geodesic
from .schreier import Graph


def _labeled_adjacency(graph: Graph) -> list:
    """Per-vertex map generator name -> target vertex (loops included)."""
    if getattr(graph, "_labeled_adj", None) is None:
        adj = [dict() for _ in range(graph.n)]
        for u, name, v in graph.edges:
            adj[u][name] = v
        graph._labeled_adj = adj
    return graph._labeled_adj


def _ball_interior_ok(graph: Graph, v: int, n: int) -> bool:
    if graph.radius is None:
        return True
    return graph.dist[v] + n <= graph.radius - 1


def labeled_match(graph: Graph, v1: int, v2: int, n: int):
    """Generator-equivariant bijection B_n(v1) -> B_n(v2), or None.

    The map sends w.v1 to w.v2 for every generator word of length <= n;
    it exists iff the rooted, generator-labeled neighborhoods are
    isomorphic (loops must match loops).
    """
    adj = _labeled_adjacency(graph)
    match = {v1: v2}
    reverse = {v2: v1}
    frontier = [v1]
    depth = {v1: 0}
    while frontier:
        nxt = []
        for a in frontier:
            if depth[a] >= n:
                continue
            b = match[a]
            if set(adj[a]) != set(adj[b]):
                return None
            for g, a2 in adj[a].items():
                b2 = adj[b][g]
                if a2 in match:
                    if match[a2] != b2:
                        return None
                    continue
                if b2 in reverse:
                    return None
                match[a2] = b2
                reverse[b2] = a2
                depth[a2] = depth[a] + 1
                nxt.append(a2)
        frontier = nxt
    return match


@dataclass(frozen=True)
class LocalPattern:
    """Piece words used by each element of F over an n-neighborhood."""

    graph: Graph
    center: int
    depth: int
    table: tuple  # ((vertex, (word per element of F)), ...) sorted


def local_pattern(F, graph: Graph, v: int, n: int) -> LocalPattern:
    if not _ball_interior_ok(graph, v, n):
        raise RimContact(f"B_{n}({v}) touches the rim")
    row = graph.distance_row(v)
    verts = sorted(u for u in range(graph.n) if 0 <= row[u] <= n)
    table = tuple(
        (u, tuple(phi.word_at(graph.labels[u]) for phi in F)) for u in verts)
    return LocalPattern(graph, v, n, table)


def same_pattern(F, graph: Graph, v1: int, v2: int, n: int) -> bool:
    """Neighborhoods isomorphic and piece words equal under the match."""
    h = labeled_match(graph, v1, v2, n)
    if h is None:
        return False
    for u, image in h.items():
        for phi in F:
            if phi.word_at(graph.labels[u]) != phi.word_at(graph.labels[image]):
                return False
    return True


def pattern_match_points(F, graph: Graph, n: int, anchor: int | None = None) -> list:
    """All certified vertices whose pattern equals the anchor's pattern."""
    if anchor is None:
        anchor = graph.base
    if not _ball_interior_ok(graph, anchor, n):
        raise RimContact("anchor neighborhood touches the rim")
    candidates = [v for v in range(graph.n) if _ball_interior_ok(graph, v, n)]
    return [z for z in candidates if same_pattern(F, graph, anchor, z, n)]


def repetition_radius(F, n: int, graph: Graph, anchor: int | None = None) -> int:
    """Smallest r such that every certified vertex sees a pattern match
    within distance r.  Window-relative evidence, not a proof."""
    matches = pattern_match_points(F, graph, n, anchor)
    if not matches:
        raise NoRepetition("anchor pattern repeats nowhere in the window")
    dist = graph.distances_from(matches)
    scan = [v for v in range(graph.n) if _ball_interior_ok(graph, v, n)]
    r = 0
    for v in scan:
        if dist[v] < 0:
            raise NoRepetition(f"vertex {v} cannot reach any match")
        r = max(r, dist[v])
    return r


def _reach_avoiding(graph: Graph, seeds, forbidden) -> frozenset:
    seen = set(seeds) - set(forbidden)
    q = deque(sorted(seen))
    while q:
        u = q.popleft()
        for w in graph.neighbors(u):
            if w not in seen and w not in forbidden:
                seen.add(w)
                q.append(w)
    return frozenset(seen)


def end_strips(graph: Graph, seg: GeodesicSegment, m) -> tuple:
    """(minus strip, plus strip): the outermost ceil(m) certified geodesic
    vertices on each side of the window; a set "contains an end" when it
    contains the whole strip on that side."""
    width = max(1, int(math.ceil(Fraction(m))))
    if graph.radius is None:
        certified = list(range(len(seg.vertices)))
    else:
        certified = [i for i, v in enumerate(seg.vertices)
                     if graph.dist[v] <= graph.radius - 1]
    minus = frozenset(seg.vertices[i] for i in certified[:width])
    plus = frozenset(seg.vertices[i] for i in certified[-width:])
    return minus, plus


@dataclass(frozen=True)
class TransportedHalfSpace:
    z: int
    n: int
    match_map: dict
    b_plus: frozenset
    b_minus: frozenset
    a_plus: frozenset
    a_minus: frozenset
    y_z: frozenset
    boundary: frozenset
    R: int
    checks: dict

    def to_json(self, graph: Graph) -> dict:
        return {
            "z": self.z,
            "n": self.n,
            "R": self.R,
            "y_z_size": len(self.y_z),
            "boundary": sorted(graph.label_str(v) for v in self.boundary),
            "checks": {k: bool(v) for k, v in sorted(self.checks.items())},
        }


def transport_halfspace(F, z: int, n: int, half: HalfSpace,
                        seg: GeodesicSegment) -> TransportedHalfSpace:
    """Build and verify the half space transported to the match point z."""
    graph = half.graph
    chart = half.chart
    p = project_to_geodesic(graph, seg, graph.base)
    for phi in F:
        if not stabilizer_test(phi, half):
            raise TransportFailure("every element of F must stabilize Y")
    R = r_constant(half, seg, p)
    worst = max(n_phi(chart.m, R, displacement_bound(phi)) for phi in F)
    if Fraction(n) <= worst:
        raise PreconditionNphi(f"need n > {worst}, got {n}")
    if not _ball_interior_ok(graph, z, n):
        raise RimContact(f"B_{n}({z}) touches the rim")

    h = labeled_match(graph, p, z, n)
    if h is None:
        raise PatternMismatch(f"neighborhoods of {p} and {z} are not isomorphic")
    for u, image in h.items():
        for phi in F:
            if phi.word_at(graph.labels[u]) != phi.word_at(graph.labels[image]):
                raise PatternMismatch(
                    f"piece words differ at {graph.label_str(u)}")

    b_plus = frozenset(h[u] for u in h if u in half.members)
    b_minus = frozenset(h[u] for u in h if u not in half.members)
    a_plus = _reach_avoiding(graph, b_plus, b_minus)
    a_minus = _reach_avoiding(graph, b_minus, b_plus)

    checks = {}
    w1 = graph.certified(1)
    checks["cover"] = w1 <= (a_plus | a_minus)
    checks["disjoint"] = not (a_plus & a_minus)

    def side_boundary(side):
        return frozenset(v for v in side & w1
                         if any(u not in side for u in graph.neighbors(v)))

    if not (half.boundary <= set(h)) or not (half.co_boundary <= set(h)):
        raise TransportFailure("half-space boundary escapes the match window")
    checks["boundary_plus"] = side_boundary(a_plus) == frozenset(
        h[u] for u in half.boundary)
    checks["boundary_minus"] = side_boundary(a_minus) == frozenset(
        h[u] for u in half.co_boundary)

    strip_minus, strip_plus = end_strips(graph, seg, chart.m)
    plus_in_aplus = strip_plus <= a_plus
    plus_in_aminus = strip_plus <= a_minus
    minus_in_aplus = strip_minus <= a_plus
    minus_in_aminus = strip_minus <= a_minus
    checks["one_end_each"] = (plus_in_aplus != plus_in_aminus) and \
        (minus_in_aplus != minus_in_aminus) and \
        (plus_in_aplus != minus_in_aplus)

    y_z = a_plus if plus_in_aplus else a_minus
    boundary = side_boundary(y_z)
    row_z = graph.distance_row(z)
    checks["boundary_in_R_ball"] = all(row_z[v] <= R for v in boundary)

    checks["invariance"] = _is_invariant(F, graph, y_z)

    result = TransportedHalfSpace(z, n, h, b_plus, b_minus, a_plus, a_minus,
                                  y_z, boundary, R, checks)
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise TransportFailure(f"transport checks failed: {failed}",
                               report=result.to_json(graph))
    return result


def _is_invariant(F, graph: Graph, subset: frozenset) -> bool:
    """Membership in the subset is preserved by every phi of F, both ways,
    over the window wide enough for the displacements."""
    from .full_group import invert

    for phi in F:
        margin = max(1, displacement_bound(phi))
        window = graph.certified(margin)
        for direction in (phi, invert(phi)):
            for x in sorted(window):
                img = graph.vertex_of(apply_element(direction, graph.labels[x]))
                if img is None or ((x in subset) != (img in subset)):
                    return False
    return True
