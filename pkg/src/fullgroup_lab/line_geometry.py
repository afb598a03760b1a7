"""Quasi-isometry charts to the integer line and geodesic infrastructure.

A chart is fitted from one endpoint of a diametral pair: f(x) = d(u, x) -
d(u, base), possibly negated so that orientation is stable across radii
(the end whose point has the lexicographically smaller (period, preperiod)
canonical key gets the larger f values).  The constants alpha, beta, gamma
are the minimal grid rationals making both quasi-isometry inequalities
hold over all certified vertex pairs, and m = alpha^2 + 2*alpha*beta.
All constants are exact rationals.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotConnected
from .schreier import Graph


def diametral_pair(graph: Graph) -> tuple[int, int]:
    """Double BFS from the base; ties broken by smallest vertex index."""
    d0 = graph.distances_from([graph.base])
    if min(d0) < 0:
        raise NotConnected("graph is not connected")
    ecc = max(d0)
    u = min(v for v in range(graph.n) if d0[v] == ecc)
    d1 = graph.distances_from([u])
    far = max(d1)
    w = min(v for v in range(graph.n) if d1[v] == far)
    return u, w


def _oriented_ends(graph: Graph) -> tuple[int, int]:
    """(minus_end, plus_end): the lex-smaller orientation key gets +."""
    u, w = diametral_pair(graph)
    if graph.orientation_key(w) < graph.orientation_key(u):
        return u, w
    return w, u


@dataclass(frozen=True)
class LineChart:
    """A certified map of graph vertices to integers."""

    graph: Graph
    f: tuple
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    m: Fraction
    minus_end: int
    plus_end: int

    def value(self, v: int) -> int:
        return self.f[v]

    def fibers(self) -> dict:
        out = {}
        for v, val in enumerate(self.f):
            out.setdefault(val, []).append(v)
        return out

    def chart_hash(self) -> str:
        payload = {
            "f": list(self.f),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "labels": [self.graph.label_str(v) for v in range(self.graph.n)],
        }
        return hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def fit_line_chart(graph: Graph) -> LineChart:
    """Fit f and the minimal certificate constants on certified pairs."""
    if graph.n < 2:
        raise NotConnected("need at least 2 vertices")
    minus_end, plus_end = _oriented_ends(graph)
    drow = graph.distance_row(minus_end)
    if min(drow) < 0:
        raise NotConnected("graph is not connected")
    off = drow[graph.base]
    f = tuple(drow[v] - off for v in range(graph.n))

    certified = sorted(graph.certified(1))
    alpha, beta = _fit_constants(graph, f, certified)
    gamma = _fit_gamma(f)
    m = alpha * alpha + 2 * alpha * beta
    return LineChart(graph, f, alpha, beta, gamma, m, minus_end, plus_end)


def _pair_deviation(graph: Graph, f, certified, alpha: Fraction) -> Fraction:
    """Smallest beta making both inequalities hold at this alpha."""
    beta = Fraction(0)
    for i, u in enumerate(certified):
        row = graph.distance_row(u)
        fu = f[u]
        for v in certified[i + 1:]:
            d = row[v]
            gap = abs(fu - f[v])
            need_upper = gap - alpha * d
            need_lower = Fraction(d, 1) / alpha - gap
            if need_upper > beta:
                beta = need_upper
            if need_lower > beta:
                beta = need_lower
    return beta


def _fit_constants(graph: Graph, f, certified):
    """Lexicographically minimal (alpha, beta) on the half-integer grid.

    Any alpha >= 1 admits some beta, so the scan settles on the smallest
    grid alpha; beta is then rounded up to the grid.
    """
    alpha = Fraction(1)
    beta_exact = _pair_deviation(graph, f, certified, alpha)
    beta = Fraction(_ceil_to_half(beta_exact))
    return alpha, beta


def _ceil_to_half(x: Fraction) -> Fraction:
    from math import ceil
    return Fraction(ceil(x * 2), 2)


def _fit_gamma(f) -> Fraction:
    image = sorted(set(f))
    gamma = 0
    for lo, hi in zip(image, image[1:]):
        # worst integer strictly between consecutive image values
        worst = (hi - lo) // 2
        gamma = max(gamma, worst)
    return Fraction(gamma)


def certificate_is_tight(chart: LineChart) -> bool:
    """True when lowering beta by one grid step breaks some pair."""
    if chart.beta == 0:
        return True
    certified = sorted(chart.graph.certified(1))
    lowered = chart.beta - Fraction(1, 2)
    return _pair_deviation(chart.graph, chart.f, certified, chart.alpha) > lowered


def check_qi_inequalities(chart: LineChart, pairs=None) -> bool:
    """Re-verify both quasi-isometry inequalities (exact rationals)."""
    graph, f = chart.graph, chart.f
    certified = sorted(graph.certified(1))
    if pairs is None:
        pairs = ((u, v) for i, u in enumerate(certified)
                 for v in certified[i + 1:])
    for u, v in pairs:
        d = graph.d(u, v)
        gap = abs(f[u] - f[v])
        if not (Fraction(d) / chart.alpha - chart.beta <= gap
                <= chart.alpha * d + chart.beta):
            return False
    return True


@dataclass(frozen=True)
class FiberReport:
    max_fiber_diameter: int
    bound: Fraction
    passed: bool
    worst_level: int | None

    def to_json(self) -> dict:
        return {"max_fiber_diameter": self.max_fiber_diameter,
                "bound": str(self.bound), "passed": self.passed,
                "worst_level": self.worst_level}


def fiber_diameter_check(chart: LineChart) -> FiberReport:
    """Every fiber f^-1(n) must have diameter at most alpha*beta."""
    certified = chart.graph.certified(1)
    worst = 0
    worst_level = None
    for level, verts in sorted(chart.fibers().items()):
        verts = [v for v in verts if v in certified]
        for i, u in enumerate(verts):
            row = chart.graph.distance_row(u)
            for v in verts[i + 1:]:
                if row[v] > worst:
                    worst = row[v]
                    worst_level = level
    bound = chart.alpha * chart.beta
    return FiberReport(worst, bound, Fraction(worst) <= bound, worst_level)


@dataclass(frozen=True)
class GeodesicSegment:
    """An oriented geodesic: v0 is the minus end, v[-1] the plus end."""

    graph: Graph
    vertices: tuple

    def __len__(self):
        return len(self.vertices) - 1

    def pos(self, v: int) -> int:
        return self.vertices.index(v)

    @property
    def minus_end(self) -> int:
        return self.vertices[0]

    @property
    def plus_end(self) -> int:
        return self.vertices[-1]

    def segment_between(self, a: int, b: int) -> tuple:
        i, j = self.pos(a), self.pos(b)
        if i > j:
            i, j = j, i
        return self.vertices[i:j + 1]


def diametral_geodesic(graph: Graph) -> GeodesicSegment:
    """Shortest path between the oriented diametral ends, geodesy verified."""
    minus_end, plus_end = _oriented_ends(graph)
    parent, dist = graph.bfs_parents(minus_end)
    path = [plus_end]
    while path[-1] != minus_end:
        path.append(parent[path[-1]])
    path.reverse()
    for i in range(len(path)):
        row = graph.distance_row(path[i])
        for j in range(i + 1, len(path)):
            assert row[path[j]] == j - i, "diametral path is not a geodesic"
    return GeodesicSegment(graph, tuple(path))


def max_geodesic_midpoint(graph: Graph, v: int) -> int:
    """Largest n such that some length-2n geodesic has midpoint v.

    Levelwise endpoint-pair extension: a pair (a, b) at level n satisfies
    d(v,a) = d(v,b) = n and d(a,b) = 2n; level n+1 pairs extend both ends
    by one edge.  Every longer geodesic through v restricts to a shorter
    one, so the extension finds the exact maximum within the graph.
    """
    dv = graph.distance_row(v)
    pairs = {(v, v)}
    n = 0
    while True:
        nxt = set()
        for a, b in pairs:
            ext_a = [x for x in graph.neighbors(a) if dv[x] == n + 1]
            ext_b = [y for y in graph.neighbors(b) if dv[y] == n + 1]
            for x in ext_a:
                rx = graph.distance_row(x)
                for y in ext_b:
                    if rx[y] == 2 * (n + 1):
                        nxt.add((x, y))
        if not nxt:
            return n
        pairs = nxt
        n += 1


def project_to_geodesic(graph: Graph, seg: GeodesicSegment, x: int) -> int:
    """Closest geodesic vertex to x; ties resolved toward the minus end."""
    row = graph.distance_row(x)
    best = None
    best_d = None
    for v in seg.vertices:
        if best_d is None or row[v] < best_d:
            best, best_d = v, row[v]
    return best


@dataclass(frozen=True)
class CoveringReport:
    max_distance: int
    m: Fraction
    passed: bool
    witness: int | None

    def to_json(self) -> dict:
        return {"max_distance": self.max_distance, "m": str(self.m),
                "passed": self.passed, "witness": self.witness}


def m_covering_check(graph: Graph, seg: GeodesicSegment, m) -> CoveringReport:
    """Every certified vertex must lie within m of the geodesic."""
    m = Fraction(m)
    dist = graph.distances_from(sorted(set(seg.vertices)))
    certified = graph.certified(max(1, m))
    worst = 0
    witness = None
    for v in sorted(certified):
        if dist[v] > worst:
            worst = dist[v]
            witness = v
    return CoveringReport(worst, m, Fraction(worst) <= m, witness)
