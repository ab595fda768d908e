"""Mutual-information graphs and the emergent distances they induce.

Vertices are subsystem labels; each edge carries the pairwise mutual
information between its endpoints. A weight function turns normalized
correlation I/I0 into a length, strong correlation meaning short, and
shortest paths through those lengths define an emergent pseudo-metric:
zero distance between distinct, perfectly correlated vertices is allowed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .hilbert import PureState, reduced_density
from .infotheory import mutual_information

# Pairwise MI below this is treated as no edge at all.
MI_EDGE_FLOOR = 1e-12


class NoCorrelationsError(Exception):
    """The state has no pairwise mutual information above the floor, so
    there is no graph to build and no normalization I0 to speak of."""


def _canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class InfoGraph:
    """Undirected graph of pairwise mutual information values.

    Edge keys are canonical (lexicographically sorted) label pairs; lookups
    through mutual_info() accept either endpoint order. The reference value
    i0 is the largest edge MI and normalizes weights so the strongest
    correlation in the graph sits at distance-weight zero.
    """

    vertices: tuple[str, ...]
    edges: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        canon: dict[tuple[str, str], float] = {}
        vset = set(self.vertices)
        for (a, b), mi in dict(self.edges).items():
            if a not in vset or b not in vset:
                raise ValueError(f"edge ({a!r}, {b!r}) touches unknown vertex")
            if a == b:
                raise ValueError(f"self-edge on {a!r}")
            key = _canonical_pair(a, b)
            if key in canon and abs(canon[key] - float(mi)) > 0.0:
                raise ValueError(f"conflicting values for edge {key}")
            if not math.isfinite(mi) or mi < MI_EDGE_FLOOR:
                raise ValueError(f"edge {key} must carry finite MI >= {MI_EDGE_FLOOR}, got {mi}")
            canon[key] = float(mi)
        if not canon:
            raise NoCorrelationsError("graph has no edges")
        object.__setattr__(self, "edges", canon)

    @property
    def i0(self) -> float:
        """Largest edge mutual information (the normalization reference)."""
        return max(self.edges.values())

    def mutual_info(self, a: str, b: str) -> float | None:
        """Edge MI between a and b in either order, None if absent."""
        return self.edges.get(_canonical_pair(a, b))

    def neighbors(self, v: str) -> list[tuple[str, float]]:
        out = []
        for (a, b), mi in self.edges.items():
            if a == v:
                out.append((b, mi))
            elif b == v:
                out.append((a, mi))
        return out


def build_info_graph(psi: PureState, mi_floor: float = MI_EDGE_FLOOR) -> InfoGraph:
    """Pairwise-MI graph of a multi-factor pure state.

    Computes I(p:q) from the two-factor reduced density operator for every
    unordered pair of factors and keeps pairs at or above the floor.
    Raises NoCorrelationsError when nothing survives (product states).
    """
    labels = psi.labels
    if len(labels) < 2:
        raise ValueError("need at least 2 factors to build a graph")
    edges: dict[tuple[str, str], float] = {}
    for i, p in enumerate(labels):
        for q in labels[i + 1 :]:
            rho_pq = reduced_density(psi, (p, q))
            mi = mutual_information(rho_pq, ((p,), (q,)))
            if mi >= mi_floor:
                edges[_canonical_pair(p, q)] = mi
    if not edges:
        raise NoCorrelationsError(
            f"no pairwise mutual information above {mi_floor} among {labels}"
        )
    return InfoGraph(vertices=labels, edges=edges)


@dataclass(frozen=True)
class WeightFunction:
    """Length profile applied to normalized mutual information x = I/I0.

    phi must be monotonically decreasing on (0, 1] with phi(1) = 0, so the
    strongest edge has zero length and weaker correlation means longer.
    length_scale multiplies the profile and sets the physical unit.
    """

    phi: Callable[[float], float]
    length_scale: float = 1.0
    name: str = "custom"

    def __post_init__(self) -> None:
        if not (self.length_scale > 0.0 and math.isfinite(self.length_scale)):
            raise ValueError(f"length_scale must be positive and finite, got {self.length_scale}")
        at_one = self.phi(1.0)
        if abs(at_one) > 1e-12:
            raise ValueError(f"phi(1) must be 0, got {at_one}")
        # spot-check monotonicity on a log-spaced grid reaching well into
        # the weak-correlation tail
        grid = np.logspace(-9, 0, 64)
        vals = [self.phi(float(x)) for x in grid]
        diffs = np.diff(vals)
        if np.any(diffs > 1e-12):
            raise ValueError("phi must be monotonically decreasing on (0, 1]")

    def __call__(self, x: float) -> float:
        return self.length_scale * self.phi(x)

    @classmethod
    def from_table(cls, xs: Sequence[float], ys: Sequence[float],
                   length_scale: float = 1.0, name: str = "table") -> "WeightFunction":
        """Piecewise-linear profile from a monotone table.

        xs must increase within (0, 1] and end at 1 with ys ending at 0;
        ys must be non-increasing. Below the smallest tabulated x the
        profile saturates at the first table value rather than diverging.
        """
        x_arr = np.asarray(xs, dtype=float)
        y_arr = np.asarray(ys, dtype=float)
        if x_arr.ndim != 1 or x_arr.shape != y_arr.shape or x_arr.size < 2:
            raise ValueError("table needs matching 1-d xs and ys with at least 2 points")
        if np.any(np.diff(x_arr) <= 0) or x_arr[0] <= 0.0 or x_arr[-1] != 1.0:
            raise ValueError("xs must strictly increase within (0, 1] and end at 1")
        if np.any(np.diff(y_arr) > 0) or y_arr[-1] != 0.0:
            raise ValueError("ys must be non-increasing and end at 0")

        def phi(x: float, _x=x_arr, _y=y_arr) -> float:
            return float(np.interp(x, _x, _y))

        return cls(phi=phi, length_scale=length_scale, name=name)


def neg_log_weight(length_scale: float = 1.0) -> WeightFunction:
    """The canonical profile phi(x) = -log x: zero at x = 1, diverging as
    the correlation vanishes."""
    return WeightFunction(phi=lambda x: -math.log(x), length_scale=length_scale, name="neg-log")


def edge_weight(mi: float, ref_mi: float, wf: WeightFunction) -> float:
    """Length of an edge with mutual information mi under reference ref_mi.

    mi = ref_mi gives exactly zero for the neg-log profile; mi = 0 gives
    math.inf (no correlation, infinite separation). mi above the reference
    or a nonpositive reference is a caller error.
    """
    if not ref_mi > 0.0:
        raise ValueError(f"reference MI must be positive, got {ref_mi}")
    if mi < 0.0:
        raise ValueError(f"mutual information must be nonnegative, got {mi}")
    if mi > ref_mi * (1.0 + 1e-12):
        raise ValueError(f"edge MI {mi} exceeds reference {ref_mi}")
    if mi == 0.0:
        return math.inf
    x = min(mi / ref_mi, 1.0)
    # + 0.0 turns the -0.0 that -log(1.0) produces into a clean zero
    return wf(x) + 0.0


def _dijkstra(graph: InfoGraph, wf: WeightFunction, source: str,
              ref_mi: float) -> dict[str, float]:
    """Shortest path lengths from source under edge_weight; inf if unreachable."""
    adjacency: dict[str, list[tuple[str, float]]] = {v: [] for v in graph.vertices}
    for (a, b), mi in graph.edges.items():
        w = edge_weight(mi, ref_mi, wf)
        adjacency[a].append((b, w))
        adjacency[b].append((a, w))
    dist = {v: math.inf for v in graph.vertices}
    dist[source] = 0.0
    heap: list[tuple[float, str]] = [(0.0, source)]
    visited: set[str] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in visited:
            continue
        visited.add(u)
        for v, w in adjacency[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def emergent_distance(graph: InfoGraph, wf: WeightFunction, p: str, q: str,
                      ref_mi: float | None = None) -> float:
    """Shortest-path distance between two vertices (inf when disconnected).

    ref_mi defaults to the graph's own i0; pass an external reference to
    normalize against a different baseline (a pre-perturbation value, say).
    """
    for v in (p, q):
        if v not in graph.vertices:
            raise KeyError(f"unknown vertex {v!r}")
    if p == q:
        return 0.0
    ref = graph.i0 if ref_mi is None else ref_mi
    return _dijkstra(graph, wf, p, ref)[q]


@dataclass(frozen=True)
class EmergentMetric:
    """All-pairs emergent distances over a fixed vertex set.

    Stores one value per unordered pair, so symmetry holds structurally;
    the diagonal is zero by definition. Distances may be inf (disconnected)
    and zero between distinct vertices (pseudo-metric).
    """

    vertices: tuple[str, ...]
    table: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        canon: dict[tuple[str, str], float] = {}
        vset = set(self.vertices)
        for (a, b), d in dict(self.table).items():
            if a not in vset or b not in vset or a == b:
                raise ValueError(f"bad pair ({a!r}, {b!r})")
            canon[_canonical_pair(a, b)] = float(d)
        expected = len(self.vertices) * (len(self.vertices) - 1) // 2
        if len(canon) != expected:
            raise ValueError(f"need all {expected} unordered pairs, got {len(canon)}")
        object.__setattr__(self, "table", canon)

    def distance(self, p: str, q: str) -> float:
        if p not in self.vertices or q not in self.vertices:
            raise KeyError(f"unknown vertex in pair ({p!r}, {q!r})")
        if p == q:
            return 0.0
        return self.table[_canonical_pair(p, q)]


def emergent_metric(graph: InfoGraph, wf: WeightFunction,
                    ref_mi: float | None = None) -> EmergentMetric:
    """All-pairs shortest-path distances as an EmergentMetric."""
    ref = graph.i0 if ref_mi is None else ref_mi
    verts = graph.vertices
    table: dict[tuple[str, str], float] = {}
    for i, src in enumerate(verts):
        dist = _dijkstra(graph, wf, src, ref)
        for dst in verts[i + 1 :]:
            table[_canonical_pair(src, dst)] = dist[dst]
    return EmergentMetric(vertices=verts, table=table)


@dataclass(frozen=True)
class MetricReport:
    """Worst violation per metric axiom (0.0 means clean)."""

    nonnegativity: float
    symmetry: float
    triangle: float
    diagonal: float
    atol: float

    @property
    def ok(self) -> bool:
        worst = max(self.nonnegativity, self.symmetry, self.triangle, self.diagonal)
        return worst <= self.atol


def metric_check(
    metric: EmergentMetric | Mapping[tuple[str, str], float],
    atol: float = 1e-9,
) -> MetricReport:
    """Check pseudo-metric axioms on a metric or a raw directed table.

    A raw mapping may carry directed pairs (p, q) and (q, p) separately,
    which is how a hand-built asymmetric table gets caught. Missing reverse
    entries mirror the forward value. Triangle inequality is checked on all
    ordered triples with finite legs; inf legs assert nothing.
    """
    if isinstance(metric, EmergentMetric):
        verts = list(metric.vertices)
        lookup = metric.distance
    else:
        table = {(a, b): float(d) for (a, b), d in dict(metric).items()}
        vs: set[str] = set()
        for a, b in table:
            vs.update((a, b))
        verts = sorted(vs)

        def lookup(p: str, q: str) -> float:
            if p == q:
                return table.get((p, q), 0.0)
            if (p, q) in table:
                return table[(p, q)]
            if (q, p) in table:
                return table[(q, p)]
            raise KeyError(f"no distance recorded for ({p!r}, {q!r})")

    nonneg = 0.0
    symm = 0.0
    tri = 0.0
    diag = 0.0
    for p in verts:
        diag = max(diag, abs(lookup(p, p)))
        for q in verts:
            if p == q:
                continue
            d_pq = lookup(p, q)
            if not math.isinf(d_pq):
                nonneg = max(nonneg, -d_pq)
            symm = max(symm, _finite_gap(d_pq, lookup(q, p)))
    for p in verts:
        for q in verts:
            if q == p:
                continue
            d_pq = lookup(p, q)
            if math.isinf(d_pq):
                continue
            for r in verts:
                if r in (p, q):
                    continue
                leg = lookup(p, r) + lookup(r, q)
                if math.isinf(leg):
                    continue
                tri = max(tri, d_pq - leg)
    return MetricReport(nonnegativity=nonneg, symmetry=symm, triangle=tri,
                        diagonal=diag, atol=atol)


def _finite_gap(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return math.inf
    return abs(a - b)


def edge_records(graph: InfoGraph, wf: WeightFunction,
                 ref_mi: float | None = None) -> list[tuple[str, str, float, float]]:
    """Sorted (src, dst, mutual_info, weight) rows for export.

    MI stays in nats; weights are base-independent since the profile takes
    the ratio I/I0.
    """
    ref = graph.i0 if ref_mi is None else ref_mi
    rows = []
    for (a, b), mi in sorted(graph.edges.items()):
        rows.append((a, b, mi, edge_weight(mi, ref, wf)))
    return rows
