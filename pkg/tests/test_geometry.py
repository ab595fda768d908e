import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entgeo.geometry import (
    EmergentMetric,
    InfoGraph,
    NoCorrelationsError,
    WeightFunction,
    build_info_graph,
    edge_records,
    edge_weight,
    emergent_distance,
    emergent_metric,
    metric_check,
    neg_log_weight,
)
from entgeo.hilbert import PureState, qubits, tensor

LOG2 = math.log(2.0)
BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)


def ghz(labels) -> PureState:
    n = len(labels)
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0 / math.sqrt(2.0)
    return PureState(qubits(labels), amp)


def haar_state(labels, seed) -> PureState:
    rng = np.random.default_rng(seed)
    tps = qubits(labels)
    v = rng.standard_normal(tps.total_dim) + 1j * rng.standard_normal(tps.total_dim)
    return PureState(tps, v / np.linalg.norm(v))


class TestInfoGraph:
    def test_bell_with_spectator_keeps_one_edge(self):
        up = PureState(qubits(("C",)), np.array([1.0, 0.0]))
        psi = tensor(PureState(qubits(("A", "B")), BELL), up)
        graph = build_info_graph(psi)
        assert set(graph.edges) == {("A", "B")}
        assert abs(graph.mutual_info("A", "B") - 2 * LOG2) < 1e-10
        assert graph.mutual_info("A", "C") is None

    def test_ghz_three_equal_edges(self):
        graph = build_info_graph(ghz(("A", "B", "C")))
        assert set(graph.edges) == {("A", "B"), ("A", "C"), ("B", "C")}
        for mi in graph.edges.values():
            assert abs(mi - LOG2) < 1e-10
        assert abs(graph.i0 - LOG2) < 1e-10

    def test_product_state_raises(self):
        psi = PureState(qubits(("A", "B")), np.array([1, 0, 0, 0], dtype=complex))
        with pytest.raises(NoCorrelationsError):
            build_info_graph(psi)

    def test_lookup_is_symmetric(self):
        graph = InfoGraph(("P", "Q"), {("Q", "P"): 0.3})
        assert graph.mutual_info("P", "Q") == 0.3
        assert graph.mutual_info("Q", "P") == 0.3

    def test_rejects_self_edge(self):
        with pytest.raises(ValueError, match="self-edge"):
            InfoGraph(("P", "Q"), {("P", "P"): 0.3})

    def test_rejects_unknown_vertex(self):
        with pytest.raises(ValueError, match="unknown"):
            InfoGraph(("P", "Q"), {("P", "R"): 0.3})

    def test_rejects_conflicting_duplicates(self):
        with pytest.raises(ValueError, match="conflicting"):
            InfoGraph(("P", "Q"), {("P", "Q"): 0.3, ("Q", "P"): 0.4})

    def test_rejects_nonpositive_mi(self):
        with pytest.raises(ValueError):
            InfoGraph(("P", "Q"), {("P", "Q"): 0.0})

    def test_empty_graph_raises_no_correlations(self):
        with pytest.raises(NoCorrelationsError):
            InfoGraph(("P", "Q"), {})

    def test_neighbors(self):
        graph = InfoGraph(("P", "Q", "R"), {("P", "Q"): 0.3, ("P", "R"): 0.2})
        assert sorted(graph.neighbors("P")) == [("Q", 0.3), ("R", 0.2)]
        assert graph.neighbors("Q") == [("P", 0.3)]


class TestWeightFunction:
    def test_neg_log_endpoint(self):
        wf = neg_log_weight()
        assert wf(1.0) == 0.0

    def test_neg_log_diverges_toward_zero(self):
        wf = neg_log_weight()
        assert wf(1e-9) > 20.0

    def test_length_scale_multiplies(self):
        wf = neg_log_weight(3.5)
        assert abs(wf(0.5) - 3.5 * LOG2) < 1e-12

    def test_rejects_nonzero_at_one(self):
        with pytest.raises(ValueError, match="phi\\(1\\)"):
            WeightFunction(phi=lambda x: 1.0 - x + 0.1)

    def test_rejects_increasing_profile(self):
        with pytest.raises(ValueError, match="decreasing"):
            WeightFunction(phi=lambda x: x - 1.0)

    def test_rejects_bad_length_scale(self):
        with pytest.raises(ValueError, match="length_scale"):
            neg_log_weight(0.0)

    def test_table_profile_interpolates(self):
        wf = WeightFunction.from_table([0.25, 0.5, 1.0], [2.0, 1.0, 0.0])
        assert abs(wf.phi(0.375) - 1.5) < 1e-12
        assert wf.phi(1.0) == 0.0
        # saturates instead of extrapolating below the table
        assert wf.phi(0.01) == 2.0

    def test_table_rejects_non_monotone(self):
        with pytest.raises(ValueError, match="non-increasing"):
            WeightFunction.from_table([0.5, 0.75, 1.0], [1.0, 1.5, 0.0])

    def test_table_must_end_at_one(self):
        with pytest.raises(ValueError, match="end at 1"):
            WeightFunction.from_table([0.25, 0.5], [1.0, 0.0])


class TestEdgeWeight:
    def test_reference_edge_has_exactly_zero_weight(self):
        w = edge_weight(2 * LOG2, 2 * LOG2, neg_log_weight())
        assert w == 0.0
        assert math.copysign(1.0, w) == 1.0  # a clean zero, not -0.0

    def test_half_reference(self):
        assert abs(edge_weight(LOG2, 2 * LOG2, neg_log_weight()) - LOG2) < 1e-12

    def test_zero_mi_is_infinitely_far(self):
        assert edge_weight(0.0, 1.0, neg_log_weight()) == math.inf

    def test_rejects_mi_above_reference(self):
        with pytest.raises(ValueError, match="exceeds"):
            edge_weight(1.1, 1.0, neg_log_weight())

    def test_tolerates_rounding_overshoot(self):
        ref = 0.3
        assert edge_weight(ref * (1.0 + 1e-13), ref, neg_log_weight()) == 0.0

    def test_rejects_nonpositive_reference(self):
        with pytest.raises(ValueError, match="reference"):
            edge_weight(0.5, 0.0, neg_log_weight())

    def test_rejects_negative_mi(self):
        with pytest.raises(ValueError, match="nonnegative"):
            edge_weight(-0.1, 1.0, neg_log_weight())

    def test_monotone_in_mi(self):
        wf = neg_log_weight()
        grid = np.linspace(1e-6, 1.0, 500)
        weights = [edge_weight(float(x), 1.0, wf) for x in grid]
        assert all(a >= b - 1e-12 for a, b in zip(weights, weights[1:]))


class TestEmergentDistance:
    def synthetic_graph(self) -> InfoGraph:
        # weights under -log with i0 = 1 pinned by the (X, Y) anchor edge:
        # P-Q costs 5 direct, P-R-Q costs 1 + 2 = 3
        return InfoGraph(
            ("P", "Q", "R", "X", "Y"),
            {
                ("P", "Q"): math.exp(-5.0),
                ("P", "R"): math.exp(-1.0),
                ("Q", "R"): math.exp(-2.0),
                ("X", "Y"): 1.0,
            },
        )

    def test_detour_beats_direct_edge(self):
        graph = self.synthetic_graph()
        d = emergent_distance(graph, neg_log_weight(), "P", "Q")
        assert abs(d - 3.0) < 1e-9

    def test_distance_to_self_is_zero(self):
        assert emergent_distance(self.synthetic_graph(), neg_log_weight(), "P", "P") == 0.0

    def test_disconnected_component_is_infinite(self):
        assert emergent_distance(self.synthetic_graph(), neg_log_weight(), "P", "X") == math.inf

    def test_unknown_vertex(self):
        with pytest.raises(KeyError):
            emergent_distance(self.synthetic_graph(), neg_log_weight(), "P", "Z")

    def test_maximally_correlated_pair_sits_at_zero_distance(self):
        # distinct vertices at distance zero: allowed by the pseudo-metric
        graph = InfoGraph(("P", "Q"), {("P", "Q"): 0.7})
        assert emergent_distance(graph, neg_log_weight(), "P", "Q") == 0.0

    def test_length_scale_scales_distances(self):
        graph = self.synthetic_graph()
        d1 = emergent_distance(graph, neg_log_weight(1.0), "P", "Q")
        d2 = emergent_distance(graph, neg_log_weight(2.0), "P", "Q")
        assert abs(d2 - 2.0 * d1) < 1e-12

    def test_external_reference_stretches_all_edges(self):
        graph = InfoGraph(("P", "Q"), {("P", "Q"): 0.5})
        d = emergent_distance(graph, neg_log_weight(), "P", "Q", ref_mi=1.0)
        assert abs(d - LOG2) < 1e-12


class TestEmergentMetric:
    def test_all_pairs_present_and_symmetric(self):
        metric = emergent_metric(build_info_graph(ghz(("A", "B", "C"))), neg_log_weight())
        assert metric.distance("A", "B") == metric.distance("B", "A")
        assert metric.distance("A", "A") == 0.0
        report = metric_check(metric)
        assert report.symmetry == 0.0  # structural, not approximate
        assert report.ok

    def test_requires_complete_table(self):
        with pytest.raises(ValueError, match="pairs"):
            EmergentMetric(("P", "Q", "R"), {("P", "Q"): 1.0})

    def test_ghz_metric_is_degenerate(self):
        # all edges share the maximal MI, so every pair sits at distance 0
        metric = emergent_metric(build_info_graph(ghz(("A", "B", "C"))), neg_log_weight())
        for p, q in (("A", "B"), ("A", "C"), ("B", "C")):
            assert metric.distance(p, q) == 0.0

    def test_random_states_satisfy_axioms(self):
        labels = ("Q0", "Q1", "Q2", "Q3", "Q4")
        for seed in range(5):
            graph = build_info_graph(haar_state(labels, seed))
            report = metric_check(emergent_metric(graph, neg_log_weight()))
            assert report.ok, (seed, report)


class TestMetricCheck:
    def test_flags_asymmetric_hand_built_table(self):
        table = {("P", "Q"): 1.0, ("Q", "P"): 2.0}
        report = metric_check(table)
        assert report.symmetry == 1.0
        assert not report.ok

    def test_flags_nonzero_diagonal(self):
        table = {("P", "Q"): 1.0, ("Q", "P"): 1.0, ("P", "P"): 0.5}
        report = metric_check(table)
        assert report.diagonal == 0.5
        assert not report.ok

    def test_flags_triangle_violation(self):
        table = {("P", "Q"): 10.0, ("P", "R"): 1.0, ("R", "Q"): 1.0}
        report = metric_check(table)
        assert report.triangle >= 8.0 - 1e-12
        assert not report.ok

    def test_accepts_clean_directed_table(self):
        table = {("P", "Q"): 1.0, ("Q", "P"): 1.0}
        assert metric_check(table).ok

    def test_infinite_legs_assert_nothing(self):
        table = {("P", "Q"): math.inf, ("P", "R"): 1.0, ("R", "Q"): math.inf}
        assert metric_check(table).ok


class TestGraphInvariants:
    @given(seed=st.integers(0, 2_000))
    @settings(max_examples=25)
    def test_shortest_path_never_exceeds_direct_edge(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 7))
        verts = tuple(f"V{i}" for i in range(n))
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.7:
                    edges[(verts[i], verts[j])] = float(rng.uniform(0.01, 1.0))
        if not edges:
            edges[(verts[0], verts[1])] = 0.5
        graph = InfoGraph(verts, edges)
        wf = neg_log_weight()
        metric = emergent_metric(graph, wf)
        for (a, b), mi in graph.edges.items():
            assert metric.distance(a, b) <= edge_weight(mi, graph.i0, wf) + 1e-12

    @given(seed=st.integers(0, 2_000))
    @settings(max_examples=25)
    def test_triangle_holds_structurally(self, seed):
        rng = np.random.default_rng(seed)
        verts = ("V0", "V1", "V2", "V3")
        edges = {}
        for i in range(4):
            for j in range(i + 1, 4):
                if rng.random() < 0.8:
                    edges[(verts[i], verts[j])] = float(rng.uniform(0.01, 1.0))
        if not edges:
            edges[(verts[0], verts[1])] = 0.5
        report = metric_check(emergent_metric(InfoGraph(verts, edges), neg_log_weight()))
        assert report.triangle <= 1e-12

    def test_strengthening_an_edge_shortens_distances(self):
        verts = ("V0", "V1", "V2", "V3")
        edges = {
            ("V0", "V1"): 0.2,
            ("V1", "V2"): 0.3,
            ("V2", "V3"): 0.25,
            ("V0", "V3"): 0.9,
        }
        wf = neg_log_weight()
        before = emergent_metric(InfoGraph(verts, edges), wf)
        boosted = dict(edges)
        boosted[("V1", "V2")] = 0.45  # still below i0 = 0.9
        after = emergent_metric(InfoGraph(verts, boosted), wf)
        for i in range(4):
            for j in range(i + 1, 4):
                assert after.distance(verts[i], verts[j]) <= \
                    before.distance(verts[i], verts[j]) + 1e-12


class TestEdgeRecords:
    def test_sorted_rows_with_weights(self):
        graph = build_info_graph(ghz(("B", "A", "C")))
        rows = edge_records(graph, neg_log_weight())
        assert [(r[0], r[1]) for r in rows] == [("A", "B"), ("A", "C"), ("B", "C")]
        for _, _, mi, weight in rows:
            assert abs(mi - LOG2) < 1e-10
            assert weight == 0.0
