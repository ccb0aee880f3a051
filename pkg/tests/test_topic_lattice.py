"""Lattice scan, anomaly detection, resolution, and serialization."""

import random

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from lexlattice import (
    Anomaly,
    Document,
    MaskedDocument,
    RelationEdge,
    SelectiveEraser,
    TopicConfig,
    TopicLattice,
    TopicLatticeBuilder,
    build_lattice,
    detect_anomalies,
    export_dot,
    export_json,
    import_json,
    naive_apply_oracle,
    render_table,
    resolve,
    scan_pair,
    topological_order,
)
from lexlattice.topic_lattice import MEASURED, WIDTH_AXIOM, _strongly_connected_components

E = SelectiveEraser


def edge(a, wa, b, wb, p, kind=MEASURED):
    return RelationEdge(E(a, wa), E(b, wb), p, kind)


@pytest.fixture
def alternating_doc():
    return Document("alt", ["a", "b"] * 5)


@pytest.fixture
def spaced_doc():
    # a and b two apart in every block; far enough for width-1 windows to miss
    return Document("spaced", ["a", "x", "b", "y"] * 10)


def brute_force_cycle_components(nodes, edges):
    """Mutual-reachability oracle for cycle detection."""
    adjacency = {n: set() for n in nodes}
    for e in edges:
        adjacency[e.antecedent].add(e.consequent)

    def reachable(start):
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    reach = {n: reachable(n) for n in nodes}
    components = set()
    for n in nodes:
        members = frozenset(m for m in nodes if m in reach[n] and n in reach[m])
        if len(members) > 1:
            components.add(members)
    return components


class TestScanPair:
    def test_alternating_pair_is_perfect(self, alternating_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=3, max_width=2)
        found = scan_pair(alternating_doc, cfg, "a", "b")
        assert found is not None
        assert found.probability == 1.0
        assert (found.antecedent.width, found.consequent.width) == (1, 1)

    def test_absent_term_gives_none(self, alternating_doc):
        cfg = TopicConfig(keywords=("a", "zz"), topic_width=3, max_width=2)
        assert scan_pair(alternating_doc, cfg, "a", "zz") is None

    def test_same_term_rejected(self, alternating_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=3, max_width=2)
        with pytest.raises(ValueError):
            scan_pair(alternating_doc, cfg, "a", "a")

    def test_below_threshold_gives_none(self, d6):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=2, max_width=1, mu=0.0)
        assert scan_pair(d6, cfg, "a", "b") is None

    def test_deterministic(self, spaced_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3)
        assert scan_pair(spaced_doc, cfg, "a", "b") == scan_pair(spaced_doc, cfg, "a", "b")

    def test_probability_matches_oracle(self, spaced_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3, mu=0.0)
        found = scan_pair(spaced_doc, cfg, "a", "b")
        assert found is not None
        wa, wb = found.antecedent.width, found.consequent.width
        masked = MaskedDocument.full(spaced_doc)
        for eraser in (E("a", 4), E("b", wb), E("a", wa)):
            masked = naive_apply_oracle(eraser, masked)
        denominator = naive_apply_oracle(E("a", wa), MaskedDocument.full(spaced_doc)).norm
        assert found.probability == pytest.approx(masked.norm / denominator)


class TestBuildLattice:
    def test_alternating_both_edges(self, alternating_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=3, max_width=2)
        lattice = build_lattice(alternating_doc, cfg)
        measured = lattice.measured_edges()
        assert {(e.antecedent.term, e.consequent.term) for e in measured} == {("a", "b"), ("b", "a")}
        assert all(e.probability == 1.0 for e in measured)

    def test_single_keyword_empty(self, alternating_doc):
        cfg = TopicConfig(keywords=("a",), topic_width=3, max_width=2)
        lattice = build_lattice(alternating_doc, cfg)
        assert lattice.edges == ()
        assert lattice.nodes == ()
        assert lattice.anomalies == ()

    def test_width_axioms_and_emergent_cycle(self, spaced_doc):
        # both directions select asymmetric widths, so width axioms close a cycle
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3)
        lattice = build_lattice(spaced_doc, cfg)
        axioms = [e for e in lattice.edges if e.kind == WIDTH_AXIOM]
        assert axioms, "expected same-term width-axiom edges"
        for axiom in axioms:
            assert axiom.probability == 1.0
            assert axiom.antecedent.term == axiom.consequent.term
            assert axiom.antecedent.width > axiom.consequent.width
        assert lattice.anomalies, "expected the emergent ordering anomaly"
        members = {m for anomaly in lattice.anomalies for m in anomaly.members}
        assert {m.term for m in members} == {"a", "b"}

    def test_threshold_respected(self, spaced_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3, threshold=0.99)
        lattice = build_lattice(spaced_doc, cfg)
        assert all(e.probability >= 0.99 for e in lattice.measured_edges())


class TestDetectAnomalies:
    def test_two_cycle(self):
        nodes = (E("a", 1), E("b", 1))
        edges = (edge("a", 1, "b", 1, 0.9), edge("b", 1, "a", 1, 0.8))
        lattice = TopicLattice(nodes=nodes, edges=edges)
        anomalies = detect_anomalies(lattice)
        assert len(anomalies) == 1
        assert set(anomalies[0].members) == set(nodes)
        assert anomalies[0].weakest_edge.probability == 0.8

    def test_axiom_chain_is_acyclic(self):
        nodes = (E("a", 1), E("a", 2), E("a", 3))
        edges = (
            edge("a", 2, "a", 1, 1.0, WIDTH_AXIOM),
            edge("a", 3, "a", 1, 1.0, WIDTH_AXIOM),
            edge("a", 3, "a", 2, 1.0, WIDTH_AXIOM),
        )
        assert detect_anomalies(TopicLattice(nodes=nodes, edges=edges)) == ()

    def test_four_node_anomaly_shape(self):
        # two strong cross-term claims plus width axioms form a 4-cycle
        nodes = (E("sword", 2), E("sword", 3), E("hand", 2), E("hand", 3))
        edges = (
            edge("sword", 2, "hand", 3, 0.87),
            edge("hand", 2, "sword", 3, 0.96),
            edge("hand", 3, "hand", 2, 1.0, WIDTH_AXIOM),
            edge("sword", 3, "sword", 2, 1.0, WIDTH_AXIOM),
        )
        lattice = TopicLattice(nodes=nodes, edges=edges)
        anomalies = detect_anomalies(lattice)
        assert len(anomalies) == 1
        assert set(anomalies[0].members) == set(nodes)
        assert anomalies[0].weakest_edge.probability == 0.87

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(4021)
        for _ in range(150):
            size = rng.randint(2, 12)
            nodes = tuple(E(f"t{i}", 1) for i in range(size))
            edges = []
            for u in nodes:
                for v in nodes:
                    if u != v and rng.random() < 0.18:
                        edges.append(RelationEdge(u, v, round(rng.uniform(0.5, 1.0), 3)))
            lattice = TopicLattice(nodes=nodes, edges=tuple(edges))
            detected = {frozenset(a.members) for a in detect_anomalies(lattice)}
            assert detected == brute_force_cycle_components(nodes, edges)


class TestResolve:
    def _anomalous_lattice(self):
        nodes = (E("sword", 2), E("sword", 3), E("hand", 2), E("hand", 3))
        edges = (
            edge("sword", 2, "hand", 3, 0.87),
            edge("hand", 2, "sword", 3, 0.96),
            edge("hand", 3, "hand", 2, 1.0, WIDTH_AXIOM),
            edge("sword", 3, "sword", 2, 1.0, WIDTH_AXIOM),
        )
        return TopicLattice(nodes=nodes, edges=edges)

    def test_prune_min_drops_weakest_first(self):
        lattice = self._anomalous_lattice()
        resolved = resolve(lattice, "prune-min")
        dropped = set(lattice.edges) - set(resolved.edges)
        assert dropped == {edge("sword", 2, "hand", 3, 0.87)}
        assert topological_order(resolved)

    def test_collapse_single_class(self):
        lattice = self._anomalous_lattice()
        resolved = resolve(lattice, "collapse")
        assert resolved.edges == lattice.edges
        big = [group for group in resolved.classes if len(group) > 1]
        assert len(big) == 1 and set(big[0]) == set(lattice.nodes)
        assert topological_order(resolved) is not None

    def test_acyclic_input_unchanged(self):
        nodes = (E("a", 1), E("b", 1))
        edges = (edge("a", 1, "b", 1, 0.7),)
        lattice = TopicLattice(nodes=nodes, edges=edges)
        for strategy in ("prune-min", "collapse"):
            resolved = resolve(lattice, strategy)
            assert resolved.edges == edges
            assert resolved.is_resolved

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            resolve(TopicLattice(nodes=(), edges=()), "optimistic")

    def test_axiom_only_cycle_is_internal_error(self):
        # construct an impossible state: a cycle carried by axiom edges alone
        nodes = (E("a", 1), E("a", 2))
        edges = (
            RelationEdge(E("a", 2), E("a", 1), 1.0, WIDTH_AXIOM),
            RelationEdge(E("a", 1), E("a", 2), 1.0, WIDTH_AXIOM),
        )
        lattice = TopicLattice(nodes=nodes, edges=edges)
        with pytest.raises(RuntimeError):
            resolve(lattice, "prune-min")

    def test_random_graphs_resolve_acyclic(self):
        rng = random.Random(977)
        for _ in range(60):
            size = rng.randint(2, 10)
            nodes = tuple(E(f"t{i}", 1) for i in range(size))
            edges = tuple(
                RelationEdge(u, v, round(rng.uniform(0.5, 1.0), 3))
                for u in nodes
                for v in nodes
                if u != v and rng.random() < 0.25
            )
            lattice = TopicLattice(nodes=nodes, edges=edges)
            for strategy in ("prune-min", "collapse"):
                assert topological_order(resolve(lattice, strategy)) is not None


class TestSerialization:
    def test_json_round_trip(self, spaced_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3)
        lattice = build_lattice(spaced_doc, cfg)
        assert import_json(export_json(lattice)) == lattice
        resolved = resolve(lattice, "collapse")
        assert import_json(export_json(resolved)) == resolved

    def test_export_deterministic(self, spaced_doc):
        cfg = TopicConfig(keywords=("a", "b"), topic_width=4, max_width=3)
        first = export_json(build_lattice(spaced_doc, cfg))
        second = export_json(build_lattice(spaced_doc, cfg))
        assert first == second

    def test_empty_dot(self):
        text = export_dot(TopicLattice(nodes=(), edges=()))
        assert text.startswith("digraph") and text.endswith("}\n")

    def test_dot_contains_cycle_nodes(self):
        nodes = (E("a", 1), E("b", 1))
        edges = (edge("a", 1, "b", 1, 0.9), edge("b", 1, "a", 1, 0.8))
        text = export_dot(TopicLattice(nodes=nodes, edges=edges))
        assert '"E(a,1)" -> "E(b,1)" [label="0.90"];' in text
        assert '"E(b,1)" -> "E(a,1)" [label="0.80"];' in text

    def test_dot_clusters_collapsed_classes(self):
        nodes = (E("a", 1), E("b", 1))
        edges = (edge("a", 1, "b", 1, 0.9), edge("b", 1, "a", 1, 0.8))
        collapsed = resolve(TopicLattice(nodes=nodes, edges=edges), "collapse")
        text = export_dot(collapsed)
        assert 'subgraph "cluster_E(a,1)"' in text
        assert text.count("subgraph") == 1

    def test_render_table_cells(self, alternating_doc):
        cfg = TopicConfig(keywords=("a", "b", "zz"), topic_width=3, max_width=2)
        lattice = build_lattice(alternating_doc, cfg)
        table = render_table(lattice)
        assert "trivial" in table
        assert "P(1⊒1)=100%" in table
        lines = [line for line in table.splitlines() if line.startswith("zz")]
        assert lines and lines[0].count("-") == 2


class TestRelationEdge:
    def test_axiom_invariants(self):
        with pytest.raises(ValueError):
            RelationEdge(E("a", 2), E("a", 1), 0.9, WIDTH_AXIOM)
        with pytest.raises(ValueError):
            RelationEdge(E("a", 2), E("b", 1), 1.0, WIDTH_AXIOM)
        with pytest.raises(ValueError):
            RelationEdge(E("a", 2), E("b", 1), 1.5)
        with pytest.raises(ValueError):
            RelationEdge(E("a", 2), E("b", 1), 0.9, "guessed")

    def test_anomaly_round_trip(self):
        anomaly = Anomaly(
            members=(E("a", 1), E("b", 1)),
            weakest_edge=edge("a", 1, "b", 1, 0.8),
        )
        assert Anomaly.from_json(anomaly.to_json()) == anomaly


class TestTarjanInternals:
    def test_component_order_deterministic(self):
        nodes = tuple(E(f"t{i}", 1) for i in range(6))
        edges = (
            RelationEdge(nodes[0], nodes[1], 0.9),
            RelationEdge(nodes[1], nodes[0], 0.9),
            RelationEdge(nodes[3], nodes[4], 0.9),
            RelationEdge(nodes[4], nodes[3], 0.9),
        )
        components = _strongly_connected_components(nodes, edges)
        assert components == sorted(components)


class TestBuilder:
    def test_fit_exposes_lattice(self, alternating_doc):
        builder = TopicLatticeBuilder(keywords=("a", "b"), topic_width=3, max_width=2)
        fitted = builder.fit(alternating_doc)
        assert fitted is builder
        assert builder.lattice_.measured_edges()
        assert builder.anomalies_ == builder.lattice_.anomalies
        resolved = builder.resolve("collapse")
        assert resolved.is_resolved

    def test_resolve_requires_fit(self):
        with pytest.raises(NotFittedError):
            TopicLatticeBuilder(keywords=("a", "b"), topic_width=3, max_width=2).resolve()

    def test_sklearn_params(self):
        builder = TopicLatticeBuilder(keywords=("a", "b"), threshold=0.7)
        assert clone(builder).get_params()["threshold"] == 0.7
        builder.set_params(mu=2.0)
        assert builder.get_params()["mu"] == 2.0

    def test_config_validation(self, alternating_doc):
        with pytest.raises(ValueError):
            TopicLatticeBuilder(keywords=(), topic_width=3).fit(alternating_doc)
        with pytest.raises(ValueError):
            TopicLatticeBuilder(keywords=("a",), topic_width=3, max_width=3).fit(alternating_doc)
        with pytest.raises(ValueError):
            TopicLatticeBuilder(keywords=("a",), topic_width=3, max_width=2, threshold=1.5).fit(
                alternating_doc
            )
