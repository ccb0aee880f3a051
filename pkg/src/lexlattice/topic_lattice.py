"""Topic-specific relation lattices between term-window erasers.

A width-grid scan measures the topic conditional for every ordered keyword
pair and keeps one representative relation per pair (smallest combined
width above the acceptance threshold).  Measured relations are stored as
"antecedent above consequent" edges; width axioms (a wider eraser on the
same term is above a narrower one) complete the graph.  Cycles in the
resulting digraph are ordering anomalies; they are resolved either by
pruning the weakest measured edges or by collapsing each cycle into an
equivalence class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .conditional import Convention, SmoothingConfig, topic_subjunctive
from .corpus import Corpus, CorpusAverages, Document
from .eraser import SelectiveEraser

MEASURED = "measured"
WIDTH_AXIOM = "width-axiom"


@dataclass(frozen=True)
class TopicConfig:
    """Scan parameters for one topic-lattice run."""

    keywords: tuple[str, ...]
    topic_width: int = 10
    max_width: int = 8
    threshold: float = 0.5
    mu: float = 1.0
    convention: Convention = Convention.WRITTEN

    def __post_init__(self):
        object.__setattr__(self, "keywords", tuple(self.keywords))
        object.__setattr__(self, "convention", Convention(self.convention))
        if not self.keywords:
            raise ValueError("keywords must not be empty")
        if len(set(self.keywords)) != len(self.keywords):
            raise ValueError("keywords must be distinct")
        if not 1 <= self.max_width < self.topic_width:
            raise ValueError("require 1 <= max_width < topic_width")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.mu < 0:
            raise ValueError("mu must be >= 0")

    def to_json(self) -> dict:
        return {
            "keywords": list(self.keywords),
            "topic_width": self.topic_width,
            "max_width": self.max_width,
            "threshold": self.threshold,
            "mu": self.mu,
            "convention": self.convention.value,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TopicConfig":
        return cls(
            keywords=tuple(payload["keywords"]),
            topic_width=payload["topic_width"],
            max_width=payload["max_width"],
            threshold=payload["threshold"],
            mu=payload["mu"],
            convention=Convention(payload["convention"]),
        )


@dataclass(frozen=True)
class RelationEdge:
    """A directed order claim: the antecedent is above the consequent."""

    antecedent: SelectiveEraser
    consequent: SelectiveEraser
    probability: float
    kind: str = MEASURED

    def __post_init__(self):
        if self.kind not in (MEASURED, WIDTH_AXIOM):
            raise ValueError(f"unknown edge kind {self.kind!r}")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("edge probability must lie in [0, 1]")
        if self.kind == WIDTH_AXIOM:
            if self.probability != 1.0:
                raise ValueError("width-axiom edges must have probability 1")
            if self.antecedent.term != self.consequent.term:
                raise ValueError("width-axiom edges must connect erasers on the same term")

    def to_json(self) -> dict:
        return {
            "ante": {"term": self.antecedent.term, "width": self.antecedent.width},
            "cons": {"term": self.consequent.term, "width": self.consequent.width},
            "p": self.probability,
            "kind": self.kind,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "RelationEdge":
        return cls(
            antecedent=SelectiveEraser(payload["ante"]["term"], payload["ante"]["width"]),
            consequent=SelectiveEraser(payload["cons"]["term"], payload["cons"]["width"]),
            probability=payload["p"],
            kind=payload["kind"],
        )


@dataclass(frozen=True)
class Anomaly:
    """A strongly connected component of order claims, with its weakest edge."""

    members: tuple[SelectiveEraser, ...]
    weakest_edge: RelationEdge

    def to_json(self) -> dict:
        return {
            "members": [{"term": e.term, "width": e.width} for e in self.members],
            "weakest": self.weakest_edge.to_json(),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "Anomaly":
        return cls(
            members=tuple(SelectiveEraser(m["term"], m["width"]) for m in payload["members"]),
            weakest_edge=RelationEdge.from_json(payload["weakest"]),
        )


@dataclass(frozen=True)
class TopicLattice:
    """Measured relation graph between erasers, plus resolution artifacts."""

    nodes: tuple[SelectiveEraser, ...]
    edges: tuple[RelationEdge, ...]
    config: TopicConfig | None = None
    anomalies: tuple[Anomaly, ...] = ()
    classes: tuple[tuple[SelectiveEraser, ...], ...] = ()

    @property
    def is_resolved(self) -> bool:
        # an empty lattice has nothing to resolve
        return bool(self.classes) or not self.nodes

    def measured_edges(self) -> tuple[RelationEdge, ...]:
        return tuple(e for e in self.edges if e.kind == MEASURED)

    def class_of(self) -> dict[SelectiveEraser, SelectiveEraser]:
        """Map each node to its class representative (smallest member)."""
        rep: dict[SelectiveEraser, SelectiveEraser] = {n: n for n in self.nodes}
        for group in self.classes:
            leader = min(group)
            for member in group:
                rep[member] = leader
        return rep

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json() if self.config else None,
            "nodes": [{"term": n.term, "width": n.width} for n in self.nodes],
            "edges": [e.to_json() for e in self.edges],
            "anomalies": [a.to_json() for a in self.anomalies],
            "classes": [[{"term": e.term, "width": e.width} for e in group] for group in self.classes],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TopicLattice":
        return cls(
            nodes=tuple(SelectiveEraser(n["term"], n["width"]) for n in payload["nodes"]),
            edges=tuple(RelationEdge.from_json(e) for e in payload["edges"]),
            config=TopicConfig.from_json(payload["config"]) if payload.get("config") else None,
            anomalies=tuple(Anomaly.from_json(a) for a in payload.get("anomalies", ())),
            classes=tuple(
                tuple(SelectiveEraser(e["term"], e["width"]) for e in group)
                for group in payload.get("classes", ())
            ),
        )


def scan_pair(
    d: Document,
    cfg: TopicConfig,
    a: str,
    b: str,
    averages: CorpusAverages | None = None,
) -> RelationEdge | None:
    """Representative relation between two keywords, or None.

    Evaluates the topic conditional over the full width grid and keeps, among
    the cells whose defined probability reaches the threshold, the one with
    the smallest combined width; ties prefer higher probability, then a
    smaller antecedent width.  Terms absent from the vocabulary yield None.
    """
    if a == b:
        raise ValueError("scan_pair requires two distinct terms")
    if a not in d.vocabulary or b not in d.vocabulary:
        return None
    if averages is None:
        averages = CorpusAverages(Corpus([d]))
    smoothing = SmoothingConfig(cfg.mu, averages) if cfg.mu > 0 else None
    cache = averages.chain_cache(d)
    best = None
    for wa in range(1, cfg.max_width + 1):
        for wb in range(1, cfg.max_width + 1):
            result = topic_subjunctive(
                d,
                SelectiveEraser(a, wa),
                SelectiveEraser(b, wb),
                cfg.topic_width,
                smoothing,
                cfg.convention,
                cache=cache,
            )
            if result.value is None or result.value < cfg.threshold:
                continue
            rank = (wa + wb, -result.value, wa)
            if best is None or rank < best[0]:
                best = (rank, wa, wb, result.value)
    if best is None:
        return None
    _, wa, wb, probability = best
    return RelationEdge(
        antecedent=SelectiveEraser(a, wa),
        consequent=SelectiveEraser(b, wb),
        probability=probability,
        kind=MEASURED,
    )


def build_lattice(
    d: Document,
    cfg: TopicConfig,
    averages: CorpusAverages | None = None,
) -> TopicLattice:
    """Scan all ordered keyword pairs and assemble the relation graph.

    Nodes are the erasers appearing in measured relations; width-axiom edges
    are added between every same-term node pair, wider above narrower.
    """
    if averages is None:
        averages = CorpusAverages(Corpus([d]))
    measured = []
    for a in cfg.keywords:
        for b in cfg.keywords:
            if a == b:
                continue
            edge = scan_pair(d, cfg, a, b, averages=averages)
            if edge is not None:
                measured.append(edge)
    nodes = sorted({e.antecedent for e in measured} | {e.consequent for e in measured})
    axioms = []
    for i, narrow in enumerate(nodes):
        for wide in nodes[i + 1 :]:
            if narrow.term == wide.term and narrow.width < wide.width:
                axioms.append(
                    RelationEdge(
                        antecedent=wide,
                        consequent=narrow,
                        probability=1.0,
                        kind=WIDTH_AXIOM,
                    )
                )
    edges = tuple(sorted(measured + axioms, key=lambda e: (e.antecedent, e.consequent, e.kind)))
    lattice = TopicLattice(nodes=tuple(nodes), edges=edges, config=cfg)
    return replace(lattice, anomalies=detect_anomalies(lattice))


def _strongly_connected_components(
    nodes: Sequence[SelectiveEraser],
    edges: Sequence[RelationEdge],
) -> list[tuple[SelectiveEraser, ...]]:
    """Tarjan's algorithm, iterative, deterministic component order."""
    order = sorted(nodes)
    adjacency: dict[SelectiveEraser, list[SelectiveEraser]] = {n: [] for n in order}
    for edge in edges:
        adjacency[edge.antecedent].append(edge.consequent)
    for vs in adjacency.values():
        vs.sort()

    index: dict[SelectiveEraser, int] = {}
    lowlink: dict[SelectiveEraser, int] = {}
    on_stack: set[SelectiveEraser] = set()
    stack: list[SelectiveEraser] = []
    counter = 0
    components: list[tuple[SelectiveEraser, ...]] = []

    for root in order:
        if root in index:
            continue
        work = [(root, iter(adjacency[root]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, successors = work[-1]
            advanced = False
            for succ in successors:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(adjacency[succ])))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(tuple(sorted(component)))
    return sorted(components)


def detect_anomalies(lattice: TopicLattice) -> tuple[Anomaly, ...]:
    """Strongly connected components of size above one, as order anomalies."""
    anomalies = []
    for component in _strongly_connected_components(lattice.nodes, lattice.edges):
        if len(component) < 2:
            continue
        members = set(component)
        internal = [
            e for e in lattice.edges if e.antecedent in members and e.consequent in members
        ]
        weakest = min(
            internal, key=lambda e: (e.probability, e.antecedent, e.consequent)
        )
        anomalies.append(Anomaly(members=component, weakest_edge=weakest))
    return tuple(anomalies)


def resolve(lattice: TopicLattice, strategy: str = "prune-min") -> TopicLattice:
    """Repair ordering anomalies.

    ``prune-min`` repeatedly deletes the lowest-probability measured edge
    inside any cycle until the graph is acyclic (width-axiom edges are never
    deleted); ``collapse`` merges every cycle into an equivalence class.
    Either way the class-level relation becomes a strict partial order.
    """
    if strategy == "prune-min":
        edges = list(lattice.edges)
        while True:
            cyclic = [
                set(c)
                for c in _strongly_connected_components(lattice.nodes, edges)
                if len(c) > 1
            ]
            if not cyclic:
                break
            candidates = [
                e
                for e in edges
                if e.kind == MEASURED
                and any(e.antecedent in c and e.consequent in c for c in cyclic)
            ]
            if not candidates:
                raise RuntimeError(
                    "anomalous cycle consists of width-axiom edges only; this indicates a bug"
                )
            drop = min(candidates, key=lambda e: (e.probability, e.antecedent, e.consequent))
            edges.remove(drop)
        classes = tuple((n,) for n in lattice.nodes)
        return replace(lattice, edges=tuple(edges), classes=classes)
    if strategy == "collapse":
        components = _strongly_connected_components(lattice.nodes, lattice.edges)
        return replace(lattice, classes=tuple(components))
    raise ValueError(f"unknown resolution strategy {strategy!r}")


def topological_order(lattice: TopicLattice) -> list[SelectiveEraser]:
    """Topological sort of class representatives; raises on a cycle."""
    rep = lattice.class_of()
    nodes = sorted(set(rep.values()))
    successors: dict[SelectiveEraser, set[SelectiveEraser]] = {n: set() for n in nodes}
    indegree = {n: 0 for n in nodes}
    for edge in lattice.edges:
        u, v = rep[edge.antecedent], rep[edge.consequent]
        if u == v or v in successors[u]:
            continue
        successors[u].add(v)
        indegree[v] += 1
    ready = sorted(n for n in nodes if indegree[n] == 0)
    out: list[SelectiveEraser] = []
    while ready:
        node = ready.pop(0)
        out.append(node)
        for succ in sorted(successors[node]):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(succ)
        ready.sort()
    if len(out) != len(nodes):
        raise ValueError("relation graph contains a cycle")
    return out


def export_json(lattice: TopicLattice) -> str:
    """Deterministic JSON rendering (sorted keys, stable node order)."""
    return json.dumps(lattice.to_json(), sort_keys=True, indent=2) + "\n"


def import_json(text: str) -> TopicLattice:
    return TopicLattice.from_json(json.loads(text))


def export_dot(lattice: TopicLattice) -> str:
    """GraphViz rendering; measured edges carry their probability as label."""
    lines = ["digraph topic_lattice {"]
    rep = lattice.class_of()
    for group in sorted(g for g in lattice.classes if len(g) > 1):
        leader = min(group)
        lines.append(f'  subgraph "cluster_{leader.key()}" {{')
        lines.append("    style=dashed;")
        for member in sorted(group):
            lines.append(f'    "{member.key()}";')
        lines.append("  }")
    for node in sorted(lattice.nodes):
        lines.append(f'  "{node.key()}" [shape=box];')
    for edge in sorted(
        lattice.edges, key=lambda e: (e.antecedent, e.consequent, e.kind)
    ):
        if edge.kind == WIDTH_AXIOM:
            style = ' [style=dashed, label="axiom"]'
        else:
            style = f' [label="{edge.probability:.2f}"]'
        lines.append(f'  "{edge.antecedent.key()}" -> "{edge.consequent.key()}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_table(lattice: TopicLattice, cfg: TopicConfig | None = None) -> str:
    """Keyword-by-keyword grid with cells "P(w1⊒w2)=NN%", "-" or "trivial"."""
    config = cfg or lattice.config
    if config is None:
        raise ValueError("a topic configuration is required to render the table")
    keywords = config.keywords
    cells = {}
    for edge in lattice.measured_edges():
        cells[(edge.antecedent.term, edge.consequent.term)] = (
            f"P({edge.antecedent.width}⊒{edge.consequent.width})"
            f"={round(edge.probability * 100)}%"
        )
    rows = []
    header = [""] + list(keywords)
    table = [header]
    for a in keywords:
        row = [a]
        for b in keywords:
            if a == b:
                row.append("trivial")
            else:
                row.append(cells.get((a, b), "-"))
        table.append(row)
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for r in table:
        rows.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())
    return "\n".join(rows) + "\n"


class TopicLatticeBuilder(BaseEstimator):
    """Estimator front for the lattice scan.

    Parameters mirror `TopicConfig`; `fit` runs the scan on one document and
    exposes the result as ``lattice_`` and ``anomalies_``.
    """

    def __init__(
        self,
        keywords: Sequence[str] = (),
        topic_width: int = 10,
        max_width: int = 8,
        threshold: float = 0.5,
        mu: float = 1.0,
        convention: str = "written",
    ):
        self.keywords = keywords
        self.topic_width = topic_width
        self.max_width = max_width
        self.threshold = threshold
        self.mu = mu
        self.convention = convention

    def _config(self) -> TopicConfig:
        return TopicConfig(
            keywords=tuple(self.keywords),
            topic_width=self.topic_width,
            max_width=self.max_width,
            threshold=self.threshold,
            mu=self.mu,
            convention=Convention(self.convention),
        )

    def fit(self, X: Document, y=None):
        config = self._config()
        self.lattice_ = build_lattice(X, config)
        self.anomalies_ = self.lattice_.anomalies
        return self

    def resolve(self, strategy: str = "prune-min") -> TopicLattice:
        if not hasattr(self, "lattice_"):
            raise NotFittedError("TopicLatticeBuilder must be fitted before calling resolve")
        return resolve(self.lattice_, strategy)
