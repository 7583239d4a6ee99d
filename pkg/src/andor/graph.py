"""Data model and core operations for explicit weighted AND/OR graphs.

Nodes are AND (all children required), OR (exactly one child chosen) or
TERMINAL (no children).  Both nodes and edges carry non-negative integer
costs.  Graphs are immutable after construction; every operation here is a
pure function of its inputs.

Internally node and edge ids are dense integer indices.  External string
ids (used by the file format) are kept in optional side arrays and
generated on demand for graphs built programmatically.

Maximisation is handled by negating all costs at construction time and
running the minimisation machinery; `external_cost` converts back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

MIN = "min"
MAX = "max"


class Kind(IntEnum):
    AND = 0
    OR = 1
    TERMINAL = 2


KIND_NAMES = {Kind.AND: "and", Kind.OR: "or", Kind.TERMINAL: "terminal"}
KIND_FROM_NAME = {v: int(k) for k, v in KIND_NAMES.items()}


class GraphError(Exception):
    """Base error for graph construction and conversion failures."""


class GraphFormatError(GraphError):
    """Raised for unparseable or inconsistent graph files."""


class CycleError(GraphError):
    """Raised when a topological pass meets a cycle."""


class MalformedSolutionError(GraphError):
    """Raised when an alleged solution violates the solution-graph rules."""


class ReplicaCapError(GraphError):
    """Raised when DAG-to-tree expansion exceeds its node budget."""


def _auto_names(prefix: str, count: int) -> list[str]:
    width = max(1, len(str(count - 1)) if count else 1)
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


@dataclass(eq=False, repr=False)
class AndOrGraph:
    """Explicit AND/OR graph over dense integer node/edge indices.

    `kinds`, `node_costs` are indexed by node; `edge_src`, `edge_dst`,
    `edge_costs` by edge.  After construction edges are grouped by source
    node and `out_start` gives CSR-style slices: the out-edges of node `v`
    are the edge indices `range(out_start[v], out_start[v + 1])`.

    `children_first` asserts that every edge points from a higher node
    index to a lower one, i.e. index order is already a reverse
    topological order.  Generators that build graphs bottom-up set it to
    skip the explicit sort.
    """

    kinds: list[int]
    node_costs: list[int]
    edge_src: list[int]
    edge_dst: list[int]
    edge_costs: list[int]
    root: int
    objective: str = MIN
    node_names: list[str] | None = None
    edge_names: list[str] | None = None
    meta: dict | None = None
    children_first: bool = False

    out_start: list[int] = field(init=False)

    def __post_init__(self) -> None:
        if self.objective not in (MIN, MAX):
            raise GraphFormatError(f"unknown objective: {self.objective!r}")
        n, m = len(self.kinds), len(self.edge_src)
        if not (0 <= self.root < n):
            raise GraphFormatError(f"root index {self.root} out of range")
        for arr, label, size in (
            (self.node_costs, "node_costs", n),
            (self.edge_dst, "edge_dst", m),
            (self.edge_costs, "edge_costs", m),
        ):
            if len(arr) != size:
                raise GraphFormatError(f"{label} length mismatch")
        self._group_edges()
        if self.objective == MAX:
            self._eff_node_costs = [-c for c in self.node_costs]
            self._eff_edge_costs = [-c for c in self.edge_costs]
        else:
            self._eff_node_costs = self.node_costs
            self._eff_edge_costs = self.edge_costs
        self._node_index_map: dict[str, int] | None = None
        self._edge_index_map: dict[str, int] | None = None
        self._topo_pos: list[int] | None = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_records(
        cls,
        *,
        objective: str,
        root: str,
        nodes: Iterable[tuple[str, str | Kind, int]],
        edges: Iterable[tuple[str, str, str, int]],
        meta: dict | None = None,
    ) -> "AndOrGraph":
        """Build a graph from name-keyed records (the file format's shape)."""
        node_names: list[str] = []
        kinds: list[int] = []
        node_costs: list[int] = []
        index: dict[str, int] = {}
        for name, kind, cost in nodes:
            if name in index:
                raise GraphFormatError(f"duplicate node id: {name!r}")
            index[name] = len(node_names)
            node_names.append(name)
            if isinstance(kind, str):
                if kind not in KIND_FROM_NAME:
                    raise GraphFormatError(f"unknown node kind: {kind!r}")
                kinds.append(KIND_FROM_NAME[kind])
            else:
                kinds.append(int(kind))
            node_costs.append(int(cost))
        edge_names: list[str] = []
        edge_src: list[int] = []
        edge_dst: list[int] = []
        edge_costs: list[int] = []
        seen_edges: set[str] = set()
        for name, src, dst, cost in edges:
            if name in seen_edges:
                raise GraphFormatError(f"duplicate edge id: {name!r}")
            seen_edges.add(name)
            if src not in index:
                raise GraphFormatError(f"edge {name!r}: unknown src {src!r}")
            if dst not in index:
                raise GraphFormatError(f"edge {name!r}: unknown dst {dst!r}")
            edge_names.append(name)
            edge_src.append(index[src])
            edge_dst.append(index[dst])
            edge_costs.append(int(cost))
        if root not in index:
            raise GraphFormatError(f"unknown root id: {root!r}")
        return cls(
            kinds=kinds,
            node_costs=node_costs,
            edge_src=edge_src,
            edge_dst=edge_dst,
            edge_costs=edge_costs,
            root=index[root],
            objective=objective,
            node_names=node_names,
            edge_names=edge_names,
            meta=meta,
        )

    def _group_edges(self) -> None:
        """Reorder edge arrays so edges of one source node are contiguous."""
        n, m = len(self.kinds), len(self.edge_src)
        src = self.edge_src
        grouped = all(src[i] <= src[i + 1] for i in range(m - 1))
        if not grouped:
            counts = [0] * (n + 1)
            for s in src:
                counts[s + 1] += 1
            for v in range(n):
                counts[v + 1] += counts[v]
            perm = [0] * m
            fill = counts[:]
            for i, s in enumerate(src):
                perm[fill[s]] = i
                fill[s] += 1
            self.edge_src = [src[i] for i in perm]
            self.edge_dst = [self.edge_dst[i] for i in perm]
            self.edge_costs = [self.edge_costs[i] for i in perm]
            if self.edge_names is not None:
                self.edge_names = [self.edge_names[i] for i in perm]
        out_start = [0] * (n + 1)
        for s in self.edge_src:
            out_start[s + 1] += 1
        for v in range(n):
            out_start[v + 1] += out_start[v]
        self.out_start = out_start

    # -- basic accessors -----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.kinds)

    @property
    def n_edges(self) -> int:
        return len(self.edge_src)

    def out_edges(self, v: int) -> range:
        return range(self.out_start[v], self.out_start[v + 1])

    def node_name(self, v: int) -> str:
        if self.node_names is not None:
            return self.node_names[v]
        width = max(1, len(str(self.n_nodes - 1)))
        return f"n{v:0{width}d}"

    def edge_name(self, e: int) -> str:
        if self.edge_names is not None:
            return self.edge_names[e]
        width = max(1, len(str(self.n_edges - 1)))
        return f"e{e:0{width}d}"

    def node_index(self, name: str) -> int:
        if self._node_index_map is None:
            self._node_index_map = {
                self.node_name(v): v for v in range(self.n_nodes)
            }
        return self._node_index_map[name]

    def edge_index(self, name: str) -> int:
        if self._edge_index_map is None:
            self._edge_index_map = {
                self.edge_name(e): e for e in range(self.n_edges)
            }
        return self._edge_index_map[name]

    @property
    def eff_node_costs(self) -> list[int]:
        """Node costs oriented for minimisation (negated under MAX)."""
        return self._eff_node_costs

    @property
    def eff_edge_costs(self) -> list[int]:
        return self._eff_edge_costs

    def external_cost(self, internal: int) -> int:
        return -internal if self.objective == MAX else internal

    def in_degrees(self) -> list[int]:
        deg = [0] * self.n_nodes
        for d in self.edge_dst:
            deg[d] += 1
        return deg

    def is_tree(self) -> bool:
        deg = self.in_degrees()
        if deg[self.root] != 0:
            return False
        return all(deg[v] == 1 for v in range(self.n_nodes) if v != self.root)

    # -- topological machinery -----------------------------------------------

    def topo_order(self) -> list[int]:
        """Node indices with every parent before its children."""
        if self.children_first:
            return list(range(self.n_nodes - 1, -1, -1))
        indeg = self.in_degrees()
        stack = [v for v in range(self.n_nodes) if indeg[v] == 0]
        order: list[int] = []
        dst = self.edge_dst
        while stack:
            v = stack.pop()
            order.append(v)
            for i in self.out_edges(v):
                d = dst[i]
                indeg[d] -= 1
                if indeg[d] == 0:
                    stack.append(d)
        if len(order) != self.n_nodes:
            raise CycleError("graph contains a cycle")
        return order

    def reverse_topo_order(self) -> list[int]:
        if self.children_first:
            return list(range(self.n_nodes))
        order = self.topo_order()
        order.reverse()
        return order

    def topo_positions(self) -> list[int]:
        """Position of each node in a root-first topological order."""
        if self._topo_pos is None:
            n = self.n_nodes
            if self.children_first:
                self._topo_pos = list(range(n - 1, -1, -1))
            else:
                pos = [0] * n
                for p, v in enumerate(self.topo_order()):
                    pos[v] = p
                self._topo_pos = pos
        return self._topo_pos

    def __repr__(self) -> str:  # keep million-node graphs printable
        return (
            f"AndOrGraph(nodes={self.n_nodes}, edges={self.n_edges}, "
            f"objective={self.objective!r}, root={self.node_name(self.root)!r})"
        )


# -- validation ---------------------------------------------------------------


def validate(graph: AndOrGraph, expect_tree: bool = False) -> list[str]:
    """Check every structural invariant; return diagnostics (empty iff valid).

    Diagnostics name the offending node or edge by its external id.
    """
    diags: list[str] = []
    n = graph.n_nodes
    for v in range(n):
        if graph.node_costs[v] < 0:
            diags.append(f"negative node cost at node {graph.node_name(v)!r}")
        has_out = graph.out_start[v] != graph.out_start[v + 1]
        kind = graph.kinds[v]
        if kind == Kind.TERMINAL and has_out:
            diags.append(
                f"terminal with outgoing edges: node {graph.node_name(v)!r}"
            )
        if kind != Kind.TERMINAL and not has_out:
            diags.append(
                f"non-terminal without successors: node {graph.node_name(v)!r}"
            )
    for e in range(graph.n_edges):
        if graph.edge_costs[e] < 0:
            diags.append(f"negative edge cost at edge {graph.edge_name(e)!r}")
        if graph.edge_src[e] == graph.edge_dst[e]:
            diags.append(f"self loop at edge {graph.edge_name(e)!r}")
    try:
        graph.topo_order()
    except CycleError:
        on_cycle = _cycle_witness(graph)
        diags.append(f"cycle detected involving node {graph.node_name(on_cycle)!r}")
        return diags
    reached = reachable_from(graph, graph.root)
    for v in range(n):
        if v not in reached:
            diags.append(f"unreachable node: {graph.node_name(v)!r}")
    if expect_tree:
        deg = graph.in_degrees()
        if deg[graph.root] != 0:
            diags.append(
                f"tree root has incoming edges: node {graph.node_name(graph.root)!r}"
            )
        for v in range(n):
            if v != graph.root and deg[v] > 1:
                diags.append(
                    f"in-degree above 1 in tree: node {graph.node_name(v)!r}"
                )
    return diags


def _cycle_witness(graph: AndOrGraph) -> int:
    """Some node left unsorted by Kahn's algorithm, i.e. on or behind a cycle."""
    indeg = graph.in_degrees()
    stack = [v for v in range(graph.n_nodes) if indeg[v] == 0]
    seen = 0
    popped = [False] * graph.n_nodes
    while stack:
        v = stack.pop()
        popped[v] = True
        seen += 1
        for i in graph.out_edges(v):
            d = graph.edge_dst[i]
            indeg[d] -= 1
            if indeg[d] == 0:
                stack.append(d)
    for v in range(graph.n_nodes):
        if not popped[v]:
            return v
    raise AssertionError("no cycle witness in acyclic graph")


def reachable_from(graph: AndOrGraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    dst = graph.edge_dst
    while stack:
        v = stack.pop()
        for i in graph.out_edges(v):
            d = dst[i]
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return seen


# -- optimal solution ----------------------------------------------------------


@dataclass
class OptTable:
    """Per-node optimal cost and, for OR nodes, the chosen out-edge.

    Costs are internal (minimisation-oriented); ties at OR nodes break by
    smallest aggregated cost, then smallest destination index, then
    smallest edge index, so two runs over one graph always agree.
    """

    cost: list[int]
    choice: list[int]  # edge index per OR node, -1 elsewhere

    def root_cost(self, graph: AndOrGraph) -> int:
        return graph.external_cost(self.cost[graph.root])


def compute_optimal(graph: AndOrGraph) -> OptTable:
    """Bottom-up optimal cost per node."""
    n = graph.n_nodes
    kinds = graph.kinds
    ncost = graph.eff_node_costs
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    out_start = graph.out_start
    cost = [0] * n
    choice = [-1] * n
    OR = int(Kind.OR)
    for v in graph.reverse_topo_order():
        s = out_start[v]
        e = out_start[v + 1]
        if s == e:
            cost[v] = ncost[v]
        elif kinds[v] == OR:
            best = s
            best_agg = ecost[s] + cost[dst[s]]
            for i in range(s + 1, e):
                agg = ecost[i] + cost[dst[i]]
                if agg < best_agg or (agg == best_agg and dst[i] < dst[best]):
                    best = i
                    best_agg = agg
            cost[v] = ncost[v] + best_agg
            choice[v] = best
        else:
            total = ncost[v]
            for i in range(s, e):
                total += ecost[i] + cost[dst[i]]
            cost[v] = total
    return OptTable(cost=cost, choice=choice)


def aggregated_cost(graph: AndOrGraph, opt: OptTable, edge: int) -> int:
    """Edge cost plus optimal cost of the edge's destination (internal)."""
    return graph.eff_edge_costs[edge] + opt.cost[graph.edge_dst[edge]]


# -- explicit solutions --------------------------------------------------------


@dataclass(frozen=True)
class ExplicitSolution:
    """A materialised solution subgraph.

    `nodes` and `edges` are sorted index tuples; `participation` counts the
    distinct root-to-node paths inside the solution; `choices` maps each
    included OR node to its chosen out-edge; `cost` is the external-facing
    total (negated back under MAX objectives).
    """

    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    participation: Mapping[int, int]
    choices: Mapping[int, int]
    cost: int

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)


def materialize_solution(
    graph: AndOrGraph, choices: Mapping[int, int]
) -> ExplicitSolution:
    """Build the solution induced by per-OR-node edge choices.

    Only choices at OR nodes actually reached from the root matter; the
    map may mention other nodes.
    """
    OR = int(Kind.OR)
    nodes: set[int] = {graph.root}
    edges: list[int] = []
    stack = [graph.root]
    dst = graph.edge_dst
    while stack:
        v = stack.pop()
        s, e = graph.out_start[v], graph.out_start[v + 1]
        if s == e:
            continue
        if graph.kinds[v] == OR:
            if v not in choices:
                raise MalformedSolutionError(
                    f"no choice given for OR node {graph.node_name(v)!r}"
                )
            chosen = choices[v]
            if not (s <= chosen < e):
                raise MalformedSolutionError(
                    f"choice at node {graph.node_name(v)!r} is not one of its edges"
                )
            picked = [chosen]
        else:
            picked = list(range(s, e))
        for i in picked:
            edges.append(i)
            d = dst[i]
            if d not in nodes:
                nodes.add(d)
                stack.append(d)
    edges_t = tuple(sorted(set(edges)))
    nodes_t = tuple(sorted(nodes))
    part = _participation(graph, nodes_t, edges_t)
    cost = _solution_cost_internal(graph, nodes_t, edges_t)
    used_choices = {
        graph.edge_src[i]: i for i in edges_t if graph.kinds[graph.edge_src[i]] == OR
    }
    return ExplicitSolution(
        nodes=nodes_t,
        edges=edges_t,
        participation=part,
        choices=used_choices,
        cost=graph.external_cost(cost),
    )


def solution_from_edges(
    graph: AndOrGraph, edges: Iterable[int]
) -> ExplicitSolution:
    """Build and fully check a solution from an edge set (the strict path)."""
    edge_list = sorted(set(edges))
    check_solution_shape(graph, edge_list)
    nodes = {graph.root}
    for i in edge_list:
        nodes.add(graph.edge_src[i])
        nodes.add(graph.edge_dst[i])
    nodes_t = tuple(sorted(nodes))
    edges_t = tuple(edge_list)
    part = _participation(graph, nodes_t, edges_t)
    cost = _solution_cost_internal(graph, nodes_t, edges_t)
    used_choices = {
        graph.edge_src[i]: i for i in edges_t if graph.kinds[graph.edge_src[i]] == OR
    }
    return ExplicitSolution(
        nodes=nodes_t,
        edges=edges_t,
        participation=part,
        choices=used_choices,
        cost=graph.external_cost(cost),
    )


def check_solution_shape(graph: AndOrGraph, edges: Sequence[int]) -> None:
    """Raise MalformedSolutionError unless `edges` forms a solution graph.

    Rules checked: the root is included; each included OR node contributes
    exactly one of its out-edges; each included AND node contributes all of
    them; terminals contribute none; every included node is reachable from
    the root inside the solution.
    """
    edge_set = set(edges)
    by_src: dict[int, list[int]] = {}
    nodes = {graph.root}
    for i in edge_set:
        by_src.setdefault(graph.edge_src[i], []).append(i)
        nodes.add(graph.edge_src[i])
        nodes.add(graph.edge_dst[i])
    for v in nodes:
        kind = graph.kinds[v]
        picked = by_src.get(v, [])
        total = graph.out_start[v + 1] - graph.out_start[v]
        if kind == Kind.TERMINAL:
            if picked:
                raise MalformedSolutionError(
                    f"terminal node {graph.node_name(v)!r} has outgoing solution edges"
                )
        elif kind == Kind.OR:
            if len(picked) != 1:
                raise MalformedSolutionError(
                    f"OR node {graph.node_name(v)!r} contributes {len(picked)} edges"
                )
        else:
            if len(picked) != total:
                raise MalformedSolutionError(
                    f"AND node {graph.node_name(v)!r} is missing successor edges"
                )
    seen = {graph.root}
    stack = [graph.root]
    while stack:
        v = stack.pop()
        for i in by_src.get(v, []):
            d = graph.edge_dst[i]
            if d not in seen:
                seen.add(d)
                stack.append(d)
    for v in nodes:
        if v not in seen:
            raise MalformedSolutionError(
                f"node {graph.node_name(v)!r} is not reachable from the root "
                "inside the solution"
            )


def _participation(
    graph: AndOrGraph, nodes: Sequence[int], edges: Sequence[int]
) -> dict[int, int]:
    pos = graph.topo_positions()
    part = {v: 0 for v in nodes}
    part[graph.root] = 1
    by_src: dict[int, list[int]] = {}
    for i in edges:
        by_src.setdefault(graph.edge_src[i], []).append(i)
    for v in sorted(nodes, key=lambda v: pos[v]):
        p = part[v]
        for i in by_src.get(v, []):
            part[graph.edge_dst[i]] += p
    return part


def _solution_cost_internal(
    graph: AndOrGraph, nodes: Sequence[int], edges: Sequence[int]
) -> int:
    """Per-node cost recursion, memoised: each node is evaluated once.

    Under the recursion a shared node's value is referenced once per
    incoming solution edge, so on DAGs its cost contributes once per
    root-to-node path without any explicit multiplication.
    """
    pos = graph.topo_positions()
    by_src: dict[int, list[int]] = {}
    for i in edges:
        by_src.setdefault(graph.edge_src[i], []).append(i)
    ncost = graph.eff_node_costs
    ecost = graph.eff_edge_costs
    value: dict[int, int] = {}
    for v in sorted(nodes, key=lambda v: pos[v], reverse=True):
        total = ncost[v]
        for i in by_src.get(v, []):
            total += ecost[i] + value[graph.edge_dst[i]]
        value[v] = total
    return value[graph.root]


def evaluate_solution_cost(graph: AndOrGraph, solution: ExplicitSolution) -> int:
    """Recompute a solution's cost from scratch (external-facing)."""
    check_solution_shape(graph, solution.edges)
    internal = _solution_cost_internal(graph, solution.nodes, solution.edges)
    return graph.external_cost(internal)


def participation_counts(
    graph: AndOrGraph, solution: ExplicitSolution
) -> dict[int, int]:
    """Distinct root-to-node path counts within the solution subgraph."""
    return _participation(graph, solution.nodes, solution.edges)


def extract_optimal_solution(
    graph: AndOrGraph, opt: OptTable
) -> ExplicitSolution:
    """Materialise the optimal solution recorded in an OptTable."""
    choices = {
        v: opt.choice[v]
        for v in range(graph.n_nodes)
        if graph.kinds[v] == Kind.OR and opt.choice[v] >= 0
    }
    return materialize_solution(graph, choices)


# -- DAG to tree expansion ------------------------------------------------------

DEFAULT_REPLICA_CAP = 1_000_000


def convert_dag_to_tree(
    graph: AndOrGraph, cap: int = DEFAULT_REPLICA_CAP
) -> AndOrGraph:
    """Expand shared subgraphs so every node has in-degree at most one.

    Nodes are visited leaves-first; whenever a node still has more than one
    incoming edge, the subtree below it is replicated once per extra edge
    and that edge retargeted to the fresh copy.  The solutions of the
    result are exactly the input's solutions under per-occurrence (tree)
    semantics.  Raises ReplicaCapError when the output would exceed `cap`
    nodes.
    """
    if graph.is_tree():
        return graph
    # mutable working copy keyed by integer handles
    kinds: list[int] = list(graph.kinds)
    ncost: list[int] = list(graph.node_costs)
    names: list[str] = [graph.node_name(v) for v in range(graph.n_nodes)]
    copies: list[int] = [1] * graph.n_nodes  # replicas made of each original
    children: list[list[tuple[int, int, str]]] = [
        [
            (graph.edge_dst[i], graph.edge_costs[i], graph.edge_name(i))
            for i in graph.out_edges(v)
        ]
        for v in range(graph.n_nodes)
    ]
    parents: list[list[tuple[int, int]]] = [[] for _ in range(graph.n_nodes)]
    for v in range(graph.n_nodes):
        for slot, (d, _c, _n) in enumerate(children[v]):
            parents[d].append((v, slot))

    _origin: dict[int, int] = {}

    def copy_subtree(v: int) -> int:
        if len(kinds) >= cap:
            raise ReplicaCapError(
                f"tree expansion exceeds the {cap}-node replica budget"
            )
        original = _origin.get(v, v)
        copies[original] += 1
        serial = copies[original]
        new = len(kinds)
        kinds.append(kinds[v])
        ncost.append(ncost[v])
        names.append(f"{names[original]}~{serial}")
        _origin[new] = original
        children.append([])
        parents.append([])
        for d, c, en in children[v]:
            nd = copy_subtree(d)
            slot = len(children[new])
            children[new].append((nd, c, f"{en}~{serial}"))
            parents[nd].append((new, slot))
        return new
    for v in graph.reverse_topo_order():
        incoming = parents[v]
        if len(incoming) <= 1:
            continue
        for parent, slot in incoming[1:]:
            replica = copy_subtree(v)
            d, c, en = children[parent][slot]
            children[parent][slot] = (replica, c, en)
            parents[replica].append((parent, slot))
        parents[v] = incoming[:1]

    total = len(kinds)
    if total > cap:
        raise ReplicaCapError(
            f"tree expansion exceeds the {cap}-node replica budget"
        )
    edge_src: list[int] = []
    edge_dst: list[int] = []
    edge_costs: list[int] = []
    edge_names: list[str] = []
    for v in range(total):
        for d, c, en in children[v]:
            edge_src.append(v)
            edge_dst.append(d)
            edge_costs.append(c)
            edge_names.append(en)
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=edge_src,
        edge_dst=edge_dst,
        edge_costs=edge_costs,
        root=graph.root,
        objective=graph.objective,
        node_names=names,
        edge_names=edge_names,
        meta=graph.meta,
    )


# -- file format ----------------------------------------------------------------


def dumps(graph: AndOrGraph) -> str:
    """Canonical text form: nodes and edges sorted by id, stable key order."""
    nodes = sorted(
        (
            {
                "id": graph.node_name(v),
                "kind": KIND_NAMES[Kind(graph.kinds[v])],
                "cost": graph.node_costs[v],
            }
            for v in range(graph.n_nodes)
        ),
        key=lambda r: r["id"],
    )
    edges = sorted(
        (
            {
                "id": graph.edge_name(e),
                "src": graph.node_name(graph.edge_src[e]),
                "dst": graph.node_name(graph.edge_dst[e]),
                "cost": graph.edge_costs[e],
            }
            for e in range(graph.n_edges)
        ),
        key=lambda r: r["id"],
    )
    doc: dict = {
        "objective": graph.objective,
        "root": graph.node_name(graph.root),
        "nodes": nodes,
        "edges": edges,
    }
    if graph.meta is not None:
        doc["meta"] = graph.meta
    return json.dumps(doc, separators=(",", ":"), sort_keys=False) + "\n"


def loads(text: str) -> AndOrGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be an object")
    for key in ("objective", "root", "nodes", "edges"):
        if key not in doc:
            raise GraphFormatError(f"missing field: {key!r}")
    for rec in doc["nodes"]:
        if not isinstance(rec.get("cost"), int) or rec["cost"] < 0:
            raise GraphFormatError(
                f"node {rec.get('id')!r}: cost must be a non-negative integer"
            )
    for rec in doc["edges"]:
        if not isinstance(rec.get("cost"), int) or rec["cost"] < 0:
            raise GraphFormatError(
                f"edge {rec.get('id')!r}: cost must be a non-negative integer"
            )
    return AndOrGraph.from_records(
        objective=doc["objective"],
        root=doc["root"],
        nodes=[(r["id"], r["kind"], r["cost"]) for r in doc["nodes"]],
        edges=[(r["id"], r["src"], r["dst"], r["cost"]) for r in doc["edges"]],
        meta=doc.get("meta"),
    )


def load_file(path: str) -> AndOrGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump_file(graph: AndOrGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(graph))
