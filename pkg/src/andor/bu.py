"""Bottom-up k-best baseline.

Every node gets an ordered list of up to k solution descriptors built from
its children's lists in one reverse-topological pass.  An OR descriptor
references one child solution; an AND descriptor holds a vector of child
solution indices, found by a lazy frontier walk over the combination
lattice (cheapest vector first, one-coordinate increments, revisits
suppressed).  The pass is restarted from scratch for every k: there is no
hidden incremental state.

On DAGs the shared per-node lists make the output follow per-occurrence
(tree) semantics.  The pruned mode additionally walks each new AND
combination top-down and discards it when some OR node contributes two
distinct edges, which per-occurrence choices allow but one-global-choice
semantics forbids; the frontier keeps popping until k valid combinations
are found or the lattice is exhausted.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import (
    AndOrGraph,
    ExplicitSolution,
    Kind,
    OptTable,
    compute_optimal,
    extract_optimal_solution,
    materialize_solution,
)

TREE_NATIVE = "tree_native"
DAG_TREE_SEMANTICS = "dag_tree_semantics"
DAG_DEFAULT_PRUNED = "dag_default_pruned"

_SEMANTICS = (TREE_NATIVE, DAG_TREE_SEMANTICS, DAG_DEFAULT_PRUNED)


class DefaultSemanticsConflict(Exception):
    """A descriptor includes two distinct edges of one OR node."""


@dataclass
class BuResult:
    """Per-node descriptor lists plus materialisation helpers.

    `lists[v]` holds up to k `(internal cost, payload)` rows: payload is
    `(edge, child_index)` at OR nodes, a tuple of per-child indices at AND
    nodes and None at terminals.  For k = 1 the pass degenerates to the
    optimal-cost recursion and only that table is kept.
    """

    graph: AndOrGraph
    k: int
    semantics: str
    lists: list[list[tuple[int, object]]] | None = None
    opt: OptTable | None = None

    def costs(self) -> list[int]:
        """External root costs, best first."""
        if self.lists is None:
            return [self.graph.external_cost(self.opt.cost[self.graph.root])]
        return [
            self.graph.external_cost(c) for c, _ in self.lists[self.graph.root]
        ]

    def __len__(self) -> int:
        if self.lists is None:
            return 1
        return len(self.lists[self.graph.root])

    def node_solutions(self, v: int) -> list[tuple[int, object]]:
        """The descriptor list of one node (internal costs)."""
        if self.lists is not None:
            return self.lists[v]
        s, e = self.graph.out_start[v], self.graph.out_start[v + 1]
        if s == e:
            payload: object = None
        elif self.graph.kinds[v] == Kind.OR:
            payload = (self.opt.choice[v], 0)
        else:
            payload = tuple(0 for _ in range(s, e))
        return [(self.opt.cost[v], payload)]

    def _walk(self, rank: int) -> tuple[dict[int, int], set[int]]:
        """Choice map and edge union of the rank-th root solution."""
        graph = self.graph
        if self.lists is None:
            if rank != 0:
                raise IndexError(rank)
            sol = extract_optimal_solution(graph, self.opt)
            return dict(sol.choices), set(sol.edges)
        choices: dict[int, int] = {}
        edges: set[int] = set()
        seen: set[tuple[int, int]] = set()
        stack = [(graph.root, rank)]
        while stack:
            v, idx = stack.pop()
            if (v, idx) in seen:
                continue
            seen.add((v, idx))
            _cost, payload = self.lists[v][idx]
            s, e = graph.out_start[v], graph.out_start[v + 1]
            if s == e:
                continue
            if graph.kinds[v] == Kind.OR:
                edge, child_idx = payload
                if choices.setdefault(v, edge) != edge:
                    raise DefaultSemanticsConflict(
                        f"OR node {graph.node_name(v)!r} contributes two edges"
                    )
                edges.add(edge)
                stack.append((graph.edge_dst[edge], child_idx))
            else:
                for edge, child_idx in zip(range(s, e), payload):
                    edges.add(edge)
                    stack.append((graph.edge_dst[edge], child_idx))
        return choices, edges

    def materialize(self, rank: int) -> ExplicitSolution:
        """Explicit solution of the rank-th root descriptor.

        Raises DefaultSemanticsConflict when the descriptor is only valid
        per occurrence (possible in the unpruned DAG mode).
        """
        if self.lists is None:
            if rank != 0:
                raise IndexError(rank)
            return extract_optimal_solution(self.graph, self.opt)
        choices, _ = self._walk(rank)
        return materialize_solution(self.graph, choices)

    def solution_edges(self, rank: int) -> set[int]:
        """Union of edges touched by the rank-th solution (any semantics)."""
        if self.lists is None:
            return set(extract_optimal_solution(self.graph, self.opt).edges)
        edges: set[int] = set()
        seen: set[tuple[int, int]] = set()
        stack = [(self.graph.root, rank)]
        graph = self.graph
        while stack:
            v, idx = stack.pop()
            if (v, idx) in seen:
                continue
            seen.add((v, idx))
            _cost, payload = self.lists[v][idx]
            s, e = graph.out_start[v], graph.out_start[v + 1]
            if s == e:
                continue
            if graph.kinds[v] == Kind.OR:
                edge, child_idx = payload
                edges.add(edge)
                stack.append((graph.edge_dst[edge], child_idx))
            else:
                for edge, child_idx in zip(range(s, e), payload):
                    edges.add(edge)
                    stack.append((graph.edge_dst[edge], child_idx))
        return edges


def _has_conflict(
    graph: AndOrGraph, lists: list[list[tuple[int, object]]], v: int, payload: object
) -> bool:
    """Top-down check: does some OR node contribute two distinct edges?"""
    choices: dict[int, int] = {}
    seen: set[tuple[int, int]] = set()
    stack: list[tuple[int, int]] = []

    def push_children(node: int, pay: object) -> bool:
        s, e = graph.out_start[node], graph.out_start[node + 1]
        if s == e:
            return False
        if graph.kinds[node] == Kind.OR:
            edge, child_idx = pay
            if choices.setdefault(node, edge) != edge:
                return True
            stack.append((graph.edge_dst[edge], child_idx))
        else:
            for edge, child_idx in zip(range(s, e), pay):
                stack.append((graph.edge_dst[edge], child_idx))
        return False

    if push_children(v, payload):
        return True
    while stack:
        node, idx = stack.pop()
        if (node, idx) in seen:
            continue
        seen.add((node, idx))
        _cost, pay = lists[node][idx]
        if push_children(node, pay):
            return True
    return False


def k_best(graph: AndOrGraph, k: int, semantics: str | None = None) -> BuResult:
    """Ordered top-k solutions via one bottom-up pass."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if semantics is None:
        semantics = TREE_NATIVE if graph.is_tree() else DAG_TREE_SEMANTICS
    if semantics not in _SEMANTICS:
        raise ValueError(f"unknown semantics: {semantics!r}")
    if k == 1:
        return BuResult(
            graph=graph, k=k, semantics=semantics, opt=compute_optimal(graph)
        )
    prune = semantics == DAG_DEFAULT_PRUNED
    n = graph.n_nodes
    kinds = graph.kinds
    ncost = graph.eff_node_costs
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    lists: list[list[tuple[int, object]]] = [None] * n  # type: ignore[list-item]
    for v in graph.reverse_topo_order():
        s, e = graph.out_start[v], graph.out_start[v + 1]
        base = ncost[v]
        if s == e:
            lists[v] = [(base, None)]
        elif kinds[v] == Kind.OR:
            streams = (
                [
                    (base + ecost[i] + c, dst[i], i, idx)
                    for idx, (c, _p) in enumerate(lists[dst[i]])
                ]
                for i in range(s, e)
            )
            merged = heapq.merge(*streams)
            rows: list[tuple[int, object]] = []
            for cost, _d, edge, idx in merged:
                rows.append((cost, (edge, idx)))
                if len(rows) == k:
                    break
            lists[v] = rows
        else:
            lists[v] = _and_combinations(
                graph, lists, v, k, base, s, e, prune
            )
    return BuResult(graph=graph, k=k, semantics=semantics, lists=lists)


def _and_combinations(
    graph: AndOrGraph,
    lists: list[list[tuple[int, object]]],
    v: int,
    k: int,
    base: int,
    s: int,
    e: int,
    prune: bool,
) -> list[tuple[int, object]]:
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    children = [lists[dst[i]] for i in range(s, e)]
    fixed = base + sum(ecost[i] for i in range(s, e))

    def vec_cost(vec: tuple[int, ...]) -> int:
        return fixed + sum(child[j][0] for child, j in zip(children, vec))

    start = tuple(0 for _ in children)
    frontier: list[tuple[int, tuple[int, ...]]] = [(vec_cost(start), start)]
    seen: set[tuple[int, ...]] = {start}
    rows: list[tuple[int, object]] = []
    while frontier and len(rows) < k:
        cost, vec = heapq.heappop(frontier)
        if not (prune and _has_conflict(graph, lists, v, vec)):
            rows.append((cost, vec))
        for slot, child in enumerate(children):
            if vec[slot] + 1 < len(child):
                nxt = vec[:slot] + (vec[slot] + 1,) + vec[slot + 1 :]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(frontier, (vec_cost(nxt), nxt))
    return rows
