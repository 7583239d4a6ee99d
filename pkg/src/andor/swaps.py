"""OR-edge marking, swap options, signatures and solution reconstruction.

A swap option replaces an OR node's chosen edge with the next-more-expensive
alternative (by aggregated cost).  Every non-optimal solution is identified
by its signature: the canonical set of swap option ids that transforms the
optimal solution into it.  Both top-down search engines work purely on
signatures and reconstruct explicit solutions on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .graph import (
    AndOrGraph,
    ExplicitSolution,
    Kind,
    OptTable,
    aggregated_cost,
    compute_optimal,
    materialize_solution,
)


class NonMinimalSignatureError(Exception):
    """A replayed swap's original edge was absent: internal corruption."""


@dataclass(frozen=True)
class SwapOption:
    """One marked OR-edge replacement.

    `delta` is the internal (minimisation-oriented) cost increment, always
    non-negative; `rank` is the 1-based position of the original edge in
    the owner's aggregated-cost ordering.
    """

    sid: int
    owner: int
    orig_edge: int
    swapped_edge: int
    delta: int
    rank: int


class SwapTable:
    """All swap options of a graph, stored as flat parallel arrays."""

    __slots__ = ("owners", "origs", "swappeds", "deltas", "ranks", "on_edge")

    def __init__(self, n_edges: int) -> None:
        self.owners: list[int] = []
        self.origs: list[int] = []
        self.swappeds: list[int] = []
        self.deltas: list[int] = []
        self.ranks: list[int] = []
        self.on_edge: list[int] = [-1] * n_edges

    def add(self, owner: int, orig: int, swapped: int, delta: int, rank: int) -> int:
        sid = len(self.owners)
        self.owners.append(owner)
        self.origs.append(orig)
        self.swappeds.append(swapped)
        self.deltas.append(delta)
        self.ranks.append(rank)
        self.on_edge[orig] = sid
        return sid

    def __len__(self) -> int:
        return len(self.owners)

    def get(self, sid: int) -> SwapOption:
        return SwapOption(
            sid=sid,
            owner=self.owners[sid],
            orig_edge=self.origs[sid],
            swapped_edge=self.swappeds[sid],
            delta=self.deltas[sid],
            rank=self.ranks[sid],
        )

    def sidecar(self, graph: AndOrGraph) -> list[dict]:
        """Human-readable dump rows, one per swap id."""
        return [
            {
                "swap": sid,
                "owner": graph.node_name(self.owners[sid]),
                "original_edge": graph.edge_name(self.origs[sid]),
                "swapped_edge": graph.edge_name(self.swappeds[sid]),
                "delta": self.deltas[sid],
                "rank": self.ranks[sid],
            }
            for sid in range(len(self))
        ]


def sorted_or_edges(graph: AndOrGraph, opt: OptTable, v: int) -> list[int]:
    """The OR node's out-edges ordered by (aggregated cost, dst, edge index)."""
    cost = opt.cost
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    return sorted(
        graph.out_edges(v), key=lambda i: (ecost[i] + cost[dst[i]], dst[i], i)
    )


def mark_or_edges(graph: AndOrGraph, opt: OptTable) -> SwapTable:
    """Build every swap option; ids run in (owner node, rank) order.

    Within each OR node, consecutive pairs of the aggregated-cost ordering
    yield one swap option each; the most expensive edge carries none.
    """
    table = SwapTable(graph.n_edges)
    OR = int(Kind.OR)
    kinds = graph.kinds
    cost = opt.cost
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    for v in range(graph.n_nodes):
        if kinds[v] != OR:
            continue
        s, e = graph.out_start[v], graph.out_start[v + 1]
        if e - s < 2:
            continue
        order = sorted(
            range(s, e), key=lambda i: (ecost[i] + cost[dst[i]], dst[i], i)
        )
        prev_agg = ecost[order[0]] + cost[dst[order[0]]]
        for rank in range(1, len(order)):
            cur = order[rank]
            agg = ecost[cur] + cost[dst[cur]]
            table.add(v, order[rank - 1], cur, agg - prev_agg, rank)
            prev_agg = agg
    return table


@dataclass
class Prepared:
    """A graph bundled with its optimal table and swap table.

    Building one is the (linear) initialisation phase shared by the search
    engines; it is immutable afterwards and safe to share between
    concurrent searches.
    """

    graph: AndOrGraph
    opt: OptTable
    swaps: SwapTable

    @classmethod
    def build(cls, graph: AndOrGraph) -> "Prepared":
        opt = compute_optimal(graph)
        return cls(graph=graph, opt=opt, swaps=mark_or_edges(graph, opt))


class _ChoiceView(Mapping):
    """Optimal choices with a sparse override layer, read lazily."""

    __slots__ = ("base", "over")

    def __init__(self, base: list[int], over: dict[int, int]):
        self.base = base
        self.over = over

    def __getitem__(self, v: int) -> int:
        got = self.over.get(v, -2)
        if got != -2:
            return got
        return self.base[v]

    def __contains__(self, v) -> bool:
        if v in self.over:
            return True
        return 0 <= v < len(self.base) and self.base[v] >= 0

    def __iter__(self):
        raise NotImplementedError("choice views are lookup-only")

    def __len__(self) -> int:
        return len(self.base)


def reconstruct(
    prepared: Prepared, signature: Sequence[int]
) -> ExplicitSolution:
    """Replay a signature on the optimal solution.

    Swaps are applied in an order consistent with the ancestry relation:
    owners closer to the root first, same-owner swaps by rank.  Raises
    NonMinimalSignatureError when a swap's original edge is not the
    current choice at its owner or the owner never enters the solution.
    """
    graph, opt, swaps = prepared.graph, prepared.opt, prepared.swaps
    pos = graph.topo_positions()
    order = sorted(signature, key=lambda sid: (pos[swaps.owners[sid]], swaps.ranks[sid]))
    over: dict[int, int] = {}
    for sid in order:
        owner = swaps.owners[sid]
        current = over.get(owner, opt.choice[owner])
        if current != swaps.origs[sid]:
            raise NonMinimalSignatureError(
                f"swap {sid} expected edge {graph.edge_name(swaps.origs[sid])!r} "
                f"at node {graph.node_name(owner)!r}"
            )
        over[owner] = swaps.swappeds[sid]
    solution = materialize_solution(graph, _ChoiceView(opt.choice, over))
    for sid in order:
        owner = swaps.owners[sid]
        if solution.participation.get(owner, 0) == 0:
            raise NonMinimalSignatureError(
                f"swap {sid} at node {graph.node_name(owner)!r} never entered "
                "the solution"
            )
    return solution


def compute_E_opt(
    graph: AndOrGraph, opt: OptTable, solution: ExplicitSolution
) -> tuple[frozenset[int], frozenset[int]]:
    """Nodes whose sub-solution is the optimal one, and the edges into them.

    A node qualifies when all its in-solution children qualify and, for an
    OR node, its chosen edge is the optimal choice.  The edge set contains
    every solution edge whose destination qualifies; swap lookups only ever
    hit the OR edges among them.
    """
    OR = int(Kind.OR)
    pos = graph.topo_positions()
    by_src: dict[int, list[int]] = {}
    for i in solution.edges:
        by_src.setdefault(graph.edge_src[i], []).append(i)
    good: set[int] = set()
    for v in sorted(solution.nodes, key=lambda v: pos[v], reverse=True):
        ok = all(graph.edge_dst[i] in good for i in by_src.get(v, ()))
        if ok and graph.kinds[v] == OR and by_src.get(v):
            ok = solution.choices[v] == opt.choice[v]
        if ok:
            good.add(v)
    e_opt = frozenset(i for i in solution.edges if graph.edge_dst[i] in good)
    return frozenset(good), e_opt


def compute_swap_list(
    graph: AndOrGraph,
    opt: OptTable,
    swaps: SwapTable,
    solution: ExplicitSolution,
) -> list[int]:
    """Swap ids applicable to the solution, ascending."""
    _, e_opt = compute_E_opt(graph, opt, solution)
    on_edge = swaps.on_edge
    out = [on_edge[i] for i in e_opt if on_edge[i] >= 0]
    out.sort()
    return out


def native_swap_ids(
    swaps: SwapTable,
    child_list: Sequence[int],
    child_participation: Mapping[int, int],
    parent_list: Sequence[int],
    parent_participation: Mapping[int, int],
) -> list[int]:
    """The subset of the child's swap list that only just became available.

    A swap is native when it was not applicable to the parent solution at
    all, or was applicable with a different participation count at its
    owner (shared nodes can lose incoming paths without dropping out).
    On trees this reduces to plain list membership.
    """
    parent_set = set(parent_list)
    out = []
    for sid in child_list:
        if sid not in parent_set:
            out.append(sid)
            continue
        owner = swaps.owners[sid]
        if parent_participation.get(owner) != child_participation.get(owner):
            out.append(sid)
    return out


def native_swaps(
    prepared: Prepared, signature: Sequence[int], applied_swap: int | None
) -> list[int]:
    """Native swap ids of the solution `signature`, built via `applied_swap`.

    For the optimal solution (no applied swap) the native set is the full
    swap list.
    """
    solution = reconstruct(prepared, signature)
    child_list = compute_swap_list(prepared.graph, prepared.opt, prepared.swaps, solution)
    if applied_swap is None:
        return child_list
    if applied_swap not in signature:
        raise ValueError("applied_swap is not part of the signature")
    parent_sig = tuple(s for s in signature if s != applied_swap)
    parent = reconstruct(prepared, parent_sig)
    parent_list = compute_swap_list(
        prepared.graph, prepared.opt, prepared.swaps, parent
    )
    return native_swap_ids(
        prepared.swaps,
        child_list,
        solution.participation,
        parent_list,
        parent.participation,
    )


@dataclass
class SolutionHandle:
    """Search-facing identity of one solution.

    `signature` is the canonical sorted swap-id tuple; `cost` is internal
    (minimisation-oriented).  The lineage fields record which predecessor
    produced the handle and by which swap; `seq` is the Open insertion
    sequence number used for FIFO tie-breaking.
    """

    signature: tuple[int, ...]
    cost: int
    parent: "SolutionHandle | None" = None
    applied_swap: int | None = None
    seq: int = -1
    # caches filled in by the engines when the handle is emitted
    solution: ExplicitSolution | None = None
    swap_list: list[int] | None = None

    def external_cost(self, graph: AndOrGraph) -> int:
        return graph.external_cost(self.cost)


def child_signature(signature: tuple[int, ...], sid: int) -> tuple[int, ...]:
    """Canonical signature of a successor: sorted insertion of one swap id."""
    out = list(signature)
    out.append(sid)
    out.sort()
    return tuple(out)
