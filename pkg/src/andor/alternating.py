"""Conversion between general AND/OR trees and strictly alternating ones.

Folding removes a node whose parent has the same kind by re-sourcing its
child edges to the parent with adjusted costs; per edge, a stack of
(folded node, stashed node cost, stashed edge cost) triplets records what
happened.  Solutions found on the alternating tree are reverted by
re-creating the folded nodes recorded on their edges, which restores the
original edge set at identical cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    AndOrGraph,
    ExplicitSolution,
    Kind,
    loads,
    dumps,
    solution_from_edges,
    validate,
)


class NotATreeError(Exception):
    """Alternating conversion is defined for trees only."""


class UpdateListError(Exception):
    """A solution refers to edges this conversion never folded."""


@dataclass
class AlternatingConversion:
    """An alternating tree plus everything needed to revert its solutions.

    `update_lists` maps an edge id of the alternating tree to its fold
    stack, bottom first; `folded_incoming` maps each folded node id to the
    original tree's edge that pointed at it.  The original tree rides
    along so reverting can run in a separate process from solving.
    """

    original: AndOrGraph
    tree: AndOrGraph
    update_lists: dict[str, list[tuple[str, int, int]]]
    folded_incoming: dict[str, str]

    def meta_doc(self) -> dict:
        return {
            "update_lists": {
                k: [list(t) for t in v] for k, v in self.update_lists.items()
            },
            "folded_incoming": dict(self.folded_incoming),
            "original_graph": dumps(self.original),
        }

    @classmethod
    def from_meta_doc(cls, doc: dict, tree: AndOrGraph) -> "AlternatingConversion":
        return cls(
            original=loads(doc["original_graph"]),
            tree=tree,
            update_lists={
                k: [tuple(t) for t in v] for k, v in doc["update_lists"].items()
            },
            folded_incoming=dict(doc["folded_incoming"]),
        )


def is_alternating(graph: AndOrGraph) -> bool:
    """No non-terminal node has a non-terminal child of the same kind."""
    for e in range(graph.n_edges):
        ks = graph.kinds[graph.edge_src[e]]
        kd = graph.kinds[graph.edge_dst[e]]
        if ks != Kind.TERMINAL and ks == kd:
            return False
    return True


def convert_to_alternating(tree: AndOrGraph) -> AlternatingConversion:
    """Fold same-kind parent-child pairs until AND and OR strictly alternate.

    An OR fold adds the removed edge-plus-node cost to every re-sourced
    edge; an AND fold adds it to the first re-sourced edge only (zero
    triplets mark the rest).  Folds run bottom-up so chains flatten in one
    pass.
    """
    problems = validate(tree, expect_tree=True)
    if problems:
        raise NotATreeError("; ".join(problems))
    kinds = list(tree.kinds)
    ncost = list(tree.node_costs)
    names = [tree.node_name(v) for v in range(tree.n_nodes)]
    children: list[list[list]] = [
        [
            [tree.edge_name(i), tree.edge_dst[i], tree.edge_costs[i]]
            for i in tree.out_edges(v)
        ]
        for v in range(tree.n_nodes)
    ]
    update_lists: dict[str, list[tuple[str, int, int]]] = {}
    folded_incoming: dict[str, str] = {}
    TERM = int(Kind.TERMINAL)

    def walk(v: int) -> None:
        i = 0
        kids = children[v]
        while i < len(kids):
            edge_id, d, cost = kids[i]
            walk(d)
            if kinds[d] != TERM and kinds[d] == kinds[v]:
                folded_incoming[names[d]] = edge_id
                moved = children[d]
                carried = cost + ncost[d]
                for slot, entry in enumerate(moved):
                    if kinds[v] == Kind.OR or slot == 0:
                        entry[2] += carried
                        stash = (names[d], ncost[d], cost)
                    else:
                        stash = (names[d], 0, 0)
                    update_lists.setdefault(entry[0], []).append(stash)
                kids[i : i + 1] = moved
                children[d] = []
                i += len(moved)
            else:
                i += 1

    walk(tree.root)

    keep: list[int] = []
    seen = {tree.root}
    stack = [tree.root]
    while stack:
        v = stack.pop()
        keep.append(v)
        for _eid, d, _c in children[v]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    keep.sort()
    remap = {v: i for i, v in enumerate(keep)}
    out_kinds = [kinds[v] for v in keep]
    out_ncost = [ncost[v] for v in keep]
    out_names = [names[v] for v in keep]
    esrc: list[int] = []
    edst: list[int] = []
    ecost: list[int] = []
    enames: list[str] = []
    for v in keep:
        for eid, d, c in children[v]:
            esrc.append(remap[v])
            edst.append(remap[d])
            ecost.append(c)
            enames.append(eid)
    alt = AndOrGraph(
        kinds=out_kinds,
        node_costs=out_ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=ecost,
        root=remap[tree.root],
        objective=tree.objective,
        node_names=out_names,
        edge_names=enames,
        meta=tree.meta,
    )
    return AlternatingConversion(
        original=tree,
        tree=alt,
        update_lists=update_lists,
        folded_incoming=folded_incoming,
    )


def revert_solution(
    conversion: AlternatingConversion, solution: ExplicitSolution
) -> ExplicitSolution:
    """Map a solution of the alternating tree back onto the original tree.

    Every solution edge re-creates the full chain of nodes folded onto it
    (drained top of stack first); in a tree each folded node determines
    its unique original incoming edge, so the reverted solution is exactly
    an edge set of the original tree, at unchanged cost.
    """
    alt = conversion.tree
    orig = conversion.original
    edge_ids: set[str] = set()
    for e in solution.edges:
        eid = alt.edge_name(e)
        for node_id, _cv, _ce in reversed(conversion.update_lists.get(eid, ())):
            try:
                edge_ids.add(conversion.folded_incoming[node_id])
            except KeyError as exc:
                raise UpdateListError(
                    f"update list names unknown folded node {node_id!r}"
                ) from exc
        edge_ids.add(eid)
    try:
        idxs = [orig.edge_index(eid) for eid in edge_ids]
    except KeyError as exc:
        raise UpdateListError(
            f"solution edge {exc.args[0]!r} does not exist in the original tree"
        ) from exc
    return solution_from_edges(orig, idxs)
