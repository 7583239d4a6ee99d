"""Shared test utilities: swap labels, fuzz-instance generators."""

import random

from andor.graph import AndOrGraph
from andor.swaps import Prepared


def swap_label(prepared, sid):
    """Readable swap name, e.g. 'e9>e10' (original edge > swapped edge)."""
    g, s = prepared.graph, prepared.swaps
    return f"{g.edge_name(s.origs[sid])}>{g.edge_name(s.swappeds[sid])}"


def label_set(prepared, signature):
    return frozenset(swap_label(prepared, sid) for sid in signature)


def sid_by_label(prepared, label):
    for sid in range(len(prepared.swaps)):
        if swap_label(prepared, sid) == label:
            return sid
    raise KeyError(label)


def candidates_from(handles):
    """(cost, edge set) pairs in emission order, from cached solutions."""
    return [(h.solution.cost, h.solution.edge_set) for h in handles]


def random_tree(
    seed,
    max_nodes=16,
    node_cost=(0, 6),
    edge_cost=(0, 4),
    force_root_kind=None,
):
    """Random general AND/OR tree; same-kind chains happen naturally."""
    rng = random.Random(seed)
    nodes = []
    edges = []

    def grow(budget, depth):
        idx = len(nodes)
        if budget <= 1 or depth >= 6 or (depth > 0 and rng.random() < 0.25):
            nodes.append((f"n{idx}", "terminal", rng.randint(*node_cost)))
            return idx, 1
        kind = rng.choice(["and", "or"])
        if depth == 0 and force_root_kind:
            kind = force_root_kind
        nodes.append((f"n{idx}", kind, rng.randint(*node_cost)))
        used = 1
        n_children = rng.randint(1, 3)
        for _ in range(n_children):
            if used >= budget:
                break
            child, size = grow((budget - used) // 2 + 1, depth + 1)
            edges.append(
                (f"e{len(edges)}", f"n{idx}", f"n{child}", rng.randint(*edge_cost))
            )
            used += size
        if not any(src == f"n{idx}" for _n, src, _d, _c in edges):
            child, size = grow(1, depth + 1)
            edges.append(
                (f"e{len(edges)}", f"n{idx}", f"n{child}", rng.randint(*edge_cost))
            )
            used += size
        return idx, used

    grow(max_nodes, 0)
    return AndOrGraph.from_records(
        objective="min", root="n0", nodes=nodes, edges=edges
    )


def prepared_for(graph):
    return Prepared.build(graph)
