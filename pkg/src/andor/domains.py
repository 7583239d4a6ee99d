"""Generators for the test domains: complete alternating trees, random
layered DAGs, multi-peg Tower of Hanoi search spaces, matrix-chain
multiplication DAGs and RNA base-pairing DAGs.

All generators are deterministic: identical parameters (and seed, where
one applies) produce identical graphs, and the generating parameters are
recorded in the graph's metadata so written files carry their provenance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import MAX, MIN, AndOrGraph, Kind

_AND = int(Kind.AND)
_OR = int(Kind.OR)
_TERM = int(Kind.TERMINAL)

WATSON_CRICK = {("A", "U"), ("U", "A"), ("C", "G"), ("G", "C")}


@dataclass(frozen=True)
class DomainSpec:
    """A domain tag plus its parameter map, validated on generation."""

    domain: str
    params: dict

    def describe(self) -> dict:
        return {"generator": self.domain, **self.params}


def generate(spec: DomainSpec) -> AndOrGraph:
    """Dispatch a DomainSpec to its generator."""
    if spec.domain == "complete_tree":
        return gen_complete_tree(**spec.params)
    if spec.domain == "random_dag":
        return gen_random_dag(**spec.params)
    if spec.domain == "toh":
        return gen_toh(**spec.params)
    if spec.domain == "matrix_chain":
        return gen_matrix_chain(**spec.params)
    if spec.domain == "rna":
        return gen_rna(**spec.params)
    raise ValueError(f"unknown domain: {spec.domain!r}")


# -- complete alternating trees -------------------------------------------------


def gen_complete_tree(
    degree: int,
    height: int,
    seed: int,
    node_cost_range: tuple[int, int] = (1, 20),
    edge_cost_range: tuple[int, int] = (1, 10),
    max_nodes: int = 5_000_000,
) -> AndOrGraph:
    """Complete d-ary alternating tree: OR root, AND next, terminal leaves.

    Node and edge costs are drawn uniformly from the given ranges in a
    fixed traversal order, so one (parameters, seed) pair always yields
    one graph.  Small default ranges create frequent cost ties on purpose.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if height < 1:
        raise ValueError("height must be at least 1")
    count = (degree ** (height + 1) - 1) // (degree - 1)
    if count > max_nodes:
        raise ValueError(
            f"complete tree would have {count} nodes (limit {max_nodes})"
        )
    rng = random.Random(seed)
    kinds: list[int] = []
    ncost: list[int] = []
    esrc: list[int] = []
    edst: list[int] = []
    ecost: list[int] = []

    def build(level: int) -> int:
        if level == height:
            idx = len(kinds)
            kinds.append(_TERM)
            ncost.append(rng.randint(*node_cost_range))
            return idx
        children = [build(level + 1) for _ in range(degree)]
        idx = len(kinds)
        kinds.append(_OR if level % 2 == 0 else _AND)
        ncost.append(rng.randint(*node_cost_range))
        for c in children:
            esrc.append(idx)
            edst.append(c)
            ecost.append(rng.randint(*edge_cost_range))
        return idx

    root = build(0)
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=ecost,
        root=root,
        objective=MIN,
        children_first=True,
        meta={
            "generator": "complete_tree",
            "degree": degree,
            "height": height,
            "seed": seed,
            "node_cost_range": list(node_cost_range),
            "edge_cost_range": list(edge_cost_range),
        },
    )


# -- random layered DAGs --------------------------------------------------------


def gen_random_dag(
    n: int,
    avg_degree: float,
    seed: int,
    node_cost_range: tuple[int, int] = (0, 12),
    edge_cost_range: tuple[int, int] = (0, 6),
) -> AndOrGraph:
    """Random layered AND/OR DAG: kinds alternate by layer, single root.

    Nodes are spread over layers (deepest layer is all terminals), every
    non-terminal is wired to at least one node of the next layer with
    expected out-degree `avg_degree`, and every node gets an incoming edge
    so the whole graph is reachable from the root.
    """
    if n < 3:
        raise ValueError("need at least 3 nodes")
    if avg_degree < 1:
        raise ValueError("avg_degree must be at least 1")
    rng = random.Random(seed)
    max_layers = max(3, min(9, 2 + int(n ** 0.5)))
    n_layers = rng.randint(3, max_layers)
    sizes = [1] + [1] * (n_layers - 1)
    for _ in range(n - n_layers):
        sizes[rng.randrange(1, n_layers)] += 1
    # deepest layer first so node indices run children-before-parents
    layers: list[list[int]] = []
    cursor = 0
    for size in reversed(sizes):
        layers.append(list(range(cursor, cursor + size)))
        cursor += size
    layers.reverse()  # layers[0] is the root layer again
    root_kind = rng.choice([_OR, _AND])
    kinds = [0] * n
    ncost = [0] * n
    for depth, layer in enumerate(layers):
        if depth == n_layers - 1:
            kind = _TERM
        elif depth % 2 == 0:
            kind = root_kind
        else:
            kind = _AND if root_kind == _OR else _OR
        for v in layer:
            kinds[v] = kind
            ncost[v] = rng.randint(*node_cost_range)
    esrc: list[int] = []
    edst: list[int] = []
    ecost: list[int] = []
    covered: set[int] = set()
    for depth in range(n_layers - 1):
        below = layers[depth + 1]
        for v in layers[depth]:
            want = max(1, round(rng.gauss(avg_degree, 1.0)))
            want = min(want, len(below))
            for d in rng.sample(below, want):
                esrc.append(v)
                edst.append(d)
                ecost.append(rng.randint(*edge_cost_range))
                covered.add(d)
        for d in below:
            if d not in covered:
                v = rng.choice(layers[depth])
                esrc.append(v)
                edst.append(d)
                ecost.append(rng.randint(*edge_cost_range))
                covered.add(d)
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=ecost,
        root=layers[0][0],
        objective=MIN,
        children_first=True,
        meta={
            "generator": "random_dag",
            "n": n,
            "avg_degree": avg_degree,
            "seed": seed,
        },
    )


# -- multi-peg Tower of Hanoi ---------------------------------------------------


def gen_toh(pegs: int, disks: int, share: bool = False) -> AndOrGraph:
    """Search space of moving `disks` disks with `pegs` pegs.

    Subproblem (g, p): moving g disks with p pegs.  A choice of the split
    k (1..g-1) is an OR alternative; each choice decomposes into moving k
    disks aside with all p pegs, g-k disks with p-1 pegs, then the k disks
    again with p pegs.  Moving one disk is a unit-cost terminal, zero
    disks a zero-cost terminal, and more than one disk on two pegs is
    impossible (the branch is omitted), so a solution's cost is exactly
    its number of legal moves.

    The default output replicates subproblems into a tree; `share=True`
    emits the compact DAG with shared subproblem nodes instead.
    """
    if pegs < 3:
        raise ValueError("need at least 3 pegs")
    if disks < 1:
        raise ValueError("need at least 1 disk")
    meta = {"generator": "toh", "pegs": pegs, "disks": disks, "share": share}
    if share:
        return _toh_shared(pegs, disks, meta)
    memo: dict[tuple[int, int], tuple | None] = {}
    tpl = _toh_template(disks, pegs, memo)
    kinds_a, ncost_a, esrc_a, edst_a = tpl
    n = len(kinds_a)
    return AndOrGraph(
        kinds=kinds_a.tolist(),
        node_costs=ncost_a.tolist(),
        edge_src=esrc_a.tolist(),
        edge_dst=edst_a.tolist(),
        edge_costs=[0] * len(esrc_a),
        root=n - 1,
        objective=MIN,
        children_first=True,
        meta=meta,
    )


def _toh_template(
    g: int, p: int, memo: dict
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None:
    """Arrays (kinds, node costs, edge src, edge dst) for subproblem (g, p).

    Templates are built once per distinct subproblem and replicated by
    index offsetting, which keeps generation linear in the output size.
    Node order is children-first with the subproblem root last.
    """
    key = (g, p)
    if key in memo:
        return memo[key]
    if g <= 1:
        out = (
            np.array([_TERM], dtype=np.int8),
            np.array([1 if g == 1 else 0], dtype=np.int8),
            np.empty(0, dtype=np.int32),
            np.empty(0, dtype=np.int32),
        )
    elif p == 2:
        out = None
    else:
        nodes_k: list[np.ndarray] = []
        nodes_c: list[np.ndarray] = []
        e_s: list[np.ndarray] = []
        e_d: list[np.ndarray] = []
        cursor = 0
        and_nodes: list[int] = []
        one_kind = np.array([_AND], dtype=np.int8)
        zero_cost = np.array([0], dtype=np.int8)
        for k in range(1, g):
            mid = _toh_template(g - k, p - 1, memo)
            if mid is None:
                continue
            top = _toh_template(k, p, memo)
            roots: list[int] = []
            for sub in (top, mid, top):
                sk, sc, ss, sd = sub
                nodes_k.append(sk)
                nodes_c.append(sc)
                if len(ss):
                    e_s.append(ss + cursor)
                    e_d.append(sd + cursor)
                cursor += len(sk)
                roots.append(cursor - 1)
            # order the AND edges as (k aside, bulk transfer, k back)
            e_s.append(np.full(3, cursor, dtype=np.int32))
            e_d.append(np.array([roots[0], roots[1], roots[2]], dtype=np.int32))
            nodes_k.append(one_kind)
            nodes_c.append(zero_cost)
            and_nodes.append(cursor)
            cursor += 1
        if not and_nodes:
            out = None
        else:
            e_s.append(np.full(len(and_nodes), cursor, dtype=np.int32))
            e_d.append(np.array(and_nodes, dtype=np.int32))
            nodes_k.append(np.array([_OR], dtype=np.int8))
            nodes_c.append(zero_cost)
            out = (
                np.concatenate(nodes_k),
                np.concatenate(nodes_c),
                np.concatenate(e_s),
                np.concatenate(e_d),
            )
    memo[key] = out
    return out


def _toh_shared(pegs: int, disks: int, meta: dict) -> AndOrGraph:
    """The subproblem DAG: one node per (g, p), shared across parents."""
    kinds: list[int] = []
    ncost: list[int] = []
    names: list[str] = []
    esrc: list[int] = []
    edst: list[int] = []
    memo: dict[tuple[int, int], int | None] = {}

    def build(g: int, p: int) -> int | None:
        key = (g, p)
        if key in memo:
            return memo[key]
        if g <= 1:
            idx = len(kinds)
            kinds.append(_TERM)
            ncost.append(1 if g == 1 else 0)
            names.append(f"S{g}_{p}")
            memo[key] = idx
            return idx
        if p == 2:
            memo[key] = None
            return None
        and_nodes: list[int] = []
        pending: list[tuple[int, list[int]]] = []
        for k in range(1, g):
            mid = build(g - k, p - 1)
            if mid is None:
                continue
            top = build(k, p)
            idx = len(kinds)
            kinds.append(_AND)
            ncost.append(0)
            names.append(f"M{g}_{p}_{k}")
            pending.append((idx, [top, mid, top]))
            and_nodes.append(idx)
        if not and_nodes:
            memo[key] = None
            return None
        for idx, targets in pending:
            for t in targets:
                esrc.append(idx)
                edst.append(t)
        idx = len(kinds)
        kinds.append(_OR)
        ncost.append(0)
        names.append(f"S{g}_{p}")
        for a in and_nodes:
            esrc.append(idx)
            edst.append(a)
        memo[key] = idx
        return idx

    root = build(disks, pegs)
    if root is None:
        raise ValueError("infeasible Tower of Hanoi instance")
    edge_names = [f"e{i}" for i in range(len(esrc))]
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=[0] * len(esrc),
        root=root,
        objective=MIN,
        node_names=names,
        edge_names=edge_names,
        meta=meta,
    )


# -- matrix chain multiplication ------------------------------------------------


def gen_matrix_chain(dims: Sequence[int]) -> AndOrGraph:
    """DAG of parenthesisations of a matrix chain with the given dimensions.

    One OR node per product interval, shared across parents; each split k
    becomes an AND node whose cost is the scalar-multiplication count of
    the outer product; single matrices are zero-cost terminals.
    """
    dims = list(dims)
    if len(dims) < 2:
        raise ValueError("need at least two dimensions (one matrix)")
    if any(d <= 0 for d in dims):
        raise ValueError("dimensions must be positive")
    n = len(dims) - 1
    kinds: list[int] = []
    ncost: list[int] = []
    names: list[str] = []
    esrc: list[int] = []
    edst: list[int] = []
    node_of: dict[tuple[int, int], int] = {}
    for i in range(1, n + 1):
        node_of[(i, i)] = len(kinds)
        kinds.append(_TERM)
        ncost.append(0)
        names.append(f"I{i}_{i}")
    for length in range(1, n):
        for i in range(1, n - length + 1):
            j = i + length
            and_nodes = []
            pending = []
            for k in range(i, j):
                idx = len(kinds)
                kinds.append(_AND)
                ncost.append(dims[i - 1] * dims[k] * dims[j])
                names.append(f"K{i}_{j}_{k}")
                pending.append((idx, [node_of[(i, k)], node_of[(k + 1, j)]]))
                and_nodes.append(idx)
            for idx, targets in pending:
                for t in targets:
                    esrc.append(idx)
                    edst.append(t)
            idx = len(kinds)
            kinds.append(_OR)
            ncost.append(0)
            names.append(f"I{i}_{j}")
            node_of[(i, j)] = idx
            for a in and_nodes:
                esrc.append(idx)
                edst.append(a)
    edge_names = [f"e{i}" for i in range(len(esrc))]
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=[0] * len(esrc),
        root=node_of[(1, n)],
        objective=MIN,
        node_names=names,
        edge_names=edge_names,
        children_first=True,
        meta={"generator": "matrix_chain", "dims": dims},
    )


# -- RNA secondary structure ----------------------------------------------------


def gen_rna(sequence: str) -> AndOrGraph:
    """Base-pair maximisation DAG for an RNA sequence (objective MAX).

    One OR node per interval whose ends are more than four bases apart;
    its first alternative leaves the last base unpaired, and every legal
    Watson-Crick pairing of the last base against position k adds a
    unit-value AND node splitting the interval around k.  Too-short and
    empty intervals are zero-cost terminals.
    """
    seq = sequence.upper()
    if not seq:
        raise ValueError("sequence must be non-empty")
    bad = set(seq) - set("ACGU")
    if bad:
        raise ValueError(f"invalid bases: {sorted(bad)}")
    n = len(seq)
    kinds: list[int] = []
    ncost: list[int] = []
    names: list[str] = []
    esrc: list[int] = []
    edst: list[int] = []
    node_of: dict[tuple[int, int], int] = {}

    def interval(i: int, j: int) -> int:
        key = (i, j)
        if key in node_of:
            return node_of[key]
        if i + 4 >= j:
            idx = len(kinds)
            kinds.append(_TERM)
            ncost.append(0)
            names.append(f"B{i}_{j}" if i <= j else f"B{i}_{j}e")
            node_of[key] = idx
            return idx
        targets = [interval(i, j - 1)]
        pairings = []
        for k in range(i, j):
            if (seq[k - 1], seq[j - 1]) in WATSON_CRICK and k + 4 < j:
                left = interval(i, k - 1)
                right = interval(k + 1, j - 1)
                idx = len(kinds)
                kinds.append(_AND)
                ncost.append(1)
                names.append(f"P{i}_{j}_{k}")
                pairings.append((idx, [left, right]))
                targets.append(idx)
        for idx, subs in pairings:
            for t in subs:
                esrc.append(idx)
                edst.append(t)
        idx = len(kinds)
        kinds.append(_OR)
        ncost.append(0)
        names.append(f"B{i}_{j}")
        node_of[key] = idx
        for t in targets:
            esrc.append(idx)
            edst.append(t)
        return idx

    root = interval(1, n)
    edge_names = [f"e{i}" for i in range(len(esrc))]
    return AndOrGraph(
        kinds=kinds,
        node_costs=ncost,
        edge_src=esrc,
        edge_dst=edst,
        edge_costs=[0] * len(esrc),
        root=root,
        objective=MAX,
        node_names=names,
        edge_names=edge_names,
        children_first=True,
        meta={"generator": "rna", "sequence": seq},
    )
