"""Exhaustive enumeration of all solutions of small graphs, as ground truth.

Under default semantics every OR node makes one global choice; shared
nodes are entered through however many paths the choices induce.  Under
tree semantics every occurrence of a shared node chooses independently,
which matches enumerating the expanded tree.  The oracle is a test
instrument: it is exact, exhaustive and deliberately simple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import AndOrGraph, Kind, materialize_solution

DEFAULT = "default"
TREE = "tree"

DEFAULT_CAP = 200_000


class OracleCapError(Exception):
    """The instance admits more solutions than the enumeration budget."""


def count_solutions(graph: AndOrGraph) -> int:
    """Product/sum recursion counting per-occurrence (tree semantics) solutions."""
    counts = [0] * graph.n_nodes
    OR = int(Kind.OR)
    for v in graph.reverse_topo_order():
        s, e = graph.out_start[v], graph.out_start[v + 1]
        if s == e:
            counts[v] = 1
        elif graph.kinds[v] == OR:
            counts[v] = sum(counts[graph.edge_dst[i]] for i in range(s, e))
        else:
            total = 1
            for i in range(s, e):
                total *= counts[graph.edge_dst[i]]
            counts[v] = total
    return counts[graph.root]


@dataclass
class OracleReport:
    """All solutions, best cost first; ties ordered by canonical form.

    For default semantics each entry is (external cost, sorted edge tuple).
    For tree semantics each entry is (external cost, choice structure); the
    structure is a nested tuple recording the choice made at every node
    occurrence, which distinguishes solutions that share an edge set.
    """

    semantics: str
    entries: list[tuple[int, object]]

    @property
    def costs(self) -> list[int]:
        return [c for c, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def enumerate_all(
    graph: AndOrGraph, semantics: str = DEFAULT, cap: int = DEFAULT_CAP
) -> OracleReport:
    """Enumerate every solution; raises OracleCapError beyond the budget."""
    if semantics not in (DEFAULT, TREE):
        raise ValueError(f"unknown semantics: {semantics!r}")
    if count_solutions(graph) > cap:
        raise OracleCapError(
            f"instance admits more than {cap} solutions under tree semantics"
        )
    if semantics == DEFAULT:
        entries = _enumerate_default(graph, cap)
    else:
        entries = _enumerate_tree(graph, cap)
    # internal cost ascending is best-first for both objectives
    entries.sort(key=lambda t: t[1])
    entries.sort(key=lambda t: t[0])
    return OracleReport(
        semantics=semantics,
        entries=[(graph.external_cost(c), form) for c, form in entries],
    )


def _enumerate_default(graph: AndOrGraph, cap: int) -> list[tuple[int, object]]:
    """One global choice per reachable OR node, depth-first over assignments."""
    OR = int(Kind.OR)
    pos = graph.topo_positions()
    dst = graph.edge_dst
    choices: dict[int, int] = {}
    out: list[tuple[int, object]] = []

    def first_unchosen() -> int | None:
        best: int | None = None
        seen = {graph.root}
        stack = [graph.root]
        while stack:
            v = stack.pop()
            s, e = graph.out_start[v], graph.out_start[v + 1]
            if s == e:
                continue
            if graph.kinds[v] == OR:
                chosen = choices.get(v)
                if chosen is None:
                    if best is None or pos[v] < pos[best]:
                        best = v
                    continue
                nxt = [chosen]
            else:
                nxt = range(s, e)
            for i in nxt:
                d = dst[i]
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return best

    def rec() -> None:
        v = first_unchosen()
        if v is None:
            sol = materialize_solution(graph, choices)
            # store internal cost so ordering is minimisation-oriented
            internal = sol.cost if graph.objective == "min" else -sol.cost
            out.append((internal, sol.edges))
            if len(out) > cap:
                raise OracleCapError(
                    f"default-semantics enumeration exceeded {cap} solutions"
                )
            return
        for i in graph.out_edges(v):
            choices[v] = i
            rec()
        del choices[v]

    rec()
    return out


def _enumerate_tree(graph: AndOrGraph, cap: int) -> list[tuple[int, object]]:
    """Per-occurrence enumeration; shared nodes choose independently.

    The choice structure of a solution rooted at v is:
      terminal        -> v
      OR node         -> (chosen edge, child structure)
      AND node        -> tuple of child structures, one per out-edge
    """
    OR = int(Kind.OR)
    ncost = graph.eff_node_costs
    ecost = graph.eff_edge_costs
    dst = graph.edge_dst
    memo: list[list[tuple[int, object]] | None] = [None] * graph.n_nodes

    for v in graph.reverse_topo_order():
        s, e = graph.out_start[v], graph.out_start[v + 1]
        if s == e:
            memo[v] = [(ncost[v], v)]
        elif graph.kinds[v] == OR:
            rows: list[tuple[int, object]] = []
            for i in range(s, e):
                for c, form in memo[dst[i]]:
                    rows.append((ncost[v] + ecost[i] + c, (i, form)))
            if len(rows) > cap:
                raise OracleCapError(
                    f"tree-semantics enumeration exceeded {cap} solutions"
                )
            memo[v] = rows
        else:
            rows = [(ncost[v], ())]
            for i in range(s, e):
                child = memo[dst[i]]
                nxt: list[tuple[int, object]] = []
                for acc, forms in rows:
                    for c, form in child:
                        nxt.append((acc + ecost[i] + c, forms + (form,)))
                        if len(nxt) > cap:
                            raise OracleCapError(
                                f"tree-semantics enumeration exceeded {cap} solutions"
                            )
                rows = nxt
            memo[v] = rows
    return list(memo[graph.root])


def tree_solution_nodes(graph: AndOrGraph, form: object) -> set[int]:
    """Node indices touched by a tree-semantics choice structure."""
    out: set[int] = set()

    def walk(v: int, f: object) -> None:
        out.add(v)
        s, e = graph.out_start[v], graph.out_start[v + 1]
        if s == e:
            return
        if graph.kinds[v] == Kind.OR:
            edge, sub = f
            walk(graph.edge_dst[edge], sub)
        else:
            for i, sub in zip(range(s, e), f):
                walk(graph.edge_dst[i], sub)

    walk(graph.root, form)
    return out


@dataclass
class Verdict:
    """Outcome of checking a candidate stream against the oracle."""

    ok: bool
    detail: str = ""
    first_divergence: int | None = None
    missing: list = None
    extra: list = None

    def __bool__(self) -> bool:
        return self.ok


def compare(
    candidates: Sequence[tuple[int, frozenset[int]]],
    report: OracleReport,
    require_complete: bool = False,
) -> Verdict:
    """Check a (cost, edge set) stream against an oracle report.

    The candidate cost sequence must equal the oracle's prefix of the same
    length; within each fully covered equal-cost block the candidate's
    solution set must equal the oracle's, and the final, possibly partial,
    block must be a subset.  With `require_complete` the candidate must
    cover the oracle exactly.  Tree-semantics reports compare by cost only
    (their canonical forms live in a different id space).
    """
    oracle = report.entries
    if require_complete and len(candidates) != len(oracle):
        return Verdict(
            ok=False,
            detail=(
                f"candidate emits {len(candidates)} solutions, "
                f"oracle has {len(oracle)}"
            ),
            first_divergence=min(len(candidates), len(oracle)),
        )
    if len(candidates) > len(oracle):
        return Verdict(
            ok=False,
            detail=f"candidate emits {len(candidates)} solutions, oracle has {len(oracle)}",
            first_divergence=len(oracle),
        )
    for i, (cost, _form) in enumerate(candidates):
        if cost != oracle[i][0]:
            return Verdict(
                ok=False,
                detail=f"cost mismatch at rank {i + 1}: {cost} vs {oracle[i][0]}",
                first_divergence=i,
            )
    if report.semantics == TREE:
        return Verdict(ok=True)
    i = 0
    n = len(candidates)
    while i < n:
        cost = candidates[i][0]
        j = i
        cand_block: set[frozenset[int]] = set()
        while j < n and candidates[j][0] == cost:
            form = frozenset(candidates[j][1])
            if form in cand_block:
                return Verdict(
                    ok=False,
                    detail=f"duplicate solution at rank {j + 1}",
                    first_divergence=j,
                )
            cand_block.add(form)
            j += 1
        oracle_block = {
            frozenset(form) for c, form in oracle if c == cost
        }
        extra = cand_block - oracle_block
        if extra:
            return Verdict(
                ok=False,
                detail=f"solutions absent from the oracle at cost {cost}",
                first_divergence=i,
                extra=sorted(sorted(e) for e in extra),
            )
        block_complete = j < n or len(cand_block) == len(oracle_block)
        if block_complete and cand_block != oracle_block:
            return Verdict(
                ok=False,
                detail=f"missing solutions at cost {cost}",
                first_divergence=i,
                missing=sorted(sorted(m) for m in oracle_block - cand_block),
            )
        i = j
    return Verdict(ok=True)
