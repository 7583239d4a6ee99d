"""Best-first ordered-solution enumeration with duplicate suppression.

The frontier (Open) holds candidate solutions keyed by (cost, insertion
sequence); the minimum is popped, emitted, and expanded through its swap
list.  A successor enters Open only if its canonical signature is absent
from Open and from TList, the tail of emitted solutions sharing the
current cost.  On DAGs a successor's cost is the parent's plus the swap's
increment scaled by the participation count of the swap's owner.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graph import (
    DEFAULT_REPLICA_CAP,
    AndOrGraph,
    convert_dag_to_tree,
)
from .swaps import (
    Prepared,
    SolutionHandle,
    child_signature,
    compute_swap_list,
    reconstruct,
)

DEFAULT = "default"
TREE = "tree"


@dataclass
class SearchStats:
    """Counters shared by both engines; lengths sampled once per emission."""

    open_max: int = 0
    open_sum: int = 0
    samples: int = 0
    duplicates_rejected: int = 0
    lazy_insertions: int = 0
    solutions_emitted: int = 0

    def sample_open(self, size: int) -> None:
        self.samples += 1
        self.open_sum += size
        if size > self.open_max:
            self.open_max = size

    @property
    def open_avg(self) -> float:
        return self.open_sum / self.samples if self.samples else 0.0

    def record(self) -> dict:
        return {
            "open_avg": round(self.open_avg, 3),
            "open_max": self.open_max,
            "duplicates_rejected": self.duplicates_rejected,
            "lazy_insertions": self.lazy_insertions,
            "solutions_emitted": self.solutions_emitted,
        }


def resolve_input(
    source: AndOrGraph | Prepared,
    semantics: str = DEFAULT,
    replica_cap: int = DEFAULT_REPLICA_CAP,
) -> Prepared:
    """Prepare a graph for searching; tree semantics expands DAGs first."""
    if semantics not in (DEFAULT, TREE):
        raise ValueError(f"unknown semantics: {semantics!r}")
    if isinstance(source, Prepared):
        if semantics == TREE and not source.graph.is_tree():
            return Prepared.build(convert_dag_to_tree(source.graph, replica_cap))
        return source
    graph = source
    if semantics == TREE and not graph.is_tree():
        graph = convert_dag_to_tree(graph, replica_cap)
    return Prepared.build(graph)


class AsgState:
    """Single-owner state of one enumeration run."""

    def __init__(
        self,
        prepared: Prepared,
        bound: int | None = None,
        membership: str = "hash",
    ) -> None:
        if membership not in ("hash", "scan"):
            raise ValueError(f"unknown membership mode: {membership!r}")
        self.prepared = prepared
        self.bound = bound
        self.membership_mode = membership
        root_cost = prepared.opt.cost[prepared.graph.root]
        first = SolutionHandle(signature=(), cost=root_cost, seq=0)
        self._seq = 1
        self.open: list[tuple[int, int, SolutionHandle]] = [(root_cost, 0, first)]
        self.closed: list[SolutionHandle] = []
        self.tlist: set[tuple[int, ...]] = set()
        self.last_cost = root_cost
        self.stats = SearchStats()
        self._index: set[tuple[int, ...]] | None = (
            {()} if membership == "hash" else None
        )

    # -- membership over Open plus TList --------------------------------------

    def _seen(self, sig: tuple[int, ...]) -> bool:
        if self._index is not None:
            return sig in self._index
        if sig in self.tlist:
            return True
        return any(h.signature == sig for _, _, h in self.open)

    def _remember(self, sig: tuple[int, ...]) -> None:
        if self._index is not None:
            self._index.add(sig)

    def _forget(self, sig: tuple[int, ...]) -> None:
        if self._index is not None:
            self._index.discard(sig)

    # -- introspection (used by tests and the bench command) ------------------

    def open_signatures(self) -> list[tuple[int, ...]]:
        return [h.signature for _, _, h in sorted(self.open, key=lambda t: t[:2])]

    def closed_signatures(self) -> list[tuple[int, ...]]:
        return [h.signature for h in self.closed]


def new_search(
    source: AndOrGraph | Prepared,
    semantics: str = DEFAULT,
    bound: int | None = None,
    replica_cap: int = DEFAULT_REPLICA_CAP,
    membership: str = "hash",
) -> AsgState:
    """Initialise a search: Open holds the optimal solution only."""
    prepared = resolve_input(source, semantics, replica_cap)
    return AsgState(prepared, bound=bound, membership=membership)


def next_solution(state: AsgState) -> SolutionHandle | None:
    """Emit the next solution in cost order, or None when exhausted."""
    if not state.open:
        return None
    prepared = state.prepared
    graph, opt, swaps = prepared.graph, prepared.opt, prepared.swaps
    cost, _seq, handle = heapq.heappop(state.open)
    if state.last_cost < cost:
        for sig in state.tlist:
            state._forget(sig)
        state.tlist.clear()
        state.last_cost = cost
    state.closed.append(handle)
    state.tlist.add(handle.signature)
    solution = reconstruct(prepared, handle.signature)
    handle.solution = solution
    swap_list = compute_swap_list(graph, opt, swaps, solution)
    handle.swap_list = swap_list
    part = solution.participation
    for sid in swap_list:
        sig = child_signature(handle.signature, sid)
        if state._seen(sig):
            state.stats.duplicates_rejected += 1
            continue
        p = part[swaps.owners[sid]]
        child = SolutionHandle(
            signature=sig,
            cost=cost + p * swaps.deltas[sid],
            parent=handle,
            applied_swap=sid,
            seq=state._seq,
        )
        state._seq += 1
        heapq.heappush(state.open, (child.cost, child.seq, child))
        state._remember(sig)
    if state.bound is not None:
        _trim_open(state)
    state.stats.solutions_emitted += 1
    state.stats.sample_open(len(state.open))
    return handle


def _trim_open(state: AsgState) -> None:
    """Keep only the best (bound - emitted) handles by priority key.

    Anything discarded costs at least as much as everything retained, and
    at most (bound - emitted) further solutions will ever be asked for, so
    retained handles and their descendants cover the remaining output.
    """
    capacity = state.bound - len(state.closed)
    if capacity < 0:
        capacity = 0
    if len(state.open) <= capacity:
        return
    state.open.sort(key=lambda t: t[:2])
    for _, _, h in state.open[capacity:]:
        state._forget(h.signature)
    del state.open[capacity:]


def run_k(state: AsgState, k: int) -> list[SolutionHandle]:
    """Up to k further solutions; resuming later continues the same stream."""
    out: list[SolutionHandle] = []
    for _ in range(k):
        handle = next_solution(state)
        if handle is None:
            break
        out.append(handle)
    return out


def run_all(state: AsgState, limit: int | None = None) -> list[SolutionHandle]:
    """Exhaust the search (optionally guarded by a hard limit)."""
    out: list[SolutionHandle] = []
    while True:
        handle = next_solution(state)
        if handle is None:
            return out
        out.append(handle)
        if limit is not None and len(out) >= limit:
            raise RuntimeError(f"enumeration exceeded the {limit}-solution guard")
