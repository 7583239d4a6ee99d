"""Lazy duplicate-free ordered-solution enumeration.

Instead of checking Open membership, this engine constructs each solution
exactly once.  A popped solution is expanded immediately only through its
native swap options (those that just became available); every other
successor is created lazily, when the last of its other predecessors
leaves Open.  A solution space tree over the emitted solutions supplies
the sibling sets that drive the lazy step.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graph import DEFAULT_REPLICA_CAP, AndOrGraph, ExplicitSolution
from .swaps import (
    Prepared,
    SolutionHandle,
    child_signature,
    compute_swap_list,
    native_swap_ids,
    reconstruct,
)
from .asg import DEFAULT, TREE, SearchStats, resolve_input


@dataclass
class TreeNode:
    """One emitted solution inside the solution space tree."""

    handle: SolutionHandle
    solution: ExplicitSolution
    swap_list: list[int]
    swap_set: frozenset[int]
    native: frozenset[int]
    parent: "TreeNode | None"
    children: list["TreeNode"] = field(default_factory=list)


class LasgState:
    """Single-owner state of one lazy enumeration run."""

    def __init__(self, prepared: Prepared, bound: int | None = None) -> None:
        self.prepared = prepared
        self.bound = bound
        self.stats = SearchStats()
        self.open: list[tuple[int, int, SolutionHandle, TreeNode]] = []
        self.closed: list[SolutionHandle] = []
        self._seq = 0
        self._insertions: dict[tuple[int, ...], int] = {}
        graph, opt, swaps = prepared.graph, prepared.opt, prepared.swaps
        root_handle = SolutionHandle(
            signature=(), cost=opt.cost[graph.root], seq=self._next_seq()
        )
        solution = reconstruct(prepared, ())
        root_handle.solution = solution
        swap_list = compute_swap_list(graph, opt, swaps, solution)
        root_handle.swap_list = swap_list
        self.root = TreeNode(
            handle=root_handle,
            solution=solution,
            swap_list=swap_list,
            swap_set=frozenset(swap_list),
            native=frozenset(swap_list),
            parent=None,
        )
        # the optimal solution goes straight to Closed; its full successor
        # set seeds Open
        for sid in swap_list:
            self._push(self.root, sid)
        self._pending_first = True

    def _next_seq(self) -> int:
        seq = self._seq
        self._seq += 1
        return seq

    def _push(self, parent: TreeNode, sid: int) -> None:
        swaps = self.prepared.swaps
        sig = child_signature(parent.handle.signature, sid)
        p = parent.solution.participation[swaps.owners[sid]]
        handle = SolutionHandle(
            signature=sig,
            cost=parent.handle.cost + p * swaps.deltas[sid],
            parent=parent.handle,
            applied_swap=sid,
            seq=self._next_seq(),
        )
        heapq.heappush(self.open, (handle.cost, handle.seq, handle, parent))
        self._insertions[sig] = self._insertions.get(sig, 0) + 1

    @property
    def duplicate_insertions(self) -> int:
        """Count of signatures pushed more than once (must stay zero)."""
        return sum(c - 1 for c in self._insertions.values() if c > 1)

    def open_signatures(self) -> list[tuple[int, ...]]:
        return [h.signature for _, _, h, _ in sorted(self.open, key=lambda t: t[:2])]

    def closed_signatures(self) -> list[tuple[int, ...]]:
        return [h.signature for h in self.closed]


def new_search(
    source: AndOrGraph | Prepared,
    semantics: str = DEFAULT,
    bound: int | None = None,
    replica_cap: int = DEFAULT_REPLICA_CAP,
) -> LasgState:
    """Initialise a lazy search; the optimal solution is already emitted."""
    prepared = resolve_input(source, semantics, replica_cap)
    return LasgState(prepared, bound=bound)


def next_solution(state: LasgState) -> SolutionHandle | None:
    """Emit the next solution in cost order, or None when exhausted.

    The optimal solution is yielded first so ranks line up with the other
    engines, even though internally it never sits in Open.
    """
    if state._pending_first:
        state._pending_first = False
        state.closed.append(state.root.handle)
        state.stats.solutions_emitted += 1
        state.stats.sample_open(len(state.open))
        return state.root.handle
    if not state.open:
        return None
    prepared = state.prepared
    graph, opt, swaps = prepared.graph, prepared.opt, prepared.swaps
    cost, _seq, handle, parent = heapq.heappop(state.open)
    solution = reconstruct(prepared, handle.signature)
    handle.solution = solution
    swap_list = compute_swap_list(graph, opt, swaps, solution)
    handle.swap_list = swap_list
    native = native_swap_ids(
        swaps,
        swap_list,
        solution.participation,
        parent.swap_list,
        parent.solution.participation,
    )
    node = TreeNode(
        handle=handle,
        solution=solution,
        swap_list=swap_list,
        swap_set=frozenset(swap_list),
        native=frozenset(native),
        parent=parent,
    )
    parent.children.append(node)
    for sid in native:
        state._push(node, sid)
    # lazy expansion: the swap that built this solution is now due at every
    # already-emitted sibling that can apply it but did not own it natively
    applied = handle.applied_swap
    for sibling in parent.children:
        if sibling is node:
            continue
        if applied in sibling.swap_set and applied not in sibling.native:
            state._push(sibling, applied)
            state.stats.lazy_insertions += 1
    state.closed.append(handle)
    if state.bound is not None:
        _trim_open(state)
    state.stats.solutions_emitted += 1
    state.stats.sample_open(len(state.open))
    return handle


def _trim_open(state: LasgState) -> None:
    capacity = state.bound - len(state.closed)
    if capacity < 0:
        capacity = 0
    if len(state.open) <= capacity:
        return
    state.open.sort(key=lambda t: t[:2])
    del state.open[capacity:]


def run_k(state: LasgState, k: int) -> list[SolutionHandle]:
    """Up to k further solutions; resuming later continues the same stream."""
    out: list[SolutionHandle] = []
    for _ in range(k):
        handle = next_solution(state)
        if handle is None:
            break
        out.append(handle)
    return out


def run_all(state: LasgState, limit: int | None = None) -> list[SolutionHandle]:
    out: list[SolutionHandle] = []
    while True:
        handle = next_solution(state)
        if handle is None:
            return out
        out.append(handle)
        if limit is not None and len(out) >= limit:
            raise RuntimeError(f"enumeration exceeded the {limit}-solution guard")
