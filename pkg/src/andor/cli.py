"""Command-line surface: gen, solve, verify, convert, revert, bench.

Solution records are emitted as JSON lines on stdout as soon as each
solution is found; stats go to stderr or a file so record streams stay
machine-composable.  Exit codes: 0 success, 1 verification failure,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import alternating as alt_mod
from . import asg as asg_mod
from . import bu as bu_mod
from . import lasg as lasg_mod
from . import oracle as oracle_mod
from .domains import DomainSpec, generate
from .graph import (
    DEFAULT_REPLICA_CAP,
    AndOrGraph,
    GraphFormatError,
    ReplicaCapError,
    convert_dag_to_tree,
    dump_file,
    dumps,
    load_file,
    solution_from_edges,
    validate,
)
from .swaps import Prepared


class UsageError(Exception):
    """Invalid flags or inputs: exit status 2."""


def _load_validated(path: str) -> AndOrGraph:
    graph = load_file(path)
    problems = validate(graph)
    if problems:
        raise UsageError(
            f"invalid graph {path!r}: " + "; ".join(problems[:5])
        )
    return graph


def _emit(obj: dict, stream=None) -> None:
    print(json.dumps(obj), file=stream or sys.stdout, flush=True)


def solution_record(
    graph: AndOrGraph,
    rank: int,
    cost: int,
    edges: list[int],
    participation: dict[int, int] | None,
    algorithm: str,
    signature: list[int] | None = None,
) -> dict:
    rec: dict = {"rank": rank, "cost": cost}
    if signature is not None:
        rec["signature"] = list(signature)
    rec["edges"] = sorted(graph.edge_name(e) for e in edges)
    if participation is not None:
        rec["participation"] = {
            graph.node_name(v): c for v, c in sorted(participation.items())
        }
    else:
        rec["participation"] = None
    rec["algorithm"] = algorithm
    return rec


# -- gen -------------------------------------------------------------------------


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def cmd_gen(args: argparse.Namespace) -> int:
    domain = args.domain.replace("-", "_")
    if domain == "complete_tree":
        params = {
            "degree": args.degree,
            "height": args.height,
            "seed": args.seed,
        }
        if args.node_costs:
            params["node_cost_range"] = _parse_range(args.node_costs)
        if args.edge_costs:
            params["edge_cost_range"] = _parse_range(args.edge_costs)
        _require(args.degree is not None and args.height is not None,
                 "complete-tree needs --degree and --height")
    elif domain == "random_dag":
        _require(args.nodes is not None, "random-dag needs --nodes")
        params = {
            "n": args.nodes,
            "avg_degree": args.avg_degree,
            "seed": args.seed,
        }
    elif domain == "toh":
        _require(args.pegs is not None and args.disks is not None,
                 "toh needs --pegs and --disks")
        params = {"pegs": args.pegs, "disks": args.disks, "share": args.share}
    elif domain == "matrix_chain":
        _require(args.dims is not None, "matrix-chain needs --dims")
        params = {"dims": [int(d) for d in args.dims.split(",")]}
    elif domain == "rna":
        _require(args.sequence is not None, "rna needs --sequence")
        params = {"sequence": args.sequence}
    else:
        raise UsageError(f"unknown domain: {args.domain!r}")
    try:
        graph = generate(DomainSpec(domain=domain, params=params))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.output == "-":
        sys.stdout.write(dumps(graph))
    else:
        dump_file(graph, args.output)
    return 0


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


# -- solve -----------------------------------------------------------------------


def _record_from_handle(graph, prepared, handle, rank, algorithm) -> dict:
    solution = handle.solution
    if solution is None:
        from .swaps import reconstruct

        solution = reconstruct(prepared, handle.signature)
    return solution_record(
        graph,
        rank=rank,
        cost=solution.cost,
        edges=list(solution.edges),
        participation=dict(solution.participation),
        algorithm=algorithm,
        signature=list(handle.signature),
    )


def cmd_solve(args: argparse.Namespace) -> int:
    graph = _load_validated(args.graph)
    k = args.k
    algorithm = args.algorithm
    if algorithm == "bu" and k is None:
        raise UsageError("bu needs an explicit -k")
    if args.bounded and k is None:
        raise UsageError("--bounded needs an explicit -k")
    if args.bounded and args.resume_count:
        raise UsageError("--bounded and --resume-count are mutually exclusive")
    started = time.monotonic()
    stats: dict | None = None
    if algorithm in ("asg", "lasg"):
        kwargs = dict(
            semantics=args.semantics,
            bound=k if args.bounded else None,
            replica_cap=args.replica_cap,
        )
        if algorithm == "asg":
            state = asg_mod.new_search(
                graph,
                membership="scan" if args.linear_membership else "hash",
                **kwargs,
            )
            step = lambda: asg_mod.next_solution(state)
        else:
            state = lasg_mod.new_search(graph, **kwargs)
            step = lambda: lasg_mod.next_solution(state)
        search_graph = state.prepared.graph
        if args.swap_table:
            with open(args.swap_table, "w", encoding="utf-8") as fh:
                json.dump(state.prepared.swaps.sidecar(search_graph), fh)
        rank = 0
        budget = k if k is not None else None
        try:
            while budget is None or rank < budget:
                handle = step()
                if handle is None:
                    break
                rank += 1
                _emit(
                    _record_from_handle(
                        search_graph, state.prepared, handle, rank, algorithm
                    )
                )
            for _ in range(args.resume_count or 0):
                handle = step()
                if handle is None:
                    break
                rank += 1
                _emit(
                    _record_from_handle(
                        search_graph, state.prepared, handle, rank, algorithm
                    )
                )
        except KeyboardInterrupt:
            sys.stdout.flush()
        stats = {"algorithm": algorithm, **state.stats.record()}
    else:
        semantics = _bu_semantics(graph, args.semantics)
        result = bu_mod.k_best(graph, k, semantics)
        extra = 0
        if args.resume_count:
            # the bottom-up pass is not incremental: a fresh, larger run
            result = bu_mod.k_best(graph, k + args.resume_count, semantics)
            extra = args.resume_count
        for rank, cost in enumerate(result.costs(), start=1):
            try:
                sol = result.materialize(rank - 1)
                rec = solution_record(
                    graph,
                    rank=rank,
                    cost=cost,
                    edges=list(sol.edges),
                    participation=dict(sol.participation),
                    algorithm="bu",
                )
            except bu_mod.DefaultSemanticsConflict:
                rec = solution_record(
                    graph,
                    rank=rank,
                    cost=cost,
                    edges=sorted(result.solution_edges(rank - 1)),
                    participation=None,
                    algorithm="bu",
                )
            _emit(rec)
        stats = {
            "algorithm": "bu",
            "solutions_emitted": len(result),
            "restarted_for_resume": bool(extra),
        }
    if args.stats or args.stats_file:
        stats["elapsed_seconds"] = round(time.monotonic() - started, 6)
        if args.stats_file:
            with open(args.stats_file, "w", encoding="utf-8") as fh:
                json.dump(stats, fh)
                fh.write("\n")
        else:
            _emit(stats, stream=sys.stderr)
    return 0


def _bu_semantics(graph: AndOrGraph, semantics: str) -> str:
    if graph.is_tree():
        return bu_mod.TREE_NATIVE
    if semantics == "tree":
        return bu_mod.DAG_TREE_SEMANTICS
    return bu_mod.DAG_DEFAULT_PRUNED


# -- verify ----------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    graph = _load_validated(args.graph)
    try:
        report = oracle_mod.enumerate_all(graph, args.semantics, cap=args.cap)
    except oracle_mod.OracleCapError as exc:
        raise UsageError(str(exc)) from exc
    total = len(report)
    k = args.k if args.k is not None else total
    exhaustive = k >= total
    results: dict = {}
    informational: dict = {}

    def check_topdown(name: str, module) -> None:
        state = module.new_search(graph, semantics=args.semantics)
        handles = module.run_k(state, k)
        sgraph = state.prepared.graph
        if args.semantics == "tree":
            candidates = [(h.external_cost(sgraph), frozenset()) for h in handles]
        else:
            candidates = [
                (h.solution.cost, h.solution.edge_set) for h in handles
            ]
        verdict = oracle_mod.compare(
            candidates, report, require_complete=exhaustive
        )
        results[name] = {"ok": verdict.ok, "detail": verdict.detail}

    check_topdown("asg", asg_mod)
    check_topdown("lasg", lasg_mod)
    if graph.is_tree():
        result = bu_mod.k_best(graph, k, bu_mod.TREE_NATIVE)
        candidates = [
            (graph.external_cost(c), frozenset(result.materialize(i).edges))
            for i, (c, _p) in enumerate(result.node_solutions(graph.root))
        ]
        verdict = oracle_mod.compare(candidates, report, require_complete=exhaustive)
        results["bu"] = {"ok": verdict.ok, "detail": verdict.detail}
    elif args.semantics == "tree":
        result = bu_mod.k_best(graph, k, bu_mod.DAG_TREE_SEMANTICS)
        candidates = [(c, frozenset()) for c in result.costs()]
        verdict = oracle_mod.compare(candidates, report, require_complete=exhaustive)
        results["bu"] = {"ok": verdict.ok, "detail": verdict.detail}
    else:
        # pruned bottom-up completeness is measured, not asserted
        result = bu_mod.k_best(graph, k, bu_mod.DAG_DEFAULT_PRUNED)
        candidates = []
        for i in range(len(result)):
            sol = result.materialize(i)
            candidates.append((sol.cost, sol.edge_set))
        verdict = oracle_mod.compare(candidates, report, require_complete=exhaustive)
        informational["bu_pruned"] = {"ok": verdict.ok, "detail": verdict.detail}
    ok = all(r["ok"] for r in results.values())
    _emit(
        {
            "graph": args.graph,
            "semantics": args.semantics,
            "oracle_solutions": total,
            "checked": k,
            "results": results,
            "informational": informational,
            "verdict": "PASS" if ok else "FAIL",
        }
    )
    return 0 if ok else 1


# -- convert / revert --------------------------------------------------------------


def cmd_convert(args: argparse.Namespace) -> int:
    graph = _load_validated(args.graph)
    if args.to == "tree":
        try:
            out = convert_dag_to_tree(graph, cap=args.replica_cap)
        except ReplicaCapError as exc:
            raise UsageError(str(exc)) from exc
        dump_file(out, args.output)
        return 0
    try:
        conv = alt_mod.convert_to_alternating(graph)
    except alt_mod.NotATreeError as exc:
        raise UsageError(f"to-alternating needs a tree: {exc}") from exc
    dump_file(conv.tree, args.output)
    meta_path = args.meta_out or args.output + ".meta.json"
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(conv.meta_doc(), fh)
        fh.write("\n")
    return 0


def cmd_revert(args: argparse.Namespace) -> int:
    with open(args.meta, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    from .graph import loads as load_text

    original = load_text(doc["original_graph"])
    update_lists = doc["update_lists"]
    folded_incoming = doc["folded_incoming"]
    source = sys.stdin if args.solutions == "-" else open(args.solutions, "r")
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    try:
        for line in source:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            edge_ids: set[str] = set()
            for eid in rec["edges"]:
                for node_id, _cv, _ce in reversed(update_lists.get(eid, ())):
                    edge_ids.add(folded_incoming[node_id])
                edge_ids.add(eid)
            try:
                idxs = [original.edge_index(e) for e in edge_ids]
            except KeyError as exc:
                raise UsageError(
                    f"record {rec.get('rank')}: unknown edge {exc.args[0]!r}"
                ) from exc
            sol = solution_from_edges(original, idxs)
            if sol.cost != rec["cost"]:
                raise UsageError(
                    f"record {rec.get('rank')}: reverted cost {sol.cost} "
                    f"does not match stated cost {rec['cost']}"
                )
            new_rec = solution_record(
                original,
                rank=rec["rank"],
                cost=sol.cost,
                edges=list(sol.edges),
                participation=dict(sol.participation),
                algorithm=rec.get("algorithm", "asg"),
                signature=rec.get("signature"),
            )
            print(json.dumps(new_rec), file=out, flush=True)
    finally:
        if source is not sys.stdin:
            source.close()
        if out is not sys.stdout:
            out.close()
    return 0


# -- bench -----------------------------------------------------------------------


def cmd_bench(args: argparse.Namespace) -> int:
    graph = _load_validated(args.graph)
    started = time.monotonic()
    if args.algorithm in ("asg", "lasg"):
        module = asg_mod if args.algorithm == "asg" else lasg_mod
        state = module.new_search(
            graph,
            semantics=args.semantics,
            bound=args.k if args.bounded else None,
        )
        handles = module.run_k(state, args.k)
        stats = state.stats.record()
        emitted = len(handles)
    else:
        result = bu_mod.k_best(graph, args.k, _bu_semantics(graph, args.semantics))
        stats = {}
        emitted = len(result)
    _emit(
        {
            "graph": args.graph,
            "algorithm": args.algorithm,
            "k": args.k,
            "solutions": emitted,
            "stats": stats,
            "elapsed_seconds": round(time.monotonic() - started, 6),
        }
    )
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="andor",
        description="Ordered solution enumeration for explicit AND/OR graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a domain instance")
    p.add_argument("--domain", required=True,
                   choices=["complete-tree", "random-dag", "toh",
                            "matrix-chain", "rna"])
    p.add_argument("-d", "--degree", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-costs", help="lo:hi range for node costs")
    p.add_argument("--edge-costs", help="lo:hi range for edge costs")
    p.add_argument("-n", "--nodes", type=int)
    p.add_argument("--avg-degree", type=float, default=2.0)
    p.add_argument("--pegs", type=int)
    p.add_argument("--disks", type=int)
    p.add_argument("--share", action="store_true",
                   help="emit the shared-subproblem DAG instead of a tree")
    p.add_argument("--dims", help="comma-separated matrix dimensions")
    p.add_argument("--sequence", help="RNA bases over A,C,G,U")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="enumerate ordered solutions")
    p.add_argument("graph")
    p.add_argument("-a", "--algorithm", required=True,
                   choices=["asg", "lasg", "bu"])
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--semantics", choices=["default", "tree"],
                   default="default")
    p.add_argument("--bounded", action="store_true",
                   help="bound Open to k minus the solutions already emitted")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--stats-file")
    p.add_argument("--resume-count", type=int, default=0,
                   help="after k solutions, continue for this many more")
    p.add_argument("--linear-membership", action="store_true",
                   help="use linear scans instead of the hash index (asg)")
    p.add_argument("--swap-table", help="write the swap sidecar table here")
    p.add_argument("--replica-cap", type=int, default=DEFAULT_REPLICA_CAP)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check algorithms against the oracle")
    p.add_argument("graph")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--semantics", choices=["default", "tree"],
                   default="default")
    p.add_argument("--cap", type=int, default=oracle_mod.DEFAULT_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="expand to a tree or fold to alternating")
    p.add_argument("graph")
    p.add_argument("--to", required=True, choices=["tree", "alternating"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--meta-out", help="update-list metadata path (alternating)")
    p.add_argument("--replica-cap", type=int, default=DEFAULT_REPLICA_CAP)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("revert", help="map solutions of an alternating tree back")
    p.add_argument("--solutions", required=True,
                   help="record stream path, or - for stdin")
    p.add_argument("--meta", required=True)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_revert)

    p = sub.add_parser("bench", help="run and report counters only")
    p.add_argument("graph")
    p.add_argument("-a", "--algorithm", required=True,
                   choices=["asg", "lasg", "bu"])
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--semantics", choices=["default", "tree"],
                   default="default")
    p.add_argument("--bounded", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except KeyboardInterrupt:
        sys.stdout.flush()
        return 0


if __name__ == "__main__":
    sys.exit(main())
