import argparse
import sys
from typing import List, Optional
from ..configs.logger import logging, add_log_file, remove_log_file
from ..configs.params import load_params, load_experiment_spec
from ..core import (to_graph, one_edge_per_colour, verify_rainbow_perfect, serialize_latin, serialize_matching,
                    parse_matching, parse_pair, serialize_pair, read_latin, read_text, write_text)
from ..generators import generate
from ..models import GenSpec, Subpair, PairFile, PipelineParams, AutoResult
from ..oracle import count_transversals, find_transversal_exact
from ..rainbow import solve_auto, solve_pipeline, solve_greedy
from ..robust import certify_robust_pair
from .experiment import ExperimentRunner, rows_csv, summary_csv, results_json

EXIT_OK = 0
EXIT_NONE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3

FAMILIES = {"cyclic": "cyclic", "z2k": "z2k", "random": "random-latin", "random-latin": "random-latin",
            "split": "split"}


def _emit(text: str, out: Optional[str] = None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GenSpec(n=args.n, target_colours=args.colours, family=FAMILIES[args.family], seed=args.seed,
                   mixing_steps=args.mixing)
    _emit(serialize_latin(generate(spec)), args.out)
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    count = count_transversals(read_latin(args.file))
    print(count)
    return EXIT_OK if count > 0 else EXIT_NONE


def cmd_solve(args: argparse.Namespace) -> int:
    array = read_latin(args.file)
    if args.exact:
        result = AutoResult(matching=find_transversal_exact(array), method="exact", authoritative=True)
    elif args.pipeline:
        outcome = solve_pipeline(array, load_params(args.params), args.seed)
        result = AutoResult(matching=outcome.matching, method="pipeline",
                            failures=[outcome.failure] if outcome.failure else [])
    elif args.greedy:
        result = solve_greedy(array, args.seed)
    else:
        result = solve_auto(array, args.seed, load_params(args.params) if args.params else None)
    if not result.found:
        for failure in result.failures:
            logging.info(f"[SOLVE] Stage {failure.stage} failed: {failure.message or failure.inequality}")
        print(result.verdict())
        return EXIT_NONE
    _emit(serialize_matching(result.matching, verify_rainbow_perfect(to_graph(array), result.matching)), args.out)
    return EXIT_OK


def _verify_matching(array_path: str, matching_path: str) -> int:
    graph = to_graph(read_latin(array_path))
    matching = parse_matching(read_text(matching_path, "VERIFY"))
    perfect = verify_rainbow_perfect(graph, matching)
    print(f"RAINBOW-PERFECT: {'yes' if perfect else 'no'}")
    return EXIT_OK if perfect else EXIT_NONE


def _verify_robust_pair(array_path: str, pair_path: str) -> int:
    array = read_latin(array_path)
    pair_file = parse_pair(read_text(pair_path, "VERIFY"))
    graph = one_edge_per_colour(to_graph(array), pair_file.edge_seed)
    pair = Subpair(part_a=frozenset(pair_file.part_a), part_b=frozenset(pair_file.part_b), role="robust")
    if not pair.balanced:
        raise ValueError(f"[VERIFY] Pair sides differ in size: {len(pair.part_a)} vs {len(pair.part_b)}.")
    robust = certify_robust_pair(graph, pair, array.k / (array.n * array.n), pair_file.min_degree_bound,
                                 PipelineParams())
    print(f"|A1| = {robust.size}")
    print(f"min degree: {robust.observed_min_degree} > {robust.min_degree_bound:.6g}: "
          f"{'ok' if robust.observed_min_degree > robust.min_degree_bound else 'FAILED'}")
    print(f"expansion min(2|S|, {robust.expansion.cap}): {'ok' if robust.expansion_holds else 'FAILED'} "
          f"({'exact' if robust.expansion_exact else 'heuristic'})")
    if robust.violator is not None:
        print(f"violator: {robust.violator}")
    return EXIT_OK if robust.certified else EXIT_NONE


def cmd_verify(args: argparse.Namespace) -> int:
    targets = args.targets
    if targets[0] == "robust-pair":
        if len(targets) != 3:
            raise ValueError("[VERIFY] Usage: verify robust-pair FILE PAIRFILE")
        return _verify_robust_pair(targets[1], targets[2])
    if len(targets) != 2:
        raise ValueError("[VERIFY] Usage: verify FILE MATCHFILE")
    return _verify_matching(targets[0], targets[1])


def cmd_pipeline(args: argparse.Namespace) -> int:
    array = read_latin(args.file)
    params = load_params(args.params)
    handler = add_log_file(args.log) if args.log else None
    try:
        result = solve_pipeline(array, params, args.seed)
    finally:
        if handler is not None:
            remove_log_file(handler)
    state = result.state
    if args.pair_out and state.core is not None:
        write_text(args.pair_out, serialize_pair(PairFile(
            part_a=state.core.sorted_a(), part_b=state.core.sorted_b(), edge_seed=state.edge_seed,
            min_degree_bound=state.min_degree_bound)))
    if not result.success:
        sys.stderr.write(result.failure.model_dump_json(indent=2) + "\n")
        print("none found")
        return EXIT_NONE
    _emit(serialize_matching(result.matching, True), args.out)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = load_experiment_spec(args.spec)
    updates = {key: value for key, value in (("output_path", args.out), ("format", args.format)) if value}
    spec = spec.model_copy(update=updates)
    result = ExperimentRunner(spec, args.workers, args.omit_timing).run()
    if spec.format == "json":
        _emit(results_json(result), spec.output_path)
    else:
        _emit(rows_csv(result), spec.output_path)
        if spec.output_path:
            write_text(f"{spec.output_path}.summary.csv", summary_csv(result))
    return EXIT_NONE if result.interrupted else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rainbow-transversal",
                                     description="Rainbow perfect matchings in Latin arrays.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a Latin array")
    gen.add_argument("--family", choices=sorted(FAMILIES), default="cyclic")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--colours", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mixing", type=int, default=None)
    gen.add_argument("--out", default=None)
    gen.set_defaults(handler=cmd_gen)

    count = sub.add_parser("count", help="count transversals exactly")
    count.add_argument("file")
    count.set_defaults(handler=cmd_count)

    solve = sub.add_parser("solve", help="find a transversal")
    solve.add_argument("file")
    method = solve.add_mutually_exclusive_group()
    method.add_argument("--exact", action="store_true")
    method.add_argument("--pipeline", action="store_true")
    method.add_argument("--greedy", action="store_true")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--params", default=None)
    solve.add_argument("--out", default=None)
    solve.set_defaults(handler=cmd_solve)

    verify = sub.add_parser("verify", help="verify a matching file or a robust pair")
    verify.add_argument("targets", nargs="+", metavar="ARG",
                        help="FILE MATCHFILE, or robust-pair FILE PAIRFILE")
    verify.set_defaults(handler=cmd_verify)

    pipeline = sub.add_parser("pipeline", help="run the staged construction with a stage log")
    pipeline.add_argument("file")
    pipeline.add_argument("--params", default=None)
    pipeline.add_argument("--seed", type=int, default=0)
    pipeline.add_argument("--log", default=None)
    pipeline.add_argument("--pair-out", dest="pair_out", default=None)
    pipeline.add_argument("--out", default=None)
    pipeline.set_defaults(handler=cmd_pipeline)

    experiment = sub.add_parser("experiment", help="run a seeded sweep")
    experiment.add_argument("spec")
    experiment.add_argument("--out", default=None)
    experiment.add_argument("--format", choices=["csv", "json"], default=None)
    experiment.add_argument("--workers", type=int, default=1)
    experiment.add_argument("--omit-timing", dest="omit_timing", action="store_true")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID
    try:
        return args.handler(args)
    except AssertionError as e:
        sys.stderr.write(f"[MAIN] Internal check failed: {e}\n")
        return EXIT_INTERNAL
    except ValueError as e:
        sys.stderr.write(f"[MAIN] {e}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
