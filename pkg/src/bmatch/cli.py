"""Command-line front end.

Subcommands: ``gen`` and ``perturb`` produce ``.bmg`` instance files,
``solve`` runs one solver/predictor pipeline, ``verify`` checks a
matching file against an instance, ``exact`` computes small-instance
optima, and ``compare`` runs several solvers side by side and fails
loudly if their matchings ever disagree.

Matching files are plain text, one ``m <ad> <consumer>`` line per
matched edge, sorted, so identical solves produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bsuitor import solve_bsuitor
from .errors import BMatchError, ValueMismatchError
from .exact import SearchLimits, solve_exact
from .graph import BipartiteInstance, Matching, verify_feasible
from .greedy import solve_serial_greedy
from .instances import (
    CapacityRule,
    DegreeSpec,
    GeneratorConfig,
    WeightSpec,
    generate,
    instance_digest,
    perturb,
    preset_instance,
    read_instance,
    write_instance,
)
from .pivot import solve_pivot
from .predictors import (
    file_predictor,
    oracle_predictor,
    quantile_predictor,
    read_thresholds,
    warmstart_predictor,
    write_thresholds,
)
from .report import RunReport, append_report


def write_matching(path, matching: Matching) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ad, consumer in sorted(matching.matched):
            fh.write(f"m {ad} {consumer}\n")


def read_matching(path) -> list[tuple[int, int]]:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 3 or fields[0] != "m":
                raise BMatchError(f"{path}:{lineno}: expected 'm <ad> <consumer>'")
            pairs.append((int(fields[1]), int(fields[2])))
    return pairs


def _parse_degree(text: str) -> DegreeSpec:
    parts = text.split(":")
    try:
        if parts[0] == "fixed" and len(parts) == 2:
            return DegreeSpec.fixed(int(parts[1]))
        if parts[0] == "uniform" and len(parts) == 3:
            return DegreeSpec.uniform(int(parts[1]), int(parts[2]))
        if parts[0] == "powerlaw" and len(parts) == 4:
            return DegreeSpec.powerlaw(float(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        f"bad degree spec {text!r}; use fixed:K, uniform:LO:HI, or powerlaw:ALPHA:LO:HI"
    )


def _parse_weights(text: str) -> WeightSpec:
    parts = text.split(":")
    try:
        if parts[0] == "uniform" and len(parts) == 3:
            return WeightSpec.uniform(float(parts[1]), float(parts[2]))
        if parts[0] == "exp" and len(parts) == 2:
            return WeightSpec.exponential(float(parts[1]))
        if parts[0] == "int" and len(parts) == 3:
            return WeightSpec.integer(int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        f"bad weight spec {text!r}; use uniform:LO:HI, exp:SCALE, or int:LO:HI"
    )


def _parse_cap_rule(text: str) -> CapacityRule:
    parts = text.split(":")
    if parts[0] == "default" and len(parts) == 1:
        return CapacityRule.default()
    if parts[0] == "uniform" and len(parts) == 2:
        return CapacityRule.uniform(int(parts[1]))
    raise argparse.ArgumentTypeError(
        f"bad capacity rule {text!r}; use default or uniform:K"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmatch", description="maximum-weight bipartite b-matching toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver on an instance")
    p_solve.add_argument("--algo", required=True, choices=["greedy", "bsuitor", "pivot"])
    p_solve.add_argument(
        "--predictor",
        choices=["oracle", "warmstart", "quantile", "file"],
        help="pivot source (pivot algo only); default quantile",
    )
    p_solve.add_argument("--pivots", help=".piv file for --predictor file")
    p_solve.add_argument("--warm", help=".thr file for --predictor warmstart")
    p_solve.add_argument("-i", "--input", required=True, help="instance (.bmg)")
    p_solve.add_argument("-o", "--output", help="matching file to write")
    p_solve.add_argument("--report", help="append a JSONL report line here")
    p_solve.add_argument("--dump-thresholds", help="write final thresholds (.thr)")
    p_solve.add_argument("--threads", type=int, default=1)
    p_solve.add_argument("--seed", type=int, default=None, help="recorded in the report")

    p_gen = sub.add_parser("gen", help="generate a synthetic instance")
    p_gen.add_argument("--ads", type=int, default=None)
    p_gen.add_argument("--consumers", type=int, default=None)
    p_gen.add_argument("--preset", help="named fixture instance (e.g. fig1)")
    p_gen.add_argument("--degree", type=_parse_degree, default=None)
    p_gen.add_argument("--weights", type=_parse_weights, default=None)
    p_gen.add_argument("--cap-rule", type=_parse_cap_rule, default=CapacityRule.default())
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)

    p_pert = sub.add_parser("perturb", help="reweight an instance with Gaussian noise")
    p_pert.add_argument("-i", "--input", required=True)
    p_pert.add_argument("--sigma-sq", type=float, default=0.1)
    p_pert.add_argument("--seed", type=int, required=True)
    p_pert.add_argument("-o", "--output", required=True)

    p_verify = sub.add_parser("verify", help="check a matching file for feasibility")
    p_verify.add_argument("-i", "--input", required=True)
    p_verify.add_argument("-m", "--matching", required=True)

    p_exact = sub.add_parser("exact", help="exact optimum (small instances only)")
    p_exact.add_argument("-i", "--input", required=True)
    p_exact.add_argument("-o", "--output", help="matching file to write")
    p_exact.add_argument("--max-edges", type=int, default=40)
    p_exact.add_argument("--node-budget", type=int, default=None)

    p_cmp = sub.add_parser("compare", help="run several solvers, assert equal matchings")
    p_cmp.add_argument("-i", "--inputs", nargs="+", required=True)
    p_cmp.add_argument(
        "--algos",
        required=True,
        help="comma list: greedy, bsuitor, exact, pivot:oracle, pivot:quantile, "
        "pivot:warmstart (needs --warm), pivot:file=FILE.piv",
    )
    p_cmp.add_argument("--warm", help=".thr file used by pivot:warmstart entries")
    p_cmp.add_argument("--threads", type=int, default=1)
    p_cmp.add_argument("--report", help="append JSONL rows here")
    return parser


def _solve_one(
    instance: BipartiteInstance, algo: str, args, predictor_name: str | None
) -> tuple[Matching, list, RunReport]:
    """Run one solver pipeline and normalize its report."""
    t0 = time.perf_counter()
    if algo == "greedy":
        matching, thresholds = solve_serial_greedy(instance)
        report = RunReport(
            instance_digest="",
            solver="greedy",
            predictor=None,
            matching_value=matching.total_weight,
            iterations=0,
            timings={"total": time.perf_counter() - t0},
        )
    elif algo == "bsuitor":
        matching, thresholds, iterations = solve_bsuitor(instance, args.threads)
        report = RunReport(
            instance_digest="",
            solver="bsuitor",
            predictor=None,
            matching_value=matching.total_weight,
            iterations=iterations,
            timings={"total": time.perf_counter() - t0},
            worker_count=args.threads,
        )
    elif algo == "pivot":
        name = predictor_name or "quantile"
        if name == "oracle":
            predictor = oracle_predictor
        elif name == "quantile":
            predictor = quantile_predictor
        elif name == "warmstart":
            if not args.warm:
                raise BMatchError("--predictor warmstart requires --warm FILE.thr")
            predictor = warmstart_predictor(read_thresholds(args.warm))
        elif name == "file":
            pivots_path = getattr(args, "pivots", None)
            if not pivots_path:
                raise BMatchError("--predictor file requires --pivots FILE.piv")
            predictor = file_predictor(pivots_path)
        else:
            raise BMatchError(f"unknown predictor {name!r}")
        matching, thresholds, report = solve_pivot(instance, predictor, args.threads)
    else:
        raise BMatchError(f"unknown algorithm {algo!r}")
    report.instance_digest = instance_digest(instance)
    report.seed = getattr(args, "seed", None)
    return matching, thresholds, report


def _cmd_solve(args) -> int:
    instance = read_instance(args.input)
    matching, thresholds, report = _solve_one(instance, args.algo, args, args.predictor)
    if args.output:
        write_matching(args.output, matching)
    if args.dump_thresholds:
        write_thresholds(args.dump_thresholds, thresholds)
    if args.report:
        append_report(args.report, report)
    print(
        f"{report.solver}"
        + (f"+{report.predictor}" if report.predictor else "")
        + f" value={matching.total_weight!r} edges={len(matching)}"
        + f" iterations={report.iterations}"
    )
    return 0


def _cmd_gen(args) -> int:
    if args.preset:
        instance = preset_instance(args.preset)
    else:
        if args.ads is None or args.consumers is None:
            raise BMatchError("gen requires --ads and --consumers (or --preset)")
        degree = args.degree or DegreeSpec.uniform(1, min(6, args.consumers))
        weights = args.weights or WeightSpec.uniform(0.0, 1.0)
        config = GeneratorConfig(
            num_ads=args.ads,
            num_consumers=args.consumers,
            degrees=degree,
            weights=weights,
            capacities=args.cap_rule,
            seed=args.seed,
        )
        instance = generate(config)
    write_instance(instance, args.output)
    print(
        f"wrote {args.output}: {instance.num_ads} ads, "
        f"{instance.num_consumers} consumers, {instance.num_edges} edges"
    )
    return 0


def _cmd_perturb(args) -> int:
    instance = read_instance(args.input)
    write_instance(perturb(instance, args.sigma_sq, args.seed), args.output)
    print(f"wrote {args.output}")
    return 0


def _cmd_verify(args) -> int:
    instance = read_instance(args.input)
    pairs = read_matching(args.matching)
    matching = Matching.from_pairs(instance, pairs)
    ok, violations = verify_feasible(instance, matching)
    if ok:
        print(f"feasible: {len(matching)} edges, value {matching.total_weight!r}")
        return 0
    for v in violations:
        print(f"violation: {v.side} {v.vertex} uses {v.used} > capacity {v.capacity}")
    return 1


def _cmd_exact(args) -> int:
    instance = read_instance(args.input)
    limits = SearchLimits(max_edges=args.max_edges, node_budget=args.node_budget)
    result = solve_exact(instance, limits)
    if args.output:
        write_matching(args.output, result.optimal_matching)
    print(
        f"optimal value={result.optimal_value!r} "
        f"edges={len(result.optimal_matching)} nodes={result.node_count}"
    )
    return 0


def _cmd_compare(args) -> int:
    tokens = [t.strip() for t in args.algos.split(",") if t.strip()]
    if len(tokens) < 2:
        raise BMatchError("compare needs at least two algorithms")

    rows = []
    for path in args.inputs:
        instance = read_instance(path)
        digest = instance_digest(instance)
        approx: dict[str, Matching] = {}
        optimal_value = None
        for token in tokens:
            if token == "exact":
                t0 = time.perf_counter()
                result = solve_exact(instance, SearchLimits())
                elapsed = time.perf_counter() - t0
                optimal_value = result.optimal_value
                rows.append((path, "exact", result.optimal_value, 0, elapsed, None))
                continue
            if token.startswith("pivot:file="):
                algo, predictor = "pivot", "file"
                args.pivots = token.split("=", 1)[1]
            elif token.startswith("pivot:"):
                algo, predictor = "pivot", token.split(":", 1)[1]
            else:
                algo, predictor = token, None
            matching, _, report = _solve_one(instance, algo, args, predictor)
            approx[token] = matching
            rows.append(
                (path, token, matching.total_weight, report.iterations,
                 report.timings.get("total", 0.0), None)
            )
            if args.report:
                append_report(args.report, report)

        matched_sets = {token: m.matched for token, m in approx.items()}
        if len(set(matched_sets.values())) > 1:
            raise ValueMismatchError(
                f"{path}: solvers disagree: "
                + ", ".join(f"{t}={m.total_weight!r}" for t, m in approx.items())
            )
        if optimal_value is not None and approx:
            any_value = next(iter(approx.values())).total_weight
            ratio = any_value / optimal_value if optimal_value else 1.0
            rows = [
                (p, a, v, it, el, ratio if p == path and a != "exact" else r)
                for (p, a, v, it, el, r) in rows
            ]

    header = f"{'instance':<28} {'algo':<22} {'value':>14} {'iters':>6} {'time_s':>9} {'ratio':>7}"
    print(header)
    print("-" * len(header))
    for path, algo, value, iters, elapsed, ratio in rows:
        ratio_s = f"{ratio:.4f}" if ratio is not None else "-"
        print(f"{str(path):<28} {algo:<22} {value:>14.6g} {iters:>6} {elapsed:>9.4f} {ratio_s:>7}")
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "gen": _cmd_gen,
    "perturb": _cmd_perturb,
    "verify": _cmd_verify,
    "exact": _cmd_exact,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BMatchError as exc:
        print(f"bmatch {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
