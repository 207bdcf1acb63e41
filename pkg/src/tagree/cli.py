"""Command-line front end: ``tagree bound|verify|pattern|color``.

Exit codes: 0 success, 2 usage or validation error, 3 a bound was violated.
Every CSV starts with ``# key=value`` lines echoing the full effective
config; ``--replay FILE`` re-runs from such an echo.
"""
from __future__ import annotations

import argparse
import sys

from . import bounds, graph, patterns, sampler, verify

EXIT_USAGE = 2
EXIT_VIOLATION = 3

# echo key -> flag, for --replay
_ECHO_FLAGS = {
    "blocks": "--blocks",
    "block_size": "--block-size",
    "t": "--t",
    "prime": "--prime",
    "p_num": "--p-num",
    "flips": "--flips",
    "master_seed": "--seed",
    "trials": "--trials",
    "a_grid": "--a-grid",
    "n": "--n",
    "alphabet": "--alphabet",
    "word": "--word",
    "mode": "--mode",
}


class UsageError(Exception):
    pass


def _parse_grid(text: str | None) -> list[float]:
    if not text:
        return []
    try:
        return sorted({float(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"bad --a-grid {text!r}") from None


def _grid_echo(grid: list[float]) -> str:
    return ",".join(repr(a) for a in grid)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _summary(args, line: str) -> None:
    # keep stdout clean when the CSV itself goes there
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(line, file=stream)


def _print_bound(label: str, r: bounds.BoundResult) -> None:
    print(f"{label}.value={r.value:.12g}")
    print(f"{label}.log_value={r.log_value:.12g}")
    print(f"{label}.clamped={r.clamped:.12g}")
    print(f"{label}.vacuous={'true' if r.vacuous else 'false'}")


def cmd_bound(args) -> int:
    classes = None
    if args.classes:
        try:
            classes = bounds.ColorClassSizes(int(x) for x in args.classes.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --classes: {exc}") from None
        if args.n is None:
            args.n = classes.n
        if args.chi is None and args.p is None:
            args.chi = classes.k
        if classes.n != args.n:
            raise UsageError(f"--classes sum to {classes.n}, but --n is {args.n}")
    if args.n is None or args.a is None:
        raise UsageError("--n and --a are required")
    if args.t is None and not args.optimize_t:
        raise UsageError("--t is required unless --optimize-t is given")

    if args.p is not None:
        if args.d is None:
            raise UsageError("--p needs --d (maximum degree)")
        if args.optimize_t:
            t_best, r = None, None
            for t in range(2, args.t_max + 1, 2):
                cand = bounds.bernoulli_tail_bound(args.n, args.d, t, args.p, args.a, args.side)
                if r is None or cand.log_value < r.log_value:
                    t_best, r = t, cand
            if r is None:
                raise UsageError("--t-max must be >= 2")
            print(f"t_best={t_best}")
        else:
            r = bounds.bernoulli_tail_bound(args.n, args.d, args.t, args.p, args.a, args.side)
        print(f"bound=corollary n={args.n} d={args.d} p={args.p} a={args.a} side={args.side}")
        _print_bound("corollary", r)
        return 0

    if args.chi is None:
        raise UsageError("--chi is required (or --d with --p)")
    if args.optimize_t:
        t, r = bounds.optimize_t(args.n, args.chi, args.a, args.t_max)
        print(f"t_best={t}")
    else:
        t, r = args.t, bounds.combined_tail_bound(args.n, args.t, args.chi, args.a)
    print(f"bound=theorem n={args.n} t={t} chi={args.chi} a={args.a}")
    _print_bound("theorem", r)
    if classes is not None:
        if args.optimize_t:
            t, ref = bounds.optimize_t(args.n, args.chi, args.a, args.t_max, jensen_refinement=classes)
            print(f"refined.t_best={t}")
        else:
            ref = bounds.markov_tail_from_moment(bounds.refined_moment_bound(classes, t), t, args.a)
        _print_bound("refined", ref)
    return 0


def _resolve_p_num(args, prime: int) -> tuple[int | None, list[str]]:
    notes = []
    if args.p_num is not None:
        if args.p_num == "uniform":
            return None, notes
        try:
            return int(args.p_num), notes
        except ValueError:
            raise UsageError(f"--p-num must be an integer or 'uniform', got {args.p_num!r}") from None
    p_num, err = sampler.closest_p_num(args.p, prime)
    notes.append(f"p_requested={args.p!r}")
    notes.append(f"p_rounding={err!r}")
    return p_num, notes


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    grid = _parse_grid(args.a_grid)
    if not grid:
        raise UsageError("--a-grid must list at least one value")
    if args.t < 2:
        raise UsageError("--t must be >= 2")
    prime = args.prime or sampler.next_prime(max(args.blocks, 2 * args.t))
    p_num, notes = _resolve_p_num(args, prime)
    e = sampler.make_clique_ensemble(
        args.blocks, args.block_size, args.t, p_num, args.seed, flips=args.flips, prime=prime
    )
    config = dict(e.descriptor, master_seed=args.seed, trials=args.trials, a_grid=_grid_echo(grid))
    if notes:
        _summary(args, " ".join(notes + [f"p_num={p_num}", f"prime={prime}"]))
    report = verify.estimate_tail(e, grid, args.trials, args.seed, threads=args.threads, config=config)
    _write(args.out, report.to_csv())
    nviol = len(report.violations)
    _summary(args, f"rows={len(report.rows)} violations={nviol}")
    return EXIT_VIOLATION if nviol else 0


def cmd_pattern(args) -> int:
    if args.string is not None:
        bad = set(args.string) - set(patterns.LETTERS[: args.alphabet])
        if bad or set(args.word) - set(patterns.LETTERS[: args.alphabet]):
            raise UsageError("word or string uses letters outside the alphabet")
        count = (
            patterns.count_window_occurrences(args.string, args.word)
            if args.mode == "window"
            else patterns.count_subsequence_occurrences(args.string, args.word)
        )
        print(f"count={count}")
        return 0

    if args.n is None:
        raise UsageError("--n is required unless --string is given")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    p = patterns.PatternInstance(args.alphabet, args.word, args.n)
    if args.mode == "window":
        patterns.indicator_order(args.t, p.d)
    prime = args.prime or p.default_prime(args.t)
    grid = _parse_grid(args.a_grid)
    config = {
        "n": args.n,
        "alphabet": args.alphabet,
        "word": args.word,
        "mode": args.mode,
        "t": args.t,
        "prime": prime,
        "master_seed": args.seed,
        "trials": args.trials,
        "a_grid": _grid_echo(grid),
    }
    counts = patterns.simulate_strings(p, args.t, args.trials, args.seed, prime, args.threads, args.mode)
    lines = [f"# {k}={v}\n" for k, v in config.items()]
    lines.append("trial,count\n")
    lines.extend(f"{i},{int(c)}\n" for i, c in enumerate(counts))
    _write(args.out, "".join(lines))
    mean = sum(int(c) for c in counts) / len(counts)
    _summary(args, f"trials={args.trials} mean_count={mean!r}")
    if args.mode == "window" and grid:
        report = patterns.window_tail_report(
            p, args.t, grid, args.trials, args.seed, prime, args.threads, config=config
        )
        _write(args.report, report.to_csv())
        nviol = len(report.violations)
        _summary(args, f"rows={len(report.rows)} violations={nviol}")
        return EXIT_VIOLATION if nviol else 0
    return 0


def cmd_color(args) -> int:
    try:
        with open(args.graph) as fh:
            g = graph.parse_graph(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from None
    if args.method == "exact":
        col = graph.exact_coloring(g, args.vertex_limit)
    else:
        col = graph.greedy_coloring(g, "natural" if args.method == "greedy" else "degree-descending")
    sizes = ",".join(str(len(c)) for c in col.classes())
    print(f"n={g.n} m={g.num_edges} max_degree={g.max_degree} method={args.method} k={col.k} class_sizes={sizes}")
    if args.out:
        body = "vertex,color\n" + "".join(f"{v},{c}\n" for v, c in enumerate(col.assignment))
        _write(args.out, body)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tagree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate the tail bounds")
    b.add_argument("--n", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--a", type=float, help="absolute deviation (theorem) or relative deviation (with --p)")
    b.add_argument("--chi", type=int, help="chromatic number or an upper bound on it")
    b.add_argument("--d", type=int, help="maximum degree (Bernoulli form)")
    b.add_argument("--p", type=float, help="Bernoulli success probability")
    b.add_argument("--side", choices=("upper", "lower"), default="upper")
    b.add_argument("--classes", help="comma-separated color-class sizes, e.g. 3,3,4")
    b.add_argument("--optimize-t", action="store_true")
    b.add_argument("--t-max", type=int, default=20)
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="Monte Carlo check on a clique-block ensemble")
    v.add_argument("--blocks", type=int, default=20)
    v.add_argument("--block-size", type=int, default=5)
    v.add_argument("--t", type=int, default=4)
    v.add_argument("--prime", type=int, help="default: smallest prime >= max(blocks, 2t)")
    v.add_argument("--p-num", help="Bernoulli threshold, or 'uniform' for grid-uniform values")
    v.add_argument("--p", type=float, default=0.5, help="bias rounded to p_num/prime when --p-num is absent")
    v.add_argument("--flips", choices=("none", "alternating"), default="none")
    v.add_argument("--trials", type=int, default=100000)
    v.add_argument("--a-grid", default="30,40,50,60,70,80")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--out", default="-")
    v.add_argument("--replay", help="re-run from the '# key=value' echo of a previous CSV")
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("pattern", help="pattern occurrences in t-wise independent strings")
    p.add_argument("--n", type=int)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--word", required=True)
    p.add_argument("--mode", choices=("window", "subsequence"), default="window")
    p.add_argument("--t", type=int, default=8, help="independence order of the letters")
    p.add_argument("--prime", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--a-grid", help="deviations for the window tail report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--string", help="count in this string instead of simulating")
    p.add_argument("--out", default="-", help="per-trial counts CSV")
    p.add_argument("--report", default="-", help="window tail report CSV")
    p.add_argument("--replay")
    p.set_defaults(func=cmd_pattern)

    c = sub.add_parser("color", help="color a graph file")
    c.add_argument("--graph", required=True)
    c.add_argument("--method", choices=("greedy", "degree", "exact"), default="greedy")
    c.add_argument("--vertex-limit", type=int, default=20)
    c.add_argument("--out")
    c.set_defaults(func=cmd_color)
    return parser


def _replay_argv(argv: list[str]) -> list[str]:
    """Expand ``--replay FILE`` into flags read from the file's echo lines;
    flags given explicitly on the command line still win."""
    if "--replay" not in argv:
        return argv
    i = argv.index("--replay")
    if i + 1 >= len(argv):
        raise UsageError("--replay needs a file")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    echoed = []
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            k, _, val = line[1:].strip().partition("=")
            flag = _ECHO_FLAGS.get(k)
            if flag and val != "":
                echoed += [flag, val]
    return rest[:1] + echoed + rest[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _replay_argv(argv)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
