"""Command-line front end: ``sparse-expanders {generate,bound,phase,simulate,verify}``.

CSV outputs carry their run manifest as leading ``#`` comment lines. The
embedded manifest lists only inputs that determine the file content, so
reruns with the same parameters produce identical bytes. Wall-clock time and
thread count are reported on stderr.

Exit codes: 0 success, 1 domain/infeasibility error, 2 usage error,
3 partial numerical failure.
"""
import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, graph, montecarlo, phase
from ._threads import resolve_threads
from .dyadic import rip1_failure_bound, tail_bound
from .errors import CapacityError, DomainError, SolverError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _real(text):
    """Float parser that also accepts fractions such as ``1/6``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _manifest_lines(command, params, outputs):
    manifest = {"subcommand": command, "params": params, "version": __version__,
                "outputs": outputs}
    return "".join(f"# {key}: {json.dumps(value, sort_keys=True)}\n"
                    for key, value in manifest.items())


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_generate(args):
    matrix = graph.generate(args.n, args.N, args.d, args.ensemble, args.seed)
    _emit(graph.dumps(matrix), args.out)
    return EXIT_OK


def cmd_bound(args):
    if (args.a_s is None) == (args.eps is None):
        raise UsageError("give exactly one of --a-s or --eps")
    if args.s < 2:
        raise DomainError("s must be >= 2; a single column always has |A_1| = d")
    if args.eps is not None:
        result = rip1_failure_bound(args.s, args.d, args.n, args.eps)
    else:
        result = tail_bound(args.s, args.d, args.n, args.a_s)
    profile = ";".join(f"{i:g}:{phase.format_float(a)}" for i, a in result.profile.levels)
    print(f"log_bound={phase.format_float(result.log_bound)} "
          f"psi={phase.format_float(result.psi)} case={result.case} "
          f"a_s={phase.format_float(result.a_s)} profile={profile}")
    if args.out:
        params = {"s": args.s, "d": args.d, "n": args.n, "a_s": args.a_s, "eps": args.eps}
        body = ("s,d,n,a_s,case,psi,log_bound,profile\n"
                f"{args.s},{args.d},{args.n},{phase.format_float(result.a_s)},{result.case},"
                f"{phase.format_float(result.psi)},{phase.format_float(result.log_bound)},"
                f"{profile}\n")
        _emit(_manifest_lines("bound", params, [args.out]) + body, args.out)
    return EXIT_OK


def cmd_phase(args):
    try:
        grid = phase.parse_grid(args.grid)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    curve = phase.sweep(grid, args.d, args.eps, args.n, threads=args.threads)
    params = {"d": args.d, "eps": args.eps, "n": args.n, "grid": args.grid}
    text = _manifest_lines("phase", params, [args.out] if args.out else [])
    for idx, message in sorted(curve.failures.items()):
        text += f"# failed: delta={phase.format_float(grid[idx])} {message}\n"
    _emit(text + curve.to_csv(), args.out)
    return EXIT_OK if curve.converged else EXIT_PARTIAL


def _parse_k_grid(spec, n):
    if spec == "default":
        return montecarlo.default_k_grid(n)
    try:
        return [int(k) for k in spec.split(",")]
    except ValueError:
        raise UsageError(f"k grid {spec!r} is not 'default' or a comma list") from None


def cmd_simulate(args):
    params = {"n": args.n, "d": args.d, "trials": args.trials, "seed": args.seed,
              "mode": args.mode}
    if args.mode == "tail":
        if args.s is None or args.a_s is None:
            raise UsageError("--mode tail needs --s and --a-s")
        params.update(s=args.s, a_s=args.a_s)
        est = montecarlo.empirical_tail(args.n, args.d, args.s, args.a_s, args.trials,
                                        args.seed, args.threads)
        body = ("s,a_s,threshold,frequency,radius,hits,trials,seed\n"
                f"{args.s},{phase.format_float(args.a_s)},{est.threshold},"
                f"{phase.format_float(est.frequency)},{phase.format_float(est.radius)},"
                f"{est.hits},{est.trials},{args.seed}\n")
    else:
        k_grid = _parse_k_grid(args.k_grid, args.n)
        params["k_grid"] = k_grid
        config = montecarlo.SimulationConfig(args.n, args.d, k_grid, args.trials, args.seed)
        result = montecarlo.simulate_cardinalities(config, args.threads)
        body = result.to_csv(args.mode)
    _emit(_manifest_lines("simulate", params, [args.out] if args.out else []) + body,
          args.out)
    return EXIT_OK


def cmd_verify(args):
    matrix = graph.load(args.matrix)
    verdict = montecarlo.verify_expander_exhaustive(matrix, args.k, args.eps)
    status = "PASS" if verdict.passed else "FAIL"
    line = (f"{status} k={verdict.k} eps={phase.format_float(args.eps)} "
            f"checked={verdict.checked} min_expansion={phase.format_float(verdict.min_expansion)}")
    if not verdict.passed:
        witness = ",".join(str(j) for j in verdict.witness)
        line += f" witness={witness} neighbors={verdict.witness_neighbors}"
    print(line)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master RNG seed")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $SPARSE_EXPANDERS_THREADS or 1)")

    parser = argparse.ArgumentParser(prog="sparse-expanders", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="draw an SE/SSE matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ensemble", choices=["SE", "SSE"], default="SE")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bound", parents=[common], help="evaluate the tail bound")
    p.add_argument("--s", type=_real, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a-s", dest="a_s", type=_real)
    p.add_argument("--eps", type=_real)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("phase", parents=[common], help="sweep rho_exp over delta")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--eps", type=_real, default=phase.DEFAULT_EPS)
    p.add_argument("--n", type=int, default=phase.DEFAULT_N)
    p.add_argument("--grid", default="0.05:0.95:25", help="start:stop:count")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo |A_k| experiments")
    p.add_argument("--n", type=int, default=phase.DEFAULT_N)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--k-grid", dest="k_grid", default="default")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--mode", choices=["summary", "raw", "tail"], default="summary")
    p.add_argument("--s", type=int)
    p.add_argument("--a-s", dest="a_s", type=_real)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="exhaustive expander check")
    p.add_argument("--matrix", required=True, help="matrix file written by 'generate'")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=_real, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        resolve_threads(args.threads)
        code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    elapsed = time.perf_counter() - start
    print(f"# {args.command} finished in {elapsed:.3f} s "
          f"(threads={resolve_threads(args.threads)})", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
