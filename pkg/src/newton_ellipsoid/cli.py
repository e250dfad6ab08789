"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 a solve that did not
converge (or an incomplete root list).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .bounds import ORDERS, Rect, best_bound, bound, bounding_square
from .parse import PositionedParseError, format_complex, parse_complex, parse_polynomial
from .render import DEFAULT_RECT, RENDER_MAX_ITER, ROOT_TOL, Method, basin_grid, basin_stats, reference_roots, write_image
from .solver import IncompleteRoots, SolveOptions, all_roots, bm_ellipsoid_solve, bm_solve, write_trace


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _num(x: float) -> str:
    return f"{x:.17g}"


def _polynomial(text: str):
    p = parse_polynomial(text)
    if p.degree < 1:
        raise UsageError(f"polynomial {text!r} must have degree >= 1")
    return p


def _rect(text: str) -> Rect:
    try:
        x0, y0, x1, y1 = (float(v) for v in text.split(","))
        return Rect(x0, y0, x1, y1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad rectangle {text!r}: expected x0,y0,x1,y1") from exc


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except PositionedParseError as exc:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}: {exc}") from exc


def _seed_u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("rng seed must fit in an unsigned 64-bit integer")
    return v


def _add_solve_flags(sp, max_iter_default):
    sp.add_argument("--eps", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=max_iter_default)
    sp.add_argument("--restarts", type=int, default=10)
    sp.add_argument("--rng-seed", type=_seed_u64, default=0)


def _add_grid_flags(sp):
    sp.add_argument("--rect", type=_rect, default=DEFAULT_RECT)
    sp.add_argument("--width", type=int, default=800)
    sp.add_argument("--height", type=int, default=800)
    sp.add_argument("--root-tol", type=float, default=ROOT_TOL)
    sp.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgParser(prog="newton-ellipsoid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    sp = sub.add_parser("bounds", help="a priori bounds on the modulus of the roots")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--m", default="best", choices=["2", "3", "4", "best"])

    sp = sub.add_parser("solve", help="find one root from a seed")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--seed", type=_complex_arg, default=None)
    sp.add_argument("--method", default="newton-ellipsoid")
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--trace", default=None, help="write the iterates as CSV")
    _add_solve_flags(sp, SolveOptions().max_iter)

    sp = sub.add_parser("roots", help="all roots by Newton-Ellipsoid and deflation")
    sp.add_argument("--poly", required=True)
    _add_solve_flags(sp, SolveOptions().max_iter)

    sp = sub.add_parser("render", help="write a basin-of-attraction picture")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--method", default="newton-ellipsoid")
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--stats", action="store_true")
    _add_solve_flags(sp, RENDER_MAX_ITER)
    _add_grid_flags(sp)

    sp = sub.add_parser("compare", help="render several methods and tabulate divergence")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--methods", default="newton,newton-ellipsoid")
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--out-prefix", default=None, help="also write <prefix><method>.ppm")
    _add_solve_flags(sp, RENDER_MAX_ITER)
    _add_grid_flags(sp)
    return parser


def _opts(args) -> SolveOptions:
    try:
        return SolveOptions(eps=args.eps, max_iter=args.max_iter,
                            restarts=args.restarts, rng_seed=args.rng_seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _method(text: str, order: Optional[int]) -> Method:
    try:
        return Method.parse(text, order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bounds(args, out) -> int:
    p = _polynomial(args.poly)
    orders = ORDERS if args.m == "best" else (int(args.m),)
    for m in orders:
        print(f"bound_m{m}={bound(p, m)!r}", file=out)
    if args.m == "best":
        print(f"best={best_bound(p)!r}", file=out)
    sq = bounding_square(p)
    print(f"square={sq.x_lo!r},{sq.y_lo!r},{sq.x_hi!r},{sq.y_hi!r}", file=out)
    return 0


def cmd_solve(args, out) -> int:
    p = _polynomial(args.poly)
    method = _method(args.method, args.order)
    opts = _opts(args)
    if method.kind == "fixed":
        seed = args.seed if args.seed is not None else 0j
        trace = bm_solve(p, seed, method.order, opts)
    else:
        trace = bm_ellipsoid_solve(p, args.seed, method.order, opts)
    if args.trace:
        try:
            with open(args.trace, "w") as fh:
                write_trace(trace, fh)
        except OSError as exc:
            raise UsageError(f"cannot write trace to {args.trace!r}: {exc}") from exc
    print(f"method={method.name}", file=out)
    print(f"status={trace.status}", file=out)
    if trace.converged:
        print(f"root={format_complex(trace.root)}", file=out)
    else:
        print(f"last={format_complex(trace.last)}", file=out)
    print(f"residual={_num(trace.iterates[-1].residual)}", file=out)
    print(f"iterations={trace.steps}", file=out)
    print(f"restarts={trace.restarts}", file=out)
    return 0 if trace.converged else 2


def cmd_roots(args, out) -> int:
    p = _polynomial(args.poly)
    try:
        roots = all_roots(p, _opts(args))
    except IncompleteRoots as exc:
        for r in exc.roots:
            print(format_complex(r), file=out)
        print(f"incomplete: {exc}", file=sys.stderr)
        return 2
    for r in roots:
        print(format_complex(r), file=out)
    return 0


def _render(p, method, args, roots):
    if args.width < 1 or args.height < 1:
        raise UsageError("width and height must be >= 1")
    return basin_grid(p, method, args.rect, args.width, args.height, _opts(args),
                      roots=roots, root_tol=args.root_tol, workers=args.workers)


def _reference(p, args):
    try:
        return reference_roots(p, SolveOptions(rng_seed=args.rng_seed))
    except IncompleteRoots as exc:
        raise UsageError(f"could not find reference roots: {exc}") from exc


def cmd_render(args, out) -> int:
    p = _polynomial(args.poly)
    method = _method(args.method, args.order)
    img = _render(p, method, args, _reference(p, args))
    write_image(img, args.out)
    if args.stats:
        print(f"method={method.name}", file=out)
        out.write(basin_stats(img).format())
    return 0


def cmd_compare(args, out) -> int:
    p = _polynomial(args.poly)
    methods = [_method(m, args.order) for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise UsageError("--methods needs at least one method")
    roots = _reference(p, args)
    print(f"{'method':<20} {'divergent_fraction':>20} {'mean_iterations':>16}", file=out)
    for method in methods:
        img = _render(p, method, args, roots)
        if args.out_prefix:
            write_image(img, f"{args.out_prefix}{method.name}.ppm")
        st = basin_stats(img)
        converged = img.iterations[img.root_index >= 0]
        mean_it = float(converged.mean()) if converged.size else float("nan")
        print(f"{method.name:<20} {st.divergent_fraction:>20.6f} {mean_it:>16.3f}", file=out)
    return 0


COMMANDS = {"bounds": cmd_bounds, "solve": cmd_solve, "roots": cmd_roots,
            "render": cmd_render, "compare": cmd_compare}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except (UsageError, PositionedParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
