"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a mathematical failure (a
violated inequality, an inconclusive or unsound certificate), 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import certify as cert
from . import devilfish as df
from . import fuzz
from . import reductions as red
from . import surface
from . import triangle_core as tc
from .errors import InvalidTriangle

CHECK_LABELS = {
    "altitude_inequality": "altitude inequality",
    "median_inequality": "median inequality",
    "median_regrouped": "median inequality, regrouped",
    "corollary_a": "weighted median sum",
    "corollary_b": "median ratio chain",
    "lemma2_identity": "altitude / cubic gap identity",
    "scaling_identity": "a^2 F / 2 identity",
    "isosceles_reduction": "isosceles reduction",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_check(args) -> int:
    try:
        t = tc.Triangle(args.a, args.b, args.c)
    except InvalidTriangle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    results = fuzz.evaluate([t.a], [t.b], [t.c], args.slack)
    ratio, bound, _ = tc.corollary_b_check(t)
    values = {
        "area": tc.area(t),
        "altitudes": tc.altitudes(t),
        "medians": tc.medians(t),
        "altitude_residual": tc.altitude_residual(t),
        "median_residual": tc.median_residual(t),
        "median_sum_residual": tc.median_sum_residual(t),
        "corollary_a_residual": tc.corollary_a_residual(t),
        "corollary_b": {"ratio": ratio, "bound": bound},
    }
    verdicts = {}
    for name in fuzz.CHECKS:
        violation = float(results[name][1][0])
        verdicts[name] = "N/A" if violation == float("-inf") else ("PASS" if violation <= 0 else "FAIL")
    ok = all(v != "FAIL" for v in verdicts.values())
    if args.json:
        print(json.dumps({"triangle": t.sides, "values": values, "verdicts": verdicts, "pass": ok}, indent=2))
    else:
        print(f"triangle a={t.a!r} b={t.b!r} c={t.c!r}")
        for k, v in values.items():
            print(f"  {k:22s} {v}")
        for name, verdict in verdicts.items():
            print(f"  {verdict:4s}  {CHECK_LABELS[name]}")
    return 0 if ok else 1


def cmd_fuzz(args) -> int:
    generators = fuzz.GENERATORS if args.generator == "all" else (args.generator,)
    reports = []
    for g in generators:
        cfg = fuzz.FuzzConfig(count=args.count, seed=args.seed, generator=g, slack=args.slack)
        start = time.perf_counter()
        reports.append((fuzz.run(cfg), time.perf_counter() - start))
    if args.json:
        print(json.dumps([r.to_dict() for r, _ in reports], indent=2, sort_keys=True))
    else:
        for r, secs in reports:
            print(f"{r.config.generator}: {r.config.count} triangles, seed {r.config.seed}, {secs:.2f}s")
            for name, s in r.checks.items():
                print(f"  {name:20s} pass {s.passed:>9d} fail {s.failed:>6d}  worst {s.worst_violation:+.3e}")
            print(f"  pre-squaring quantity negative in {r.presquare_negative} of {r.presquare_checked} isosceles reductions")
    return 0 if all(r.clean for r, _ in reports) else 1


def cmd_critical_points(args) -> int:
    start = time.perf_counter()
    search = df.search_critical_points(grid=args.grid, tol=args.tol)
    secs = time.perf_counter() - start
    if args.json:
        print(json.dumps({
            "points": [p.to_dict() for p in search.points],
            "seeds": search.seeds,
            "failed_seeds": len(search.failures),
        }, indent=2))
    else:
        print(f"{search.seeds} seeds, {len(search.failures)} did not converge, {secs:.2f}s")
        for p in search.points:
            print(
                f"  ({p.point.x:.12f}, {p.point.y:.12f})  F={p.value:+.12f}  |grad|={p.grad_norm:.1e}  "
                f"Fxx={p.f_xx:+.7f} Fxy={p.f_xy:+.7f} Fyy={p.f_yy:+.7f} det={p.determinant:+.6f}  {p.classification}"
            )
    return 0


def cmd_certify(args) -> int:
    start = time.perf_counter()
    main = cert.certify_nonpositive(
        tau=args.tau, max_boxes=args.max_boxes, min_width=args.min_width,
    )
    edges = cert.certify_edges(tau=args.tau, min_width=args.edge_min_width)
    c = cert.Certificate(**{**main.__dict__, "edges": edges})
    cert.export_certificate(c, args.out)
    secs = time.perf_counter() - start
    print(f"{c.conclusion}: {c.boxes_processed} boxes, {len(c.residual_boxes)} residual, "
          f"max residual width {c.max_residual_width:.3g}, {secs:.2f}s")
    for r in c.residual_boxes:
        print(f"  x=[{r.x_lo!r}, {r.x_hi!r}] y=[{r.y_lo!r}, {r.y_hi!r}] upper={r.upper:.3e} near {cert.residual_anchor(r)}")
    for e in edges:
        print(f"  edge {e.edge}: {e.conclusion}, {e.intervals_processed} intervals, {len(e.residuals)} residual")
    print(f"wrote {args.out}")
    return 0 if c.certified else 1


def cmd_verify(args) -> int:
    try:
        c = cert.load_certificate(args.file)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot read certificate: {exc}", file=sys.stderr)
        return 2
    v = cert.verify_certificate(c)
    for p in v.problems:
        print(f"  problem: {p}")
    where = "all at exact zeros of F" if v.localized else "NOT all at exact zeros of F"
    print(f"{'sound' if v.sound else 'UNSOUND'}: {v.checked_boxes} residual pieces re-enclosed, {where}")
    return 0 if v.sound else 1


def cmd_surface(args) -> int:
    grid = surface.surface_grid(args.nx, args.ny, args.full_grid)
    text = surface.to_csv(grid) if args.format == "csv" else surface.to_json(grid)
    _write(args.out, text)
    if args.out != "-":
        vals = grid.values()
        print(f"wrote {len(grid.rows)} rows to {args.out}; F in [{vals.min():.6f}, {vals.max():.3e}]")
    return 0


def cmd_reductions(args) -> int:
    ok = red.quintic_factor_check()
    print(f"quintic factorization (t-1)(t^4+15t^3+88t^2+48t+64): {'exact match' if ok else 'MISMATCH'}")
    for v in [(1, 1, 1), (1, 2, 3), (-1, 1, 1)]:
        print(f"  lemma2_gap{v} = {red.lemma2_gap(*v)!r}")
    for a, c in [(1.0, 0.5), (2.0, 1.0), (1.0, 0.1)]:
        lhs, rhs = red.isosceles_margin(a, c)
        print(f"  isosceles a={a} c={c}: lhs={lhs:.6f} rhs={rhs:.6f} quintic(c/a)={red.quintic_eval(c / a):.6f}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="triangle-ineq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="evaluate every inequality on one triangle")
    s.add_argument("a", type=float)
    s.add_argument("b", type=float)
    s.add_argument("c", type=float)
    s.add_argument("--slack", type=float, default=1e-12)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fuzz", help="seeded random search for counterexamples")
    s.add_argument("--count", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--generator", choices=fuzz.GENERATORS + ("all",), default="all")
    s.add_argument("--slack", type=float, default=1e-12)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("critical-points", help="Newton search for critical points of F")
    s.add_argument("--grid", type=int, default=32)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_critical_points)

    s = sub.add_parser("certify", help="interval branch-and-bound certificate for F <= 0 on M")
    s.add_argument("--tau", type=float, default=1e-6)
    s.add_argument("--max-boxes", type=int, default=10**7)
    s.add_argument("--min-width", type=float, default=1e-4)
    s.add_argument("--edge-min-width", type=float, default=1e-6)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify-certificate", help="re-check a certificate's residual boxes")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("surface", help="emit F sampled over M")
    s.add_argument("--nx", type=int, default=200)
    s.add_argument("--ny", type=int, default=200)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--full-grid", action="store_true")
    s.add_argument("--out", required=True, help="output path, or - for stdout")
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("reductions", help="exact quintic identity and spot checks")
    s.set_defaults(func=cmd_reductions)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
