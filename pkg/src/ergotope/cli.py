"""Command-line front end.

    ergotope orbit --x 1/4 --y 0 -n 8
    ergotope measure --x 1/2 --y 0
    ergotope spectrum --x golden --y 0 -n 1000 -K 3
    ergotope distance --a "atomic(1/2,0)" --b "lebesgue(1/2)" -K 2
    ergotope continuity --x 1/3 --y 0.7 --approach irrational --steps 8 -K 5
    ergotope converge --x golden --y 0 --max-n 100000 -K 5
    ergotope thomae --qmax 12 --samples 200
    ergotope surface --qmax 8 --angles 32

Exit status: 0 on success, 2 on argument errors, 1 when the library
rejects an input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .measures import FiberLebesgue, format_measure, limit_measure, empirical, parse_measure
from .numtheory import rationalize
from .probes import convergence_curve, irrational_approach, rational_approach
from .topology import sample_surface, thomae_graph
from .torus import (
    FloatValue,
    TorusPoint,
    format_base_value,
    format_coordinate,
    orbit_points,
    orbit_precision,
    parse_base_value,
    parse_coordinate,
)
from .weakstar import MetricConfig, dk_report, spectrum_of


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(v) -> str:
    return repr(float(v))


def _point(args) -> TorusPoint:
    x = parse_base_value(args.x)
    if isinstance(x, FloatValue):
        if getattr(args, "rationalize", None):
            r = rationalize(x, args.rationalize)
            x = r if r is not None else FloatValue(x.v, assume_irrational=True)
        elif getattr(args, "irrational", False):
            x = FloatValue(x.v, assume_irrational=True)
    return TorusPoint(x, parse_coordinate(args.y))


def _cmd_orbit(args) -> str:
    pts = orbit_points(_point(args), args.n)
    if args.format == "json":
        return json.dumps(
            {"x": format_base_value(pts[0].x),
             "points": [{"i": i, "x": float(p.x), "y": float(p.y)} for i, p in enumerate(pts)]}
        ) + "\n"
    return _csv(["i", "x", "y"], [(i, _num(p.x), _num(p.y)) for i, p in enumerate(pts)])


def _measure_payload(mu) -> dict:
    d = {"measure": format_measure(mu), "kind": type(mu).__name__}
    if not isinstance(mu, FiberLebesgue):
        d["atoms"] = [
            {"x": format_base_value(a.x), "y": format_coordinate(a.y), "weight": str(a.weight)}
            for a in mu.atoms()
        ]
    return d


def _cmd_measure(args) -> str:
    mu = limit_measure(_point(args))
    payload = _measure_payload(mu)
    fmt = args.format or "text"
    if fmt == "json":
        return json.dumps(payload) + "\n"
    atoms = payload.get("atoms", [])
    if fmt == "csv":
        return _csv(["x", "y", "weight"], [(a["x"], a["y"], a["weight"]) for a in atoms])
    lines = [payload["measure"]]
    lines += [f"  atom ({a['x']}, {a['y']}) weight {a['weight']}" for a in atoms]
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args) -> str:
    point = _point(args)
    mu = empirical(point, args.n) if args.n else limit_measure(point)
    spec = spectrum_of(mu, args.K)
    if args.format == "json":
        return spec.to_json() + "\n"
    return _csv(["m", "n", "re", "im"], [(m, n, _num(c.real), _num(c.imag)) for m, n, c in spec.items()])


def _cmd_distance(args) -> str:
    report = dk_report(parse_measure(args.a), parse_measure(args.b), MetricConfig(args.K))
    fmt = args.format or "text"
    if fmt == "json":
        return json.dumps(report) + "\n"
    if fmt == "csv":
        return _csv(["K", "distance"], [(report["K"], _num(report["distance"]))])
    return f"{report['distance']!r}\n"


def _cmd_continuity(args) -> str:
    point = _point(args)
    if args.approach == "irrational":
        curve = irrational_approach(point, args.steps, args.K)
    else:
        curve = rational_approach(point, args.steps, args.K)
    return curve.to_json() + "\n" if args.format == "json" else curve.to_csv()


def _one_two_five(limit: int) -> list[int]:
    out, scale = [], 1
    while scale <= limit:
        out += [m * scale for m in (1, 2, 5) if m * scale <= limit]
        scale *= 10
    if out[-1] != limit:
        out.append(limit)
    return out


def _cmd_converge(args) -> str:
    curve = convergence_curve(_point(args), _one_two_five(args.max_n), args.K)
    return curve.to_json() + "\n" if args.format == "json" else curve.to_csv()


def _cmd_thomae(args) -> str:
    pts = thomae_graph(args.qmax, args.samples)
    if args.format == "json":
        return json.dumps([{"x": x, "t": t} for x, t in pts]) + "\n"
    return _csv(["x", "t"], [(_num(x), _num(t)) for x, t in pts])


def _cmd_surface(args) -> str:
    pts = sample_surface(args.qmax, args.angles, args.axis_samples)
    if args.format == "json":
        return json.dumps([{"x": p.x, "y": p.y, "z": p.z} for p in pts]) + "\n"
    return _csv(["x", "y", "z"], [(_num(p.x), _num(p.y), _num(p.z)) for p in pts])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ergotope", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, point=True, formats=("csv", "json"), default_fmt="csv"):
        p = sub.add_parser(name, help=help_)
        if point:
            p.add_argument("--x", required=True, help="base value: p/q, golden, sqrt2m1, (a+b*sqrt(d))/c or decimal")
            p.add_argument("--y", required=True, help="fiber coordinate (decimal or p/q, read exactly)")
            g = p.add_mutually_exclusive_group()
            g.add_argument("--irrational", action="store_true", help="treat a decimal --x as irrational")
            g.add_argument("--rationalize", type=_positive, metavar="QMAX",
                           help="snap a decimal --x to a rational with denominator <= QMAX if close enough")
        p.add_argument("--format", choices=formats, default=default_fmt)
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("orbit", _cmd_orbit, "orbit points as CSV")
    p.add_argument("-n", type=_positive, required=True)

    add("measure", _cmd_measure, "limit measure of the orbit", formats=("text", "csv", "json"), default_fmt="text")

    p = add("spectrum", _cmd_spectrum, "Fourier coefficients of the limit (or empirical) measure")
    p.add_argument("-n", type=_positive, default=None, help="use the empirical measure on n orbit points")
    p.add_argument("-K", type=_positive, default=5)

    p = add("distance", _cmd_distance, "d_K between two measures", point=False,
            formats=("text", "csv", "json"), default_fmt="text")
    p.add_argument("--a", required=True, help='e.g. "atomic(1/2, 0)"')
    p.add_argument("--b", required=True, help='e.g. "lebesgue(golden)"')
    p.add_argument("-K", type=_positive, default=5)

    p = add("continuity", _cmd_continuity, "distance curve along an approach sequence")
    p.add_argument("--approach", choices=("rational", "irrational"), required=True)
    p.add_argument("--steps", type=_positive, required=True)
    p.add_argument("-K", type=_positive, default=5)

    p = add("converge", _cmd_converge, "Birkhoff convergence curve")
    p.add_argument("--max-n", type=_positive, required=True)
    p.add_argument("-K", type=_positive, default=5)

    p = add("thomae", _cmd_thomae, "Thomae graph samples (x,t)", point=False)
    p.add_argument("--qmax", type=_positive, required=True)
    p.add_argument("--samples", type=_nonnegative, default=200, help="irrational abscissas with t = 0")

    p = add("surface", _cmd_surface, "point cloud on the revolution surface (x,y,z)", point=False)
    p.add_argument("--qmax", type=_positive, required=True)
    p.add_argument("--angles", type=_positive, required=True)
    p.add_argument("--axis-samples", type=_nonnegative, default=200)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        orbit_precision()
        text = args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"ergotope: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
