"""rotokernel command line.

Every command prints one JSON report on stdout:
``{"command": ..., "input_sha256": ..., "result": ..., "wall_time_s": ...}``.
Only ``wall_time_s`` varies between runs.  Exit codes: 0 nonempty result,
3 empty result, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import oracle, ortho, render, rotation_intervals, steady_kernel
from .errors import NotOrthogonal, RotoKernelError, TiedExtremities
from .geom_core import HALF_PI, SimplePolygon

EXIT_OK, EXIT_INPUT, EXIT_EMPTY = 0, 2, 3
SIG = 12


class InputError(Exception):
    pass


def canon(obj):
    """Round every float to 12 significant digits (recursively)."""
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return str(v)
        # float noise around zero would otherwise leak into golden files
        v = float(format(v, f".{SIG}g")) if abs(v) > 1e-13 else 0.0
        return 0.0 if v == 0 else v
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [canon(v) for v in obj]
    return obj


_ANGLE = re.compile(r"^\s*([-+]?[0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians, either a plain number or a form like ``pi/8``, ``-3pi/4``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot read angle {text!r}")
    k = m.group(1)
    k = 1.0 if k in ("", "+") else -1.0 if k == "-" else float(k)
    d = float(m.group(2)) if m.group(2) else 1.0
    return k * math.pi / d


# --------------------------------------------------------------------------
# polygon documents
# --------------------------------------------------------------------------


def read_polygon(path: str) -> tuple[str, SimplePolygon, str]:
    """(name, polygon, sha256 of the raw file); clockwise input is reversed."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(raw)
        verts = doc["vertices"]
        name = str(doc.get("name", Path(path).stem))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected {{'name': str, 'vertices': [[x, y], ...]}}") from exc
    try:
        P = SimplePolygon(verts, orient="auto")
    except (RotoKernelError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if P.was_reversed:
        print(f"warning: {path}: clockwise vertices reversed to counter-clockwise", file=sys.stderr)
    return name, P, hashlib.sha256(raw).hexdigest()


def write_polygon(path: str, name: str, P: SimplePolygon) -> None:
    Path(path).write_text(json.dumps({"name": name, "vertices": canon(P.xy.tolist())}) + "\n")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _single_kernel(P: SimplePolygon, theta: float):
    k = steady_kernel.kernel_at(P, theta)
    st = steady_kernel.strip(P, k.theta)
    lines = [
        render.ClipLine(tuple(P.xy[st.north_index]), k.theta, "north"),
        render.ClipLine(tuple(P.xy[st.south_index]), k.theta, "south"),
    ]
    sup = dict(k.supports)
    sup["north_level"], sup["south_level"] = st.north_level, st.south_level
    return k, sup, lines


def _constraint_line(c: ortho.Constraint, theta: float) -> render.ClipLine:
    ang = {ortho.ROT0: theta, ortho.ROT90: theta + HALF_PI, ortho.FIX_H: 0.0, ortho.FIX_V: HALF_PI}[c.family]
    return render.ClipLine(c.anchor, ang, c.cid)


def _dent_lines(P: SimplePolygon) -> list[render.ClipLine]:
    cls = ortho.classify(P)
    out = []
    for lab, axis, pick in (("N", 1, min), ("S", 1, max), ("W", 0, max), ("E", 0, min)):
        if cls.dents[lab]:
            i = pick(cls.dents[lab], key=lambda e: P.xy[e, axis])
            out.append(render.ClipLine(tuple(P.xy[i]), 0.0 if axis == 1 else HALF_PI, f"dent{lab}"))
    return out


def _double_kernel(P: SimplePolygon, theta: float):
    if not 0.0 <= theta < HALF_PI:
        raise InputError(f"theta must lie in [0, pi/2) for the double set, got {theta!r}")
    ctx = ortho.prepare(P)
    try:
        k = ortho.kernel_at_theta(ctx, theta)
    except TiedExtremities as exc:
        k = steady_kernel.KernelRegion(theta, None, supports={"reason": str(exc)})
    if theta == 0.0:
        return k, {"rule": "dents"}, _dent_lines(P)
    lines = []
    if ctx.arcs is not None and ctx.extremities is not None:
        cons = ortho.constraint_set(ctx, ortho.supports_at(ctx.arcs, theta))
        active = set(k.supports.get("active", [c.cid for c in cons]))
        lines = [_constraint_line(c, theta) for c in cons if c.cid in active]
    return k, dict(k.supports), lines


def _kernel(P, theta, which):
    if which == "single":
        return _single_kernel(P, theta)
    try:
        return _double_kernel(P, theta)
    except NotOrthogonal as exc:
        raise InputError(str(exc)) from exc


def cmd_kernel(args, P):
    k, sup, _ = _kernel(P, args.theta, args.set)
    res = {
        "set": args.set,
        "theta": args.theta,
        "empty": k.is_empty,
        "degenerate": k.degenerate,
        "vertices": k.vertex_list(),
        "area": k.area,
        "perimeter": k.perimeter,
        "supports": sup,
    }
    return res, EXIT_EMPTY if k.is_empty else EXIT_OK


def cmd_intervals(args, P):
    events = rotation_intervals.event_intervals(P, with_chains=False)
    ivs = rotation_intervals.nonempty_intervals(P, events=events)
    rows = []
    for iv in ivs:
        sup = [[ev.support_max, ev.support_min] for ev in events if ev.theta_range[1] > iv.lo and ev.theta_range[0] < iv.hi]
        rows.append({"interval": [iv.lo, iv.hi], "closed": [iv.closed_lo, iv.closed_hi], "supports_max_min": sup})
    res = {"domain": [-HALF_PI, HALF_PI], "count": len(ivs), "intervals": rows, "events": len(events)}
    return res, EXIT_OK if ivs else EXIT_EMPTY


def cmd_optimize(args, P):
    try:
        r = ortho.optimize(P, args.objective, args.sense)
    except NotOrthogonal as exc:
        raise InputError(str(exc)) from exc
    res = {
        "objective": r.objective,
        "sense": r.sense,
        "theta_star": r.theta_star,
        "value": r.value,
        "emptyForAllTheta": r.empty_for_all_theta,
        "value_at_zero": r.value_at_zero,
        "value_at_zero_plus": r.value_at_zero_plus,
        "attained_on_empty": r.attained_on_empty,
        "note": r.note,
        "per_interval": [{"interval": list(rec.interval), "theta": rec.best_theta, "value": rec.best_value, "closed_form": rec.closed_form} for rec in r.per_interval],
    }
    empty = r.empty_for_all_theta or (args.sense == "max" and r.value <= 0.0)
    return res, EXIT_EMPTY if empty else EXIT_OK


def cmd_render(args, P, name):
    if args.show == "intervals":
        ivs = rotation_intervals.nonempty_intervals(P)
        svg = render.intervals_svg([(iv.lo, iv.hi) for iv in ivs], title=f"{name}: nonempty orientations")
        res, code = {"show": "intervals", "count": len(ivs)}, EXIT_OK if ivs else EXIT_EMPTY
    else:
        k, _, lines = _kernel(P, args.theta, args.set)
        svg = render.polygon_svg(P.xy, None if k.is_empty else k.polygon.xy, lines, title=f"{name} theta={format(args.theta, '.12g')}")
        res = {"show": "kernel", "set": args.set, "theta": args.theta, "empty": k.is_empty, "area": k.area, "clip_lines": [ln.label for ln in lines]}
        code = EXIT_EMPTY if k.is_empty else EXIT_OK
    try:
        Path(args.out).write_text(svg)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    res["out"] = args.out
    res["svg_sha256"] = hashlib.sha256(svg.encode()).hexdigest()
    return res, code


def _scan_csv(scan: oracle.ScanResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "empty", "area", "perimeter"])
    for t, e, a, p in zip(scan.thetas, scan.empty, scan.area, scan.perimeter):
        w.writerow([format(float(t), f".{SIG}g"), int(e), format(float(a), f".{SIG}g"), format(float(p), f".{SIG}g")])
    return buf.getvalue()


def cmd_oracle(args, P):
    if args.action == "scan":
        dom = (-HALF_PI, HALF_PI) if args.set == "single" else (0.0, HALF_PI)
        scan = oracle.dense_scan(P, dom, args.samples, args.set)
        text = _scan_csv(scan)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        res = {"samples": len(scan), "set": args.set, "empty_count": int(scan.empty.sum()), "csv_sha256": hashlib.sha256(text.encode()).hexdigest(), "out": args.out}
        return res, EXIT_EMPTY if scan.empty.all() else EXIT_OK
    mode = {"single": "single", "double": "double"}[args.set]
    if args.set == "double" and not 0.0 <= args.theta < HALF_PI:
        raise InputError("theta must lie in [0, pi/2) for the double set")
    k = oracle.kernel_full_clip(P, args.theta, mode)
    res = {"theta": args.theta, "set": args.set, "components": [c.xy.tolist() for c in k.components], "area": k.area, "perimeter": k.perimeter}
    return res, EXIT_EMPTY if k.is_empty else EXIT_OK


def cmd_generate(args):
    P = oracle.generate(args.kind, args.n, args.seed)
    name = f"{args.kind}-{args.n}-{args.seed}"
    if args.out:
        write_polygon(args.out, name, P)
    else:
        sys.stdout.write(json.dumps({"name": name, "vertices": canon(P.xy.tolist())}) + "\n")
    return {"kind": args.kind, "n": P.n, "seed": args.seed, "out": args.out}, EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rotokernel", description="Restricted-orientation kernels under rotation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="kernel at one orientation")
    p.add_argument("file")
    p.add_argument("--theta", type=parse_angle, default=0.0)
    p.add_argument("--set", choices=("single", "double"), default="single")

    p = sub.add_parser("intervals", help="orientations with a nonempty {0deg}-kernel")
    p.add_argument("file")

    p = sub.add_parser("optimize", help="best orientation of an orthogonal polygon")
    p.add_argument("file")
    p.add_argument("--objective", choices=("area", "perimeter"), default="area")
    p.add_argument("--sense", choices=("max", "min"), default="max")

    p = sub.add_parser("render", help="SVG figure")
    p.add_argument("file")
    p.add_argument("--theta", type=parse_angle, default=0.0)
    p.add_argument("--set", choices=("single", "double"), default="single")
    p.add_argument("--show", choices=("kernel", "intervals"), default="kernel")
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle", help="reference computations")
    osub = p.add_subparsers(dest="action", required=True)
    q = osub.add_parser("scan", help="dense angle scan as CSV")
    q.add_argument("file")
    q.add_argument("--samples", type=int, default=2000)
    q.add_argument("--set", choices=("single", "double"), default="single")
    q.add_argument("--out", default=None, help="CSV path (default: stdout, report on stderr)")
    q = osub.add_parser("clip", help="kernel by brute-force clipping")
    q.add_argument("file")
    q.add_argument("--theta", type=parse_angle, default=0.0)
    q.add_argument("--set", choices=("single", "double"), default="single")
    q = osub.add_parser("generate", help="seeded test polygon")
    q.add_argument("--kind", choices=oracle.GENERATOR_KINDS, required=True)
    q.add_argument("--n", type=int, default=24)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", default=None)
    return ap


def _dispatch(args):
    if args.command == "oracle" and args.action == "generate":
        return cmd_generate(args), ""
    name, P, digest = read_polygon(args.file)
    if args.command == "kernel":
        out = cmd_kernel(args, P)
    elif args.command == "intervals":
        out = cmd_intervals(args, P)
    elif args.command == "optimize":
        out = cmd_optimize(args, P)
    elif args.command == "render":
        out = cmd_render(args, P, name)
    else:
        out = cmd_oracle(args, P)
    return out, digest


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        (res, code), digest = _dispatch(args)
    except (InputError, RotoKernelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": argv, "input_sha256": digest, "result": canon(res)}
    report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    text = json.dumps(report, sort_keys=True)
    # the scan CSV owns stdout when no --out is given
    stream = sys.stderr if args.command == "oracle" and getattr(args, "action", "") == "scan" and not args.out else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
