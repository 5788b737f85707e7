"""Command-line interface: ``discwall <command> SCENE ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import affine, invariants, svg, tropical
from .charges import Charge
from .errors import DiscwallError, SceneError, WallAmbiguityError
from .io import load_scene
from .series import Grading, Wall, factorize_scattering, format_rational, wall_function

EXIT_NON_INTEGER = 5


def _point(text: str) -> complex:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"point {text!r}: expected x,y")
    return complex(float(parts[0]), float(parts[1]))


def _charge(text: str) -> Charge:
    try:
        return Charge.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _scene(args, check: bool = True):
    return load_scene(args.scene, check=check)


def cmd_validate(args) -> int:
    scene = load_scene(args.scene, check=False)
    diags = scene.diagnostics
    if args.format == "json":
        _write(_dump([{"level": d.level, "where": d.where, "message": d.message} for d in diags]), None)
    else:
        for d in diags:
            print(d)
        if not scene.errors():
            print("OK")
    return 2 if scene.errors() else 0


def cmd_walls(args) -> int:
    scene = _scene(args)
    g1, g2 = (scene._pad(g) for g in args.charges)
    walls = affine.marginal_wall(g1, g2, scene)
    if args.format == "svg":
        _write(svg.render(scene, walls=walls, title=f"wall {g1} {g2}"), args.out)
    elif args.format == "json":
        _write(_dump({"charges": [str(g1), str(g2)], "walls": [w.to_dict() for w in walls]}), args.out)
    else:
        lines = []
        for k, w in enumerate(walls):
            flag = " degenerate" if w.degenerate else ""
            lines.append(f"wall {k}{flag}: {len(w.polyline)} points, ends {w.endpoints[0]}/{w.endpoints[1]}")
            lines.append("  " + " ".join(f"{p.real:.6f},{p.imag:.6f}" for p in w.polyline))
        _write("\n".join(lines) if lines else "no walls in chart", args.out)
    return 0


def cmd_invariant(args) -> int:
    scene = _scene(args)
    v = invariants.invariant_at(scene._pad(args.charge), args.point, args.order, scene)
    print(format_rational(v))
    return 0


def scatter_at(point: complex, scene, order: int):
    """Incoming and outgoing walls at a point, from the table just before it."""
    path = invariants.cut_chart_path(scene, scene.basepoint, point)
    p = path[-2]
    direction = point - p
    eps = 1e-7 * scene.diameter
    near = point - eps * direction / abs(direction)
    table, _ = invariants.propagate_path(invariants.seed_table(scene, order), path[:-1] + [near], scene)
    dirs = table.directions()
    signed = [x for d in dirs for x in (d, -d)]
    best = []
    for a in signed:
        za = invariants._z(a, point, scene)
        group = [x for x in signed if invariants._aligned(invariants._z(x, point, scene), za, 1e-6)]
        if len(group) > len(best):
            best = group
    if not best:
        return [], []
    ordered = invariants._incoming_order(best, point, direction / abs(direction), scene)
    if len(ordered) == 1:
        r = ordered[0]
        vals = {d: table.get(r * d) for d in range(1, order + 1) if table.get(r * d)}
        w = [Wall(r, wall_function(vals, r, order), point)]
        return w, w
    grading = Grading((ordered[0], ordered[-1]))
    incoming = []
    for r in ordered:
        m = sum(grading.coords(r))
        vals = {d: table.get(r * d) for d in range(1, order // m + 1) if table.get(r * d)}
        incoming.append(Wall(r, wall_function(vals, r, order // m), point))
    return incoming, factorize_scattering(incoming, order)


def cmd_scatter(args) -> int:
    scene = _scene(args)
    inc, out = scatter_at(args.point, scene, args.order)
    if args.format == "json":
        _write(_dump({"incoming": [{"charge": str(w.direction), "function": w.function.to_text()} for w in inc],
                      "outgoing": [{"charge": str(w.direction), "function": w.function.to_text()} for w in out]}),
               None)
    else:
        print("incoming:")
        for w in inc:
            print(f"  {w.direction}: {w.function.to_text()}")
        print("outgoing:")
        for w in out:
            print(f"  {w.direction}: {w.function.to_text()}")
    return 0


def cmd_tropicalize(args) -> int:
    scene = _scene(args)
    discs = tropical.tropicalize(scene._pad(args.charge), args.point, args.order, scene)
    if args.format == "svg":
        _write(svg.render(scene, discs=discs, title=f"discs {args.charge}"), args.out)
        return 0
    data = []
    for d in discs:
        rep = tropical.validate(d, scene)
        item = d.to_dict()
        item["valid"] = rep.ok
        item["relative_class"] = str(tropical.relative_class(d, scene))
        item["affine_length"] = round(tropical.affine_length(d, scene), 12)
        data.append(item)
    if args.format == "json":
        _write(_dump(data), args.out)
    else:
        lines = [f"{len(discs)} disc(s)"]
        for k, item in enumerate(data):
            lines.append(f"disc {k}: class {item['relative_class']}, length {item['affine_length']}, "
                         f"valid {item['valid']}")
            for e in item["edges"]:
                a, b = item["vertices"][e["child"]], item["vertices"][e["parent"]]
                lines.append(f"  {a[0]},{a[1]} -> {b[0]},{b[1]}  {e['charge']} w={e['weight']}")
        _write("\n".join(lines), args.out)
    return 0


def cmd_gv(args) -> int:
    if args.values:
        vals = {d + 1: Fraction(x) for d, x in enumerate(args.values.split(","))}
        order = max(len(vals), 1)
    else:
        scene = _scene(args)
        g = scene._pad(args.charge)
        if g.is_zero():
            vals = {}
        else:
            p, _ = g.primitive()
            table, _ = invariants.table_at(args.point, scene, args.order)
            vals = {d: table.get(p * d) for d in range(1, args.order + 1)}
        order = args.order
    res = invariants.gv_invariants(vals, order, sigma=args.sigma)
    if args.format == "json":
        _write(_dump({"integral": res.integral, "values": {str(d): format_rational(v) for d, v in res.values.items()}}),
               None)
    else:
        for d, v in res.values.items():
            print(f"{d}: {format_rational(v)}")
        if not res.integral:
            print("non-integer invariants: the multiple-cover inversion fails for this input")
    return 0 if res.integral else EXIT_NON_INTEGER


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="discwall", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("scene")
        sp.add_argument("--order", type=int, default=invariants.DEFAULT_ORDER)
        sp.add_argument("--tol", type=float, default=1e-9, help="geometric tolerance")
        sp.add_argument("--format", choices=fmt, default=fmt[0])

    sp = sub.add_parser("validate", help="check a scene file")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("walls", help="trace a wall of marginal stability")
    common(sp, ("text", "json", "svg"))
    sp.add_argument("--charges", type=_charge, nargs=2, required=True, metavar="A,B|F")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_walls)

    sp = sub.add_parser("invariant", help="rational disc invariant at a point")
    common(sp)
    sp.add_argument("--charge", type=_charge, required=True)
    sp.add_argument("--point", type=_point, required=True)
    sp.set_defaults(func=cmd_invariant)

    sp = sub.add_parser("scatter", help="factorize the walls meeting at a point")
    common(sp)
    sp.add_argument("--point", type=_point, required=True)
    sp.set_defaults(func=cmd_scatter)

    sp = sub.add_parser("tropicalize", help="tropical discs of a class at a point")
    common(sp, ("text", "json", "svg"))
    sp.add_argument("--charge", type=_charge, required=True)
    sp.add_argument("--point", type=_point, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_tropicalize)

    sp = sub.add_parser("gv", help="integer invariants along a ray")
    common(sp)
    sp.add_argument("--charge", type=_charge, default=Charge(1, 0))
    sp.add_argument("--point", type=_point, default=None)
    sp.add_argument("--values", help="comma-separated rationals p/q for d = 1, 2, ...")
    sp.add_argument("--sigma", type=int, choices=(-1, 1), default=None,
                    help="quadratic refinement sign of the primitive class")
    sp.set_defaults(func=cmd_gv)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "gv" and not args.values and args.point is None:
        parser.error("gv needs --point or --values")
    try:
        return args.func(args)
    except WallAmbiguityError as e:
        wall = " ".join(str(g) for g in e.wall) if getattr(e, "wall", None) else ""
        print(f"error: {e}" + (f" [wall {wall}]" if wall else ""), file=sys.stderr)
        return e.exit_code
    except DiscwallError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return SceneError.exit_code


if __name__ == "__main__":
    sys.exit(main())
