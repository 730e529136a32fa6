"""Command-line front end: build surfaces, decompose, classify, cover, census.

Exit codes: 0 success, 1 domain error (anything raising VeechkitError),
2 usage error.  All file writes go through a temp file and an atomic rename;
reports carry exact scalars as strings, only SVG output is approximate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .census import census, census_to_json, fat_sequence
from .covers import CoverSpec, Slit, build_cover, cyclic_slit_cover, double_cover
from .cylinders import (classify_direction, decompose, torus_signature,
                        twist_orbit)
from .errors import InvalidParams, VeechkitError
from .field import FieldScalar, parse_scalar, scalar
from .geometry import Mat2, Vec2
from .surface import Surface
from .svg import decomposition_svg, gallery_svg


# -- small plumbing -----------------------------------------------------------


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".veechkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(path, text):
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _parse_vec(text) -> Vec2:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidParams("expected 'p,q', got %r" % text)
    return Vec2(parse_scalar(parts[0].strip()), parse_scalar(parts[1].strip()))


def _parse_mat(text) -> Mat2:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise InvalidParams("expected four row-major entries 'a,b,c,d', got %r"
                            % text)
    return Mat2(*(parse_scalar(p) for p in parts))


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_surface(path) -> Surface:
    return Surface.from_json(_load_json(path))


def _jsonify(x):
    """Exact report values: scalars become their exact string form."""
    if isinstance(x, FieldScalar):
        return str(x)
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return str(x) if isinstance(x, Fraction) else x
    if isinstance(x, Vec2):
        return [str(x.x), str(x.y)]
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    return x


def _dir_str(v: Vec2) -> str:
    return "%s,%s" % (v.x, v.y)


# -- subcommand handlers ------------------------------------------------------


def _cmd_build(args):
    preset = args.preset.replace("_", "-")
    marked = []
    for spec in args.mark or []:
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) not in (3, 4):
            raise InvalidParams("--mark wants POLY,X,Y[,LABEL], got %r" % spec)
        label = parts[3] if len(parts) == 4 else None
        marked.append((int(parts[0]),
                       (parse_scalar(parts[1]), parse_scalar(parts[2])), label))
    if preset == "square-torus":
        surf = Surface.square_torus(marked=marked)
    elif preset == "cross":
        surf = Surface.cross(args.a if args.a is not None else 1,
                             args.b if args.b is not None else 1,
                             marked=marked)
    elif preset == "l-shape":
        params = [args.a, args.b, args.c, args.e]
        if any(p is None for p in params):
            raise InvalidParams("l-shape needs --a --b --c --e")
        surf = Surface.l_shape(*params, marked=marked)
    else:
        raise InvalidParams("unknown preset %r" % args.preset)
    _emit(args.output, _canon(surf.to_json()))
    return 0


def _info_line(surf: Surface) -> str:
    if surf.singular_classes:
        angles = sorted((2 * surf.cone_windings[c] for c in
                         surf.singular_classes), reverse=True)
        sing = ", ".join("%dpi" % a for a in angles)
    else:
        sing = "none"
    return "genus %d, singularities: %s, area %s" % (surf.genus(), sing,
                                                     surf.area)


def _cmd_info(args):
    print(_info_line(_load_surface(args.surface)))
    return 0


def _cap_of(args, surf):
    return parse_scalar(args.cap) if args.cap else None


def _cmd_decompose(args):
    surf = _load_surface(args.surface)
    direction = _parse_vec(args.dir)
    deco = decompose(surf, direction, cap=_cap_of(args, surf))
    sig = torus_signature(deco) if deco.complete else None
    rows = []
    for cyl in deco.cylinders:
        rows.append({
            "cylinder": cyl.index, "width": cyl.width, "height": cyl.height,
            "inverse_modulus": cyl.inverse_modulus,
            "class": sig.class_of_cylinder(cyl.index) if sig else None,
        })
    if deco.complete:
        print("Complete: %d cylinders, m=%d%s"
              % (len(deco.cylinders), sig.m,
                 ", s'=%s" % sig.s_prime if sig.s_prime is not None else ""))
    else:
        print("Undetermined")
    for r in rows:
        print("cylinder %d: w=%s h=%s inverse_modulus=%s class=%s"
              % (r["cylinder"], r["width"], r["height"],
                 r["inverse_modulus"], r["class"]))
    if args.csv:
        lines = ["direction,cylinder,width,height,inverse_modulus,class"]
        for r in rows:
            lines.append("\"%s\",%d,%s,%s,%s,%s"
                         % (_dir_str(deco.direction), r["cylinder"],
                            r["width"], r["height"], r["inverse_modulus"],
                            "" if r["class"] is None else r["class"]))
        _atomic_write(args.csv, "\n".join(lines) + "\n")
    if args.output:
        out = {"direction": deco.direction, "status": deco.status,
               "cylinders": rows,
               "signature": None if sig is None else
               {"m": sig.m, "s_prime": sig.s_prime,
                "classes": [sorted(g) for g in sig.classes]}}
        _atomic_write(args.output, _canon(_jsonify(out)))
    return 0


def _cmd_classify(args):
    surf = _load_surface(args.surface)
    cls = classify_direction(surf, _parse_vec(args.dir),
                             cap=_cap_of(args, surf))
    if cls.kind == "Parabolic":
        print("Parabolic s'=%s" % cls.s_prime)
    elif cls.kind == "Fat":
        mk, cyl, ratio = cls.certificate
        print("Fat mark=%d cylinder=%d ratio=%s" % (mk, cyl, ratio))
    elif cls.kind == "PeriodicMixed":
        print("PeriodicMixed m=%d" % cls.signature.m)
    else:
        print("Undetermined")
    return 0


def _cmd_twist_orbit(args):
    surf = _load_surface(args.surface)
    if args.mark is not None:
        mark = args.mark
    elif args.point is not None:
        at = _parse_vec(args.point)
        marks = [(m.polygon, m.at, m.label) for m in surf.marked]
        marks.append((args.polygon, at, None))
        surf = surf.with_marks(marks)
        mark = len(marks) - 1
    else:
        raise InvalidParams("need --point or --mark")
    report, samples = twist_orbit(
        surf, mark, _parse_vec(args.twist_dir), _parse_vec(args.target_dir),
        args.n, target_cylinder=args.target_cylinder,
        cap=_cap_of(args, surf))
    landed = [s for s in samples if s["state"] == "ratio"]
    distinct = len({str(s["ratio"]) for s in landed})
    print("n=%d landed=%d distinct_ratios=%d theta=%s nu=%s"
          % (len(samples), len(landed), distinct, report["theta"],
             report["nu"]))
    for s in samples[:args.n if args.verbose else 10]:
        print("  n=%d position=%s %s%s"
              % (s["n"], s["position"], s["state"],
                 "" if s["ratio"] is None else " ratio=%s" % s["ratio"]))
    if args.output:
        cyl_c, cyl_d = report["twist_cylinder"], report["target_cylinder"]
        start = report["start"]
        out = {
            "mark": report["mark"], "theta": report["theta"],
            "twist_cylinder": {"index": cyl_c.index, "width": cyl_c.width,
                               "height": cyl_c.height},
            "target_cylinder": {"index": cyl_d.index, "width": cyl_d.width,
                                "height": cyl_d.height},
            "start": {"state": start.state, "cylinder": start.cylinder,
                      "ratio": start.ratio},
            "nu": report["nu"], "lambda": report["lambda"],
            "y0": report["y0"],
            "samples": samples,
        }
        _atomic_write(args.output, _canon(_jsonify(out)))
    return 0


def _cmd_cover(args):
    obj = _load_json(args.spec)
    if args.base:
        base = _load_surface(args.base)
    elif "base" in obj:
        base = Surface.from_json(obj["base"])
    else:
        raise InvalidParams("cover spec needs a 'base' key or --base FILE")
    slits = [Slit.from_json(s) for s in obj.get("slits", [])]
    if args.construction == "double":
        cover = double_cover(base, slits)
    else:
        degree = obj.get("degree")
        if degree is None:
            raise InvalidParams("cyclic cover spec needs 'degree'")
        if "perms" in obj:
            perms = [[i - 1 for i in p] for p in obj["perms"]]
        elif "perm" in obj:
            perms = [[i - 1 for i in obj["perm"]]] * len(slits)
        else:
            shift = list(range(1, degree)) + [0]
            perms = [shift] * len(slits)
        spec = CoverSpec(base, degree, slits, perms)
        if len(slits) == 1:
            cover = cyclic_slit_cover(spec)
        else:
            cover = build_cover(spec)
    _emit(args.output, _canon(cover.to_json()))
    if args.output:
        print(_info_line(cover))
    return 0


def _parse_seed_entry(entry) -> Vec2:
    if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
        raise InvalidParams("census seed %r is not a direction pair" % (entry,))
    comps = []
    for v in entry:
        if isinstance(v, bool) or isinstance(v, float):
            raise InvalidParams("census seeds must be exact (int or string)")
        comps.append(parse_scalar(v) if isinstance(v, str) else scalar(v))
    return Vec2(*comps)


def _cmd_census(args):
    surf = _load_surface(args.surface)
    obj = _load_json(args.seeds)
    if isinstance(obj, dict):
        obj = obj.get("directions", [])
    directions = [_parse_seed_entry(e) for e in obj]
    cap = _cap_of(args, surf)
    reports = census(surf, directions, cap=cap)
    for rep in reports:
        extra = ""
        if rep.kind == "Parabolic":
            extra = " s'=%s" % rep.s_prime
        elif rep.kind == "Fat":
            extra = " ratio=%s" % rep.certificate[2]
        print("%s: %s%s" % (_dir_str(rep.direction), rep.kind, extra))
    _emit(args.output, census_to_json(reports) + "\n")
    if args.csv:
        lines = ["direction,class,xi,m,s_prime_or_ratio"]
        for rep in reports:
            if rep.kind == "Parabolic":
                tail = str(rep.s_prime)
            elif rep.kind == "Fat":
                tail = str(rep.certificate[2])
            else:
                tail = ""
            lines.append("\"%s\",%s,%s,%s,%s"
                         % (_dir_str(rep.direction), rep.kind,
                            "" if rep.xi is None else rep.xi,
                            "" if rep.m is None else rep.m, tail))
        _atomic_write(args.csv, "\n".join(lines) + "\n")
    if args.svg:
        entries = []
        for rep in reports:
            deco = decompose(surf, rep.direction, cap=cap)
            entries.append(("dir %s: %s" % (_dir_str(rep.direction), rep.kind),
                            deco))
        _atomic_write(args.svg, gallery_svg(entries))
    return 0


def _cmd_fat_seq(args):
    surf = _load_surface(args.surface)
    steps = fat_sequence(surf, _parse_vec(args.theta), _parse_mat(args.twist),
                         _parse_vec(args.seed), args.n,
                         cap=_cap_of(args, surf))
    for st in steps:
        print("n=%d dir=%s %s%s gap=%s"
              % (st.n, _dir_str(st.direction), st.kind,
                 "" if st.ratio is None else " ratio=%s" % st.ratio,
                 st.gap))
    if args.output:
        out = [{"n": st.n, "direction": st.direction, "class": st.kind,
                "ratio": st.ratio, "gap": st.gap} for st in steps]
        _atomic_write(args.output, _canon(_jsonify(out)))
    return 0


def _cmd_render(args):
    surf = _load_surface(args.surface)
    direction = _parse_vec(args.dir)
    deco = decompose(surf, direction, cap=_cap_of(args, surf))
    _atomic_write(args.svg, decomposition_svg(
        deco, label="dir %s: %s" % (_dir_str(deco.direction), deco.status)))
    print("wrote %s" % args.svg)
    return 0


# -- parser -------------------------------------------------------------------


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="veechkit",
        description="Exact cylinder decompositions, splitting ratios, slit "
                    "coverings and direction censuses of translation surfaces.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="write a preset surface as JSON")
    p.add_argument("--preset", required=True,
                   help="square-torus | cross | l-shape")
    for flag in ("--a", "--b", "--c", "--e"):
        p.add_argument(flag, type=str, default=None)
    p.add_argument("--mark", action="append",
                   help="POLY,X,Y[,LABEL]; repeatable")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_build)

    p = sub.add_parser("info", help="genus, singularities, area")
    p.add_argument("surface")
    p.set_defaults(run=_cmd_info)

    p = sub.add_parser("decompose", help="cylinder decomposition in a direction")
    p.add_argument("surface")
    p.add_argument("--dir", required=True)
    p.add_argument("--cap")
    p.add_argument("--csv")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_decompose)

    p = sub.add_parser("classify", help="Parabolic / Fat / PeriodicMixed")
    p.add_argument("surface")
    p.add_argument("--dir", required=True)
    p.add_argument("--cap")
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("twist-orbit",
                       help="splitting ratios along a twist orbit")
    p.add_argument("surface")
    p.add_argument("--point", help="X,Y in chart --polygon")
    p.add_argument("--polygon", type=int, default=0)
    p.add_argument("--mark", type=str, default=None,
                   help="label of an existing marked point")
    p.add_argument("--twist-dir", default="1,0")
    p.add_argument("--target-dir", default="0,1")
    p.add_argument("--target-cylinder", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_twist_orbit)

    p = sub.add_parser("cover", help="build a slit covering")
    p.add_argument("construction", choices=["cyclic", "double"])
    p.add_argument("--spec", required=True)
    p.add_argument("--base")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_cover)

    p = sub.add_parser("census", help="classify a list of seed directions")
    p.add_argument("surface")
    p.add_argument("--seeds", required=True)
    p.add_argument("--cap")
    p.add_argument("-o", "--output")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(run=_cmd_census)

    p = sub.add_parser("fat-seq",
                       help="classify twist-images phi^-n of a seed direction")
    p.add_argument("surface")
    p.add_argument("--theta", required=True)
    p.add_argument("--twist", required=True,
                   help="parabolic matrix, row-major a,b,c,d")
    p.add_argument("--seed", default="0,1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_fat_seq)

    p = sub.add_parser("render", help="SVG of one decomposition")
    p.add_argument("surface")
    p.add_argument("--dir", required=True)
    p.add_argument("--cap")
    p.add_argument("--svg", required=True)
    p.set_defaults(run=_cmd_render)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.run(args)
    except VeechkitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
