"""Command-line entry point: ``affine-descent <subcommand> [flags]``.

Exit codes: 0 success, 1 a check failed (witness printed), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from . import affine as af
from . import descent as ds
from . import gkm
from .rootdata import RootDataError, build_root_datum, load_lattice_basis


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, payload, table):
        super().__init__("check failed")
        self.payload, self.table = payload, table


# -- parsing helpers -------------------------------------------------------------------

def parse_vector(text: str, rank: int, what: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    try:
        vals = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: cannot read {text!r} as comma-separated rationals") from None
    if len(vals) != rank:
        raise UsageError(f"{what}: expected {rank} coordinates, got {len(vals)}")
    return vals


def parse_point(text: str, rank: int) -> tuple[tuple, tuple]:
    """'a,b' or 'a,b;c,d' (real part ; imaginary part)."""
    if text.count(";") > 1:
        raise UsageError(f"--point: at most one ';' allowed in {text!r}")
    re_txt, _, im_txt = text.partition(";")
    re_part = parse_vector(re_txt, rank, "--point")
    im_part = parse_vector(im_txt, rank, "--point (imaginary part)") if im_txt else (Fraction(0),) * rank
    return re_part, im_part


def get_datum(args):
    iso = args.isogeny
    if iso not in ("adjoint", "simply_connected", "sc"):
        if not os.path.exists(iso):
            raise UsageError(f"--isogeny: expected adjoint, simply_connected or a lattice JSON file, got {iso!r}")
        iso = load_lattice_basis(iso)
    return build_root_datum(args.type, iso)


def get_interval(datum, text: str):
    try:
        return af.interval_from_word(datum, text)
    except af.AffineError as exc:
        raise UsageError(f"--interval: {exc}") from None


def get_element(datum, text: str, flag: str):
    try:
        return af.parse_element(datum, text)
    except (af.AffineError, RootDataError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


# -- output ----------------------------------------------------------------------------

def emit(payload, table, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    header, rows = table
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def kv_table(d: dict):
    return ["key", "value"], [[k, json.dumps(v, sort_keys=True) if not isinstance(v, str) else v]
                              for k, v in d.items()]


def _b(x: bool) -> str:
    return str(bool(x)).lower()


# -- subcommands ------------------------------------------------------------------------

def cmd_root_datum(args):
    d = get_datum(args)
    info = d.describe()
    info["length_zero_elements"] = {",".join(map(str, c)): af.format_element(w)
                                    for c, w in af.length_zero_elements(d).items()}
    return info, kv_table(info)


def cmd_stabilizer(args):
    d = get_datum(args)
    points = []
    if args.point:
        points.append(parse_point(args.point, d.rank))
    if args.samples:
        rnd = random.Random(args.seed)
        for _ in range(args.samples):
            re_part = tuple(Fraction(rnd.randint(-24, 24), rnd.randint(1, 12)) for _ in range(d.rank))
            im_part = tuple(Fraction(rnd.randint(-3, 3), rnd.randint(1, 4)) for _ in range(d.rank)) \
                if rnd.random() < 0.2 else (Fraction(0),) * d.rank
            points.append((re_part, im_part))
    if not points:
        raise UsageError("stabilizer: give --point or --samples")
    certs, rows, failed = [], [], False
    for re_part, im_part in points:
        c = af.stabilizer(d, re_part, im_part)
        bad = c.check()
        failed |= bool(bad)
        rec = c.to_json()
        rec["failures"] = bad
        certs.append(rec)
        rows.append([";".join(map(str, re_part)) + ("" if not any(im_part) else " | " + ";".join(map(str, im_part))),
                     c.order, len(c.re_elements), c.phi_x_type, " ".join(rec["parabolic_type"]) or "-",
                     c.alcove_count, _b(not bad)])
    payload = certs[0] if len(certs) == 1 and not args.samples else {"certificates": certs, "seed": args.seed}
    table = (["point", "order", "re_order", "phi_x", "parabolic", "alcoves", "ok"], rows)
    if failed:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_walk(args):
    d = get_datum(args)
    if not args.point:
        raise UsageError("walk: --point is required")
    x, _ = parse_point(args.point, d.rank)
    start = af.Alcove(get_element(d, args.start, "--from")) if args.start else af.Alcove(af.identity(d))
    if args.end:
        end = af.Alcove(get_element(d, args.end, "--to"))
    else:
        # default target: the alcove farthest from the start among those around x
        around = af.alcoves_at_point(d, x)
        end = max(around, key=lambda a: (af.length(af.compose(af.invert(start.element), a.element)),
                                         af.format_element(a.element)))
    try:
        walk = af.alcove_walk(d, start, end, x)
    except af.AffineError as exc:
        raise UsageError(f"walk: {exc}") from None
    payload = {"point": af.point_json(x), "from": af.format_element(start.element),
               "to": af.format_element(end.element), "walk": [af.refl_json(r) for r in walk]}
    rows = [[i + 1, ",".join(map(str, r.root)), str(r.level), af.format_element(r.element)]
            for i, r in enumerate(walk)]
    return payload, (["step", "root", "level", "reflection"], rows)


def _graph(args, d):
    if not args.interval:
        raise UsageError("--interval is required")
    return gkm.build_moment_graph(get_interval(d, args.interval))


def cmd_gkm_sections(args):
    d = get_datum(args)
    g = _graph(args, d)
    rows, recs, failed = [], [], False
    for k in range(args.maxdeg + 1):
        dim = gkm.section_dimension(g, k, args.hbar)
        pred = gkm.freeness_prediction(g, k) if args.hbar == gkm.FORMAL else None
        if pred is not None and pred != dim:
            failed = True
        recs.append({"degree": k, "dim_sections": dim, "freeness_prediction": pred})
        rows.append([k, dim, "" if pred is None else pred])
    payload = {"type": d.type_label, "vertices": [af.format_element(v) for v in g.vertices],
               "edges": len(g.edges), "hbar": args.hbar, "rows": recs}
    table = (["degree", "dim_sections", "freeness_prediction"], rows)
    if failed:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_adjacency_check(args):
    d = get_datum(args)
    g = _graph(args, d)
    rep = gkm.kernel_equality_report(g, args.maxdeg, args.hbar)
    payload = rep.to_json()
    table = (["degree", "dim_adjacency", "dim_kernel", "equal"],
             [[r.degree, r.dim_adjacency, r.dim_kernel, _b(r.equal)] for r in rep.rows])
    if not rep.inclusion_holds:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_beta_check(args):
    d = get_datum(args)
    if not args.point:
        raise UsageError("beta-check: --point is required")
    x, _ = parse_point(args.point, d.rank)
    if args.interval:
        g = _graph(args, d)
    else:
        g = gkm.build_moment_graph(af.bruhat_ideal(af.extended_stabilizer(d, x)))
    try:
        rep = gkm.verify_beta_section(x, g, degree=max(1, args.maxdeg))
    except gkm.GKMError as exc:
        raise UsageError(f"beta-check: {exc}") from None
    payload = rep.to_json()
    table = (["check", "ok"], [[k, _b(v)] for k, v in rep.checks.items()])
    if not rep.ok:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_separates(args):
    d = get_datum(args)
    if not (args.point and args.gamma and args.delta):
        raise UsageError("separates: --point, --gamma and --delta are required")
    y, _ = parse_point(args.point, d.rank)
    g = get_element(d, args.gamma, "--gamma")
    h = get_element(d, args.delta, "--delta")
    try:
        rule = gkm.separates(g, h, y)
    except gkm.GKMError as exc:
        raise UsageError(f"separates: {exc}") from None
    ev = gkm.separates_by_evaluation(g, h, y)
    payload = {"gamma": af.format_element(g), "delta": af.format_element(h), "point": af.point_json(y),
               "separates": rule, "by_evaluation": ev}
    table = (["separates", "by_evaluation"], [[_b(rule), _b(ev)]])
    if rule != ev:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_invariants(args):
    d = get_datum(args)
    re_part, im_part = parse_point(args.point, d.rank) if args.point else ((0,) * d.rank, None)
    grp = ds.group_at_point(d, re_part, im_part)
    rep = ds.cst_check(grp, args.maxdeg)
    payload = rep.to_json()
    payload["point"] = af.point_json(grp.center)
    table = kv_table(rep.to_json())
    if not rep.ok:
        raise CheckFailed(payload, table)
    return payload, table


def _load_module(args, d):
    if not args.module:
        raise UsageError("--module is required")
    names = {r.name: r for r in ds.corpus()}
    if args.module in names and not os.path.exists(args.module):
        return d, names[args.module]
    try:
        md, recipe = ds.load_module_spec(args.module)
    except OSError as exc:
        raise UsageError(f"--module: {exc}") from None
    except (ds.DescentError, RootDataError) as exc:
        raise UsageError(str(exc)) from None
    if md.type_label != d.type_label:
        raise UsageError(f"module is for type {md.type_label}, but --type is {d.type_label}")
    return md, recipe


def cmd_descent_check(args):
    d = get_datum(args)
    d, recipe = _load_module(args, d)
    if not args.point:
        raise UsageError("descent-check: --point is required")
    re_part, im_part = parse_point(args.point, d.rank)
    grp = ds.group_at_point(d, re_part, im_part)
    try:
        m = recipe.restrict(grp)
    except ds.DescentError as exc:
        raise UsageError(str(exc)) from None
    problem = m.cocycle_failure()
    if problem:
        g, h = problem
        payload = {"error": "cocycle", "pair": [af.format_element(g), af.format_element(h)]}
        raise CheckFailed(payload, kv_table(payload))
    if m.resolution_failure():
        payload = {"error": m.resolution_failure()}
        raise CheckFailed(payload, kv_table(payload))
    deg = args.maxdeg if args.maxdeg_given else None
    dv = ds.descends(m, deg)
    iv = ds.derived_isotropy_trivial(m, deg)
    nv = ds.naive_isotropy_trivial(m, deg)
    payload = {"module": recipe.name, "point": af.point_json(grp.center), "group_order": grp.order,
               "descends": dv.to_json(), "derived_isotropy": iv.to_json(), "naive_isotropy": nv.to_json()}
    table = (["check", "ok", "witness"],
             [[name, _b(v.ok), "" if v.witness is None else json.dumps(v.witness, sort_keys=True)]
              for name, v in (("descends", dv), ("derived_isotropy", iv), ("naive_isotropy", nv))])
    if not dv.ok:
        raise CheckFailed(payload, table)
    return payload, table


def cmd_equivalence_report(args):
    d = get_datum(args)
    points = [parse_point(p, d.rank)[0] for p in args.points] if args.points else ds.default_points(d)
    if args.module:
        _, recipe = _load_module(args, d)
        recipes = [recipe]
    else:
        recipes = ds.corpus()
    deg = args.maxdeg if args.maxdeg_given else None
    try:
        rep = ds.equivalence_witness(d, recipes, points, deg)
    except ds.DescentError as exc:
        raise UsageError(str(exc)) from None
    payload = rep.to_json()
    buf = io.StringIO(rep.to_csv())
    rows = list(csv.reader(buf))
    table = (rows[0], rows[1:])
    if not rep.all_agree:
        raise CheckFailed(payload, table)
    return payload, table


COMMANDS = {
    "root-datum": cmd_root_datum,
    "stabilizer": cmd_stabilizer,
    "walk": cmd_walk,
    "gkm-sections": cmd_gkm_sections,
    "adjacency-check": cmd_adjacency_check,
    "beta-check": cmd_beta_check,
    "separates": cmd_separates,
    "invariants": cmd_invariants,
    "descent-check": cmd_descent_check,
    "equivalence-report": cmd_equivalence_report,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="affine-descent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--type", required=True, help="root system label, e.g. A1, A2, G2, A1xA1")
        s.add_argument("--isogeny", default="adjoint",
                       help="adjoint | simply_connected | path to a JSON lattice basis")
        s.add_argument("--format", choices=("table", "csv", "json"), default="table")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--maxdeg", type=int, default=None)
        if name == "equivalence-report":
            s.add_argument("--point", action="append", dest="points")
        else:
            s.add_argument("--point")
        if name in ("gkm-sections", "adjacency-check", "beta-check"):
            s.add_argument("--interval", help="reduced word such as s0s1, or e")
            s.add_argument("--hbar", choices=(gkm.FORMAL, gkm.HBAR_ONE),
                           default=gkm.FORMAL if name == "gkm-sections" else gkm.HBAR_ONE)
        if name in ("descent-check", "equivalence-report"):
            s.add_argument("--module", help="module spec JSON file, or a built-in corpus name")
        if name == "walk":
            s.add_argument("--from", dest="start", help="start alcove as 't[..] w[..]' (default: A0)")
            s.add_argument("--to", dest="end", help="target alcove as 't[..] w[..]'")
        if name == "separates":
            s.add_argument("--gamma", required=False)
            s.add_argument("--delta", required=False)
        if name == "stabilizer":
            s.add_argument("--samples", type=int, default=0, help="also check N seeded random points")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.maxdeg_given = args.maxdeg is not None
    if args.maxdeg is None:
        args.maxdeg = 4
    if args.maxdeg < 0:
        sys.stderr.write("--maxdeg must be nonnegative\n")
        return 2
    try:
        payload, table = COMMANDS[args.command](args)
    except CheckFailed as exc:
        emit(exc.payload, exc.table, args.format, out)
        return 1
    except (UsageError, RootDataError, af.AffineError, ds.DescentError, gkm.GKMError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    emit(payload, table, args.format, out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
