"""Command line: homology, hom and Ext tables, verification suites, Burnside arithmetic, ringoids.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import ast
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import burnside as B
from . import checks, dg, homotopy, ringoid, serialize
from .linalg import format_rational
from .model.homs import hom_growth
from .serialize import InputError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def degree_range(text: str) -> Tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return lo, hi


def positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Fixed-width text table, first column left aligned and the rest right aligned."""
    cols = list(zip(*([header] + [list(r) for r in rows])))
    widths = [max(len(c) for c in col) for col in cols]

    def line(cells):
        out = [cells[0].ljust(widths[0])]
        out += [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join(out).rstrip()

    return "\n".join([line(header)] + [line(r) for r in rows])


def read_input(args) -> object:
    if args.stdin:
        return serialize.loads(sys.stdin.read(), "<stdin>")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(args.file, exc.strerror or str(exc)) from None
        return serialize.loads(text, args.file)
    raise InputError("input", "give --file PATH or --stdin")


def emit(args, data, text: str) -> None:
    print(serialize.dumps(data) if args.json else text)


# ---------------------------------------------------------------------------
# homology

def cmd_homology(args) -> int:
    objs = serialize.objects_from(read_input(args))
    reports, blocks = [], []
    for idx, v in enumerate(objs):
        comps = [(str(k), v.stalk(k)) for k in range(1, v.window + 1)]
        comps += [("tail", v.tail), ("infinity", v.infinity)]
        dims = {name: dg.homology(m).dims for name, m in comps}
        reports.append({"window": v.window,
                        "homology": {name: {str(n): d for n, d in h.items()}
                                     for name, h in dims.items()}})
        if args.degree_range:
            lo, hi = args.degree_range
        else:
            support = [n for _, m in comps for n in m.support] or [0]
            lo, hi = min(support), max(support)
        degs = range(lo, hi + 1)
        header = ["component"] + [f"H_{n}" for n in degs]
        rows = [[("stalk " + name) if name.isdigit() else name]
                + [str(dims[name].get(n, 0)) for n in degs] for name, _ in comps]
        label = f"object {idx} (window {v.window}); stalks beyond the window equal the tail"
        blocks.append(label + "\n" + table(header, rows))
    emit(args, reports if len(reports) > 1 else reports[0], "\n\n".join(blocks))
    return EXIT_OK


# ---------------------------------------------------------------------------
# hom and Ext tables

def _catalog(args) -> List[homotopy.GeneratorExpression]:
    return homotopy.generator_list(args.imax, args.kmax)


def cmd_hom_table(args) -> int:
    gens = _catalog(args)
    lo, hi = args.degree_range or (-2, 2)
    degrees = list(range(lo, hi + 1))
    objs = {g.name: homotopy.catalog(g) for g in gens}
    cells: Dict[Tuple[str, str], Dict[int, int]] = {}
    flagged = []
    for x in gens:
        for y in gens:
            h = homotopy.graded_hom(objs[x.name], objs[y.name], args.cutoff, degrees)
            cells[(x.name, y.name)] = h
            flagged += [(x.name, y.name, n) for n in h if n != 0]
    growth = hom_growth(objs["cQ"], objs["cQ"]).describe()
    names = [g.name for g in gens]

    def cell(x, y):
        return str(cells[(x, y)].get(0, 0))

    data = {"objects": [{"name": g.name, "label": g.label} for g in gens],
            "degrees": degrees, "cutoff": max(args.cutoff or 0, 0),
            "matrix": [[cells[(x, y)].get(0, 0) for y in names] for x in names],
            "graded": {f"{x}->{y}": {str(n): d for n, d in cells[(x, y)].items()}
                       for x in names for y in names},
            "growth": {"cQ->cQ": growth},
            "flagged_nonzero_degrees": [{"source": x, "target": y, "degree": n}
                                        for x, y, n in flagged]}
    text = ["degree-0 hom dimensions [row, column]; cQ -> cQ at window "
            f"{args.cutoff or 0}",
            table(["hom"] + names, [[x] + [cell(x, y) for y in names] for x in names]),
            f"cQ -> cQ grows as {growth}"]
    if flagged:
        text.append("nonzero entries outside degree 0:")
        text += [f"  {x} -> {y} in degree {n}" for x, y, n in flagged]
    else:
        text.append(f"no nonzero entries in degrees {lo}..{hi} other than 0")
    emit(args, data, "\n".join(text))
    return EXIT_FAIL if flagged else EXIT_OK


def cmd_ext_table(args) -> int:
    if args.file or args.stdin:
        objs = serialize.objects_from(read_input(args))
        named = [(f"obj{i}", v) for i, v in enumerate(objs)]
    else:
        named = [(g.name, homotopy.catalog(g)) for g in _catalog(args)]
    names = [n for n, _ in named]
    cells = {}
    for x, a in named:
        for y, b in named:
            try:
                cells[(x, y)] = homotopy.ext1(a, b).dims
            except homotopy.NontrivialDifferential as exc:
                raise InputError(f"{x} -> {y}", str(exc)) from None

    def show(d):
        return ",".join(f"{n}:{k}" for n, k in sorted(d.items())) if d else "0"

    data = {"objects": names,
            "graded": {f"{x}->{y}": {str(n): k for n, k in cells[(x, y)].items()}
                       for x in names for y in names},
            "matrix": [[sum(cells[(x, y)].values()) for y in names] for x in names]}
    text = ("Ext^1 dimensions [row, column] by degree (degree:dim)\n"
            + table(["ext"] + names, [[x] + [show(cells[(x, y)]) for y in names]
                                      for x in names]))
    emit(args, data, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites

def cmd_verify(args) -> int:
    reports = checks.run_suite(args.suite, args.seed, args.scale)
    ok = all(r.ok for r in reports)
    data = {"seed": args.seed, "suite": args.suite, "ok": ok,
            "reports": [r.as_dict() for r in reports]}
    text = "\n".join([f"seed {args.seed}"] + [r.render() for r in reports]
                     + ["all checks passed" if ok else "SOME CHECKS FAILED"])
    emit(args, data, text)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# Burnside arithmetic

def _name_value(name: str) -> B.BurnsideElement:
    fixed = {"one": B.one, "zero": B.zero, "e_C": B.e_C, "eC": B.e_C, "e_D": B.e_D,
             "eD": B.e_D}
    if name in fixed:
        return fixed[name]()
    for prefix, fn in (("e_", B.e), ("f_", B.f)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    raise ValueError(f"unknown name {name!r} (use one, zero, e_C, e_D, e_<n>, f_<n>)")


def eval_burnside(expr: str) -> B.BurnsideElement:
    """Evaluate ``+``, ``-``, ``*`` over rationals and the named idempotents."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"expression:{exc.offset}", exc.msg or "syntax error") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return _name_value(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div):
                if not isinstance(b, Fraction) or b == 0:
                    raise ValueError("only division by a nonzero rational is allowed")
                return a / b if isinstance(a, Fraction) else a.scale(1 / b)
            if isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
                a = B.one().scale(a) if isinstance(a, Fraction) else a
                b = B.one().scale(b) if isinstance(b, Fraction) else b
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                return a * b
        raise ValueError(f"unsupported syntax at column {getattr(node, 'col_offset', 0) + 1}")

    try:
        out = ev(tree)
    except ValueError as exc:
        raise InputError("expression", str(exc)) from None
    return B.one().scale(out) if isinstance(out, Fraction) else out


def signed_sum(terms: Sequence[Tuple[Fraction, str]]) -> str:
    parts = [(c, name) for c, name in terms if c] or [(Fraction(0), "")]
    out = ""
    for i, (c, name) in enumerate(parts):
        mag = format_rational(abs(c))
        body = name if (mag == "1" and name) else f"{mag} {name}".strip()
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def cmd_burnside(args) -> int:
    if args.file or args.stdin:
        data = read_input(args)
        items = data if isinstance(data, list) else [data]
        values = [serialize.parse_burnside(x, f"input[{i}]") for i, x in enumerate(items)]
    else:
        if not args.expr:
            raise InputError("burnside", "give an expression, --file or --stdin")
        values = [eval_burnside(" ".join(args.expr))]
    out, blocks = [], []
    for x in values:
        c, d, dihedral = x.decompose()
        terms = [(c, "e_C"), (d, "e_D")] + [(v, f"e_{k}") for k, v in sorted(dihedral.items())]
        entry = serialize.burnside_json(x)
        entry["decomposition"] = {"e_C": format_rational(c), "e_D": format_rational(d),
                                  "e_n": {str(k): format_rational(v)
                                          for k, v in sorted(dihedral.items())}}
        entry["idempotent"] = x.is_idempotent()
        blocks.append(x.pretty() + "\n\n= " + signed_sum(terms)
                      + ("\nidempotent" if x.is_idempotent() else ""))
        out.append(entry)
    emit(args, out if len(out) > 1 else out[0], "\n\n".join(blocks))
    return EXIT_OK


# ---------------------------------------------------------------------------
# ringoids

def cmd_ringoid(args) -> int:
    e = ringoid.extract_Ea(args.imax, args.kmax, args.cutoff)
    ok = e.validate() and e.is_concentrated_in_degree_zero() and not e.off_degree
    if args.json:
        data = serialize.category_json(e)
        data["valid"] = ok
        print(serialize.dumps(data))
        return EXIT_OK if ok else EXIT_FAIL
    names = list(e.objects)
    rows = [[x] + [str(e.hom(x, y).dim(0)) for y in names] for x in names]
    lines = [f"E_a over {len(names)} generators, window {e.cutoff}",
             table(["hom"] + names, rows),
             "growth of hom dimensions in the window K:"]
    lines += [f"  {x} -> {y}: {g.describe()}" for (x, y), g in sorted(e.growth.items())]
    lines.append("tensor products of generators:")
    lines += [f"  {x} * {y} = {t}" for (x, y), t in sorted(e.tensor_table.items())]
    lines.append("homs concentrated in degree 0: " + ("yes" if not e.off_degree else
                                                       f"no {e.off_degree}"))
    lines.append("units, associativity, chain maps: " + ("ok" if e.validate() else "FAILED"))
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="admodel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def io(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--file", help="read JSON input from a file")
        g.add_argument("--stdin", action="store_true", help="read JSON input from stdin")

    def bounds(sp, cutoff=True):
        sp.add_argument("--imax", type=positive, default=2, help="largest tensor power i")
        sp.add_argument("--kmax", type=positive, default=2, help="largest stalk index k")
        if cutoff:
            sp.add_argument("--cutoff", type=int, default=None,
                            help="window used for hom(cQ, cQ)")

    def out(sp):
        sp.add_argument("--json", action="store_true", help="emit JSON")

    sp = sub.add_parser("homology", help="componentwise homology of objects")
    io(sp)
    sp.add_argument("--degree-range", type=degree_range, help="degrees to show, a..b")
    out(sp)
    sp.set_defaults(run=cmd_homology)

    sp = sub.add_parser("hom-table", help="hom dimensions between catalog generators")
    bounds(sp)
    sp.add_argument("--degree-range", type=degree_range,
                    help="degrees searched for nonzero entries (default -2..2)")
    out(sp)
    sp.set_defaults(run=cmd_hom_table)

    sp = sub.add_parser("ext-table", help="Ext^1 dimensions between catalog generators or "
                                          "between objects read from JSON")
    bounds(sp, cutoff=False)
    io(sp)
    out(sp)
    sp.set_defaults(run=cmd_ext_table)

    sp = sub.add_parser("verify", help="run seeded verification suites")
    sp.add_argument("suite", choices=list(checks.SUITES) + ["all"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=float, default=1.0,
                    help="multiply the number of random instances")
    out(sp)
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("burnside", help="Burnside ring arithmetic, e.g. 'e_D - e_1 - e_2'")
    sp.add_argument("expr", nargs="*", help="expression in one, zero, e_C, e_D, e_<n>, f_<n>")
    io(sp)
    out(sp)
    sp.set_defaults(run=cmd_burnside)

    sp = sub.add_parser("ringoid", help="dg categories of generators")
    rs = sp.add_subparsers(dest="action", required=True)
    ex = rs.add_parser("extract", help="the ringoid E_a on the catalog generators")
    bounds(ex)
    out(ex)
    ex.set_defaults(run=cmd_ringoid)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (dg.ValidationError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
