"""Command-line front end.

Single-shot: every invocation parses its arguments, evaluates one operation
and prints the result as text or, with ``--json``, as a JSON document that
validates against ``schema/output.schema.json``.

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

from . import asw, ffield, forms, kexp, padic, witt
from .errors import DomainError, UsageError, WittcalcError
from .ffield import FieldElem, FunctionField, GF
from .forms import DiffForm
from .padic import PadicElem, PadicPolynomial
from .parser import Session, parse_expr, parse_field_spec
from .rings import ZZ
from .witt import WittVector

SCHEMA_VERSION = "1.0"


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# rendering

def _fmt_val(v):
    if v == math.inf:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _witt_text(w):
    return f"W({w.format_coords(',')})"


def _form_json(omega):
    names = omega.base.names
    fmt = getattr(omega.base, "format_value", str)
    return {
        "degree": omega.degree,
        "terms": [{"basis": [names[j] for j in J], "coeff": fmt(c)} for J, c in omega.items()],
    }


def _padic_json(x):
    out = {"precision": x.N, "exact_zero": x.is_zero() and x.exact}
    out["valuation"] = None if x.is_zero() else x.e
    return out


def render(value):
    """``(kind, text, json_value)`` for a command result."""
    if isinstance(value, bool):
        return "bool", "true" if value else "false", value
    if isinstance(value, int):
        return "int", str(value), value
    if isinstance(value, FieldElem):
        return "field", str(value), str(value)
    if isinstance(value, PadicElem):
        return "padic", str(value), {"text": str(value), **_padic_json(value)}
    if isinstance(value, WittVector):
        return "witt", _witt_text(value), {
            "p": value.p, "n": value.n, "ring": str(value.ring.name),
            "coords": [value.ring.format(c) for c in value.coords]}
    if isinstance(value, DiffForm):
        return "form", str(value), _form_json(value)
    if isinstance(value, PadicPolynomial):
        return "polynomial", str(value), str(value)
    if isinstance(value, kexp.MilnorSymbolSum):
        return "symbols", str(value), {"q": value.q, "terms": [
            {"unit": kexp._short(u), "entries": [kexp._short(b) for b in bs]} for u, bs in value]}
    if isinstance(value, kexp.GradedClass):
        return "graded", str(value), {"m": value.m, "form": _form_json(value.form)}
    if isinstance(value, asw.CharDatum):
        return "character", str(value), {
            "p": value.p, "n": value.n, "unram": _witt_text(value.unram), "ram": _witt_text(value.ram)}
    if isinstance(value, asw.AswEquation):
        text = str(value)
        if value.degenerate:
            text += "\ndegenerate: true"
        return "equation", text, {"equation": str(value), "degenerate": value.degenerate}
    if value is None:
        return "none", "none", None
    kind, payload = value
    if kind == "ghost":
        text = "(" + ", ".join(str(g) for g in payload) + ")"
        return kind, text, [str(g) for g in payload]
    if kind == "newton":
        items = [f"{{val: {_fmt_val(v)}, mult: {m}}}" for v, m in payload]
        return kind, "roots: [" + ", ".join(items) + "]", {
            "roots": [{"val": _fmt_val(v), "mult": m} for v, m in payload]}
    if kind == "decomposition":
        lines = [f"I=({','.join(map(str, I))}): {f}" for I, f in payload.items()]
        return kind, "\n".join(lines) or "0", [
            {"index": list(I), "value": str(f)} for I, f in payload.items()]
    if kind == "valuation":
        return kind, _fmt_val(payload), _fmt_val(payload)
    raise TypeError(f"cannot render {value!r}")


# argument plumbing

def _session(args, witt_over_zz=False):
    p = args.p
    ffield.check_prime(p)
    if args.prec < 1:
        raise UsageError("--prec must be at least 1")
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be at least 1")
    witt_ring = None
    if args.over:
        field, witt_ring = parse_field_spec(args.over, p)
        if witt_ring is ZZ:
            if not witt_over_zz:
                raise UsageError("--over ZZ is only available for witt commands")
            field = GF(p)
    else:
        names = tuple(v.strip() for v in args.vars.split(","))
        if not all(v.isidentifier() for v in names) or len(set(names)) != len(names):
            raise UsageError(f"bad --vars {args.vars!r}")
        if set(names) & {"d", "dlog", "W", "chi", "p", "X", "O", "z"}:
            raise UsageError(f"--vars {args.vars!r} uses a reserved name")
        field = FunctionField(p, names)
    return Session(p, field, prec=args.prec, n=args.n, witt_ring=witt_ring, json=args.json)


def _witt(args, s, src):
    v = parse_expr(src, s)
    if not isinstance(v, WittVector):
        raise UsageError(f"expected a Witt vector, got {src!r}")
    return v


def _typed(src, s, cls, what, domain="field", allow_X=False):
    v = parse_expr(src, s, domain, allow_X)
    if cls is FieldElem or cls is PadicElem:
        if isinstance(v, int):
            v = (s.cohen if cls is PadicElem else s.field)(v)
    if cls is DiffForm and isinstance(v, (int, FieldElem, PadicElem)):
        ring = s.cohen if domain == "padic" else s.field
        v = DiffForm.function(ring(v))
    if not isinstance(v, cls):
        raise UsageError(f"expected {what}, got {src!r}")
    return v


def _field(src, s):
    return _typed(src, s, FieldElem, "a field element")


def _padic(src, s):
    return _typed(src, s, PadicElem, "a p-adic element", "padic")


def _form(src, s, domain="field"):
    return _typed(src, s, DiffForm, "a differential form", domain)


def _required(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for this command")
    return value


def _cmd_witt(args):
    s = _session(args, witt_over_zz=True)
    op = args.op
    if op == "add":
        return _witt(args, s, args.x) + _witt(args, s, args.y)
    if op == "mul":
        return _witt(args, s, args.x) * _witt(args, s, args.y)
    if op == "ghost":
        return ("ghost", witt.ghost_map(_witt(args, s, args.x)))
    if op == "unghost":
        if s.witt_ring is not ZZ:
            raise UsageError("witt unghost inverts the ghost map over the integers; pass --over ZZ")
        return witt.from_ghost([parse_expr(c, s, "zz") for c in args.components], s.p)
    if op == "frob":
        return witt.frobenius(_witt(args, s, args.x), args.length)
    if op == "versch":
        return witt.verschiebung(_witt(args, s, args.x))
    if op == "teich":
        n = _required(args, "n")
        ring = s.witt_ring
        a = parse_expr(args.x, s, "zz" if ring is ZZ else "field")
        return witt.teichmuller(ring(a) if isinstance(a, int) else a, s.p, n, ring)
    raise AssertionError(op)


def _cmd_field(args):
    s = _session(args)
    op = args.op
    if op == "decompose":
        return ("decomposition", ffield.pth_power_decompose(_field(args.x, s)))
    if op == "ispower":
        return ffield.is_pk_power(_field(args.x, s), _required(args, "k"))
    if op == "trace":
        return ffield.trace(_field(args.x, s))
    if op == "asw-solve":
        return ffield.asw_solve(_field(args.x, s))
    if op == "asw-order":
        return ffield.asw_order(_witt(args, s, args.x))
    raise AssertionError(op)


def _cmd_form(args):
    s = _session(args)
    op = args.op
    if op == "d":
        return forms.d(_form(args.x, s))
    if op == "dlog":
        g = _field(args.x, s)
        return forms.dlog(g)
    if op == "wedge":
        return forms.wedge(_form(args.x, s), _form(args.y, s))
    if op == "cartier":
        return forms.cartier(_form(args.x, s), require_closed=args.closed)
    if op == "bmember":
        return forms.b_membership(_form(args.x, s), _required(args, "m"))
    if op == "greq":
        return forms.graded_equal(_form(args.x, s), _form(args.y, s), _required(args, "m"))
    raise AssertionError(op)


def _cmd_padic(args):
    s = _session(args)
    op = args.op
    if op == "exp":
        return padic.exp_series(_padic(args.x, s))
    if op == "log":
        return padic.log_series(_padic(args.x, s))
    if op == "val":
        return ("valuation", padic.valuation(_padic(args.x, s)))
    if op == "reduce":
        return padic.reduce(_padic(args.x, s))
    if op == "frob":
        return padic.frobenius_lift(_padic(args.x, s))
    if op == "newton":
        src = args.poly if args.poly is not None else args.x
        if src is None:
            raise UsageError("padic newton needs --poly")
        poly = parse_expr(src, s, "padic", allow_X=True)
        if not isinstance(poly, PadicPolynomial):
            raise UsageError(f"expected a polynomial in X, got {src!r}")
        return ("newton", padic.newton_polygon(poly))
    raise AssertionError(op)


def _cmd_kexp(args):
    s = _session(args)
    op = args.op
    if op == "expp":
        return kexp.exp_p(_form(args.x, s, "padic"))
    if op == "graded":
        total = None
        for src in args.symbols:
            sym = parse_expr(src, s, "padic")
            if not isinstance(sym, kexp.MilnorSymbolSum):
                raise UsageError(f"expected a symbol {{u; b1, ...}}, got {src!r}")
            total = sym if total is None else total + sym
        return kexp.symbol_to_graded(total, _required(args, "m"), s.field)
    raise AssertionError(op)


def _char(src, s):
    v = parse_expr(src, s)
    if isinstance(v, WittVector):
        return asw.CharDatum.ramified(v)
    if not isinstance(v, asw.CharDatum):
        raise UsageError(f"expected a character chi<p,n>{{...}} or a Witt vector, got {src!r}")
    return v


def _cmd_asw(args):
    s = _session(args)
    op = args.op
    if op == "phi1":
        return asw.phi1_of_equation(_padic(_required(args, "a"), s))
    if op == "equation":
        return asw.construct_equation(_field(_required(args, "a"), s), s.prec)
    if op == "miki":
        return asw.miki_criterion(_padic(_required(args, "a"), s), _required(args, "level"))
    if op == "embed":
        return asw.embedding_criterion(_witt(args, s, args.x), _required(args, "m"))
    if op == "scalep":
        return asw.scale_by_p(_char(args.x, s))
    if op == "include":
        return asw.include_level(_char(args.x, s))
    if op == "psi":
        return asw.psi_n(_witt(args, s, args.x), s.prec)
    raise AssertionError(op)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="the prime p")
    common.add_argument("--n", type=int, help="Witt vector length")
    common.add_argument("--prec", type=int, default=4, help="p-adic precision N (default 4)")
    common.add_argument("--vars", default="T", help="comma-separated variables of F = F_p(vars)")
    common.add_argument("--over", help="GF(p), GF(p^r), GF(q) or ZZ (witt only); overrides --vars")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    parser = _ArgumentParser(prog="wittcalc", description=__doc__.split("\n\n")[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_ArgumentParser)

    def leaf(sub, name, help, *positionals, **extra):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            sp.add_argument(pos)
        for flag, kw in extra.items():
            sp.add_argument(f"--{flag}", **kw)
        return sp

    g = groups.add_parser("witt", help="Witt vector arithmetic").add_subparsers(dest="op", required=True)
    leaf(g, "add", "sum of two Witt vectors", "x", "y")
    leaf(g, "mul", "product of two Witt vectors", "x", "y")
    leaf(g, "ghost", "ghost components", "x")
    sp = leaf(g, "unghost", "Witt vector with the given ghost components")
    sp.add_argument("components", nargs="+")
    leaf(g, "frob", "Frobenius (characteristic p coordinates)", "x", length={"type": int})
    leaf(g, "versch", "Verschiebung", "x")
    leaf(g, "teich", "Teichmuller representative (needs --n)", "x")

    g = groups.add_parser("field", help="residue field operations").add_subparsers(dest="op", required=True)
    leaf(g, "decompose", "p-th power decomposition f = sum f_I^p t^I", "x")
    leaf(g, "ispower", "is f a p^k-th power", "x", k={"type": int})
    leaf(g, "trace", "absolute trace of a finite field element", "x")
    leaf(g, "asw-solve", "solve x^p - x = a in F_q", "x")
    leaf(g, "asw-order", "order of w in W_n(F_q)/(F - 1)", "x")

    g = groups.add_parser("form", help="differential forms").add_subparsers(dest="op", required=True)
    leaf(g, "d", "exterior derivative", "x")
    leaf(g, "dlog", "logarithmic differential dg/g", "x")
    leaf(g, "wedge", "exterior product", "x", "y")
    leaf(g, "cartier", "Cartier operator", "x", closed={"action": "store_true"})
    leaf(g, "bmember", "membership in B_m", "x", m={"type": int})
    leaf(g, "greq", "equality modulo B_{m-1}", "x", "y", m={"type": int})

    g = groups.add_parser("padic", help="truncated Cohen ring").add_subparsers(dest="op", required=True)
    leaf(g, "exp", "exponential series", "x")
    leaf(g, "log", "logarithm series", "x")
    leaf(g, "val", "p-adic valuation", "x")
    leaf(g, "reduce", "reduction to the residue field", "x")
    leaf(g, "frob", "Frobenius lift", "x")
    sp = leaf(g, "newton", "root valuations from the Newton polygon", poly={})
    sp.add_argument("x", nargs="?")

    g = groups.add_parser("kexp", help="exponential map and graded pieces").add_subparsers(dest="op", required=True)
    leaf(g, "expp", "exp_p of an integral form", "x")
    sp = leaf(g, "graded", "image of a symbol sum in Omega/B_{m-1}", m={"type": int})
    sp.add_argument("symbols", nargs="+")

    g = groups.add_parser("asw", help="characters and equations").add_subparsers(dest="op", required=True)
    leaf(g, "phi1", "ramified coordinate of x^p - x = a/p", a={})
    leaf(g, "equation", "equation attached to a residue element", a={})
    leaf(g, "miki", "does x^p - x = a/p embed in a cyclic degree-p^N extension", a={}, level={"type": int})
    leaf(g, "embed", "embedding criterion for a Witt vector", "x", m={"type": int})
    leaf(g, "scalep", "multiplication by p on a character", "x")
    leaf(g, "include", "inclusion into the next level", "x")
    leaf(g, "psi", "exponential lift psi_n of a Witt vector", "x")
    return parser


_COMMANDS = {"witt": _cmd_witt, "field": _cmd_field, "form": _cmd_form,
             "padic": _cmd_padic, "kexp": _cmd_kexp, "asw": _cmd_asw}


def run(argv, stdout=None, stderr=None):
    """Execute one command; return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    want_json = "--json" in argv
    command = " ".join(a for a in argv[:2] if not a.startswith("-"))
    try:
        args = build_parser().parse_args(argv)
        command = f"{args.group} {args.op}"
        kind, text, value = render(_COMMANDS[args.group](args))
    except SystemExit as exc:  # --help
        return exc.code or 0
    except (UsageError, DomainError, ZeroDivisionError) as exc:
        code = 2 if isinstance(exc, UsageError) else 1
        name = type(exc).__name__
        if want_json:
            doc = {"schema_version": SCHEMA_VERSION, "command": command, "ok": False,
                   "error": {"type": name, "message": str(exc), "exit_code": code}}
            print(json.dumps(doc, sort_keys=True), file=stdout)
        print(f"error: {name}: {exc}", file=stderr)
        return code
    except WittcalcError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "ok": True,
               "kind": kind, "text": text, "value": value}
        print(json.dumps(doc, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return 0


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
