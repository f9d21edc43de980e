"""``cantor``: batch command line over the library.

Artifacts are read from files (``-`` for stdin); results are printed in the
canonical file formats, to stdout or to ``-o FILE``.  Any failure prints one
line ``error: <code>: <detail>`` and exits with status 2.  Membership and
synchronization verdicts exit 0 for yes and 1 for no.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import anchored as an
from . import circle
from . import germs
from . import mealy
from . import prefix_maps as pm
from .errors import CantorError, KindMismatch, NotNAdic, NotSynchronizingError
from .formats import Artifact, format_mealy, format_prefix_map, format_value, parse_artifact
from .words import (
    EventuallyPeriodicPoint,
    Params,
    check_letters,
    format_point,
    format_word,
    parse_letters,
    parse_point,
    point_from_value,
    point_value,
)


class UsageError(CantorError):
    code = "usage"


class IOFailure(CantorError):
    code = "io"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input helpers -------------------------------------------------------------


def _read(path: str) -> Artifact:
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise IOFailure(f"{path}: {exc.strerror}") from None
    return parse_artifact(data)


def _anchored(a: Artifact, r: int = 1) -> an.AnchoredHomeo:
    if a.kind == "prefixmap":
        return an.from_prefix_map(a.value)
    if a.kind == "anchored":
        return a.value
    if a.kind == "raw":
        return an.from_raw(a.value)
    return an.from_core(Params(a.value.n, r), a.value, a.start or 0)


def _params(args) -> Params:
    try:
        return Params(args.n, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _word(text: str, params: Params) -> tuple:
    w = parse_letters(text)
    check_letters(w, params, rooted=text.startswith("d"))
    return w


def _point(text: str, params: Params) -> EventuallyPeriodicPoint:
    """``d0:01(10)`` syntax or an exact fraction ``p/q``."""
    if "(" in text:
        return parse_point(text, params)
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise NotNAdic(f"{text!r} is neither a point nor a rational number") from None
    return point_from_value(value, params)


def _render_point(p: EventuallyPeriodicPoint, params: Params, how: str) -> str:
    if how == "value":
        return str(point_value(p, params.n))
    other = circle.partner_point(p, params)
    shown = [p] if other is None else [p, other]
    return " ".join(format_point(x, params.n) for x in shown)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"{out}: {exc.strerror}") from None


# -- commands ------------------------------------------------------------------


def cmd_compose(args):
    a, b = _read(args.first), _read(args.second)
    if a.kind == "mealy" and b.kind == "mealy":
        _emit(format_mealy(mealy.product(a.value, b.value)), args.output)
        return 0
    if "mealy" in (a.kind, b.kind):
        raise KindMismatch("compose a machine with a machine, or two maps")
    _emit(format_value(an.compose(_anchored(a), _anchored(b))), args.output)
    return 0


def cmd_invert(args):
    a = _read(args.input)
    if a.kind == "mealy":
        _emit(format_mealy(mealy.invert(a.value), a.start), args.output)
    else:
        _emit(format_value(an.inverse(_anchored(a))), args.output)
    return 0


def cmd_minimize(args):
    a = _read(args.input)
    if a.kind == "mealy":
        small, cls = mealy.minimize(a.value)
        start = None if a.start is None else cls[a.start]
        _emit(format_mealy(small, start), args.output)
    elif a.kind == "prefixmap":
        _emit(format_prefix_map(pm.canonicalize(a.value)), args.output)
    else:
        _emit(format_value(_anchored(a)), args.output)
    return 0


def cmd_sync(args):
    a = _read(args.input)
    if a.kind == "mealy":
        t = a.value
    elif a.kind == "raw":
        try:
            t = an.from_raw(a.value).core
        except NotSynchronizingError as exc:
            print(f"not-synchronizing witness={_subset(exc.witness[0])}")
            return 1
    else:
        t = _anchored(a).core
    cert = mealy.synchronization_certificate(t)
    if isinstance(cert, mealy.NotSynchronizing):
        print(f"not-synchronizing witness={_subset(cert.witness[0])}")
        return 1
    print(f"synchronizing level={cert.level} core_states={len(cert.core_states)}")
    return 0


def _subset(s) -> str:
    return "{" + ",".join(str(q) for q in sorted(s)) + "}"


def cmd_core(args):
    a = _read(args.input)
    if a.kind == "mealy":
        core = mealy.core_extract(a.value)
    else:
        core = _anchored(a).core
    _emit(format_mealy(core), args.output)
    return 0


def _member(group: str, a: Artifact, r: int) -> bool:
    if a.kind == "mealy" and group in ("bnr", "tbnr") and not mealy.is_bisynchronizing(a.value):
        return False
    h = _anchored(a, r)
    if group == "gnr":
        return h.core.is_trivial()
    if group == "tnr":
        return h.core.is_trivial() and pm.is_torder(an.trivial_core_extract(h))[0]
    if group == "bnr":
        return mealy.is_bisynchronizing(h.core)
    return circle.is_tbnr(h)


def cmd_member(args):
    ok = _member(args.group, _read(args.input), args.r)
    print("true" if ok else "false")
    return 0 if ok else 1


def cmd_germ(args):
    h = _anchored(_read(args.input))
    print(germs.germ_at(h, _point(args.point, h.params)))
    return 0


def cmd_decompose(args):
    h = _anchored(_read(args.input))
    g = an.trivial_core_extract(h)
    if isinstance(g, an.NotTrivialCore):
        raise KindMismatch("decompose needs an element with trivial core")
    d = pm.small_support_decompose(g)
    n = g.params.n
    text = (
        f"# factor 1 fixes {format_word(d.first_fixes, n=n)}\n"
        + format_prefix_map(d.first)
        + f"\n# factor 2 fixes {format_word(d.second_fixes, n=n)}\n"
        + format_prefix_map(d.second)
    )
    _emit(text, args.output)
    return 0


def cmd_witness(args):
    params = _params(args)
    if args.kind == "flex":
        g = pm.flexibility_witness(
            [_word(w, params) for w in args.source], [_word(w, params) for w in args.target], params
        )
    elif args.kind == "rubin":
        if len(args.point) != 1:
            raise UsageError("rubin needs exactly one --point")
        g = pm.rubin_witness(
            _point(args.point[0], params),
            [_word(w, params) for w in args.source],
            [_word(w, params) for w in args.target],
            params,
        )
    elif args.kind == "transitive":
        g = pm.transitive_witness(
            [_point(p, params) for p in args.source], [_point(p, params) for p in args.target], params
        )
    else:
        if len(args.point) != 1:
            raise UsageError("realize needs exactly one --point")
        x = point_value(_point(args.point[0], params), params.n)
        avoid = _word(args.avoid, params) if args.avoid else None
        g = pm.realize_germ(x, args.left, args.right, params, avoid)
    _emit(format_prefix_map(g), args.output)
    return 0


def cmd_conjugate(args):
    g, h = _anchored(_read(args.first)), _anchored(_read(args.second))
    _emit(format_value(an.conjugate(g, h)), args.output)
    return 0


def cmd_apply(args):
    a = _read(args.input)
    if (args.word is None) == (args.point is None):
        raise UsageError("give exactly one of --word or --point")
    if a.kind == "mealy":
        t, q = a.value, a.start or 0
        if args.word is None:
            raise UsageError("machines are applied to plain words only")
        w = _word(args.word, Params(t.n, 1))
        print(format_word(t.output(w, q), rooted=False, n=t.n))
        return 0
    h = _anchored(a)
    if args.word is not None:
        print(format_word(an.evaluate_word(h, _word(args.word, h.params)), n=h.params.n))
    else:
        image = an.evaluate_point(h, _point(args.point, h.params))
        print(_render_point(image, h.params, args.render))
    return 0


def cmd_value(args):
    params = _params(args)
    print(_render_point(_point(args.point, params), params, args.render))
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cantor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, inputs=("input",), out=True):
        s = sub.add_parser(name, help=help_text)
        for i in inputs:
            s.add_argument(i)
        if out:
            s.add_argument("-o", "--output")
        s.set_defaults(func=func)
        return s

    def nr(s):
        s.add_argument("-n", type=int, default=2)
        s.add_argument("-r", type=int, default=1)

    add("compose", cmd_compose, "g then h", ("first", "second"))
    add("invert", cmd_invert, "inverse element or machine")
    add("minimize", cmd_minimize, "minimal machine or canonical form")
    add("sync", cmd_sync, "synchronization level and core size", out=False)
    add("core", cmd_core, "core of a machine or element")
    s = add("member", cmd_member, "group membership", out=False)
    s.add_argument("--group", choices=["gnr", "tnr", "bnr", "tbnr"], required=True)
    s.add_argument("-r", type=int, default=1, help="roots when the input is a bare machine")
    s = add("germ", cmd_germ, "germ at a fixed point", out=False)
    s.add_argument("--point", required=True)
    add("decompose", cmd_decompose, "product of two small-support elements")
    s = sub.add_parser("witness", help="constructive transitivity witnesses")
    s.add_argument("kind", choices=["flex", "rubin", "transitive", "realize"])
    s.add_argument("--from", dest="source", action="append", default=[])
    s.add_argument("--to", dest="target", action="append", default=[])
    s.add_argument("--point", action="append", default=[])
    s.add_argument("--left", type=int, default=0)
    s.add_argument("--right", type=int, default=0)
    s.add_argument("--avoid")
    s.add_argument("-o", "--output")
    nr(s)
    s.set_defaults(func=cmd_witness)
    add("conjugate", cmd_conjugate, "h^-1 g h", ("first", "second"))
    s = add("apply", cmd_apply, "image of a word or point", out=False)
    s.add_argument("--word")
    s.add_argument("--point")
    s.add_argument("--as", dest="render", choices=["value", "word"], default="word")
    s = sub.add_parser("value", help="render a circle point")
    s.add_argument("--point", required=True)
    s.add_argument("--as", dest="render", choices=["value", "word"], default="value")
    nr(s)
    s.set_defaults(func=cmd_value)
    return p


def run_command(argv) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        return args.func(args)
    except CantorError as exc:
        detail = str(exc).replace("\n", " ")
        print(f"error: {exc.code}: {detail}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)
