"""Text formats for prefix maps, Mealy machines, anchored maps and raw
initial transducers.

Every format starts with an ``@<kind>`` header line; ``#`` starts a comment;
printing is canonical (sorted) so ``parse(print(parse(f))) == parse(f)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from . import anchored as an
from . import prefix_maps as pm
from .errors import CantorError, InvariantViolation, ParseError, UnknownHeader
from .mealy import SynchronousTransducer
from .words import Params, check_letters, format_word, parse_letters

_KV = re.compile(r"^(\w+)=(\S+)$")


@dataclass(frozen=True)
class Artifact:
    kind: str  # "prefixmap" | "mealy" | "anchored" | "raw"
    value: Any
    start: int | None = None

    @property
    def params(self):
        if self.kind == "mealy":
            return Params(self.value.n, 1)
        return self.value.params


def _lines(text: str):
    """``(line number, content)`` for non-blank lines with comments removed."""
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _header(line: str, lineno: int, allowed: set) -> dict:
    fields = {}
    for token in line.split()[1:]:
        m = _KV.match(token)
        if not m:
            raise ParseError(f"bad header field {token!r}", lineno)
        key, value = m.groups()
        if key not in allowed:
            raise ParseError(f"unknown header field {key!r}", lineno)
        try:
            fields[key] = int(value)
        except ValueError:
            raise ParseError(f"header field {key} needs an integer", lineno) from None
    return fields


def _params(fields: dict, lineno: int) -> Params:
    try:
        return Params(fields.get("n", 2), fields.get("r", 1))
    except ValueError as exc:
        raise InvariantViolation(str(exc), lineno) from None


def _word(text: str, params: Params, lineno: int, rooted=True) -> tuple:
    try:
        w = parse_letters(text)
        if rooted != text.startswith("d"):
            raise ParseError(f"expected a {'rooted' if rooted else 'plain'} word, got {text!r}", lineno)
        check_letters(w, params, rooted)
        return w
    except ParseError:
        raise
    except CantorError as exc:
        raise ParseError(str(exc), lineno) from None


# -- mealy -------------------------------------------------------------------


def format_mealy(t: SynchronousTransducer, start: int | None = None) -> str:
    head = f"@mealy n={t.n} states={t.size}"
    if start is not None:
        head += f" start={start}"
    rows = [head]
    for q in t.states():
        for a in range(t.n):
            rows.append(f"{q} {a} {t.out[q][a]} {t.trans[q][a]}")
    return "\n".join(rows) + "\n"


def _parse_mealy(lines: list):
    lineno, head = lines[0]
    fields = _header(head, lineno, {"n", "states", "start"})
    if "states" not in fields:
        raise ParseError("mealy header needs states=<m>", lineno)
    n = fields.get("n", 2)
    m = fields["states"]
    if n < 2 or m < 1:
        raise InvariantViolation("need n >= 2 and at least one state", lineno)
    trans = [[None] * n for _ in range(m)]
    out = [[None] * n for _ in range(m)]
    for i, line in lines[1:]:
        parts = line.split()
        if len(parts) != 4:
            raise ParseError("edge lines are '<state> <in> <out> <next>'", i)
        try:
            q, a, b, p = (int(x) for x in parts)
        except ValueError:
            raise ParseError("edge fields must be integers", i) from None
        if not (0 <= q < m and 0 <= p < m):
            raise InvariantViolation(f"state out of range 0..{m - 1}", i)
        if not (0 <= a < n and 0 <= b < n):
            raise InvariantViolation(f"letter out of range 0..{n - 1}", i)
        if trans[q][a] is not None:
            raise InvariantViolation(f"duplicate edge for state {q} letter {a}", i)
        trans[q][a] = p
        out[q][a] = b
    for q in range(m):
        for a in range(n):
            if trans[q][a] is None:
                raise InvariantViolation(f"transition function not total: no edge {q} {a}", lineno)
    start = fields.get("start")
    if start is not None and not 0 <= start < m:
        raise InvariantViolation("start state out of range", lineno)
    return SynchronousTransducer(n, trans, out), start


# -- prefix maps -------------------------------------------------------------


def format_prefix_map(g: pm.PrefixMap) -> str:
    p = g.params
    rows = [f"@prefixmap n={p.n} r={p.r}"]
    for u, v in g.pairs():
        rows.append(f"{format_word(u, n=p.n)} -> {format_word(v, n=p.n)}")
    return "\n".join(rows) + "\n"


def _parse_prefix_map(lines: list) -> pm.PrefixMap:
    lineno, head = lines[0]
    params = _params(_header(head, lineno, {"n", "r"}), lineno)
    pairs = []
    for i, line in lines[1:]:
        left, arrow, right = line.partition("->")
        if not arrow:
            raise ParseError("mapping lines are '<word> -> <word>'", i)
        pairs.append((_word(left.strip(), params, i), _word(right.strip(), params, i)))
    try:
        return pm.PrefixMap.from_pairs(params, pairs)
    except CantorError as exc:
        raise InvariantViolation(str(exc), lines[1][0] if len(lines) > 1 else lineno) from None


# -- anchored ----------------------------------------------------------------


def format_anchored(h: an.AnchoredHomeo) -> str:
    p = h.params
    rows = [f"@anchored n={p.n} r={p.r}", "@core", format_mealy(h.core).rstrip("\n"), "@cells"]
    for u, v, q in h.cells:
        rows.append(f"{format_word(u, n=p.n)} -> {format_word(v, n=p.n)} @ {q}")
    return "\n".join(rows) + "\n"


def _parse_anchored(lines: list) -> an.AnchoredHomeo:
    lineno, head = lines[0]
    params = _params(_header(head, lineno, {"n", "r"}), lineno)
    try:
        core_at = next(k for k, (_, l) in enumerate(lines) if l == "@core")
        cells_at = next(k for k, (_, l) in enumerate(lines) if l == "@cells")
    except StopIteration:
        raise ParseError("anchored files need @core and @cells sections", lineno) from None
    if not core_at < cells_at:
        raise ParseError("@core must precede @cells", lines[cells_at][0])
    core_lines = lines[core_at + 1:cells_at]
    if not core_lines or not core_lines[0][1].startswith("@mealy"):
        raise ParseError("@core must contain a @mealy block", lines[core_at][0])
    core, _ = _parse_mealy(core_lines)
    if core.n != params.n:
        raise InvariantViolation("core alphabet differs from n", core_lines[0][0])
    cells = []
    for i, line in lines[cells_at + 1:]:
        body, at, state = line.rpartition("@")
        left, arrow, right = body.partition("->")
        if not at or not arrow:
            raise ParseError("cell lines are '<u> -> <v> @ <state>'", i)
        try:
            q = int(state)
        except ValueError:
            raise ParseError("cell state must be an integer", i) from None
        if not 0 <= q < core.size:
            raise InvariantViolation(f"cell state {q} out of range", i)
        cells.append((_word(left.strip(), params, i), _word(right.strip(), params, i), q))
    first = lines[cells_at + 1][0] if cells_at + 1 < len(lines) else lines[cells_at][0]
    try:
        return an.make_anchored(params, core, cells)
    except CantorError as exc:
        raise InvariantViolation(str(exc), first) from None


# -- raw initial transducers -------------------------------------------------


def _fmt_out(w: tuple, rooted: bool, n: int) -> str:
    if not w:
        return "-"
    return format_word(w, rooted=rooted, n=n)


def format_raw(t: an.RawInitialTransducer) -> str:
    p = t.params
    rows = [f"@raw n={p.n} r={p.r} states={t.states} initial={t.initial}"]
    for (q, a), (out, nxt) in sorted(t.edges.items()):
        if q == t.initial:
            rows.append(f"{q} d{a} {_fmt_out(out, True, p.n)} {nxt}")
        else:
            rows.append(f"{q} {a} {_fmt_out(out, False, p.n)} {nxt}")
    return "\n".join(rows) + "\n"


def _parse_raw(lines: list) -> an.RawInitialTransducer:
    lineno, head = lines[0]
    fields = _header(head, lineno, {"n", "r", "states", "initial"})
    params = _params(fields, lineno)
    if "states" not in fields:
        raise ParseError("raw header needs states=<m>", lineno)
    m = fields["states"]
    initial = fields.get("initial", 0)
    edges = {}
    for i, line in lines[1:]:
        parts = line.split()
        if len(parts) != 4:
            raise ParseError("edge lines are '<state> <in> <out-word> <next>'", i)
        try:
            q, p = int(parts[0]), int(parts[3])
        except ValueError:
            raise ParseError("states must be integers", i) from None
        if not 0 <= q < m:
            raise InvariantViolation(f"state {q} out of range", i)
        dot = q == initial
        if dot != parts[1].startswith("d"):
            raise InvariantViolation(
                "the initial state reads dot letters, other states read digits", i
            )
        try:
            a = int(parts[1][1:] if dot else parts[1])
        except ValueError:
            raise ParseError(f"bad input letter {parts[1]!r}", i) from None
        if not 0 <= a < (params.r if dot else params.n):
            raise InvariantViolation(f"input letter {parts[1]} out of range", i)
        text = parts[2]
        if text == "-":
            out = ()
        else:
            out = _word(text, params, i, rooted=dot)
        if (q, a) in edges:
            raise InvariantViolation(f"duplicate edge for state {q} letter {parts[1]}", i)
        edges[(q, a)] = (out, p)
    t = an.RawInitialTransducer(params, m, initial, edges)
    try:
        return t.validate()
    except CantorError as exc:
        raise InvariantViolation(str(exc), lineno) from None


# -- dispatch ----------------------------------------------------------------


_HEADERS = ("@prefixmap", "@mealy", "@anchored", "@raw")


def parse_artifact(text) -> Artifact:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("input is not UTF-8", 1) from None
    lines = list(_lines(text))
    if not lines:
        raise UnknownHeader("empty input")
    lineno, head = lines[0]
    kind = head.split()[0]
    if kind == "@prefixmap":
        return Artifact("prefixmap", _parse_prefix_map(lines))
    if kind == "@mealy":
        t, start = _parse_mealy(lines)
        return Artifact("mealy", t, start)
    if kind == "@anchored":
        return Artifact("anchored", _parse_anchored(lines))
    if kind == "@raw":
        return Artifact("raw", _parse_raw(lines))
    raise UnknownHeader(f"line {lineno}: unknown header {kind!r}; expected one of {', '.join(_HEADERS)}")


def format_artifact(a: Artifact) -> str:
    if a.kind == "prefixmap":
        return format_prefix_map(a.value)
    if a.kind == "mealy":
        return format_mealy(a.value, a.start)
    if a.kind == "anchored":
        return format_anchored(a.value)
    if a.kind == "raw":
        return format_raw(a.value)
    raise ValueError(f"unknown artifact kind {a.kind}")


def format_value(value) -> str:
    """Canonical text for any library value with a file format."""
    if isinstance(value, pm.PrefixMap):
        return format_prefix_map(value)
    if isinstance(value, SynchronousTransducer):
        return format_mealy(value)
    if isinstance(value, an.AnchoredHomeo):
        return format_anchored(value)
    if isinstance(value, an.RawInitialTransducer):
        return format_raw(value)
    raise TypeError(f"no file format for {type(value).__name__}")
