"""Homeomorphisms given by bi-synchronizing transducers, in anchored form.

An :class:`AnchoredHomeo` is a complete antichain of *cells* ``(u, v, q)``
over a minimal, strongly connected, synchronous and invertible core machine.
The induced map sends ``u rho`` to ``v lambda(rho, q)``.  The canonical form
collapses every digit-sibling family that is the expansion of a single cell
and numbers core states breadth first from the cells, so two canonical
anchored forms are equal exactly when the maps are.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import mealy
from . import prefix_maps as pm
from .errors import (
    CoreNotInvertible,
    CoreNotSynchronous,
    DepthBoundExceeded,
    Incomplete,
    InvalidOutput,
    InvariantViolation,
    NotBijective,
    NotSynchronizingError,
    ParamsMismatch,
    WordTooShortForCell,
)
from .mealy import SynchronousTransducer
from .words import (
    EventuallyPeriodicPoint,
    Params,
    all_words,
    check_antichain,
    find_prefix_in,
    format_word,
    is_prefix,
    kraft_ok,
    lcp,
    maxima,
)


def depth_bound():
    value = os.environ.get("CANTOR_DEPTH_BOUND")
    return int(value) if value else None


@dataclass(frozen=True)
class AnchoredHomeo:
    params: Params
    core: SynchronousTransducer
    cells: tuple

    def mapping(self) -> dict:
        return {u: (v, q) for u, v, q in self.cells}

    @property
    def depth(self) -> int:
        return max(len(u) for u, _, _ in self.cells)

    def __str__(self):
        return "; ".join(f"{format_word(u)}->{format_word(v)}@{q}" for u, v, q in self.cells)


@dataclass(frozen=True)
class NotTrivialCore:
    core: SynchronousTransducer


# -- canonical form ----------------------------------------------------------


def _settle(cells: Iterable, core: SynchronousTransducer, keep: set, n: int) -> list:
    """Refine cells until every state lies in ``keep``."""
    out = []
    stack = list(cells)
    while stack:
        u, v, q = stack.pop()
        if q in keep:
            out.append((u, v, q))
            continue
        for a in range(n):
            stack.append((u + (a,), v + (core.out[q][a],), core.trans[q][a]))
    return out


def _collapse(cells: dict, core: SynchronousTransducer, n: int) -> dict:
    lookup = {(core.out[q], core.trans[q]): q for q in core.states()}
    todo = {u[:-1] for u in cells if len(u) > 1}
    while todo:
        parent = todo.pop()
        kids = [parent + (a,) for a in range(n)]
        if not all(k in cells for k in kids):
            continue
        data = [cells[k] for k in kids]
        v = data[0][0][:-1]
        if len(v) < 1 or any(len(w) != len(v) + 1 or w[:-1] != v for w, _ in data):
            continue
        key = (tuple(w[-1] for w, _ in data), tuple(q for _, q in data))
        q = lookup.get(key)
        if q is None:
            continue
        for k in kids:
            del cells[k]
        cells[parent] = (v, q)
        if len(parent) > 1:
            todo.add(parent[:-1])
    return cells


def _bfs_order(core: SynchronousTransducer, starts: Sequence[int]) -> list:
    order, seen = [], set()
    queue = deque()
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue.append(s)
        while queue:
            q = queue.popleft()
            order.append(q)
            for p in core.trans[q]:
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
    return order


def check_bijective(params: Params, images: Sequence[tuple]) -> None:
    images = sorted(images)
    try:
        check_antichain(images)
    except Exception as exc:
        raise NotBijective(f"image cones overlap: {exc}", witness=images) from None
    if not kraft_ok(images, params):
        raise NotBijective("image cones do not cover the space", witness=images)


def make_anchored(params: Params, core: SynchronousTransducer, cells: Iterable, check=True):
    """Canonical :class:`AnchoredHomeo` from any synchronizing machine and a
    complete antichain of cells over it."""
    n = params.n
    if core.n != n:
        raise ParamsMismatch("core alphabet differs from n")
    cells = [(tuple(u), tuple(v), q) for u, v, q in cells]
    if check:
        us = sorted(u for u, _, _ in cells)
        check_antichain(us)
        if not kraft_ok(us, params):
            raise Incomplete("cell addresses are not a complete antichain")
    small, cls = mealy.minimize(core)
    cells = [(u, v, cls[q]) for u, v, q in cells]
    keep = mealy.core_states(small.trans, n)
    cells = _settle(cells, small, set(keep), n)
    small, index = mealy.submachine(small, keep)
    merged = _collapse({u: (v, index[q]) for u, v, q in cells}, small, n)
    ordered = sorted(merged.items())
    order = _bfs_order(small, [q for _, (_, q) in ordered])
    small, index = mealy.renumber(small, order)
    result = AnchoredHomeo(
        params, small, tuple((u, v, index[q]) for u, (v, q) in ordered)
    )
    if check:
        if not small.is_invertible():
            raise CoreNotInvertible("core has a non-permutation output row")
        check_bijective(params, [v for _, v, _ in result.cells])
    return result


def identity(params: Params) -> AnchoredHomeo:
    return from_prefix_map(pm.identity(params))


def from_prefix_map(g: pm.PrefixMap) -> AnchoredHomeo:
    core = mealy.identity_machine(g.params.n)
    return make_anchored(g.params, core, [(u, v, 0) for u, v in g.pairs()], check=False)


def from_core(params: Params, core: SynchronousTransducer, state: int = 0) -> AnchoredHomeo:
    """Root cells ``(d_i, d_i, state)``: the core state applied under every root."""
    return make_anchored(params, core, [(root, root, state) for root in params.roots()])


def trivial_core_extract(h: AnchoredHomeo):
    if not h.core.is_trivial():
        return NotTrivialCore(h.core)
    return pm.PrefixMap.from_pairs(h.params, [(u, v) for u, v, _ in h.cells])


def is_trivial_core(h: AnchoredHomeo) -> bool:
    return h.core.is_trivial()


# -- raw initial transducers -------------------------------------------------


@dataclass(frozen=True)
class RawInitialTransducer:
    """Initial transducer over C_{n,r} with word outputs.

    ``edges[(state, letter)] = (output word, next state)``; the initial state
    reads dot letters, every other state reads digits.
    """

    params: Params
    states: int
    initial: int
    edges: dict

    def validate(self):
        p = self.params
        for q in range(self.states):
            alphabet = range(p.r) if q == self.initial else range(p.n)
            for a in alphabet:
                if (q, a) not in self.edges:
                    raise InvariantViolation(f"state {q} has no edge for letter {a}")
                _, nxt = self.edges[(q, a)]
                if not 0 <= nxt < self.states or nxt == self.initial:
                    raise InvariantViolation(f"edge {q} {a} has a bad target {nxt}")
        return self

    def run(self, u: tuple):
        out, q = (), self.initial
        for a in u:
            o, q = self.edges[(q, a)]
            out += o
        return out, q


def from_raw(t: RawInitialTransducer) -> AnchoredHomeo:
    t.validate()
    p = t.params
    n = p.n
    # states the initial state cannot reach play no part in the map
    seen = {t.initial}
    stack = [t.initial]
    while stack:
        q = stack.pop()
        for a in range(p.r if q == t.initial else n):
            nxt = t.edges[(q, a)][1]
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    digit_states = sorted(seen - {t.initial})
    index = {q: i for i, q in enumerate(digit_states)}
    trans = [[index[t.edges[(q, a)][1]] for a in range(n)] for q in digit_states]
    level, cycle = mealy.sync_level(trans, n)
    if cycle is not None:
        names = tuple(frozenset(digit_states[i] for i in s) for s in cycle)
        raise NotSynchronizingError("digit part is not synchronizing", witness=names)
    core_idx = mealy.core_states(trans, n)
    core_raw = [digit_states[i] for i in core_idx]
    cindex = {q: i for i, q in enumerate(core_raw)}
    for q in core_raw:
        for a in range(n):
            out, _ = t.edges[(q, a)]
            if len(out) != 1:
                raise CoreNotSynchronous(
                    f"core edge {q} {a} outputs {len(out)} letters"
                )
    core = SynchronousTransducer(
        n,
        [[cindex[t.edges[(q, a)][1]] for a in range(n)] for q in core_raw],
        [[t.edges[(q, a)][0][0] for a in range(n)] for q in core_raw],
    )
    if not core.is_invertible():
        raise CoreNotInvertible("core output rows are not permutations")
    cells = []
    for u in all_words(p, level + 1):
        v, q = t.run(u)
        if not v or not 0 <= v[0] < p.r or any(not 0 <= a < n for a in v[1:]):
            raise InvalidOutput(f"output {v} of {format_word(u)} is not a rooted word")
        cells.append((u, v, cindex[q]))
    return make_anchored(p, core, cells)


# -- evaluation --------------------------------------------------------------


def evaluate_word(h: AnchoredHomeo, w: tuple) -> tuple:
    m = h.mapping()
    u = find_prefix_in(m, w)
    if u is None:
        below = [v for a, (v, _) in m.items() if is_prefix(w, a)]
        raise WordTooShortForCell(
            f"{format_word(w)} is shorter than its cells", prefix=lcp(below)
        )
    v, q = m[u]
    return v + h.core.output(w[len(u):], q)


def evaluate_point(h: AnchoredHomeo, x: EventuallyPeriodicPoint) -> EventuallyPeriodicPoint:
    m = h.mapping()
    u = find_prefix_in(m, x.prefix(h.depth))
    v, q = m[u]
    img = mealy.run_point(h.core, q, x.drop(len(u)))
    return EventuallyPeriodicPoint(v + img.stem, img.period)


def evaluate(h: AnchoredHomeo, x):
    if isinstance(x, EventuallyPeriodicPoint):
        return evaluate_point(h, x)
    return evaluate_word(h, tuple(x))


# -- group operations --------------------------------------------------------


def _same(g: AnchoredHomeo, h: AnchoredHomeo):
    if g.params != h.params:
        raise ParamsMismatch(f"{g.params} vs {h.params}")


def compose(g: AnchoredHomeo, h: AnchoredHomeo) -> AnchoredHomeo:
    """``x -> ((x)g)h``."""
    _same(g, h)
    n = g.params.n
    bound = depth_bound()
    cg, ch = g.core, h.core
    pair = mealy.pair_machine(cg, ch)
    hmap = h.mapping()
    cells = []
    for u, v, q in g.cells:
        stack = [((), v, q)]
        while stack:
            w, o, s = stack.pop()
            u2 = find_prefix_in(hmap, o)
            if u2 is None:
                if bound is not None and len(u) + len(w) > bound:
                    raise DepthBoundExceeded(f"refinement deeper than {bound}")
                for a in range(n):
                    stack.append((w + (a,), o + (cg.out[s][a],), cg.trans[s][a]))
                continue
            v2, q2 = hmap[u2]
            tail, s2 = ch.run(o[len(u2):], q2)
            cells.append((u + w, v2 + tail, s * ch.size + s2))
    return make_anchored(g.params, pair, cells, check=False)


def inverse(h: AnchoredHomeo) -> AnchoredHomeo:
    check_bijective(h.params, [v for _, v, _ in h.cells])
    core = mealy.invert(h.core)
    if not mealy.is_synchronizing(core):
        raise NotSynchronizingError("the core is not bi-synchronizing")
    return make_anchored(h.params, core, [(v, u, q) for u, v, q in h.cells], check=False)


def conjugate(g: AnchoredHomeo, h: AnchoredHomeo) -> AnchoredHomeo:
    """``h^-1 g h``."""
    return compose(compose(inverse(h), g), h)


def power(g: AnchoredHomeo, k: int) -> AnchoredHomeo:
    base = g if k >= 0 else inverse(g)
    out = identity(g.params)
    for _ in range(abs(k)):
        out = compose(out, base)
    return out


def _local(h: AnchoredHomeo, m: dict, c: tuple):
    """``(output, state)`` on the cone ``c``, or ``(None, None)`` when ``c`` is
    shorter than its cells."""
    u = find_prefix_in(m, c)
    if u is None:
        return None, None
    v, q = m[u]
    out, s = h.core.run(c[len(u):], q)
    return v + out, s


def agree_on(a: AnchoredHomeo, b: AnchoredHomeo, cone: tuple | None = None) -> bool:
    """Whether the two maps coincide on ``U_cone`` (everywhere by default)."""
    _same(a, b)
    union = mealy.disjoint_union(a.core, b.core)
    cls = mealy.equivalence_classes(union)
    shift = a.core.size
    words = maxima([u for u, _, _ in a.cells] + [u for u, _, _ in b.cells])
    if cone is not None:
        cone = tuple(cone)
        words = [w for w in words if is_prefix(cone, w)] or [cone]
    ma, mb = a.mapping(), b.mapping()
    for w in words:
        va, qa = _local(a, ma, w)
        vb, qb = _local(b, mb, w)
        if va is None or vb is None:
            # cone lies strictly inside a cell of one map: refine one level
            return all(agree_on(a, b, w + (x,)) for x in range(a.params.n))
        if va != vb or cls[qa] != cls[qb + shift]:
            return False
    return True


def canonical_equal(a: AnchoredHomeo, b: AnchoredHomeo) -> bool:
    return agree_on(a, b)


def is_small_support(h: AnchoredHomeo):
    """``(True, cone)`` when ``h`` is the identity on the proper cone ``U_cone``."""
    for u, v, q in h.cells:
        if u == v and h.core.is_identity_state(q):
            if len(h.cells) == 1:
                u = u + (0,)
            return True, u
    return False, None
