"""The circle of length r as a quotient of C_{n,r}.

Two expansions are glued when they are ``nu a 0^ω`` and
``nu (a-1) (n-1)^ω``, or ``d0 0^ω`` and ``d(r-1) (n-1)^ω``.  An invertible
anchored map induces a circle homeomorphism exactly when it sends glued pairs
to glued pairs, and that is decided here on a finite set of configurations.
"""

from __future__ import annotations

import enum
from collections import deque
from fractions import Fraction
from typing import NamedTuple

from . import anchored as an
from . import mealy
from .errors import NotBijective, NotCircleMap, NotInvertible
from .words import (
    EventuallyPeriodicPoint,
    Params,
    point_from_value,
    point_value,
    uniform_antichain,
)


def partner_point(p: EventuallyPeriodicPoint, params: Params):
    """The other expansion of an n-adic point, or ``None``."""
    n, r = params.n, params.r
    if p.period not in ((0,), (n - 1,)):
        return None
    top = n - 1
    stem = p.stem
    digits = len(stem) - 1 if p.rooted else len(stem)
    if p.period == (0,):
        if digits > 0:
            return EventuallyPeriodicPoint(stem[:-1] + (stem[-1] - 1,), (top,), p.rooted)
        if not p.rooted:
            return None
        return EventuallyPeriodicPoint(((stem[0] - 1) % r,), (top,))
    if digits > 0:
        return EventuallyPeriodicPoint(stem[:-1] + (stem[-1] + 1,), (0,), p.rooted)
    if not p.rooted:
        return None
    return EventuallyPeriodicPoint(((stem[0] + 1) % r,), (0,))


def is_glued(a: EventuallyPeriodicPoint, b: EventuallyPeriodicPoint, params: Params) -> bool:
    return partner_point(a, params) == b


class SimeqFailure(NamedTuple):
    left: EventuallyPeriodicPoint
    right: EventuallyPeriodicPoint
    left_image: EventuallyPeriodicPoint
    right_image: EventuallyPeriodicPoint


def _require_invertible(h: an.AnchoredHomeo):
    if not h.core.is_invertible():
        raise NotInvertible("core is not invertible")
    try:
        an.check_bijective(h.params, [v for _, v, _ in h.cells])
    except NotBijective as exc:
        raise NotInvertible(str(exc)) from None


def _paths_to_states(core: mealy.SynchronousTransducer, q: int) -> dict:
    """Shortest nonempty word from ``q`` reaching each state."""
    paths = {}
    queue = deque()
    for a in range(core.n):
        p = core.trans[q][a]
        if p not in paths:
            paths[p] = (a,)
            queue.append(p)
    while queue:
        s = queue.popleft()
        for a in range(core.n):
            p = core.trans[s][a]
            if p not in paths:
                paths[p] = paths[s] + (a,)
                queue.append(p)
    return paths


def simeq_failures(h: an.AnchoredHomeo, first_only: bool = False) -> list:
    """Every boundary configuration whose glued pair is not mapped to a glued
    pair, in a deterministic order."""
    _require_invertible(h)
    p = h.params
    n = p.n
    top = n - 1
    failures = []
    cells = h.cells
    # adjacent cells, wrapping from the last cell back to the first
    for i, (u, _, _) in enumerate(cells):
        u2 = cells[(i + 1) % len(cells)][0]
        left = EventuallyPeriodicPoint(u, (top,))
        right = EventuallyPeriodicPoint(u2, (0,))
        li, ri = an.evaluate_point(h, left), an.evaluate_point(h, right)
        if not is_glued(li, ri, p):
            failures.append(SimeqFailure(left, right, li, ri))
            if first_only:
                return failures
    # glued tails inside a cell, read from every core state
    core = h.core
    paths = _paths_to_states(core, cells[0][2])
    u0 = cells[0][0]
    for q in core.states():
        for a in range(1, n):
            t1 = mealy.run_point(core, q, EventuallyPeriodicPoint((a,), (0,), rooted=False))
            t2 = mealy.run_point(core, q, EventuallyPeriodicPoint((a - 1,), (top,), rooted=False))
            if partner_point(t1, p) == t2:
                continue
            mu = paths[q]
            left = EventuallyPeriodicPoint(u0 + mu + (a - 1,), (top,))
            right = EventuallyPeriodicPoint(u0 + mu + (a,), (0,))
            failures.append(
                SimeqFailure(left, right, an.evaluate_point(h, left), an.evaluate_point(h, right))
            )
            if first_only:
                return failures
    return failures


def simeq_compatible(h: an.AnchoredHomeo):
    """``(True, None)`` or ``(False, first failing configuration)``."""
    failures = simeq_failures(h, first_only=True)
    if failures:
        return False, failures[0]
    return True, None


class Orientation(enum.Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"


def image_value(h: an.AnchoredHomeo, x) -> Fraction:
    if not isinstance(x, EventuallyPeriodicPoint):
        x = point_from_value(x, h.params)
    return point_value(an.evaluate_point(h, x), h.params.n)


def orientation_of(h: an.AnchoredHomeo) -> Orientation:
    ok, _ = simeq_compatible(h)
    if not ok:
        raise NotCircleMap("map does not respect the gluing")
    bounds = [u for u, _, _ in h.cells]
    if len(bounds) < 3:
        bounds = uniform_antichain(h.params, 2)
    pts = [EventuallyPeriodicPoint(u, (0,)) for u in bounds[:3]]
    ys = [point_value(an.evaluate_point(h, x), h.params.n) for x in pts]
    ascents = sum(ys[i] < ys[(i + 1) % 3] for i in range(3))
    return Orientation.PRESERVING if ascents == 2 else Orientation.REVERSING


def is_tbnr(h: an.AnchoredHomeo) -> bool:
    """Membership in the group of bi-synchronizing circle maps."""
    try:
        _require_invertible(h)
    except NotInvertible:
        return False
    if not mealy.is_bisynchronizing(h.core):
        return False
    return simeq_compatible(h)[0]
