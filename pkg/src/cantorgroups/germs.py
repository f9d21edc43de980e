"""Germs of orientation preserving circle maps at fixed eventually periodic
points.

At an n-adic point with expansions ``tau (n-1)^ω`` and ``tau' 0^ω`` the germ
is ``NAdic(core, d, e)``; at any other rational point ``tau w^ω`` it is
``Rational(core, d)``.  ``d`` and ``e`` are output length minus input length on
deep prefixes of the left (``(n-1)``-side) and right (``0``-side) expansions.
Germs at irrational points are determined by the core alone and are not
computed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from . import anchored as an
from . import mealy
from . import prefix_maps as pm
from .circle import Orientation, orientation_of
from .formats import format_mealy
from .errors import DoesNotFixPoint, NotOrientationPreserving, VariantMismatch
from .mealy import SynchronousTransducer
from .words import EventuallyPeriodicPoint, Params, nadic_depth, point_from_value, point_value


def _canonical_core(core: SynchronousTransducer) -> SynchronousTransducer:
    return mealy.canonical_form(mealy.minimize(core)[0])


@dataclass(frozen=True)
class NAdic:
    core: SynchronousTransducer
    d: int
    e: int

    def __post_init__(self):
        object.__setattr__(self, "core", _canonical_core(self.core))

    def __str__(self):
        return f"NADIC core={core_name(self.core)} d={self.d} e={self.e}"


@dataclass(frozen=True)
class Rational:
    core: SynchronousTransducer
    d: int

    def __post_init__(self):
        object.__setattr__(self, "core", _canonical_core(self.core))

    def __str__(self):
        return f"RATIONAL core={core_name(self.core)} d={self.d}"


def core_name(core: SynchronousTransducer) -> str:
    if core.is_trivial():
        return "trivial"
    text = format_mealy(mealy.canonical_form(core))
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _as_point(x, params: Params) -> EventuallyPeriodicPoint:
    if isinstance(x, EventuallyPeriodicPoint):
        return x
    return point_from_value(Fraction(x), params)


def _offset(h: an.AnchoredHomeo, stem: tuple, letters: tuple, k: int) -> int:
    w = stem + (letters * (k // len(letters) + 1))[:k]
    return len(an.evaluate_word(h, w)) - len(w)


def _stable_offset(h: an.AnchoredHomeo, stem: tuple, letters: tuple) -> int:
    k = h.depth + len(letters) + 1
    first = _offset(h, stem, letters, k)
    second = _offset(h, stem, letters, k + len(letters))
    if first != second:
        raise AssertionError(f"length offset unstable: {first} vs {second}")
    return first


def germ_at(h: an.AnchoredHomeo, x):
    p = _as_point(x, h.params)
    if orientation_of(h) is not Orientation.PRESERVING:
        raise NotOrientationPreserving("germs are only defined for orientation preserving maps")
    n = h.params.n
    value = point_value(p, n)
    if point_value(an.evaluate_point(h, p), n) != value:
        raise DoesNotFixPoint(f"the map does not fix {value}")
    if nadic_depth(value, n) is not None:
        left, right = pm.nadic_expansions(value, h.params)
        d = _stable_offset(h, left, (n - 1,))
        e = _stable_offset(h, right, (0,))
        return NAdic(h.core, d, e)
    return Rational(h.core, _stable_offset(h, p.stem, p.period))


def germ_compose(g1, g2):
    if type(g1) is not type(g2):
        raise VariantMismatch("cannot compose an n-adic germ with a rational germ")
    core = mealy.core_extract(mealy.product(g1.core, g2.core))
    if isinstance(g1, NAdic):
        return NAdic(core, g1.d + g2.d, g1.e + g2.e)
    return Rational(core, g1.d + g2.d)


def identity_germ(n: int, nadic: bool = True):
    core = mealy.identity_machine(n)
    return NAdic(core, 0, 0) if nadic else Rational(core, 0)


def core_fixes_tail(t: SynchronousTransducer, w) -> bool:
    """Whether the ``w``-cycle of ``t`` copies ``w`` (so the core can occur in a
    germ at a point ending in ``w^ω``)."""
    w = tuple(w)
    tail = mealy.tail_image(t, 0, w)
    block = w * tail.cycle_len
    return t.output(block, tail.cycle_state) == block
