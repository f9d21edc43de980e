"""Random generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import settings

from cantorgroups import anchored as an
from cantorgroups import mealy
from cantorgroups import prefix_maps as pm
from cantorgroups.mealy import SynchronousTransducer
from cantorgroups.words import (
    EventuallyPeriodicPoint,
    Params,
    is_prefix,
    point_from_value,
    point_value,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
PARAMS = [Params(2, 1), Params(2, 2), Params(3, 1), Params(3, 2)]


# -- antichains and prefix maps ----------------------------------------------


def random_antichain(rng: random.Random, params: Params, leaves: int) -> list:
    """Random complete antichain with at most ``leaves`` leaves (at least r)."""
    words = [(i,) for i in range(params.r)]
    while len(words) + params.n - 1 <= leaves and rng.random() < 0.9:
        k = rng.randrange(len(words))
        w = words.pop(k)
        words.extend(w + (a,) for a in range(params.n))
    return sorted(words)


def antichain_of_size(rng: random.Random, params: Params, size: int) -> list:
    words = [(i,) for i in range(params.r)]
    while len(words) < size:
        w = words.pop(rng.randrange(len(words)))
        words.extend(w + (a,) for a in range(params.n))
    return sorted(words)


def random_prefix_map(rng: random.Random, params: Params, max_leaves: int = 10) -> pm.PrefixMap:
    dom = random_antichain(rng, params, max_leaves)
    ran = antichain_of_size(rng, params, len(dom))
    perm = list(range(len(dom)))
    rng.shuffle(perm)
    return pm.PrefixMap(params, tuple(dom), tuple(ran), tuple(perm))


def random_torder(rng: random.Random, params: Params, max_leaves: int = 10) -> pm.PrefixMap:
    dom = random_antichain(rng, params, max_leaves)
    ran = antichain_of_size(rng, params, len(dom))
    b = rng.randrange(len(dom))
    perm = tuple((a + b) % len(dom) for a in range(len(dom)))
    return pm.PrefixMap(params, tuple(dom), tuple(ran), perm)


def random_point(rng: random.Random, params: Params, stem=6, period=3) -> EventuallyPeriodicPoint:
    s = (rng.randrange(params.r),) + tuple(rng.randrange(params.n) for _ in range(rng.randrange(stem + 1)))
    p = tuple(rng.randrange(params.n) for _ in range(rng.randrange(1, period + 1)))
    return EventuallyPeriodicPoint(s, p)


def words_below(cone: tuple, depth: int, n: int):
    """All words of total length ``depth`` extending ``cone``."""
    for tail in itertools.product(range(n), repeat=max(0, depth - len(cone))):
        yield cone + tail


def brute_apply(g: pm.PrefixMap, w: tuple) -> tuple:
    """Prefix replacement by linear search over the leaf pairs."""
    for u, v in zip(g.domain, (g.range[i] for i in g.perm)):
        if is_prefix(u, w):
            return v + w[len(u):]
    raise AssertionError("word is shorter than every leaf above it")


def brute_apply_point(g: pm.PrefixMap, x: EventuallyPeriodicPoint) -> Fraction:
    depth = max(len(u) for u in g.domain)
    head = x.prefix(depth)
    for u, v in zip(g.domain, (g.range[i] for i in g.perm)):
        if is_prefix(u, head):
            rest = x.drop(len(u))
            return point_value(EventuallyPeriodicPoint(v + rest.stem, rest.period), g.params.n)
    raise AssertionError("no leaf above the point")


def same_function(g: pm.PrefixMap, h: pm.PrefixMap) -> bool:
    """Equality of prefix maps by evaluation on every word one level below
    the deepest leaf of either map."""
    depth = max(len(u) for u in g.domain + h.domain)
    p = g.params
    for root in range(p.r):
        for w in words_below((root,), depth, p.n):
            if brute_apply(g, w) != brute_apply(h, w):
                return False
    return True


# -- machines -------------------------------------------------------------------


def level_one_machine(rng: random.Random, n: int) -> SynchronousTransducer:
    """Bi-synchronizing machine whose next state is a function of the input
    letter and whose output permutation preserves the fibres of that function."""
    m = rng.randint(1, n)
    f = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    rng.shuffle(f)
    fibres = [[a for a in range(n) if f[a] == q] for q in range(m)]
    out = []
    for _ in range(m):
        row = [0] * n
        for fib in fibres:
            img = fib[:]
            rng.shuffle(img)
            for a, b in zip(fib, img):
                row[a] = b
        out.append(row)
    trans = [[f[a] for a in range(n)] for _ in range(m)]
    return SynchronousTransducer(n, trans, out)


def random_bisync(rng: random.Random, n: int, factors: int = 2) -> SynchronousTransducer:
    t = level_one_machine(rng, n)
    for _ in range(factors - 1):
        t = mealy.product(t, level_one_machine(rng, n))
    return mealy.minimize(t)[0]


def random_anchored(rng: random.Random, params: Params, factors: int = 2) -> an.AnchoredHomeo:
    core = random_bisync(rng, params.n, factors)
    h = an.from_core(params, core, rng.randrange(core.size))
    left = an.from_prefix_map(random_prefix_map(rng, params, 6))
    right = an.from_prefix_map(random_prefix_map(rng, params, 6))
    return an.compose(an.compose(left, h), right)


def reflection(params: Params) -> an.AnchoredHomeo:
    """``x -> -x`` on the circle: reverse every letter, including the root."""
    n, r = params.n, params.r
    core = mealy.permutation_machine([n - 1 - a for a in range(n)])
    return an.make_anchored(params, core, [((i,), (r - 1 - i,), 0) for i in range(r)])


def brute_sync_level(t: SynchronousTransducer, bound: int):
    """Smallest k with every word of length k sending all states to one state."""
    for k in range(bound + 1):
        if all(len({t.target(w, q) for q in t.states()}) == 1 for w in itertools.product(range(t.n), repeat=k)):
            return k
    return None


def anchored_to_raw(h: an.AnchoredHomeo) -> an.RawInitialTransducer:
    """Tree transducer for an element with r = 1: read the cell address with
    empty outputs, emit the cell image on the last letter, then run the core."""
    p = h.params
    assert p.r == 1
    core = h.core
    nodes = sorted({u[:k] for u, _, _ in h.cells for k in range(1, len(u))})
    index = {w: i + 1 for i, w in enumerate(nodes)}
    base = len(nodes) + 1
    edges = {}
    cells = {u: (v, q) for u, v, q in h.cells}
    if (0,) in cells:
        v, q = cells[(0,)]
        edges[(0, 0)] = (v, base + q)
    else:
        edges[(0, 0)] = ((0,), index[(0,)])
    for w in nodes:
        for a in range(p.n):
            c = w + (a,)
            if c in cells:
                v, q = cells[c]
                # the dot edge already printed the root letter
                edges[(index[w], a)] = (v[1:], base + q)
            else:
                edges[(index[w], a)] = ((), index[c])
    for q in core.states():
        for a in range(p.n):
            edges[(base + q, a)] = ((core.out[q][a],), base + core.trans[q][a])
    return an.RawInitialTransducer(p, base + core.size, 0, edges).validate()


# -- circle and germ helpers -------------------------------------------------


def nadic_points(params: Params, depth: int):
    """Both expansions of every n-adic point with at most ``depth`` digits,
    as ``(x, y)`` with ``x`` ending in 0s and ``y`` in (n-1)s."""
    n, r = params.n, params.r
    top = n - 1
    for root in range(r):
        for k in range(depth + 1):
            for digits in itertools.product(range(n), repeat=k):
                if k and digits[-1] == 0:
                    continue
                x = EventuallyPeriodicPoint((root,) + digits, (0,))
                if k:
                    y = EventuallyPeriodicPoint((root,) + digits[:-1] + (digits[-1] - 1,), (top,))
                else:
                    y = EventuallyPeriodicPoint(((root - 1) % r,), (top,))
                yield x, y


def circle_value(p, params):
    return point_value(p, params.n) % params.r


def brute_simeq(h, depth):
    """Glued pairs go to points with equal circle value, checked directly."""
    p = h.params
    for x, y in nadic_points(p, depth):
        if circle_value(an.evaluate_point(h, x), p) != circle_value(an.evaluate_point(h, y), p):
            return False
    return True


def fixer(rng, x, params):
    """Random element of T fixing ``x``: a germ realiser, a shift along the
    periodic tail for non n-adic points, and a bump away from ``x``."""
    p = point_from_value(x, params)
    if p.period in ((0,), (params.n - 1,)):
        g = pm.realize_germ(x, rng.randint(-2, 2), rng.randint(-2, 2), params)
    else:
        s = rng.randint(1, 2)
        j = rng.randint(0, 2)
        a = p.prefix(len(p.stem) + s * len(p.period))
        b = p.prefix(len(p.stem) + (s + j) * len(p.period))
        g = pm.cone_map(a, b, params)
        if rng.random() < 0.5:
            g = pm.inverse(g)
    # an order preserving bump on a cone next to the point
    here = p.prefix(4)
    far = here[:-1] + ((here[-1] + 1) % params.n,)
    n = params.n
    left = [(0, b) for b in range(n)] + [(a,) for a in range(1, n)]
    right = [(a,) for a in range(n - 1)] + [(n - 1, b) for b in range(n)]
    if rng.random() < 0.5:
        left, right = right, left
    bump = pm.local_map(far, left, right, params)
    return an.compose(an.from_prefix_map(g), an.from_prefix_map(bump))
