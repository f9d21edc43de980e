"""Elements of the Higman-Thompson groups G_{n,r} as prefix replacement maps.

A :class:`PrefixMap` sends ``domain[a] + rho`` to ``range[perm[a]] + rho``.  The
module also builds the explicit group elements used as witnesses for small
support factorisation, flexibility, Rubin density, o-k-transitivity of T_{n,r}
and realisation of germs at n-adic points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    AvoidContainsX,
    E1NotProper,
    EmptyTarget,
    IsIdentity,
    NotAntichain,
    NotCircularlyOrdered,
    NotNAdic,
    ParamsMismatch,
    PointOutsideU,
    SegmentMismatch,
    VNotInsideU,
)
from .words import (
    EventuallyPeriodicPoint,
    Params,
    antichain_validate,
    check_antichain,
    children,
    complement_cones,
    expand,
    find_prefix_in,
    format_word,
    is_prefix,
    maxima,
    nadic_depth,
    point_value,
    value_word,
)


@dataclass(frozen=True)
class PrefixMap:
    params: Params
    domain: tuple
    range: tuple
    perm: tuple

    @classmethod
    def from_pairs(cls, params: Params, pairs: Iterable) -> "PrefixMap":
        pairs = sorted((tuple(u), tuple(v)) for u, v in pairs)
        dom = antichain_validate([u for u, _ in pairs], params).words
        ran = antichain_validate([v for _, v in pairs], params).words
        index = {v: i for i, v in enumerate(ran)}
        return cls(params, dom, ran, tuple(index[v] for _, v in pairs))

    def pairs(self) -> list:
        return [(u, self.range[a]) for u, a in zip(self.domain, self.perm)]

    def mapping(self) -> dict:
        return dict(self.pairs())

    def __len__(self):
        return len(self.domain)

    def __str__(self):
        return ", ".join(f"{format_word(u)}->{format_word(v)}" for u, v in self.pairs())


def identity(params: Params) -> PrefixMap:
    roots = params.roots()
    return PrefixMap(params, roots, roots, tuple(range(len(roots))))


def is_identity(g: PrefixMap) -> bool:
    return all(u == v for u, v in g.pairs())


def apply_word(g: PrefixMap, w: tuple):
    """Image of the cone ``U_w``'s address, or ``None`` if ``w`` is too short."""
    m = g.mapping()
    u = find_prefix_in(m, w)
    if u is None:
        return None
    return m[u] + w[len(u):]


def apply_point(g: PrefixMap, x: EventuallyPeriodicPoint) -> EventuallyPeriodicPoint:
    m = g.mapping()
    depth = max(len(u) for u in m)
    u = find_prefix_in(m, x.prefix(depth))
    rest = x.drop(len(u))
    return EventuallyPeriodicPoint(m[u] + rest.stem, rest.period)


def canonicalize(g: PrefixMap) -> PrefixMap:
    """Collapse digit-sibling families until the map is reduced."""
    n = g.params.n
    m = g.mapping()
    todo = {u[:-1] for u in m if len(u) > 1}
    while todo:
        parent = todo.pop()
        kids = children(parent, n)
        if not all(k in m for k in kids):
            continue
        images = [m[k] for k in kids]
        target = images[0][:-1]
        if len(target) < 1 or any(
            len(v) != len(target) + 1 or v[:-1] != target or v[-1] != a
            for a, v in enumerate(images)
        ):
            continue
        for k in kids:
            del m[k]
        m[parent] = target
        if len(parent) > 1:
            todo.add(parent[:-1])
    if len(m) == len(g.domain):
        return g
    return PrefixMap.from_pairs(g.params, m.items())


def _check_params(g: PrefixMap, h: PrefixMap):
    if g.params != h.params:
        raise ParamsMismatch(f"{g.params} vs {h.params}")


def compose(g: PrefixMap, h: PrefixMap) -> PrefixMap:
    """The map ``x -> ((x)g)h``."""
    _check_params(g, h)
    ginv = {v: u for u, v in g.pairs()}
    hmap = h.mapping()
    pairs = []
    for c in maxima(g.range + h.domain):
        v = find_prefix_in(ginv, c)
        u = find_prefix_in(hmap, c)
        pairs.append((ginv[v] + c[len(v):], hmap[u] + c[len(u):]))
    return canonicalize(PrefixMap.from_pairs(g.params, pairs))


def inverse(g: PrefixMap) -> PrefixMap:
    return canonicalize(PrefixMap.from_pairs(g.params, [(v, u) for u, v in g.pairs()]))


def equal(g: PrefixMap, h: PrefixMap) -> bool:
    return canonicalize(g) == canonicalize(h)


def is_torder(g: PrefixMap):
    """``(True, b)`` when the reduced map is the cyclic shift ``a -> a+b``."""
    c = canonicalize(g)
    size = len(c.perm)
    b = c.perm[0]
    if all(c.perm[a] == (a + b) % size for a in range(size)):
        return True, b
    return False, None


# -- building blocks for witnesses -------------------------------------------


def _pad(words: list, target: int, n: int, at: int = 0) -> list:
    """Expand the leaf at position ``at`` (from the end if negative) until
    the list reaches ``target`` leaves."""
    words = list(words)
    while len(words) < target:
        i = at % len(words)
        words = expand(words, i, n)
    return words


def _match(params: Params, dom: list, ran: list, pad_at: int = 0) -> list:
    """Pad the shorter list and pair in order."""
    n = params.n
    if (len(dom) - len(ran)) % (n - 1):
        raise SegmentMismatch(f"{len(dom)} and {len(ran)} leaves differ mod {n - 1}")
    size = max(len(dom), len(ran))
    dom = _pad(dom, size, n, pad_at)
    ran = _pad(ran, size, n, pad_at)
    return list(zip(dom, ran))


def _from_pairs(params: Params, pairs) -> PrefixMap:
    return canonicalize(PrefixMap.from_pairs(params, pairs))


def cone_swap(a: tuple, b: tuple, params: Params) -> PrefixMap:
    """The involution exchanging ``U_a`` and ``U_b`` (incomparable), identity
    elsewhere."""
    if is_prefix(a, b) or is_prefix(b, a):
        raise NotAntichain(f"{format_word(a)} and {format_word(b)} are comparable")
    rest = complement_cones([a, b], params)
    return _from_pairs(params, [(a, b), (b, a)] + [(c, c) for c in rest])


def cone_map(a: tuple, b: tuple, params: Params) -> PrefixMap:
    """An element of T_{n,r} mapping ``a rho`` to ``b rho``.

    The complements are matched in circular order starting just after each cone.
    """
    dom = _circular_from(complement_cones([a], params), a)
    ran = _circular_from(complement_cones([b], params), b)
    return _from_pairs(params, [(a, b)] + _match(params, dom, ran))


def _circular_from(words: list, after: tuple) -> list:
    later = [w for w in words if w > after]
    earlier = [w for w in words if w < after]
    return later + earlier


def local_map(cone: tuple, dom_tail: Sequence[tuple], ran_tail: Sequence[tuple], params: Params):
    """Order preserving map of ``U_cone`` to itself, identity elsewhere.

    ``dom_tail``/``ran_tail`` are complete plain antichains (same size) that
    subdivide the cone.
    """
    pairs = [(cone + s, cone + t) for s, t in zip(sorted(dom_tail), sorted(ran_tail))]
    rest = complement_cones([cone], params)
    return _from_pairs(params, pairs + [(c, c) for c in rest])


# -- small support -----------------------------------------------------------


class Decomposition(NamedTuple):
    first: PrefixMap
    second: PrefixMap
    first_fixes: tuple
    second_fixes: tuple


def moved_cone(g: PrefixMap):
    """A cone ``E`` with ``E`` and ``(E)g`` disjoint and ``E u (E)g`` proper.

    Returns ``(x, y)`` with ``(x rho)g = y rho``, or ``None`` for the identity.
    """
    g = canonicalize(g)
    for u, v in g.pairs():
        if u == v:
            continue
        if is_prefix(u, v) or is_prefix(v, u):
            long, short = (v, u) if len(v) > len(u) else (u, v)
            bad = long[len(short)]
            w = ((bad + 1) % g.params.n,)
        else:
            w = ()
        # one more letter keeps E u (E)g away from the whole space
        w = w + (0,)
        return u + w, v + w
    return None


def small_support_decompose(g: PrefixMap) -> Decomposition:
    found = moved_cone(g)
    if found is None:
        raise IsIdentity("the identity has no moved cone")
    x, y = found
    h = cone_swap(x, y, g.params)
    s1 = compose(g, h)
    s2 = inverse(h)
    outside = complement_cones([x, y], g.params)[0]
    return Decomposition(s1, s2, x, outside)


def fixes_cone(g: PrefixMap, w: tuple) -> bool:
    """True if ``g`` is the identity on all of ``U_w``."""
    g = canonicalize(g)
    m = g.mapping()
    u = find_prefix_in(m, w)
    if u is not None:
        return m[u] == u
    below = [(a, b) for a, b in m.items() if is_prefix(w, a)]
    return all(a == b for a, b in below)


# -- flexibility and Rubin witnesses -----------------------------------------


def _normalise_cones(cones: Iterable, params: Params) -> list:
    ws = sorted({tuple(c) for c in cones})
    keep = [w for w in ws if not any(is_prefix(p, w) and p != w for p in ws)]
    check_antichain(keep)
    return keep


def _inside(w: tuple, cones: Sequence[tuple]) -> bool:
    return any(is_prefix(c, w) for c in cones)


def flexibility_witness(E1: Iterable, E2: Iterable, params: Params) -> PrefixMap:
    """Some ``g`` in G_{n,r} with ``(E1)g`` contained in ``E2``."""
    e1 = _normalise_cones(E1, params)
    e2 = _normalise_cones(E2, params)
    if not e2:
        raise EmptyTarget("E2 is empty")
    rest1 = complement_cones(e1, params)
    if not rest1:
        raise E1NotProper("E1 covers the whole space")
    if not e1 or all(_inside(w, e2) for w in e1):
        return identity(params)
    z = e2[0]
    k = len(e1)
    depth = 1
    while params.n ** depth <= k:
        depth += 1
    targets = sorted(_descendants(z, depth, params.n))[:k]
    rest2 = complement_cones(targets, params)
    pairs = list(zip(e1, targets)) + _match(params, rest1, rest2)
    g = _from_pairs(params, pairs)
    _check_flex(g, e1, e2)
    return g


def _descendants(z: tuple, depth: int, n: int) -> list:
    out = [z]
    for _ in range(depth):
        out = [w + (a,) for w in out for a in range(n)]
    return out


def _check_flex(g: PrefixMap, e1, e2) -> None:
    for u, v in g.pairs():
        if _inside(u, e1) and not _inside(v, e2):
            raise AssertionError(f"cone {format_word(u)} lands outside E2")


def rubin_witness(
    x: EventuallyPeriodicPoint, U: Iterable, V: Iterable, params: Params
) -> PrefixMap:
    """Some ``h`` supported in ``U`` moving ``x`` into ``V`` (a cone swap)."""
    us = _normalise_cones(U, params)
    vs = _normalise_cones(V, params)
    if not vs:
        raise EmptyTarget("V is empty")
    if not all(_inside(v, us) for v in vs):
        raise VNotInsideU("V is not contained in U")
    depth = max(len(w) for w in us + vs)
    xs = x.prefix(depth)
    u0 = find_prefix_in(set(us), xs)
    if u0 is None:
        raise PointOutsideU("x is not in U")
    if find_prefix_in(set(vs), xs) is not None:
        return identity(params)
    v0 = vs[0]
    # x avoids U_{v0}, so this prefix of x is incomparable with v0
    mx = x.prefix(max(len(u0), len(v0)))
    return cone_swap(mx, v0, params)


# -- the circle side: n-adic points --------------------------------------------


def nadic_expansions(x, params: Params):
    """``(tau, tau')`` with ``x = tau (n-1)^ω = tau' 0^ω``."""
    if isinstance(x, EventuallyPeriodicPoint):
        x = point_value(x, params.n)
    x = Fraction(x)
    c = nadic_depth(x, params.n)
    if c is None or not 0 <= x < params.r:
        raise NotNAdic(f"{x} is not an n-adic point of [0, {params.r})")
    num = int(x * params.n ** c)
    right = value_word(num, c, params)
    if c == 0:
        left = ((right[0] - 1) % params.r,)
    else:
        left = right[:-1] + (right[-1] - 1,)
    return left, right


def _circle_values(points, params: Params) -> list:
    out = []
    for p in points:
        if isinstance(p, EventuallyPeriodicPoint):
            p = point_value(p, params.n)
        p = Fraction(p)
        if nadic_depth(p, params.n) is None or not 0 <= p < params.r:
            raise NotNAdic(f"{p} is not an n-adic point of [0, {params.r})")
        out.append(p)
    return out


def _circularly_ordered(vals: Sequence[Fraction]) -> bool:
    if len(set(vals)) != len(vals):
        return False
    k = vals.index(min(vals))
    rot = list(vals[k:]) + list(vals[:k])
    return all(a < b for a, b in zip(rot, rot[1:]))


def transitive_witness(xs: Sequence, ys: Sequence, params: Params) -> PrefixMap:
    """An element of T_{n,r} with ``(xs[i])g = ys[i]`` as circle points."""
    xv = _circle_values(xs, params)
    yv = _circle_values(ys, params)
    if len(xv) != len(yv) or not xv:
        raise NotCircularlyOrdered("need two nonempty sequences of equal length")
    if not _circularly_ordered(xv) or not _circularly_ordered(yv):
        raise NotCircularlyOrdered("points must be distinct and in circular order")
    n = params.n
    depth = max(nadic_depth(v, n) for v in xv + yv)
    leaves = params.r * n ** depth
    scale = n ** depth

    def segments(vals):
        idx = [int(v * scale) for v in vals]
        segs = []
        for i, start in enumerate(idx):
            stop = idx[(i + 1) % len(idx)]
            count = (stop - start) % leaves or leaves
            segs.append([value_word((start + j) % leaves, depth, params) for j in range(count)])
        return segs

    pairs = []
    for dom, ran in zip(segments(xv), segments(yv)):
        pairs += _match(params, dom, ran, pad_at=0)
    return _from_pairs(params, pairs)


def _spine(cone: tuple, depth: int, toward: int, n: int) -> list:
    """Partition of ``U_cone`` refined ``depth`` times along ``toward^ω``."""
    out = []
    w = cone
    for _ in range(depth):
        out += [w + (a,) for a in range(n) if a != toward]
        w = w + (toward,)
    return sorted(out + [w])


def realize_germ(x, i: int, j: int, params: Params, avoid: tuple | None = None) -> PrefixMap:
    """An element of T_{n,r} fixing the n-adic point ``x`` whose germ there has
    length offsets ``i`` on the left, ``(n-1)``-side and ``j`` on the right,
    ``0``-side, and which is the identity on ``U_avoid``."""
    n = params.n
    left, right = nadic_expansions(x, params)
    s = 1
    if avoid is not None:
        avoid = tuple(avoid)
        if is_prefix(avoid, left + (n - 1,) * len(avoid)) or is_prefix(
            avoid, right + (0,) * len(avoid)
        ):
            raise AvoidContainsX(f"{format_word(avoid)} contains x")
        s = max(s, len(avoid))
    lcone = left + (n - 1,) * s
    rcone = right + (0,) * s
    pairs = []
    # 0-side: the leaf at x moves from depth t to depth t + j
    t = max(0, -j) + 1
    pairs += _match(params, _spine(rcone, t, 0, n), _spine(rcone, t + j, 0, n), pad_at=-1)
    t = max(0, -i) + 1
    pairs += _match(params, _spine(lcone, t, n - 1, n), _spine(lcone, t + i, n - 1, n), pad_at=0)
    rest = complement_cones([lcone, rcone], params)
    return _from_pairs(params, pairs + [(c, c) for c in rest])
