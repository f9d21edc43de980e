"""Acceptance criteria 1-11, every check exact.

Run under pytest (one ``criterion N: PASS|FAIL`` line each) or directly with
``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import itertools
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from cantorgroups import anchored as an  # noqa: E402
from cantorgroups import circle as C  # noqa: E402
from cantorgroups import germs as G  # noqa: E402
from cantorgroups import mealy as M  # noqa: E402
from cantorgroups import prefix_maps as pm  # noqa: E402
from cantorgroups.cli import run_command  # noqa: E402
from cantorgroups.formats import format_artifact, parse_artifact  # noqa: E402
from cantorgroups.mealy import SynchronousTransducer  # noqa: E402
from cantorgroups.words import (  # noqa: E402
    EventuallyPeriodicPoint,
    Params,
    complement_cones,
    is_prefix,
    point_from_value,
)

from conftest import (  # noqa: E402
    CORPUS,
    PARAMS,
    anchored_to_raw,
    antichain_of_size,
    brute_apply,
    brute_simeq,
    circle_value,
    fixer,
    nadic_points,
    random_anchored,
    random_antichain,
    random_bisync,
    random_point,
    random_prefix_map,
    random_torder,
    reflection,
    same_function,
    words_below,
)

CRITERIA = {}


def criterion(number, title):
    def register(fn):
        CRITERIA[number] = (title, fn)
        return fn
    return register


def params_cycle(count):
    """``count`` parameter choices spread evenly over the four (n, r) pairs."""
    return [PARAMS[i % len(PARAMS)] for i in range(count)]


def all_at(params, depth):
    for root in range(params.r):
        yield from words_below((root,), depth, params.n)


def compatible(a, b):
    k = min(len(a), len(b))
    return a[:k] == b[:k]


# -- 1 ----------------------------------------------------------------------


@criterion(1, "group laws on 200 random prefix maps")
def check_group_laws():
    rng = random.Random(101)
    start = time.perf_counter()
    for params in params_cycle(200):
        g, h, k = (random_prefix_map(rng, params, 10) for _ in range(3))
        c = pm.canonicalize
        assert c(pm.compose(pm.compose(g, h), k)) == c(pm.compose(g, pm.compose(h, k)))
        gi = pm.inverse(g)
        assert c(pm.compose(g, gi)) == pm.identity(params)
        assert c(pm.compose(gi, g)) == pm.identity(params)
        assert c(c(g)) == c(g)
        assert same_function(c(g), g)
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"took {elapsed:.2f}s"
    return f"{elapsed:.2f}s"


# -- 2 ----------------------------------------------------------------------


@criterion(2, "prefix map round trip and raw transducer agreement")
def check_round_trip():
    rng = random.Random(202)
    for params in params_cycle(200):
        g = pm.canonicalize(random_prefix_map(rng, params, 10))
        assert an.trivial_core_extract(an.from_prefix_map(g)) == g
    words = 0
    raws = [parse_artifact((CORPUS / name).read_text()).value for name in ("shift.raw", "flip.raw")]
    for i in range(20):
        params = Params(2 + i % 2, 1)
        raws.append(anchored_to_raw(random_anchored(rng, params, 1)))
    for t in raws:
        h = an.from_raw(t)
        depth = max(len(u) for u, _, _ in h.cells) + 4
        for x in all_at(t.params, depth):
            assert compatible(an.evaluate_word(h, x), t.run(x)[0]), x
            words += 1
    return f"200 round trips, {len(raws)} raw machines, {words} words"


# -- 3 ----------------------------------------------------------------------


def fixes_at_depth(g, cone, depth=12):
    return all(brute_apply(g, w) == w for w in words_below(cone, max(depth, len(cone)), g.params.n))


@criterion(3, "small support decomposition of 100 elements")
def check_small_support():
    rng = random.Random(303)
    done = 0
    while done < 100:
        params = PARAMS[done % len(PARAMS)]
        g = random_prefix_map(rng, params, 8)
        if pm.is_identity(g):
            continue
        d = pm.small_support_decompose(g)
        assert pm.canonicalize(pm.compose(d.first, d.second)) == pm.canonicalize(g)
        assert fixes_at_depth(d.first, d.first_fixes)
        assert fixes_at_depth(d.second, d.second_fixes)
        done += 1
    return "100 decompositions"


# -- 4 ----------------------------------------------------------------------


def random_cone_set(rng, params, leaves=8):
    ac = random_antichain(rng, params, leaves)
    if len(ac) == 1:
        ac = antichain_of_size(rng, params, params.n)
    k = rng.randint(1, len(ac) - 1)
    return sorted(rng.sample(ac, k))


def extend(rng, w, n, extra):
    return w + tuple(rng.randrange(n) for _ in range(extra))


@criterion(4, "Rubin witnesses for 100 (x, U, V)")
def check_rubin():
    rng = random.Random(404)
    moved = 0
    for params in params_cycle(100):
        n = params.n
        U = random_cone_set(rng, params)
        V = [extend(rng, rng.choice(U), n, rng.randint(0, 3))]
        u = rng.choice(U)
        y = random_point(rng, params)
        x = EventuallyPeriodicPoint(extend(rng, u, n, rng.randint(0, 3)) + y.stem[1:], y.period)
        h = pm.rubin_witness(x, U, V, params)
        depth = max(len(w) for w in h.domain + tuple(U)) + 1
        for w in all_at(params, depth):
            if not any(is_prefix(c, w) for c in U):
                assert brute_apply(h, w) == w
        image = brute_apply(h, x.prefix(depth + max(map(len, V))))
        assert any(is_prefix(v, image) for v in V)
        moved += not pm.is_identity(h)
    return f"100 triples, {moved} non-identity witnesses"


# -- 5 ----------------------------------------------------------------------


@criterion(5, "flexibility witnesses for 100 proper (E1, E2)")
def check_flex():
    rng = random.Random(505)
    for params in params_cycle(100):
        E1 = random_cone_set(rng, params)
        E2 = random_cone_set(rng, params)
        assert complement_cones(E1, params)
        g = pm.flexibility_witness(E1, E2, params)
        depth = max(len(w) for w in g.domain + tuple(E1)) + 1
        for e in E1:
            for w in words_below(e, depth, params.n):
                assert any(is_prefix(c, brute_apply(g, w)) for c in E2)
    return "100 pairs"


# -- 6 ----------------------------------------------------------------------


def brute_targets(t, k):
    """Map from each word of length ``k`` to its set of target states."""
    return {
        w: frozenset(t.target(w, q) for q in t.states())
        for w in itertools.product(range(t.n), repeat=k)
    }


def brute_level(t, bound=6):
    for k in range(bound + 1):
        if all(len(s) == 1 for s in brute_targets(t, k).values()):
            return k
    return None


@criterion(6, "synchronization decided for every invertible machine with at most 2 states")
def check_sync_exhaustive():
    count = 0
    for m in (1, 2):
        for trans in itertools.product(range(m), repeat=2 * m):
            T = [list(trans[2 * q:2 * q + 2]) for q in range(m)]
            for outs in itertools.product([(0, 1), (1, 0)], repeat=m):
                t = SynchronousTransducer(2, T, [list(o) for o in outs])
                cert = M.synchronization_certificate(t)
                level = brute_level(t)
                if isinstance(cert, M.SyncCertificate):
                    assert cert.level == level
                    for w, q in cert.smap.items():
                        assert brute_targets(t, cert.level)[w] == {q}
                else:
                    assert level is None
                    cycle = cert.witness
                    assert all(len(s) > 1 for s in cycle)
                    # the first subset of the cycle is the target set of a brute word
                    reached = set(brute_targets(t, 6).values())
                    assert any(s in reached for s in cycle)
                    for s, nxt in zip(cycle, cycle[1:] + cycle[:1]):
                        assert any(frozenset(t.trans[q][a] for q in s) == nxt for a in range(2))
                count += 1
    assert count == 66
    return f"{count} machines"


# -- 7 ----------------------------------------------------------------------


def random_bisync_search(rng, n):
    """Rejection sample of invertible machines whose inverse also synchronizes."""
    while True:
        m = rng.randint(1, 4)
        trans = [[rng.randrange(m) for _ in range(n)] for _ in range(m)]
        out = []
        for _ in range(m):
            row = list(range(n))
            rng.shuffle(row)
            out.append(row)
        t = SynchronousTransducer(n, trans, out)
        if M.is_bisynchronizing(t):
            return t


@criterion(7, "core algebra laws")
def check_core_algebra():
    rng = random.Random(707)
    for i in range(50):
        n = 2 + i % 2
        t = random_bisync_search(rng, n) if i % 4 < 2 else random_bisync(rng, n)
        assert M.isomorphic(M.core_extract(M.product(t, M.invert(t))), M.identity_machine(n))
    for params in params_cycle(50):
        g, h = random_anchored(rng, params, 1), random_anchored(rng, params, 1)
        expected = M.core_extract(M.product(g.core, h.core))
        assert M.isomorphic(an.compose(g, h).core, expected)
    return "50 inverse products, 50 anchored pairs"


# -- 8 ----------------------------------------------------------------------


POINTS = (Fraction(0), Fraction(1, 2), Fraction(1, 3))


def is_nadic(x, params):
    return point_from_value(x, params).period in ((0,), (params.n - 1,))


def sync_level(core):
    return M.synchronization_certificate(core).level


def near_bump(rng, x, params):
    """T-element supported on a cone close to, but away from, both expansions of ``x``."""
    n = params.n
    left, right = pm.nadic_expansions(x, params)
    spine = rng.choice([left + (n - 1,) * 8, right + (0,) * 8])
    m = rng.randint(len(spine) - 8, len(spine) - 1)
    last = spine[m]
    cone = spine[:m] + (rng.choice([a for a in range(n) if a != last]),)
    dom = antichain_of_size(rng, Params(n, 1), 1 + (n - 1) * rng.randint(1, 3))
    ran = antichain_of_size(rng, Params(n, 1), len(dom))
    return pm.local_map(cone, [w[1:] for w in dom], [w[1:] for w in ran], params)


@criterion(8, "germ additivity, realization and local determination")
def check_germs():
    rng = random.Random(808)
    spaces = [Params(2, 1), Params(3, 1)]
    for i in range(100):
        params = spaces[i % 2]
        x = POINTS[(i // 2) % 3]
        h1, h2 = fixer(rng, x, params), fixer(rng, x, params)
        lhs = G.germ_at(an.compose(h1, h2), x)
        assert lhs == G.germ_compose(G.germ_at(h1, x), G.germ_at(h2, x))
    grid = 0
    for params in PARAMS:
        for x in POINTS:
            if not is_nadic(x, params):
                continue
            for i in range(-3, 4):
                for j in range(-3, 4):
                    f = an.from_prefix_map(pm.realize_germ(x, i, j, params))
                    assert G.germ_at(f, x) == G.NAdic(M.identity_machine(params.n), i, j)
                    grid += 1
    local = 0
    for k in range(100):
        params = PARAMS[k % len(PARAMS)]
        x = POINTS[k % 3]
        if not is_nadic(x, params):
            x = Fraction(0)
        h1 = fixer(rng, x, params)
        h2 = an.compose(h1, an.from_prefix_map(near_bump(rng, x, params)))
        if G.germ_at(h1, x) != G.germ_at(h2, x):
            continue
        K = max(h.depth for h in (h1, h2)) + max(sync_level(h.core) for h in (h1, h2)) + 1
        left, right = pm.nadic_expansions(x, params)
        assert an.agree_on(h1, h2, left + (params.n - 1,) * K)
        assert an.agree_on(h1, h2, right + (0,) * K)
        local += 1
    assert local >= 50
    return f"100 pairs, {grid} grid cells, {local} local pairs"


# -- 9 ----------------------------------------------------------------------


def small_support_t(rng, params):
    """Order preserving rearrangement inside one proper cone."""
    n = params.n
    cone = rng.choice(antichain_of_size(rng, params, params.r + n - 1 + (n - 1) * rng.randint(0, 3)))
    dom = antichain_of_size(rng, Params(n, 1), 1 + (n - 1) * rng.randint(1, 4))
    ran = antichain_of_size(rng, Params(n, 1), len(dom))
    return pm.local_map(cone, [w[1:] for w in dom], [w[1:] for w in ran], params)


def tb_sample(rng, params):
    """Generating sample of the circle-compatible synchronous group."""
    t1 = an.from_prefix_map(random_torder(rng, params, 6))
    t2 = an.from_prefix_map(random_torder(rng, params, 6))
    refl = reflection(params)
    return [refl, t1, an.compose(t1, refl), an.compose(refl, t2), an.compose(an.compose(t1, refl), t2)]


@criterion(9, "conjugating T by circle-compatible synchronous elements stays in T")
def check_conjugation():
    rng = random.Random(909)
    hs = {p: tb_sample(rng, p) for p in PARAMS}
    for p, sample in hs.items():
        for h in sample:
            assert C.simeq_compatible(h)[0]
    count = 0
    for params in params_cycle(100):
        g = small_support_t(rng, params)
        assert pm.is_torder(g)[0]
        ga = an.from_prefix_map(g)
        assert an.is_small_support(ga)[0]
        for h in hs[params]:
            c = an.trivial_core_extract(an.conjugate(ga, h))
            assert isinstance(c, pm.PrefixMap)
            assert pm.is_torder(c)[0]
            count += 1
    return f"100 elements, {count} conjugates"


# -- 10 ---------------------------------------------------------------------


def mixed_corpus(rng):
    out = []
    for i in range(50):
        params = Params(2 + (i % 4) // 2, 1 + i % 2)
        kind = i % 5
        if kind == 0:
            h = an.from_prefix_map(random_torder(rng, params, 8))
        elif kind == 1:
            h = an.compose(an.from_prefix_map(random_torder(rng, params, 8)), reflection(params))
        else:
            a, b = rng.sample(antichain_of_size(rng, params, params.r + (params.n - 1) * 4), 2)
            h = an.from_prefix_map(pm.cone_swap(a, b, params))
        out.append((kind, h))
    return out


@criterion(10, "partner points and circle compatibility")
def check_circle():
    points = 0
    for params in PARAMS:
        for x, y in nadic_points(params, 8):
            assert C.partner_point(x, params) == y
            assert C.partner_point(y, params) == x
            assert circle_value(x, params) == circle_value(y, params)
            points += 1
    rng = random.Random(1010)
    swaps_false = swaps = 0
    for kind, h in mixed_corpus(rng):
        ok, failure = C.simeq_compatible(h)
        assert ok == brute_simeq(h, 8)
        if kind < 2:
            assert ok
        else:
            swaps += 1
            if not ok:
                swaps_false += 1
                left = an.evaluate_point(h, failure.left)
                right = an.evaluate_point(h, failure.right)
                assert circle_value(left, h.params) != circle_value(right, h.params)
    assert swaps_false * 2 > swaps
    return f"{points} point pairs, {swaps_false}/{swaps} cone swaps rejected"


# -- 11 ---------------------------------------------------------------------


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = run_command([str(a) for a in argv])
    return code, out.getvalue()


@criterion(11, "corpus round trip and command line examples")
def check_cli():
    files = sorted(p for p in CORPUS.iterdir() if p.is_file())
    for path in files:
        data = path.read_bytes()
        assert format_artifact(parse_artifact(data)).encode() == data, path.name
    assert run("sync", CORPUS / "swap.mealy") == (0, "synchronizing level=0 core_states=1\n")
    assert run("member", "--group", "tnr", CORPUS / "rotation.pmap")[0] == 0
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "out.anch"
        assert run("compose", CORPUS / "g.pmap", CORPUS / "ginv.pmap", "-o", target) == (0, "")
        assert target.read_bytes() == (CORPUS / "identity.anch").read_bytes()
    return f"{len(files)} corpus files, 3 examples"


def evaluate(number):
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        detail = fn()
    except Exception as exc:
        return False, f"criterion {number}: FAIL {title} ({type(exc).__name__}: {exc})"
    elapsed = time.perf_counter() - start
    return True, f"criterion {number}: PASS {title} [{detail}; {elapsed:.1f}s]"


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
