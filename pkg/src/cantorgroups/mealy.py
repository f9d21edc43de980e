"""Synchronous (letter-to-letter) transducers over X_n.

States are ``0..m-1``; ``trans[q][a]`` is the next state and ``out[q][a]`` the
output letter on reading ``a`` from ``q``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import NotInvertible, NotSynchronizingError, ParamsMismatch
from .words import EventuallyPeriodicPoint


@dataclass(frozen=True)
class SynchronousTransducer:
    n: int
    trans: tuple
    out: tuple

    def __post_init__(self):
        object.__setattr__(self, "trans", tuple(tuple(row) for row in self.trans))
        object.__setattr__(self, "out", tuple(tuple(row) for row in self.out))
        m = len(self.trans)
        if m == 0 or len(self.out) != m:
            raise ValueError("machine needs at least one state and matching rows")
        for q in range(m):
            if len(self.trans[q]) != self.n or len(self.out[q]) != self.n:
                raise ValueError(f"state {q} does not have exactly {self.n} edges")
            for a in range(self.n):
                if not 0 <= self.trans[q][a] < m:
                    raise ValueError(f"edge {q} {a} goes to unknown state")
                if not 0 <= self.out[q][a] < self.n:
                    raise ValueError(f"edge {q} {a} outputs an unknown letter")

    @property
    def size(self) -> int:
        return len(self.trans)

    def states(self):
        return range(len(self.trans))

    def run(self, word: Sequence[int], q: int):
        """``(lambda(word, q), pi(word, q))``."""
        out = []
        for a in word:
            out.append(self.out[q][a])
            q = self.trans[q][a]
        return tuple(out), q

    def output(self, word, q) -> tuple:
        return self.run(word, q)[0]

    def target(self, word, q) -> int:
        for a in word:
            q = self.trans[q][a]
        return q

    def is_invertible(self) -> bool:
        return all(sorted(row) == list(range(self.n)) for row in self.out)

    def is_identity_state(self, q: int) -> bool:
        """Every state reachable from ``q`` copies its input."""
        ident = tuple(range(self.n))
        return all(self.out[p] == ident for p in reachable(self, [q]))

    def is_trivial(self) -> bool:
        return self.size == 1 and self.out[0] == tuple(range(self.n))


def identity_machine(n: int) -> SynchronousTransducer:
    return SynchronousTransducer(n, [[0] * n], [list(range(n))])


def permutation_machine(perm: Sequence[int]) -> SynchronousTransducer:
    """Single-state machine applying ``perm`` letterwise (SWAP for ``(1, 0)``)."""
    return SynchronousTransducer(len(perm), [[0] * len(perm)], [list(perm)])


def reachable(t: SynchronousTransducer, starts) -> list:
    seen = set(starts)
    stack = list(starts)
    while stack:
        q = stack.pop()
        for p in t.trans[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return sorted(seen)


def submachine(t: SynchronousTransducer, keep: Sequence[int]):
    """Restrict to a closed set of states, renumbered in increasing order."""
    keep = sorted(keep)
    index = {q: i for i, q in enumerate(keep)}
    trans = [[index[t.trans[q][a]] for a in range(t.n)] for q in keep]
    out = [list(t.out[q]) for q in keep]
    return SynchronousTransducer(t.n, trans, out), index


def renumber(t: SynchronousTransducer, order: Sequence[int]):
    """Machine whose new state ``i`` is old state ``order[i]``."""
    index = {q: i for i, q in enumerate(order)}
    trans = [[index[t.trans[q][a]] for a in range(t.n)] for q in order]
    out = [list(t.out[q]) for q in order]
    return SynchronousTransducer(t.n, trans, out), index


# -- minimisation ------------------------------------------------------------


def equivalence_classes(t: SynchronousTransducer) -> list:
    """Moore refinement; class ids numbered by smallest member."""
    block = {}
    cls = [block.setdefault(row, len(block)) for row in t.out]
    while True:
        keys = [(cls[q], tuple(cls[p] for p in t.trans[q])) for q in t.states()]
        ids = {}
        new = [ids.setdefault(k, len(ids)) for k in keys]
        if len(ids) == len(set(cls)):
            return new
        cls = new


def minimize(t: SynchronousTransducer):
    """``(minimal machine, class of each old state)``."""
    cls = equivalence_classes(t)
    reps = {}
    for q in t.states():
        reps.setdefault(cls[q], q)
    trans = [[cls[t.trans[q][a]] for a in range(t.n)] for _, q in sorted(reps.items())]
    out = [list(t.out[q]) for _, q in sorted(reps.items())]
    return SynchronousTransducer(t.n, trans, out), tuple(cls)


def is_minimal(t: SynchronousTransducer) -> bool:
    return len(set(equivalence_classes(t))) == t.size


def distinguishing_word(t: SynchronousTransducer, p: int, q: int):
    """Shortest word on which states ``p`` and ``q`` output differently."""
    seen = {(p, q): ()}
    queue = deque([(p, q)])
    while queue:
        a, b = queue.popleft()
        w = seen[(a, b)]
        for x in range(t.n):
            if t.out[a][x] != t.out[b][x]:
                return w + (x,)
            nxt = (t.trans[a][x], t.trans[b][x])
            if nxt not in seen:
                seen[nxt] = w + (x,)
                queue.append(nxt)
    return None


def disjoint_union(a: SynchronousTransducer, b: SynchronousTransducer) -> SynchronousTransducer:
    if a.n != b.n:
        raise ParamsMismatch("machines over different alphabets")
    shift = a.size
    trans = [list(r) for r in a.trans] + [[p + shift for p in r] for r in b.trans]
    return SynchronousTransducer(a.n, trans, list(a.out) + list(b.out))


def isomorphic(a: SynchronousTransducer, b: SynchronousTransducer) -> bool:
    """Whether the minimal forms of ``a`` and ``b`` are the same machine."""
    if a.n != b.n:
        return False
    cls = equivalence_classes(disjoint_union(a, b))
    return set(cls[: a.size]) == set(cls[a.size:])


def canonical_form(t: SynchronousTransducer) -> SynchronousTransducer:
    """Numbering-independent representative: the breadth-first relabelling
    with the smallest edge table, over every choice of start state and of
    restart state when the search gets stuck."""
    best = None

    def search(order: list):
        nonlocal best
        seen = set(order)
        i = 0
        while i < len(order):
            for p in t.trans[order[i]]:
                if p not in seen:
                    seen.add(p)
                    order.append(p)
            i += 1
        if len(order) == t.size:
            cand, _ = renumber(t, order)
            key = (cand.trans, cand.out)
            if best is None or key < best[0]:
                best = (key, cand)
            return
        for q in t.states():
            if q not in seen:
                search(order + [q])

    search([])
    return best[1]


# -- products and inverses ---------------------------------------------------


def pair_machine(a: SynchronousTransducer, b: SynchronousTransducer) -> SynchronousTransducer:
    """``a`` then ``b``; pair ``(p, q)`` is state ``p * b.size + q``."""
    if a.n != b.n:
        raise ParamsMismatch("machines over different alphabets")
    n, m = a.n, b.size
    trans, out = [], []
    for p in a.states():
        for q in b.states():
            trow, orow = [], []
            for x in range(n):
                y = a.out[p][x]
                trow.append(a.trans[p][x] * m + b.trans[q][y])
                orow.append(b.out[q][y])
            trans.append(trow)
            out.append(orow)
    return SynchronousTransducer(n, trans, out)


def product(a: SynchronousTransducer, b: SynchronousTransducer) -> SynchronousTransducer:
    return minimize(pair_machine(a, b))[0]


def invert(t: SynchronousTransducer) -> SynchronousTransducer:
    trans, out = [], []
    for q in t.states():
        row = t.out[q]
        if sorted(row) != list(range(t.n)):
            raise NotInvertible(f"output row of state {q} is not a permutation", state=q)
        back = {y: x for x, y in enumerate(row)}
        out.append([back[y] for y in range(t.n)])
        trans.append([t.trans[q][back[y]] for y in range(t.n)])
    return SynchronousTransducer(t.n, trans, out)


# -- synchronisation ---------------------------------------------------------


@dataclass(frozen=True)
class SyncCertificate:
    level: int
    smap: dict

    @property
    def core_states(self) -> list:
        return sorted(set(self.smap.values()))


@dataclass(frozen=True)
class NotSynchronizing:
    witness: tuple  # a cycle of non-singleton subsets


def subset_graph(trans: Sequence[Sequence[int]], n: int, start: frozenset) -> dict:
    graph = {}
    stack = [start]
    while stack:
        s = stack.pop()
        if s in graph:
            continue
        succ = tuple(frozenset(trans[q][a] for q in s) for a in range(n))
        graph[s] = succ
        stack.extend(x for x in succ if x not in graph)
    return graph


def sync_level(trans: Sequence[Sequence[int]], n: int, states=None):
    """Exact synchronisation level of a transition table, or a witness cycle.

    Returns ``(level, None)`` or ``(None, cycle)``.
    """
    start = frozenset(range(len(trans)) if states is None else states)
    graph = subset_graph(trans, n, start)
    depth = {}
    on_path = []
    on_set = set()

    # iterative DFS for longest path / cycle detection over non-singletons
    def visit(root):
        stack = [(root, 0)]
        on_path.append(root)
        on_set.add(root)
        while stack:
            node, i = stack[-1]
            succ = graph[node]
            if i < n:
                stack[-1] = (node, i + 1)
                nxt = succ[i]
                if len(nxt) == 1 or nxt in depth:
                    continue
                if nxt in on_set:
                    k = on_path.index(nxt)
                    return tuple(on_path[k:])
                stack.append((nxt, 0))
                on_path.append(nxt)
                on_set.add(nxt)
            else:
                stack.pop()
                on_path.pop()
                on_set.discard(node)
                depth[node] = 1 + max(0 if len(x) == 1 else depth[x] for x in succ)
        return None

    if len(start) == 1:
        return 0, None
    cycle = visit(start)
    if cycle is not None:
        return None, cycle
    return depth[start], None


def synchronization_certificate(t: SynchronousTransducer):
    level, cycle = sync_level(t.trans, t.n)
    if cycle is not None:
        return NotSynchronizing(cycle)
    smap = {w: t.target(w, 0) for w in itertools.product(range(t.n), repeat=level)}
    return SyncCertificate(level, smap)


def is_synchronizing(t: SynchronousTransducer) -> bool:
    return sync_level(t.trans, t.n)[1] is None


def is_bisynchronizing(t: SynchronousTransducer) -> bool:
    return t.is_invertible() and is_synchronizing(t) and is_synchronizing(invert(t))


def core_states(trans: Sequence[Sequence[int]], n: int) -> list:
    """States in the image of the synchronising map (no enumeration of words)."""
    level, cycle = sync_level(trans, n)
    if cycle is not None:
        raise NotSynchronizingError("machine is not synchronizing", witness=cycle)
    layer = {frozenset(range(len(trans)))}
    for _ in range(level):
        layer = {frozenset(trans[q][a] for q in s) for s in layer for a in range(n)}
    return sorted(q for s in layer for q in s)


def core_extract(t: SynchronousTransducer) -> SynchronousTransducer:
    return submachine(t, core_states(t.trans, t.n))[0]


def is_strongly_connected(t: SynchronousTransducer) -> bool:
    if len(reachable(t, [0])) != t.size:
        return False
    back = [[] for _ in t.states()]
    for q in t.states():
        for p in t.trans[q]:
            back[p].append(q)
    seen = {0}
    stack = [0]
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return len(seen) == t.size


# -- tails -------------------------------------------------------------------


class TailImage(NamedTuple):
    entry: int
    cycle_len: int
    cycle_state: int
    image: EventuallyPeriodicPoint


def tail_image(t: SynchronousTransducer, q: int, w: Sequence[int]) -> TailImage:
    """Read ``w^ω`` from ``q``."""
    w = tuple(w)
    if not w:
        raise ValueError("tail word must be nonempty")
    first = {}
    seq, outs = [], []
    while q not in first:
        first[q] = len(seq)
        seq.append(q)
        o, q = t.run(w, q)
        outs.append(o)
    entry = first[q]
    stem = tuple(x for o in outs[:entry] for x in o)
    period = tuple(x for o in outs[entry:] for x in o)
    image = EventuallyPeriodicPoint(stem, period, rooted=False)
    return TailImage(entry, len(seq) - entry, q, image)


def run_point(t: SynchronousTransducer, q: int, p: EventuallyPeriodicPoint):
    """Image of a plain eventually periodic word read from ``q``."""
    head, s = t.run(p.stem, q)
    tail = tail_image(t, s, p.period).image
    return EventuallyPeriodicPoint(head + tail.stem, tail.period, rooted=False)
