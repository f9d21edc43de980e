"""Words, prefix/lexicographic orders, complete antichains and eventually
periodic points of the Cantor spaces C_{n,r}.

Internally a word is a plain ``tuple`` of ints.  A *rooted* word (an address in
C_{n,r}) stores its dot letter as the first entry, so ``(1, 0, 1)`` is the word
written ``d1:01``.  Python's tuple ordering is then exactly the lexicographic
order in which a prefix precedes its extensions.  The :class:`Word` wrapper
carries the kind explicitly for the public comparison helpers.
"""

from __future__ import annotations

import enum
import itertools
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    Incomplete,
    InvalidWord,
    KindMismatch,
    NotAntichain,
    NotAPrefix,
    NotNAdic,
    ParamsMismatch,
)

@dataclass(frozen=True)
class Params:
    n: int = 2
    r: int = 1

    def __post_init__(self):
        if self.n < 2 or self.r < 1:
            raise ValueError(f"need n >= 2 and r >= 1, got n={self.n} r={self.r}")

    def roots(self):
        return tuple((i,) for i in range(self.r))


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple
    rooted: bool = True

    def __len__(self):
        return len(self.letters)

    def check(self, params: Params) -> "Word":
        check_letters(self.letters, params, self.rooted)
        return self

    def __str__(self):
        return format_word(self.letters, rooted=self.rooted)


def check_letters(letters: Sequence[int], params: Params, rooted: bool = True):
    if rooted:
        if not letters:
            raise InvalidWord("a rooted word is nonempty")
        if not 0 <= letters[0] < params.r:
            raise InvalidWord(f"dot letter {letters[0]} out of range for r={params.r}")
        digits = letters[1:]
    else:
        digits = letters
    for a in digits:
        if not 0 <= a < params.n:
            raise InvalidWord(f"digit {a} out of range for n={params.n}")


# -- text syntax -------------------------------------------------------------


def _format_digits(digits: Sequence[int], wide: bool) -> str:
    if wide:
        return ",".join(str(a) for a in digits)
    return "".join(str(a) for a in digits)


def _parse_digits(text: str) -> tuple:
    if not text:
        return ()
    try:
        if "," in text:
            return tuple(int(t) for t in text.split(","))
        return tuple(int(c) for c in text)
    except ValueError:
        raise InvalidWord(f"bad digit string {text!r}") from None


def format_word(letters: Sequence[int], rooted: bool = True, n: int = 2) -> str:
    wide = n > 10 or any(a > 9 for a in letters[1 if rooted else 0:])
    if rooted:
        head = f"d{letters[0]}"
        if len(letters) == 1:
            return head
        return head + ":" + _format_digits(letters[1:], wide)
    if not letters:
        return "-"
    return _format_digits(letters, wide)


def parse_letters(text: str) -> tuple:
    """Parse ``d<i>:<digits>`` (rooted) or a bare digit string (plain)."""
    text = text.strip()
    if text.startswith("d"):
        head, _, rest = text[1:].partition(":")
        try:
            dot = int(head)
        except ValueError:
            raise InvalidWord(f"bad dot letter in {text!r}") from None
        return (dot,) + _parse_digits(rest)
    if text in ("-", "ε", ""):
        return ()
    return _parse_digits(text)


def parse_word(text: str, params: Params | None = None) -> Word:
    rooted = text.strip().startswith("d")
    w = Word(parse_letters(text), rooted)
    if params is not None:
        w.check(params)
    return w


# -- orders ------------------------------------------------------------------


class Relation(enum.Enum):
    EQUAL = "equal"
    PREFIX_OF = "prefix-of"
    EXTENSION_OF = "extension-of"
    INCOMPARABLE = "incomparable"


class Comparison(NamedTuple):
    relation: Relation
    lex: int  # -1, 0 or 1


def is_prefix(a: tuple, b: tuple) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def compare_letters(a: tuple, b: tuple) -> Comparison:
    lex = (a > b) - (a < b)
    if a == b:
        return Comparison(Relation.EQUAL, 0)
    if is_prefix(a, b):
        return Comparison(Relation.PREFIX_OF, lex)
    if is_prefix(b, a):
        return Comparison(Relation.EXTENSION_OF, lex)
    return Comparison(Relation.INCOMPARABLE, lex)


def compare_words(a: Word, b: Word, params: Params | None = None) -> Comparison:
    if a.rooted != b.rooted:
        raise KindMismatch("cannot compare a rooted word with a plain word")
    if params is not None:
        a.check(params)
        b.check(params)
    return compare_letters(a.letters, b.letters)


def word_subtract(eta: Word, nu: Word) -> Word:
    """Return the plain word ``tau`` with ``eta = nu tau``."""
    if eta.rooted != nu.rooted:
        raise KindMismatch("cannot subtract words of different kinds")
    if not is_prefix(nu.letters, eta.letters):
        raise NotAPrefix(f"{nu} is not a prefix of {eta}")
    return Word(eta.letters[len(nu.letters):], rooted=False)


def lcp(words: Iterable[tuple]) -> tuple:
    words = list(words)
    if not words:
        return ()
    first = min(words)
    last = max(words)
    i = 0
    while i < min(len(first), len(last)) and first[i] == last[i]:
        i += 1
    return first[:i]


# -- antichains --------------------------------------------------------------


def children(w: tuple, n: int) -> list:
    return [w + (a,) for a in range(n)]


def all_words(params: Params, length: int, rooted: bool = True):
    """Every word of the given total length, in lex order."""
    if rooted:
        if length < 1:
            return
        for dot in range(params.r):
            for tail in itertools.product(range(params.n), repeat=length - 1):
                yield (dot,) + tail
    else:
        yield from itertools.product(range(params.n), repeat=length)


def uniform_antichain(params: Params, depth: int) -> list:
    """All rooted words with ``depth`` digits."""
    return list(all_words(params, depth + 1))


def kraft_ok(words: Sequence[tuple], params: Params, rooted: bool = True) -> bool:
    if not words:
        return False
    off = 1 if rooted else 0
    top = max(len(w) - off for w in words)
    total = sum(params.n ** (top - (len(w) - off)) for w in words)
    target = (params.r if rooted else 1) * params.n ** top
    return total == target


@dataclass(frozen=True)
class CompleteAntichain:
    params: Params
    words: tuple
    rooted: bool = True

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in self.words

    def find_prefix(self, w: tuple):
        """The antichain word that is a prefix of ``w``, or ``None``."""
        return find_prefix_in(set(self.words), w)


def find_prefix_in(cones, w: tuple):
    for k in range(len(w), -1, -1):
        if w[:k] in cones:
            return w[:k]
    return None


def check_antichain(words: Sequence[tuple]) -> None:
    """``words`` must be lex sorted; raises on any prefix pair."""
    for a, b in zip(words, words[1:]):
        if is_prefix(a, b):
            raise NotAntichain(
                f"{format_word(a)} is a prefix of {format_word(b)}"
                if a != b
                else f"{format_word(a)} appears twice"
            )


def antichain_validate(
    words: Iterable, params: Params, rooted: bool | None = None
) -> CompleteAntichain:
    items = list(words)
    kinds = {w.rooted for w in items if isinstance(w, Word)}
    if len(kinds) > 1:
        raise KindMismatch("antichain mixes rooted and plain words")
    if rooted is None:
        rooted = kinds.pop() if kinds else True
    elif kinds and kinds != {rooted}:
        raise KindMismatch("antichain word kind does not match")
    letters = sorted(w.letters if isinstance(w, Word) else tuple(w) for w in items)
    for w in letters:
        check_letters(w, params, rooted)
    check_antichain(letters)
    if not kraft_ok(letters, params, rooted):
        raise Incomplete("Kraft sum differs from the size of the space")
    return CompleteAntichain(params, tuple(letters), rooted)


def maxima(words: Iterable[tuple]) -> list:
    """Words with no proper extension in the collection, lex sorted."""
    ws = sorted(set(words))
    return [w for w, nxt in zip(ws, ws[1:] + [None]) if nxt is None or not is_prefix(w, nxt)]


def antichain_refine(a: CompleteAntichain, b: CompleteAntichain) -> CompleteAntichain:
    if a.params != b.params:
        raise ParamsMismatch("antichains over different spaces")
    if a.rooted != b.rooted:
        raise KindMismatch("antichains of different kinds")
    return CompleteAntichain(a.params, tuple(maxima(a.words + b.words)), a.rooted)


def complement_cones(words: Iterable[tuple], params: Params) -> list:
    """Coarsest cones covering the complement of the union of ``U_w``.

    ``words`` must be pairwise incomparable rooted words.
    """
    ws = set(words)
    prefixes = set()
    for w in ws:
        for k in range(1, len(w)):
            prefixes.add(w[:k])
    out = [root for root in params.roots() if root not in ws and root not in prefixes]
    for p in prefixes:
        for c in children(p, params.n):
            if c not in ws and c not in prefixes:
                out.append(c)
    return sorted(out)


def expand(words: list, index: int, n: int) -> list:
    """Replace ``words[index]`` by its n children (keeps lex order)."""
    w = words[index]
    return words[:index] + children(w, n) + words[index + 1:]


# -- eventually periodic points ---------------------------------------------


def primitive_root(period: tuple) -> tuple:
    m = len(period)
    for d in range(1, m + 1):
        if m % d == 0 and period[:d] * (m // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """The infinite word ``stem period period ...`` in canonical form."""

    stem: tuple
    period: tuple
    rooted: bool = True

    def __post_init__(self):
        stem, period = tuple(self.stem), tuple(self.period)
        if not period:
            raise InvalidWord("period must be nonempty")
        if self.rooted and not stem:
            raise InvalidWord("a rooted point needs a dot letter")
        period = primitive_root(period)
        keep = 1 if self.rooted else 0
        while len(stem) > keep and stem[-1] == period[-1]:
            stem = stem[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "period", period)

    def prefix(self, k: int) -> tuple:
        if k <= len(self.stem):
            return self.stem[:k]
        extra = k - len(self.stem)
        reps = -(-extra // len(self.period))
        return (self.stem + self.period * reps)[:k]

    def drop(self, k: int) -> "EventuallyPeriodicPoint":
        """The plain point left after removing the first ``k`` letters."""
        if k <= len(self.stem):
            return EventuallyPeriodicPoint(self.stem[k:], self.period, rooted=False)
        shift = (k - len(self.stem)) % len(self.period)
        return EventuallyPeriodicPoint((), self.period[shift:] + self.period[:shift], rooted=False)

    def __str__(self):
        return format_point(self)


def format_point(p: EventuallyPeriodicPoint, n: int = 2) -> str:
    wide = n > 10 or any(a > 9 for a in p.stem[1 if p.rooted else 0:] + p.period)
    if p.rooted:
        head = f"d{p.stem[0]}:" + _format_digits(p.stem[1:], wide)
    else:
        head = _format_digits(p.stem, wide)
    return f"{head}({_format_digits(p.period, wide)})"


def parse_point(text: str, params: Params | None = None) -> EventuallyPeriodicPoint:
    text = text.strip()
    if not (text.endswith(")") and "(" in text):
        raise InvalidWord(f"point {text!r} needs a parenthesised period")
    head, _, period = text[:-1].partition("(")
    if head.endswith(","):
        head = head[:-1]
    rooted = head.startswith("d")
    if rooted and ":" not in head:
        head += ":"
    stem = parse_letters(head) if head else ()
    per = _parse_digits(period)
    if params is not None:
        check_letters(stem, params, rooted)
        check_letters(per, params, rooted=False)
    return EventuallyPeriodicPoint(stem, per, rooted)


def point_value(p: EventuallyPeriodicPoint, n: int) -> Fraction:
    """Exact value in [0, r) (rooted) or [0, 1] (plain) of the expansion."""
    digits = p.stem[1:] if p.rooted else p.stem
    base = Fraction(p.stem[0]) if p.rooted else Fraction(0)
    s = len(digits)
    head = 0
    for a in digits:
        head = head * n + a
    per = 0
    for a in p.period:
        per = per * n + a
    tail = Fraction(per, n ** len(p.period) - 1)
    return base + (head + tail) / Fraction(n) ** s


def point_from_value(x, params: Params) -> EventuallyPeriodicPoint:
    """Canonical expansion of a rational in [0, r).

    n-adic rationals get the expansion ending in ``0^ω``.
    """
    x = Fraction(x)
    if not 0 <= x < params.r:
        raise NotNAdic(f"{x} is outside [0, {params.r})")
    n = params.n
    dot = x.numerator // x.denominator
    frac = x - dot
    num, den = frac.numerator, frac.denominator
    digits = []
    seen = {}
    while num not in seen:
        seen[num] = len(digits)
        num *= n
        digits.append(num // den)
        num %= den
    start = seen[num]
    return EventuallyPeriodicPoint((dot,) + tuple(digits[:start]), tuple(digits[start:]))


def nadic_depth(x: Fraction, n: int):
    """Smallest c with x * n^c an integer, or ``None`` if x is not n-adic."""
    x = Fraction(x)
    den = x.denominator
    c = 0
    while den != 1:
        g = gcd(den, n)
        if g == 1:
            return None
        den //= g
        c += 1
    return c


def value_word(num: int, depth: int, params: Params) -> tuple:
    """Rooted word with ``depth`` digits addressing [num/n^depth, (num+1)/n^depth)."""
    n = params.n
    dot, rest = divmod(num, n ** depth)
    digits = []
    for _ in range(depth):
        rest, a = divmod(rest, n)
        digits.append(a)
    return (dot,) + tuple(reversed(digits))


def word_left_value(w: tuple, n: int) -> Fraction:
    v = Fraction(w[0])
    scale = Fraction(1)
    for a in w[1:]:
        scale /= n
        v += a * scale
    return v
