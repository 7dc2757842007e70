"""Geometric construction of the parameter set: admissible words, basic
intervals and depth-n covers.

The parameter set of a point x is a Cantor set inside the hull
[x/(m-1+x), 1/m].  Codings of its members are exactly the digit streams
lexicographically >= the greedy stream of x, so a length-n word is
admissible iff its largest completion reaches that region; the associated
basic interval collects the parameters whose coding starts with the word.
Enumeration prunes the word tree instead of scanning all m^n words.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from ._parallel import pmap
from ._rat import Q, to_rational
from .coding import GreedyExpansion
from .errors import DomainError, NoRootError, NotAdmissibleError
from .exact_arith import (
    DEFAULT_TOL,
    Bracket,
    Code,
    Ordering,
    Tail,
    separate_brackets,
    solve_lambda,
)


@dataclass(frozen=True)
class BasicInterval:
    """Closed parameter interval [p, q] of codings starting with `word`.

    The left endpoint solves the (m-1)-tail completion, the right the
    0-tail completion; both are certified brackets.  On the greedy spine of
    a point whose expansion has not terminated, the 0-tail completion has
    no root and the right endpoint is the exact hull maximum 1/m.
    """

    word: tuple[int, ...]
    left: Bracket
    right: Bracket

    @property
    def width_lo(self) -> Q:
        return self.right.lo - self.left.hi

    @property
    def width_hi(self) -> Q:
        return self.right.hi - self.left.lo

    def refined_to(self, tol) -> "BasicInterval":
        return BasicInterval(self.word, self.left.refined_to(tol), self.right.refined_to(tol))


@dataclass(frozen=True)
class CoverLevel:
    """All depth-n basic intervals of one parameter set, plus their gaps.

    `gaps[i]` holds the certified endpoint brackets (right of interval i,
    left of interval i+1); the open interval strictly between the two
    bracket enclosures contains no parameter of the set.
    """

    x: Q
    m: int
    depth: int
    intervals: tuple[BasicInterval, ...]
    gaps: tuple[tuple[Bracket, Bracket], ...]
    hull: tuple[Q, Q]


def hull_of(x, m: int) -> tuple[Q, Q]:
    """Exact convex hull [x/(m-1+x), 1/m] of the parameter set."""
    x = to_rational(x)
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    return (x / (m - 1 + x), Q(1, m))


def _word_tuple(word) -> tuple[int, ...]:
    return tuple(int(d) for d in word)


def is_admissible(x, m: int, word) -> bool:
    """A word can begin a coding iff its max completion reaches the greedy
    stream; words shorter than the first defect are excluded as degenerate
    (their interval is the whole hull)."""
    word = _word_tuple(word)
    ge = GreedyExpansion(x, m)
    if len(word) < ge.first_defect:
        return False
    order = ge.compare_code(Code(m, word, Tail.MAX))
    return order in (Ordering.GREATER, Ordering.EQUAL)


def admissible_words(x, m: int, n: int) -> list[tuple[int, ...]]:
    """All admissible words of length n, lexicographically ascending."""
    if n < 1:
        raise DomainError("n must be >= 1")
    ge = GreedyExpansion(x, m)
    ell = ge.first_defect
    if n < ell:
        return []
    return [w for w, _ in _admissible_tree(ge, n)]


def _admissible_tree(ge: GreedyExpansion, n: int) -> list[tuple[tuple[int, ...], bool]]:
    """(word, on_greedy_spine) pairs at depth n, ascending, by tree pruning.

    Every admissible word of length n-1 has admissible children: all m
    digits once the word is strictly above the greedy prefix, and digits
    >= the next greedy digit on the spine itself.
    """
    m = ge.m
    ell = ge.first_defect
    head = tuple(m - 1 for _ in range(ell - 1))
    g = ge.digit(ell)
    level = [(head + (d,), d == g) for d in range(g, m)]
    for depth in range(ell + 1, n + 1):
        g = ge.digit(depth)
        nxt = []
        for word, spine in level:
            if spine:
                nxt.extend((word + (d,), d == g) for d in range(g, m))
            else:
                nxt.extend((word + (d,), False) for d in range(m))
        nxt.sort(key=lambda item: item[0])
        level = nxt
    return level


def interval_for_prefix(x, m: int, prefix, tol=None, allow_capped: bool = True) -> BasicInterval:
    """Basic interval with endpoint codes prefix+max-tail / prefix+zero-tail."""
    x = to_rational(x)
    prefix = _word_tuple(prefix)
    left = solve_lambda(x, Code(m, prefix, Tail.MAX), tol)
    try:
        right = solve_lambda(x, Code(m, prefix, Tail.ZERO), tol)
    except NoRootError:
        if not allow_capped:
            raise
        # Greedy spine: codings starting with this prefix accumulate at the
        # hull maximum, reached by the greedy coding itself.
        cap = Q(1, m)
        right = Bracket(cap, cap, Code(m, prefix, Tail.TRUNCATED), x)
    return BasicInterval(prefix, left, right)


def basic_interval(x, m: int, word, tol=None) -> BasicInterval:
    """The basic interval of an admissible word (NotAdmissibleError otherwise)."""
    word = _word_tuple(word)
    if not is_admissible(x, m, word):
        raise NotAdmissibleError(
            "word %r cannot begin a coding of %s over m=%d" % ("".join(map(str, word)), x, m)
        )
    return interval_for_prefix(x, m, word, tol)


# deep covers hold thousands of brackets, so keep this cache small
@functools.lru_cache(maxsize=32)
def _cover_cached(x, m: int, depth: int, tol) -> CoverLevel:
    ge = GreedyExpansion(x, m)
    ell = ge.first_defect
    if depth < ell:
        raise DomainError(
            "cover depth %d is below the first defect level %d" % (depth, ell)
        )
    words = [w for w, _ in _admissible_tree(ge, depth)]
    # ascending parameter order is descending word order
    words.reverse()
    intervals = pmap(lambda w: interval_for_prefix(x, m, w, tol), words)
    intervals, gaps = _separate_adjacent(intervals)
    return CoverLevel(
        x=x,
        m=m,
        depth=depth,
        intervals=tuple(intervals),
        gaps=tuple(gaps),
        hull=hull_of(x, m),
    )


def cover(x, m: int, depth: int, tol=None) -> CoverLevel:
    """The depth-n cover of the parameter set: disjoint sorted intervals + gaps."""
    x = to_rational(x)
    tol = DEFAULT_TOL if tol is None else to_rational(tol)
    return _cover_cached(x, m, depth, tol)


def cover_sequence(x, m: int, depth: int, tol=None) -> list[CoverLevel]:
    """Covers for every level from the first defect through `depth`."""
    x = to_rational(x)
    ell = GreedyExpansion(x, m).first_defect
    return [cover(x, m, n, tol) for n in range(ell, depth + 1)]


def _separate_adjacent(intervals):
    """Refine endpoints until consecutive intervals are strictly disjoint,
    so every reported gap is certified nonempty."""
    out = list(intervals)
    gaps = []
    for i in range(len(out) - 1):
        a, b = out[i], out[i + 1]
        ra, lb = separate_brackets(a.right, b.left)
        if ra is not a.right:
            out[i] = BasicInterval(a.word, a.left, ra)
        if lb is not b.left:
            out[i + 1] = BasicInterval(b.word, lb, b.right)
        gaps.append((ra, lb))
    return out, gaps
