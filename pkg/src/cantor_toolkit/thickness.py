"""Thick Cantor subsystems of a parameter set and their intersections.

Each defect digit of the greedy expansion of x spawns a family of disjoint
basic intervals accumulating at 1/m; the Cantor subset built inside the
k-th such interval gets arbitrarily thick as k grows, which is what forces
two parameter sets to intersect.  This module constructs those subsystems,
estimates their thickness with certified rational interval arithmetic, and
searches for interleaved pairs across two points.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Optional

from ._rat import Q, to_rational
from .coding import GreedyExpansion
from .errors import DomainError, PrecisionExhaustedError
from .exact_arith import (
    Bracket,
    Code,
    Ordering,
    Tail,
    compare_bracket_values,
    compare_brackets,
    eval_pi,
    refine,
    separate_brackets,
    solve_lambda,
)
from .lambda_set import BasicInterval, interval_for_prefix

#: Refinement rounds granted to each certified inequality before giving up.
#: Deep subsystems need brackets far tighter than the solve tolerance (hull
#: gaps shrink like lam^(2 n_j)), and each refinement step only shrinks a
#: bracket by a constant factor.
CERTIFY_BUDGET = 512


@dataclass(frozen=True)
class EkSystem:
    """The k-th thick Cantor subsystem of the parameter set of x.

    Its hull is the basic interval whose defining digits are the greedy
    prefix up to the j-th defect, with the defect digit raised to b.
    """

    x: Q
    m: int
    k: int
    j: int
    b: int
    n_j: int
    prefix: tuple[int, ...]
    hull: BasicInterval


@dataclass(frozen=True)
class ThicknessReport:
    """Certified thickness summary of one subsystem at a finite depth.

    tau_empirical is the minimum over computed levels, an over-estimate of
    the true infimum; the analytic fields are genuine lower bounds derived
    from the endpoint equations.  All rational fields are conservative
    interval endpoints.
    """

    k: int
    depth: int
    per_level_min: tuple[tuple[int, Q], ...]
    tau_empirical: Q
    tau_analytic_lower: Optional[Q]
    newhouse_lower: Optional[Q]
    dim_lower: float


@dataclass(frozen=True)
class ThetaEntry:
    """Certified ratio data for one consecutive pair of subsystem hulls."""

    k: int
    theta_lo: Q
    theta_hi: Q
    size_ratio_lo: Q  # |hull(k+1)| / |hull(k)|
    size_ratio_hi: Q


@dataclass(frozen=True)
class EndpointWitness:
    k: int
    word: tuple[int, ...]
    side: str
    bracket: Bracket


@dataclass(frozen=True)
class InterleavePair:
    """Two subsystems, one per point, certified to interleave.

    The witnesses are basic-interval endpoints (genuine Cantor-set points)
    shown by bracket comparison to lie inside the other hull.
    """

    i: int
    j: int
    witness_x_in_y: EndpointWitness
    witness_y_in_x: EndpointWitness
    tau_min: Q
    meets_threshold: bool


@dataclass(frozen=True)
class IntersectionReport:
    i: int
    j: int
    tau_min: Q
    threshold_met: bool
    dim_lower: Optional[float]
    quality: str


# ---------------------------------------------------------------------------
# subsystem construction


@functools.lru_cache(maxsize=1024)
def _ek_hulls_cached(x, m: int, count: int, tol) -> tuple[EkSystem, ...]:
    ge = GreedyExpansion(x, m)
    out: list[EkSystem] = []
    j = 0
    while len(out) < count:
        j += 1
        n_j = ge.defect_index(j)
        head = ge.prefix(n_j - 1)
        for b in range(m - 1, ge.digit(n_j), -1):
            prefix = head + (b,)
            hull = interval_for_prefix(x, m, prefix, tol, allow_capped=False)
            out.append(
                EkSystem(x=x, m=m, k=len(out) + 1, j=j, b=b, n_j=n_j, prefix=prefix, hull=hull)
            )
            if len(out) == count:
                break
    for left, right in zip(out, out[1:]):
        if compare_brackets(left.hull.right, right.hull.left) is not Ordering.LESS:
            raise PrecisionExhaustedError(
                "hull ordering of subsystems %d and %d not certified" % (left.k, right.k)
            )
    return tuple(out)


def ek_hulls(x, m: int, count: int, tol=None) -> list[EkSystem]:
    """The first `count` subsystems, in certified increasing hull order."""
    x = to_rational(x)
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    if count < 1:
        return []
    tol = None if tol is None else to_rational(tol)
    return list(_ek_hulls_cached(x, m, count, tol))


def ek_system(x, m: int, k: int, tol=None) -> EkSystem:
    return ek_hulls(x, m, k, tol)[k - 1]


def ek_basic_interval(system: EkSystem, word, tol=None) -> BasicInterval:
    """Depth-|word| basic interval of the subsystem (its hull for the empty word)."""
    word = tuple(int(d) for d in word)
    for d in word:
        if not 0 <= d <= system.m - 1:
            raise DomainError("digit %r outside 0..%d" % (d, system.m - 1))
    iv = interval_for_prefix(system.x, system.m, system.prefix + word, tol, allow_capped=False)
    return BasicInterval(word, iv.left, iv.right)


# ---------------------------------------------------------------------------
# certified widths and ratios


def _widen_until_positive(iv: BasicInterval, budget: int = CERTIFY_BUDGET) -> BasicInterval:
    left, right = iv.left, iv.right
    for _ in range(budget):
        if right.lo > left.hi:
            return BasicInterval(iv.word, left, right)
        left, right = refine(left), refine(right)
    raise PrecisionExhaustedError("could not certify positive width of %s" % (iv.word,))


def _gap_brackets(left: BasicInterval, right: BasicInterval) -> tuple[Bracket, Bracket]:
    return separate_brackets(left.right, right.left)


def _ratio_bounds(num_lo, num_hi, den_lo, den_hi) -> tuple[Q, Q]:
    # positive denominators guaranteed by the callers' separation step
    return num_lo / den_hi, num_hi / den_lo


def _sibling_pairs(m: int, n: int):
    """(w_plus, w) word pairs at level n: same parent, last digits d+1 / d."""
    for head in itertools.product(range(m), repeat=n - 1):
        for d in range(m - 2, -1, -1):
            yield head + (d + 1,), head + (d,)


@functools.lru_cache(maxsize=4096)
def _tau_report_cached(system: EkSystem, depth: int, tol) -> ThicknessReport:
    ge = GreedyExpansion(system.x, system.m)
    ell = ge.first_nonzero
    m = system.m
    per_level: list[tuple[int, Q]] = []
    analytic: Optional[Q] = None
    tau: Optional[Q] = None
    applicable = system.n_j > ell
    for n in range(1, depth + 1):
        level_min: Optional[Q] = None
        for w_plus, w in _sibling_pairs(m, n):
            left = _widen_until_positive(ek_basic_interval(system, w_plus, tol))
            right = _widen_until_positive(ek_basic_interval(system, w, tol))
            gap_l, gap_r = _gap_brackets(left, right)
            gap_lo, gap_hi = gap_r.lo - gap_l.hi, gap_r.hi - gap_l.lo
            r1 = _ratio_bounds(left.width_lo, left.width_hi, gap_lo, gap_hi)
            r2 = _ratio_bounds(right.width_lo, right.width_hi, gap_lo, gap_hi)
            pair_lo = min(r1[0], r2[0])
            level_min = pair_lo if level_min is None else min(level_min, pair_lo)
            if applicable:
                lam1, lam2 = left.left, gap_l
                lam3, lam4 = gap_r, right.right
                b1 = (1 - lam1.hi) * (1 - lam3.hi) * lam2.lo**ell / (m * lam3.hi ** (system.n_j - ell))
                b2 = (1 - lam3.hi) ** 2 * lam4.lo**ell / (m * lam3.hi ** (system.n_j - ell))
                pair_analytic = min(b1, b2)
                analytic = pair_analytic if analytic is None else min(analytic, pair_analytic)
        per_level.append((n, level_min))
        tau = level_min if tau is None else min(tau, level_min)
    newhouse = None
    if applicable:
        p_lo = system.hull.left.lo
        q_hi = system.hull.right.hi
        newhouse = (1 - q_hi) ** 2 * p_lo**ell / (m * q_hi ** (system.n_j - ell))
    dim = dim_lower_from_tau(float(tau))
    return ThicknessReport(
        k=system.k,
        depth=depth,
        per_level_min=tuple(per_level),
        tau_empirical=tau,
        tau_analytic_lower=analytic,
        newhouse_lower=newhouse,
        dim_lower=dim,
    )


def tau_estimate(x, m: int, k: int, depth: int = 3, tol=None) -> ThicknessReport:
    """Finite-depth thickness report for the k-th subsystem of x."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    system = ek_system(x, m, k, tol)
    return _tau_report_cached(system, depth, None if tol is None else to_rational(tol))


def dim_lower_from_tau(tau: float) -> float:
    """Dimension lower bound log 2 / log(2 + 1/tau) of a set of thickness tau."""
    if tau <= 0:
        raise DomainError("thickness must be positive")
    return math.log(2) / math.log(2 + 1 / tau)


def theta_sequence(x, m: int, count: int, tol=None) -> list[ThetaEntry]:
    """Certified hull/gap ratios for consecutive subsystems, k = 1..count-1."""
    if count < 2:
        raise DomainError("count must be >= 2")
    systems = ek_hulls(x, m, count, tol)
    out = []
    for a, b in zip(systems, systems[1:]):
        ia = _widen_until_positive(a.hull)
        ib = _widen_until_positive(b.hull)
        gap_l, gap_r = _gap_brackets(ia, ib)
        gap_lo, gap_hi = gap_r.lo - gap_l.hi, gap_r.hi - gap_l.lo
        r1 = _ratio_bounds(ia.width_lo, ia.width_hi, gap_lo, gap_hi)
        r2 = _ratio_bounds(ib.width_lo, ib.width_hi, gap_lo, gap_hi)
        size = _ratio_bounds(ib.width_lo, ib.width_hi, ia.width_lo, ia.width_hi)
        out.append(
            ThetaEntry(
                k=a.k,
                theta_lo=min(r1[0], r2[0]),
                theta_hi=min(r1[1], r2[1]),
                size_ratio_lo=size[0],
                size_ratio_hi=size[1],
            )
        )
    return out


def size_ratio_bound(m: int, first_nonzero: int) -> Q:
    """Eventual bound (2m)^(l+1)/(m-1) on consecutive hull size ratios."""
    return Q((2 * m) ** (first_nonzero + 1), m - 1)


# ---------------------------------------------------------------------------
# certified inequality suite


def _defining_prefix_length(iv: BasicInterval) -> int:
    # The common defining prefix of the two endpoint codes: its last digit
    # always survives canonicalization on one side, so the length is the
    # larger of the two canonical prefix lengths.
    return max(len(iv.left.code.canonical().prefix), len(iv.right.code.canonical().prefix))


def certify_interval_width_bound(iv: BasicInterval, budget: int = CERTIFY_BUDGET) -> bool:
    """Certify width >= (1 - p) q^(L+1) for a basic interval [p, q] whose
    defining codes have an L-digit prefix.

    Equality holds exactly when the prefix is all (m-1): then p is the hull
    minimum and the bound is an identity of the endpoint equations, so that
    case is certified symbolically.
    """
    left, right = iv.left, iv.right
    if left.code.canonical() == Code(left.m, (), Tail.MAX):
        return True
    L = _defining_prefix_length(iv)
    for _ in range(budget):
        lhs_lo = right.lo - left.hi
        rhs_hi = (1 - left.lo) * right.hi ** (L + 1)
        if lhs_lo >= rhs_hi:
            return True
        left, right = refine(left), refine(right)
    return False


def certify_gap_width_bound(
    left_iv: BasicInterval,
    right_iv: BasicInterval,
    nj_right: int,
    first_nonzero: int,
    budget: int = CERTIFY_BUDGET,
) -> bool:
    """Certify gap <= q^(L-l+1) * m * p^(nj-l) / (1-p) for the gap between
    two adjacent basic intervals (q = left right endpoint, p = right left
    endpoint, L = left prefix length, nj = defect position of the right
    interval's subsystem, l = first nonzero greedy position of x).

    Requires nj > l, the hypothesis under which the estimate is derived.
    """
    ell = first_nonzero
    if nj_right <= ell:
        raise DomainError("gap bound requires the defect position to exceed %d" % ell)
    m = right_iv.left.m
    L = _defining_prefix_length(left_iv)
    q_br, p_br = left_iv.right, right_iv.left
    for _ in range(budget):
        lhs_hi = p_br.hi - q_br.lo
        rhs_lo = q_br.lo ** (L - ell + 1) * m * p_br.lo ** (nj_right - ell) / (1 - p_br.lo)
        if lhs_hi <= rhs_lo:
            return True
        q_br, p_br = refine(q_br), refine(p_br)
    return False


def certify_expansion_separation(
    endpoints: list[Bracket], x, m: int, budget: int = CERTIFY_BUDGET
) -> bool:
    """Certify the bi-Lipschitz lower bound on coding separation.

    For every pair of sampled endpoints lam1 < lam2 <= q (q a rational
    upper bound of the sample, below 1/m), the codings evaluated at q stay
    at least ((1-mq)x / ((m-1)q)) * (lam2 - lam1) apart, strictly.
    """
    x = to_rational(x)
    eps = []
    codes = set()
    for e in endpoints:
        canon = e.code.canonical()
        if canon in codes:
            continue
        codes.add(canon)
        for _ in range(budget):
            if e.hi * m < 1:
                break
            e = refine(e)
        else:
            return False
        eps.append(e)
    eps.sort(key=lambda e: (e.lo, e.hi))
    q = max(e.hi for e in eps)
    c = (1 - m * q) * x / ((m - 1) * q)
    values = [eval_pi(e.code, q) for e in eps]  # independent of refinement
    for (ia, a), (ib, b) in itertools.combinations(enumerate(eps), 2):
        lhs = abs(values[ia] - values[ib])
        for _ in range(budget):
            if lhs > c * (b.hi - a.lo):
                break
            a, b = refine(a), refine(b)
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# interleaving and intersections


def meets_thickness_threshold(tau: Q) -> bool:
    """Strict test tau > 1 + sqrt(2), decided in exact arithmetic."""
    return tau > 1 and (tau - 1) ** 2 > 2


def _certified_inside(
    e: Bracket, hull: BasicInterval, same_point: bool, budget: int = 128
) -> bool:
    """Certify hull.left <= e <= hull.right by bracket comparison.

    For endpoints of the same parameter set, code identity decides the
    closed-endpoint cases; across different points only strict separation
    certifies, and unresolved candidates are simply skipped by the caller.
    """
    try:
        if same_point:
            lo = compare_brackets(e, hull.left, budget)
            if lo is Ordering.LESS:
                return False
            hi = compare_brackets(e, hull.right, budget)
            return hi in (Ordering.LESS, Ordering.EQUAL)
        lo = compare_bracket_values(e, hull.left, budget)
        if lo is not Ordering.GREATER:
            return False
        hi = compare_bracket_values(e, hull.right, budget)
        return hi is Ordering.LESS
    except PrecisionExhaustedError:
        return False


def _witness_inside(
    sys_a: EkSystem, sys_b: EkSystem, depth: int, tol, same_point: bool
) -> Optional[EndpointWitness]:
    for word in sorted(itertools.product(range(sys_a.m), repeat=depth), reverse=True):
        iv = ek_basic_interval(sys_a, word, tol)
        for side, e in (("left", iv.left), ("right", iv.right)):
            if _certified_inside(e, sys_b.hull, same_point):
                return EndpointWitness(k=sys_a.k, word=word, side=side, bracket=e)
    return None


def _hulls_certified_disjoint(a: EkSystem, b: EkSystem, budget: int = 24) -> bool:
    try:
        if compare_bracket_values(a.hull.right, b.hull.left, budget) is Ordering.LESS:
            return True
    except PrecisionExhaustedError:
        pass
    try:
        if compare_bracket_values(b.hull.right, a.hull.left, budget) is Ordering.LESS:
            return True
    except PrecisionExhaustedError:
        pass
    return False


def find_interleaved_pairs(
    x, y, m: int, kmax: int, depth: int = 6, tol=None
) -> list[InterleavePair]:
    """All (i, j) pairs of subsystems of x and y certified interleaved.

    A pair is certified by exhibiting a depth-`depth` basic-interval
    endpoint of each subsystem inside the convex hull of the other; an
    empty result at small kmax is a valid outcome.
    """
    x, y = to_rational(x), to_rational(y)
    if kmax < 1:
        return []
    systems_x = ek_hulls(x, m, kmax, tol)
    systems_y = ek_hulls(y, m, kmax, tol)
    same = x == y
    pairs = []
    for sx in systems_x:
        for sy in systems_y:
            if same and sx.k == sy.k:
                witness_x = EndpointWitness(sx.k, (), "left", sx.hull.left)
                witness_y = EndpointWitness(sy.k, (), "left", sy.hull.left)
            else:
                if _hulls_certified_disjoint(sx, sy):
                    continue
                witness_x = _witness_inside(sx, sy, depth, tol, same)
                witness_y = _witness_inside(sy, sx, depth, tol, same)
                if witness_x is None or witness_y is None:
                    continue
            tau_x = _tau_report_cached(sx, depth, None if tol is None else to_rational(tol))
            tau_y = _tau_report_cached(sy, depth, None if tol is None else to_rational(tol))
            tau_min = min(tau_x.tau_empirical, tau_y.tau_empirical)
            pairs.append(
                InterleavePair(
                    i=sx.k,
                    j=sy.k,
                    witness_x_in_y=witness_x,
                    witness_y_in_x=witness_y,
                    tau_min=tau_min,
                    meets_threshold=meets_thickness_threshold(tau_min),
                )
            )
    pairs.sort(key=lambda p: (p.i, p.j))
    return pairs


def reverify_pair(pair: InterleavePair, x, y, m: int, tol) -> bool:
    """Re-run an interleave certificate from freshly solved brackets.

    Both witnesses and both hulls are re-bracketed at the given tolerance
    (a different tolerance routes around every cached bracket), so the
    containments are certified along an independent refinement path.
    """
    x, y = to_rational(x), to_rational(y)
    tol = to_rational(tol)
    same = x == y
    sx = ek_system(x, m, pair.i, tol)
    sy = ek_system(y, m, pair.j, tol)
    fresh_x = solve_lambda(x, pair.witness_x_in_y.bracket.code, tol)
    fresh_y = solve_lambda(y, pair.witness_y_in_x.bracket.code, tol)
    return _certified_inside(fresh_x, sy.hull, same) and _certified_inside(
        fresh_y, sx.hull, same
    )


def intersection_report(pair: InterleavePair) -> IntersectionReport:
    """Dimension consequence of one interleaved pair.

    Above the 1+sqrt(2) threshold the intersection contains a Cantor set of
    thickness on the order of sqrt(tau_min); the reported dimension bound
    applies the thickness-dimension inequality to that value and is flagged
    as order-of, not certified, because the underlying constant is
    qualitative.
    """
    if not pair.meets_threshold:
        return IntersectionReport(pair.i, pair.j, pair.tau_min, False, None, "order-of")
    dim = dim_lower_from_tau(math.sqrt(float(pair.tau_min)))
    return IntersectionReport(pair.i, pair.j, pair.tau_min, True, dim, "order-of")
