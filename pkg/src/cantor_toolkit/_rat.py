"""Arbitrary-precision rational numbers.

gmpy2.mpq is used when available (roughly an order of magnitude faster on
the bisection workloads this package runs); fractions.Fraction is the
fallback.  Both are exact, always in lowest terms, hashable, and
interoperable, so everything downstream treats ``Q`` as an opaque exact
rational constructor.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as Q

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    HAVE_GMPY2 = False

RationalLike = Union[int, str, Fraction]

ZERO = Q(0)
ONE = Q(1)


def to_rational(value) -> "Q":
    """Coerce ints, 'p/q' strings, Fractions and Q values to Q.

    Floats are rejected: they cannot name the exact rationals this package
    certifies against.
    """
    if isinstance(value, float):
        raise TypeError(
            "refusing float %r: pass an exact rational ('p/q' string, int or Fraction)" % (value,)
        )
    if isinstance(value, (int, Fraction)):
        return Q(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Q(int(num), int(den))
        return Q(int(text))
    if type(value) is type(ZERO):
        return value
    raise TypeError("cannot interpret %r as an exact rational" % (value,))


def rat_str(value) -> str:
    """Render as 'p/q' (denominator kept even when it is 1, for round-tripping)."""
    return "%d/%d" % (value.numerator, value.denominator)


def dec_to_rational(text: str) -> "Q":
    """Parse a plain decimal string like '0.366025' exactly."""
    text = text.strip()
    sign = -1 if text.startswith("-") else 1
    text = text.lstrip("+-")
    whole, _, frac = text.partition(".")
    scale = 10 ** len(frac)
    return sign * Q(int(whole or "0") * scale + int(frac or "0"), scale)


def dec_str(value, digits: int) -> str:
    """Fixed-point decimal rendering with `digits` places.

    Deterministic: floor(value * 10^digits + 1/2) in integer arithmetic,
    so halves round toward +infinity.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    scale = 10**digits
    doubled = 2 * value.numerator * scale
    den = value.denominator
    # floor((value * scale) + 1/2) without leaving integer arithmetic
    scaled = (doubled + den) // (2 * den)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return sign + str(scaled)
    whole, frac = divmod(scaled, scale)
    return "%s%d.%0*d" % (sign, whole, digits, frac)
