"""Exact rational scalars and q-shifted factorials.

Scalars are :class:`fractions.Fraction` values, which are always kept in
lowest terms with a positive denominator.  Nothing in this package ever
touches a float.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidBase, PoleEncountered

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def rational(value) -> Fraction:
    """Coerce ``value`` (int, Fraction or "p/q" string) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optional leading minus) into a Fraction.

    Decimal and exponent notation are rejected; so is a zero denominator.
    """
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def qpow(q: Fraction, e: int) -> Fraction:
    if e < 0 and q == 0:
        raise InvalidBase(f"0 raised to negative power {e}")
    return Fraction(q) ** e


def qpoch(alpha: Fraction, q: Fraction, n: int) -> Fraction:
    """Return the q-shifted factorial (alpha; q)_n for any integer n.

    For n >= 0 this is prod_{k=0}^{n-1} (1 - alpha q^k).  For n < 0 it is
    1 / prod_{k=1}^{-n} (1 - alpha q^{-k}), the extension compatible with
    (alpha; q)_n = (alpha; q)_inf / (alpha q^n; q)_inf.
    """
    if n >= 0:
        result = Fraction(1)
        term = Fraction(alpha)
        for _ in range(n):
            result *= 1 - term
            term *= q
        return result
    if q == 0:
        raise InvalidBase("(alpha; 0)_n is undefined for n < 0")
    qinv = 1 / Fraction(q)
    denom = Fraction(1)
    term = alpha * qinv
    for k in range(1, -n + 1):
        factor = 1 - term
        if factor == 0:
            raise PoleEncountered(
                f"({format_rational(alpha)}; {format_rational(q)})_{n}: "
                f"factor 1 - alpha q^-{k} vanishes"
            )
        denom *= factor
        term *= qinv
    return 1 / denom


def qpoch_inv(alpha: Fraction, q: Fraction, n: int, label: str = "") -> Fraction:
    """Return 1 / (alpha; q)_n, raising PoleEncountered if it vanishes."""
    value = qpoch(alpha, q, n)
    if value == 0:
        what = label or f"({format_rational(alpha)}; {format_rational(q)})_{n}"
        raise PoleEncountered(f"{what} vanishes")
    return 1 / value
