"""Scalar power weights a |x|^gamma on the line.

Exponents are exact rationals (stdlib Fraction); interval averages use
closed forms, with log1p/expm1 forms on origin-free intervals so narrow
far-from-zero intervals do not lose precision to cancellation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .search import (Interval, SupSearchConfig, SupSearchResult,
                     default_interval_config, run_interval_search)

__all__ = [
    "Interval",
    "ScalarPowerWeight",
    "NotIntegrableError",
    "NotA2Error",
    "parse_rational",
    "format_rational",
    "integral_abs_pow",
    "average_abs_pow",
    "scalar_is_a2",
    "scalar_closed_form_constant",
    "scalar_product",
    "scalar_a2_constant_estimate",
]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class NotIntegrableError(ArithmeticError):
    """Requested average does not exist as a finite integral."""


class NotA2Error(ValueError):
    """Weight fails its A2 characterization, so the operation is undefined."""


def parse_rational(value) -> Fraction:
    """Parse an exact rational from an int or a 'p/q' string.

    Floats and decimal/scientific strings are rejected: exponent arithmetic
    in this package is exact and a float literal would silently break that.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ValueError(f"not an exact rational: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ValueError(f"zero denominator in rational: {value!r}")
        return Fraction(num, den)
    raise ValueError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ScalarPowerWeight:
    """w(x) = coeff * |x|^exponent with coeff > 0."""

    coeff: float
    exponent: Fraction

    def __post_init__(self):
        if not (math.isfinite(self.coeff) and self.coeff > 0):
            raise ValueError("coefficient must be a positive finite number")
        object.__setattr__(self, "exponent", Fraction(self.exponent))

    def inverse(self) -> "ScalarPowerWeight":
        return ScalarPowerWeight(1.0 / self.coeff, -self.exponent)


def _integral_positive_side(g: float, lo: float, hi: float, minus_one: bool) -> float:
    """Integral of x^g over [lo, hi] with 0 <= lo < hi."""
    if lo == 0.0:
        if minus_one or g <= -1.0:
            raise NotIntegrableError(f"|x|^{g} is not integrable at 0")
        return hi ** (g + 1.0) / (g + 1.0)
    if minus_one:
        return math.log1p((hi - lo) / lo)
    return lo ** (g + 1.0) * math.expm1((g + 1.0) * math.log1p((hi - lo) / lo)) / (g + 1.0)


def integral_abs_pow(gamma, iv: Interval) -> float:
    """Closed-form integral of |x|^gamma over iv.

    Splits at 0 when the interval straddles it; gamma <= -1 with 0 in the
    closed interval raises NotIntegrableError.
    """
    g = float(gamma)
    minus_one = Fraction(gamma) == -1 if isinstance(gamma, (Fraction, int)) else g == -1.0
    a, b = iv.a, iv.b
    if a >= 0.0:
        return _integral_positive_side(g, a, b, minus_one)
    if b <= 0.0:
        return _integral_positive_side(g, -b, -a, minus_one)
    if minus_one or g <= -1.0:
        raise NotIntegrableError(f"|x|^{g} is not integrable across 0")
    return (-a) ** (g + 1.0) / (g + 1.0) + b ** (g + 1.0) / (g + 1.0)


def average_abs_pow(gamma, iv: Interval) -> float:
    return integral_abs_pow(gamma, iv) / iv.length


def scalar_is_a2(gamma) -> bool:
    """Exact test: |x|^gamma is an A2 weight iff -1 < gamma < 1."""
    g = Fraction(gamma)
    return Fraction(-1) < g < Fraction(1)


def scalar_closed_form_constant(gamma) -> float:
    """sup over anchored/symmetric/origin-free intervals of <|x|^g><|x|^-g>.

    Equals 1/(1 - g^2); attained by intervals with one endpoint at 0 (and
    by symmetric ones). Not a bound over arbitrary intervals: asymmetric
    straddling intervals exceed it, which is exactly why the sup search
    restricts its family.
    """
    g = Fraction(gamma)
    if not scalar_is_a2(g):
        raise NotA2Error(f"|x|^{format_rational(g)} is not A2")
    return 1.0 / float((1 - g) * (1 + g))


def scalar_product(w: ScalarPowerWeight, iv: Interval) -> float:
    """<w>_I <w^-1>_I for one interval."""
    aw = w.coeff * average_abs_pow(w.exponent, iv)
    ai = average_abs_pow(-w.exponent, iv) / w.coeff
    return aw * ai


def scalar_a2_constant_estimate(w: ScalarPowerWeight,
                                config: SupSearchConfig | None = None) -> SupSearchResult:
    """Lower-bound estimate of the A2 characteristic of a scalar power weight.

    Requires the weight to be A2; returns the searched supremum of
    scalar_product together with the argmax interval.
    """
    if not scalar_is_a2(w.exponent):
        raise NotA2Error(
            f"exponent {format_rational(w.exponent)} outside (-1, 1)")
    cfg = config if config is not None else default_interval_config()
    return run_interval_search(lambda iv: scalar_product(w, iv), cfg,
                               functional="scalar_product")
