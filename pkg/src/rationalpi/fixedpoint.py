"""Exact decimal fixed-point arithmetic with worst-case error accounting.

A value is ``sign * magnitude * 10**(-scale)`` where the magnitude is an
arbitrary-size non-negative integer and the scale counts decimal fractional
digits.  Addition and multiplication by a small integer are exact.  Division
by a small positive integer truncates toward zero and charges one unit in
the last place (ulp) to an :class:`ErrorLedger`; the ledger total is a sound
upper bound on ``|stored - true|``, which is what lets
:func:`fx_to_decimal_string` certify every digit it emits.

All operands of one computation share a single scale, fixed up front by a
:class:`PrecisionContext`.  Mixing scales raises instead of rescaling, so
there is no hidden rounding anywhere in the layer.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FixedPoint",
    "ErrorLedger",
    "PrecisionContext",
    "ScaleMismatchError",
    "InsufficientPrecisionError",
    "BoundaryStraddleError",
    "fx_add",
    "fx_mul_small",
    "fx_div_small",
    "fx_to_decimal_string",
    "guaranteed_digit_count",
]


class ScaleMismatchError(ValueError):
    """Operands of a single operation carry different scales."""


class InsufficientPrecisionError(ValueError):
    """More digits were requested than the error ledger can certify."""

    def __init__(self, requested: int, guaranteed: int):
        self.requested = requested
        self.guaranteed = guaranteed
        super().__init__(
            f"cannot certify {requested} digits; only {guaranteed} are guaranteed "
            f"at the current scale and error level"
        )


class BoundaryStraddleError(ArithmeticError):
    """The certified interval spans a digit boundary (e.g. 0.4999/0.5000),
    so no digit prefix of the requested length can be emitted honestly."""


@dataclass(frozen=True)
class FixedPoint:
    """Immutable scaled integer: ``sign * magnitude * 10**(-scale)``.

    Zero is canonical: sign 0 and magnitude 0 together.
    """

    sign: int
    magnitude: int
    scale: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.magnitude < 0:
            raise ValueError("magnitude must be non-negative")
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if (self.magnitude == 0) != (self.sign == 0):
            raise ValueError("zero must have sign 0 and magnitude 0, exactly")

    @classmethod
    def from_int(cls, n: int, scale: int) -> "FixedPoint":
        """The integer ``n`` represented exactly at the given scale."""
        return cls.from_scaled(n * 10**scale, scale)

    @classmethod
    def from_scaled(cls, units: int, scale: int) -> "FixedPoint":
        """Build from a signed count of ulps (``units * 10**-scale``)."""
        if units > 0:
            return cls(1, units, scale)
        if units < 0:
            return cls(-1, -units, scale)
        return cls(0, 0, scale)

    @property
    def signed_units(self) -> int:
        return self.sign * self.magnitude

    def is_zero(self) -> bool:
        return self.sign == 0

    def as_fraction(self) -> Fraction:
        """Exact rational value of the stored number."""
        return Fraction(self.signed_units, 10**self.scale)


class ErrorLedger:
    """Accumulated worst-case error of one computation, counted in ulps.

    The count is monotone non-decreasing: truncating divisions charge one
    ulp each, and multiplying a tracked value by ``m`` scales whatever error
    it already carries by ``|m|`` (the multiplication itself is exact).
    """

    __slots__ = ("_ulps",)

    def __init__(self, ulps: int = 0):
        if ulps < 0:
            raise ValueError("ulps must be non-negative")
        self._ulps = ulps

    @property
    def ulps(self) -> int:
        return self._ulps

    def charge(self, n: int = 1) -> None:
        """Add ``n`` ulps of worst-case error."""
        if n < 0:
            raise ValueError("cannot remove accumulated error")
        self._ulps += n

    def scale_by(self, m: int) -> None:
        """Account for an exact multiplication of the tracked value by ``m``."""
        if m == 0:
            raise ValueError("scaling the tracked value by zero is not supported")
        self._ulps *= abs(m)

    def __repr__(self):
        return f"ErrorLedger(ulps={self._ulps})"


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision: ``target_digits`` the caller wants certified plus
    ``guard_digits`` that absorb per-operation truncation error.

    Guard sizing rule: at least ``ceil(log10(op_count)) + 10`` for the
    planned number of error-charging operations; :meth:`for_op_count`
    applies it.  Ten is also the hard floor accepted here.
    """

    MIN_GUARD = 10

    target_digits: int
    guard_digits: int

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < self.MIN_GUARD:
            raise ValueError(f"guard_digits must be at least {self.MIN_GUARD}")

    @property
    def scale(self) -> int:
        return self.target_digits + self.guard_digits

    @classmethod
    def for_op_count(cls, target_digits: int, op_count: int) -> "PrecisionContext":
        """Context whose guard covers ``op_count`` one-ulp error charges."""
        guard = _ceil_log10(max(op_count, 1)) + 10
        return cls(target_digits, guard)


def _ceil_log10(n: int) -> int:
    """Smallest k with 10**k >= n, for n >= 1."""
    k, p = 0, 1
    while p < n:
        p *= 10
        k += 1
    return k


def guaranteed_digit_count(scale: int, ulps: int) -> int:
    """Fractional digits certified correct by an error of ``ulps`` at ``scale``.

    One digit is forfeited beyond the error's own decade so that the
    uncertainty never reaches the last certified place.
    """
    return max(0, scale - _ceil_log10(ulps + 1) - 1)


def _ensure_int_str_capacity(magnitude: int) -> None:
    """Lift CPython's int-to-str conversion cap high enough for this value.

    The cap is only ever raised, never lowered, so concurrent emitters
    cannot race each other into a tighter limit.
    """
    try:
        current = sys.get_int_max_str_digits()
    except AttributeError:  # interpreter without the conversion cap
        return
    needed = int(magnitude.bit_length() * 0.30103) + 16
    if needed > current:
        sys.set_int_max_str_digits(needed)


def _require_same_scale(a: FixedPoint, b: FixedPoint) -> None:
    if a.scale != b.scale:
        raise ScaleMismatchError(f"scales differ: {a.scale} vs {b.scale}")


def fx_add(a: FixedPoint, b: FixedPoint) -> FixedPoint:
    """Exact sum; integer addition contributes no error."""
    _require_same_scale(a, b)
    return FixedPoint.from_scaled(a.signed_units + b.signed_units, a.scale)


def fx_mul_small(a: FixedPoint, m: int) -> FixedPoint:
    """Exact product with a small integer; contributes no new error.

    Any error already accumulated against ``a`` scales by ``|m|``; callers
    tracking a ledger across the multiply must call ``ledger.scale_by(m)``.
    """
    return FixedPoint.from_scaled(a.signed_units * m, a.scale)


def fx_div_small(a: FixedPoint, m: int, ledger: ErrorLedger) -> FixedPoint:
    """Divide by a small positive integer, truncating toward zero.

    Charges exactly one ulp to the ledger per call, even for ``m == 1``:
    the flat rule is what keeps the ledger a closed-form upper bound.
    """
    if m == 0:
        raise ZeroDivisionError("division by zero")
    if m < 0:
        raise ValueError("divisor must be positive")
    ledger.charge(1)
    magnitude = a.magnitude // m
    return FixedPoint(a.sign if magnitude else 0, magnitude, a.scale)


def fx_to_decimal_string(a: FixedPoint, ledger: ErrorLedger, want_digits: int) -> str:
    """Decimal expansion truncated to ``want_digits`` fractional digits,
    with every emitted digit certified against the ledger.

    Raises :class:`InsufficientPrecisionError` when the ledger cannot cover
    the request, and :class:`BoundaryStraddleError` when the certified
    interval ``value +- ulps`` does not pin down a unique digit prefix.
    """
    if want_digits < 0:
        raise ValueError("want_digits must be non-negative")
    guaranteed = guaranteed_digit_count(a.scale, ledger.ulps)
    if want_digits > guaranteed:
        raise InsufficientPrecisionError(want_digits, guaranteed)

    units = a.signed_units
    lo, hi = units - ledger.ulps, units + ledger.ulps
    shift = 10 ** (a.scale - want_digits)
    if lo >= 0:
        prefix_lo, prefix_hi = lo // shift, hi // shift
        negative = False
    elif hi <= 0:
        # mirror: truncation of the expansion acts on magnitudes
        prefix_lo, prefix_hi = (-hi) // shift, (-lo) // shift
        negative = True
    else:
        raise BoundaryStraddleError(
            "certified interval spans zero; sign itself is uncertain"
        )
    if prefix_lo != prefix_hi:
        raise BoundaryStraddleError(
            f"certified interval spans a digit boundary at {want_digits} digits"
        )

    _ensure_int_str_capacity(prefix_lo)
    body = str(prefix_lo)
    if want_digits:
        body = body.zfill(want_digits + 1)
        body = f"{body[:-want_digits]}.{body[-want_digits:]}"
    return f"-{body}" if negative else body
