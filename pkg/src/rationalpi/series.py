"""The rational alternating series family and its certified evaluator.

Every series here has the shape::

    (prefactor_num / prefactor_den) * sum_{k>=0} (-1)^k q^k / (offset + step*k)

with ratio ``q = 1/q_den``.  Three such series, tagged SATURN, JUPITER and
MARS, assemble the arctangent integral split handled in
:mod:`rationalpi.formulas`: their prefactors are ``x/4``, ``x^2/8`` and
``x^3/4`` with denominator progressions ``4k+1``, ``2k+1`` and ``4k+3``,
and the shared ratio is ``q = x^4/4``.  For the three supported arguments
x = 1, 1/2, 1/4 that ratio is 1/4, 1/64 and 1/1024, so consecutive terms
shrink by at least those factors and the first omitted term bounds the
truncation error.

Evaluation is forward summation with a running power: each new power is one
exact small division by ``q_den``, each term one more division by the
denominator progression.  Term counts are fixed up front by
:func:`terms_needed` against the full working scale, which pushes the
series remainder below one working ulp and keeps the error certificate
independent of runtime behavior.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .fixedpoint import (
    ErrorLedger,
    FixedPoint,
    InsufficientPrecisionError,
    PrecisionContext,
    fx_add,
    fx_div_small,
    fx_mul_small,
    guaranteed_digit_count,
)

__all__ = [
    "Component",
    "CaseId",
    "CaseParams",
    "SeriesSpec",
    "EvalResult",
    "CASES",
    "series_for_case",
    "terms_needed",
    "eval_series",
    "consecutive_term_ratio",
    "context_for",
]


class Component(enum.Enum):
    """The three component series of one arctangent assembly."""

    SATURN = "saturn"
    JUPITER = "jupiter"
    MARS = "mars"


class CaseId(enum.Enum):
    """Supported series arguments x."""

    X1 = "1"
    X_HALF = "1/2"
    X_QUARTER = "1/4"


@dataclass(frozen=True)
class SeriesSpec:
    """One alternating series; immutable and validated on construction."""

    prefactor_num: int
    prefactor_den: int
    offset: int
    step: int
    q_den: int

    def __post_init__(self):
        if self.prefactor_num < 1 or self.prefactor_den < 1:
            raise ValueError("prefactor must be a positive rational")
        if self.offset < 1 or self.step < 1:
            raise ValueError("offset and step must be at least 1")
        if self.q_den < 2:
            raise ValueError("q_den must be at least 2 for strict convergence")

    @property
    def prefactor(self) -> Fraction:
        return Fraction(self.prefactor_num, self.prefactor_den)

    def denominator(self, k: int) -> int:
        """Denominator of the k-th term, ``offset + step*k``."""
        return self.offset + self.step * k

    def term_magnitude(self, k: int) -> Fraction:
        """Exact magnitude of the k-th term."""
        return self.prefactor / (self.q_den**k * self.denominator(k))


@dataclass(frozen=True)
class CaseParams:
    """One supported argument x with its ratio denominator and target."""

    case_id: CaseId
    x_num: int
    x_den: int
    q_den: int
    target_description: str

    def __post_init__(self):
        # q = x^4/4 exactly
        if self.q_den * self.x_num**4 != 4 * self.x_den**4:
            raise ValueError("q_den inconsistent with x^4/4")


CASES: dict[CaseId, CaseParams] = {
    CaseId.X1: CaseParams(CaseId.X1, 1, 1, 4, "arctan(1)"),
    CaseId.X_HALF: CaseParams(CaseId.X_HALF, 1, 2, 64, "arctan(1/3)"),
    CaseId.X_QUARTER: CaseParams(CaseId.X_QUARTER, 1, 4, 1024, "arctan(1/7)"),
}

# prefactor as a function of x, and the denominator progression (offset, step)
_COMPONENT_SHAPE = {
    Component.SATURN: (lambda x: x / 4, 1, 4),
    Component.JUPITER: (lambda x: x * x / 8, 1, 2),
    Component.MARS: (lambda x: x**3 / 4, 3, 4),
}


def series_for_case(case: CaseParams, component: Component) -> SeriesSpec:
    """Instantiate one component series for one argument.

    SATURN: prefactor x/4, denominators 1, 5, 9, 13, ...
    JUPITER: prefactor x^2/8, denominators 1, 3, 5, 7, ...
    MARS: prefactor x^3/4, denominators 3, 7, 11, 15, ...
    """
    prefactor_of, offset, step = _COMPONENT_SHAPE[component]
    pref = prefactor_of(Fraction(case.x_num, case.x_den))
    return SeriesSpec(pref.numerator, pref.denominator, offset, step, case.q_den)


@dataclass(frozen=True)
class EvalResult:
    """A certified evaluation: value, cost and error budget.

    ``error_ulps`` covers the arithmetic ledger and the series remainder
    together; ``component_terms`` lists per-series term counts when the
    result combines several series.
    """

    value: FixedPoint
    terms_used: int
    error_ulps: int
    guaranteed_digits: int
    component_terms: tuple[int, ...] = ()


def terms_needed(spec: SeriesSpec, target_digits: int) -> int:
    """Smallest N whose first omitted term is below ``10**-target_digits``.

    Decided by the exact integer inequality
    ``prefactor_num * 10^t < prefactor_den * q_den^N * (offset + step*N)``;
    a float logarithm only seeds the search, so the result is exactly
    minimal and never an underestimate.
    """
    if target_digits < 1:
        raise ValueError("target_digits must be positive")

    threshold = spec.prefactor_num * 10**target_digits

    def small_enough(n: int) -> bool:
        return threshold < spec.prefactor_den * spec.q_den**n * spec.denominator(n)

    seed = (
        target_digits + math.log10(spec.prefactor_num) - math.log10(spec.prefactor_den)
    ) / math.log10(spec.q_den)
    n = max(0, int(seed) - 2)
    while not small_enough(n):
        n += 1
    while n > 0 and small_enough(n - 1):
        n -= 1
    return n


def eval_series(spec: SeriesSpec, ctx: PrecisionContext) -> EvalResult:
    """Evaluate the series at the context's working scale.

    The running power starts from one division by the prefactor denominator
    and shrinks by one division by ``q_den`` per term; every division
    charges one ulp.  Because the term count is minimal for the working
    scale, the stored power stays nonzero through the loop: at the last
    term the true power is at least ``offset + step*(N-1)`` ulps while
    cumulative truncation loss is below N.
    """
    scale = ctx.scale
    planned = max(1, terms_needed(spec, scale))
    ledger = ErrorLedger()

    power = fx_div_small(
        FixedPoint.from_int(spec.prefactor_num, scale), spec.prefactor_den, ledger
    )
    total = FixedPoint.from_int(0, scale)
    sign = 1
    for k in range(planned):
        if k:
            power = fx_div_small(power, spec.q_den, ledger)
        term = fx_div_small(power, spec.denominator(k), ledger)
        total = fx_add(total, fx_mul_small(term, sign))
        sign = -sign
    terms_used = planned

    # remainder after the planned terms is below one working ulp
    error_ulps = ledger.ulps + 1
    guaranteed = guaranteed_digit_count(scale, error_ulps)
    if guaranteed < ctx.target_digits:
        raise InsufficientPrecisionError(ctx.target_digits, guaranteed)
    return EvalResult(
        value=total,
        terms_used=terms_used,
        error_ulps=error_ulps,
        guaranteed_digits=guaranteed,
        component_terms=(terms_used,),
    )


def consecutive_term_ratio(spec: SeriesSpec, k: int) -> Fraction:
    """Exact ``|term_{k+1}| / |term_k|``; always below ``1/q_den``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return Fraction(spec.denominator(k), spec.q_den * spec.denominator(k + 1))


def context_for(specs: Iterable[SeriesSpec], target_digits: int) -> PrecisionContext:
    """Precision context sized for evaluating the given series jointly.

    The operation count is estimated at a generous probe precision so the
    guard-digit rule is applied to an overestimate, never an undercount.
    """
    probe = target_digits + 30
    ops = sum(2 * (terms_needed(spec, probe) + 2) for spec in specs)
    return PrecisionContext.for_op_count(target_digits, ops)
