"""Arctangent assembly, identity checks, pi formulas and the comparator.

The centerpiece is the weighted sum of the three component series

    arctan(x / (2 - x)) = 2*SATURN + 2*JUPITER + 1*MARS

which :func:`sun` evaluates for the three supported arguments.  Pi is then
assembled along two independent routes through that decomposition (the
``x = 1`` case times four, and ``8*arctan(1/3) + 4*arctan(1/7)``), plus a
cross-check route through the classic Machin pair
``16*arctan(1/5) - 4*arctan(1/239)`` which shares only the fixed-point
layer's mechanics and none of the series parameters.

:func:`compare_convergence` quantifies how many terms each route needs per
digit; a term-capped Leibniz baseline is kept around purely to make the
comparison concrete at small precisions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .fixedpoint import (
    FixedPoint,
    PrecisionContext,
    fx_add,
    fx_mul_small,
    guaranteed_digit_count,
)
from .series import (
    CASES,
    CaseId,
    CaseParams,
    Component,
    EvalResult,
    SeriesSpec,
    context_for,
    eval_series,
    series_for_case,
    terms_needed,
)

__all__ = [
    "PiFormulaId",
    "PiFormula",
    "PI_FORMULAS",
    "IdentityCheck",
    "FactorizationCheck",
    "AgreementCheck",
    "ComparisonRow",
    "TermBudgetError",
    "sun",
    "verify_arctan_identity",
    "verify_factorization",
    "compute_pi",
    "compare_convergence",
    "combined_series_specs",
    "arctan_recip_spec",
    "cross_formula_agreement",
    "context_for_case",
    "context_for_formula",
    "context_for_verify",
    "LEIBNIZ_MAX_DIGITS",
    "DEFAULT_LEIBNIZ_MAX_TERMS",
]


class TermBudgetError(ValueError):
    """A request whose term count is infeasible at desk scale."""


class PiFormulaId(enum.Enum):
    CASE1 = "case1"
    COMBINED = "combined"
    MACHIN_ORACLE = "machin"
    LEIBNIZ_BASELINE = "leibniz"


@dataclass(frozen=True)
class PiFormula:
    """Pi as an integer combination of arctangents of exact rationals."""

    formula_id: PiFormulaId
    terms: tuple[tuple[int, Fraction], ...]


PI_FORMULAS: dict[PiFormulaId, PiFormula] = {
    PiFormulaId.CASE1: PiFormula(PiFormulaId.CASE1, ((4, Fraction(1, 1)),)),
    PiFormulaId.COMBINED: PiFormula(
        PiFormulaId.COMBINED, ((8, Fraction(1, 3)), (4, Fraction(1, 7)))
    ),
    PiFormulaId.MACHIN_ORACLE: PiFormula(
        PiFormulaId.MACHIN_ORACLE, ((16, Fraction(1, 5)), (-4, Fraction(1, 239)))
    ),
    PiFormulaId.LEIBNIZ_BASELINE: PiFormula(
        PiFormulaId.LEIBNIZ_BASELINE, ((4, Fraction(1, 1)),)
    ),
}

# component weights in the arctangent assembly
_SUN_WEIGHTS = ((Component.SATURN, 2), (Component.JUPITER, 2), (Component.MARS, 1))

LEIBNIZ_MAX_DIGITS = 12
DEFAULT_LEIBNIZ_MAX_TERMS = 1_000_000


def _case(case: CaseParams | CaseId) -> CaseParams:
    return CASES[case] if isinstance(case, CaseId) else case


def _weighted_sum(
    parts: list[tuple[int, EvalResult]], scale: int
) -> tuple[FixedPoint, int, int, tuple[int, ...]]:
    """Combine evaluations as sum(weight * result); exact adds and multiplies,
    error bounds scaled by |weight| and summed."""
    total = FixedPoint.from_int(0, scale)
    error_ulps = 0
    terms = 0
    component_terms: list[int] = []
    for weight, result in parts:
        total = fx_add(total, fx_mul_small(result.value, weight))
        error_ulps += abs(weight) * result.error_ulps
        terms += result.terms_used
        component_terms.extend(result.component_terms)
    return total, error_ulps, terms, tuple(component_terms)


def _compose(parts: list[tuple[int, EvalResult]], ctx: PrecisionContext) -> EvalResult:
    value, error_ulps, terms, component_terms = _weighted_sum(parts, ctx.scale)
    return EvalResult(
        value=value,
        terms_used=terms,
        error_ulps=error_ulps,
        guaranteed_digits=guaranteed_digit_count(ctx.scale, error_ulps),
        component_terms=component_terms,
    )


def _sun(
    case: CaseParams,
    ctx: PrecisionContext,
    spec_overrides: dict[Component, SeriesSpec] | None = None,
) -> EvalResult:
    parts = []
    for component, weight in _SUN_WEIGHTS:
        spec = (spec_overrides or {}).get(component) or series_for_case(case, component)
        parts.append((weight, eval_series(spec, ctx)))
    return _compose(parts, ctx)


def sun(case: CaseParams | CaseId, ctx: PrecisionContext) -> EvalResult:
    """Evaluate ``2*SATURN + 2*JUPITER + MARS = arctan(x/(2-x))`` for a case."""
    return _sun(_case(case), ctx)


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of the arctangent identity check, in ulps at ``scale``."""

    passed: bool
    residual_ulps: int
    bound_ulps: int
    scale: int


def verify_arctan_identity(
    ctx: PrecisionContext, *, fault_injection: bool = False
) -> IdentityCheck:
    """Check ``2*arctan(1/3) + arctan(1/7) = arctan(1)`` numerically.

    Passes iff the residual of the three evaluated sides stays within the
    combined error bound.  ``fault_injection`` deliberately doubles one
    series prefactor so self-tests can see the check fail.
    """
    overrides = None
    if fault_injection:
        good = series_for_case(CASES[CaseId.X_HALF], Component.JUPITER)
        overrides = {
            Component.JUPITER: SeriesSpec(
                good.prefactor_num * 2,
                good.prefactor_den,
                good.offset,
                good.step,
                good.q_den,
            )
        }

    one = _sun(CASES[CaseId.X1], ctx)
    half = _sun(CASES[CaseId.X_HALF], ctx, spec_overrides=overrides)
    quarter = _sun(CASES[CaseId.X_QUARTER], ctx)

    residual = fx_add(
        fx_add(fx_mul_small(half.value, 2), quarter.value),
        fx_mul_small(one.value, -1),
    )
    residual_ulps = residual.magnitude
    bound_ulps = 2 * half.error_ulps + quarter.error_ulps + one.error_ulps
    return IdentityCheck(residual_ulps <= bound_ulps, residual_ulps, bound_ulps, ctx.scale)


# the quartic 4 + x^4 and its two integer quadratic factors, low order first
QUARTIC_FACTOR_A = (2, 2, 1)
QUARTIC_FACTOR_B = (2, -2, 1)
QUARTIC_COEFFS = (4, 0, 0, 0, 1)


@dataclass(frozen=True)
class FactorizationCheck:
    passed: bool
    coefficients: tuple[int, ...]


def verify_factorization(
    factor_a: tuple[int, ...] = QUARTIC_FACTOR_A,
    factor_b: tuple[int, ...] = QUARTIC_FACTOR_B,
) -> FactorizationCheck:
    """Expand the two quadratic factors by integer convolution and compare
    against ``4 + x^4``.  Alternate factors may be passed to fault-test."""
    coeffs = [0] * (len(factor_a) + len(factor_b) - 1)
    for i, a in enumerate(factor_a):
        for j, b in enumerate(factor_b):
            coeffs[i + j] += a * b
    result = tuple(coeffs)
    return FactorizationCheck(result == QUARTIC_COEFFS, result)


def arctan_recip_spec(n: int) -> SeriesSpec:
    """``arctan(1/n)`` as the standard odd-denominator alternating series:
    prefactor 1/n, denominators 2k+1, ratio 1/n^2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return SeriesSpec(1, n, 1, 2, n * n)


def combined_series_specs() -> tuple[SeriesSpec, ...]:
    """The six series whose plain sum is pi: the x=1/2 stack scaled by 8 and
    the x=1/4 stack scaled by 4, component weights folded into prefactors."""
    specs = []
    for case_id, multiple in ((CaseId.X_HALF, 8), (CaseId.X_QUARTER, 4)):
        for component, weight in _SUN_WEIGHTS:
            base = series_for_case(CASES[case_id], component)
            pref = base.prefactor * multiple * weight
            specs.append(
                SeriesSpec(pref.numerator, pref.denominator, base.offset, base.step, base.q_den)
            )
    return tuple(specs)


def _eval_leibniz(ctx: PrecisionContext, max_terms: int) -> EvalResult:
    """Term-capped partial sums of ``4*(1 - 1/3 + 1/5 - ...)``.

    A baseline, not a precision tool: with the default cap the value is
    only good to a handful of digits, and the returned certificate says so.
    Each term is one truncating division (same charge rule as
    :func:`rationalpi.fixedpoint.fx_div_small`, done on raw integers here
    because the loop runs a million times).
    """
    if ctx.target_digits > LEIBNIZ_MAX_DIGITS:
        raise TermBudgetError(
            f"refusing Leibniz baseline beyond {LEIBNIZ_MAX_DIGITS} digits: "
            f"the term count grows as 10^digits"
        )
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    scale = ctx.scale
    needed = 2 * 10**scale  # first omitted term 4/(2N+1) below one ulp
    n = min(needed, max_terms)
    four = 4 * 10**scale
    total = 0
    for k in range(n):
        q = four // (2 * k + 1)
        total += -q if k & 1 else q
    remainder_ulps = four // (2 * n + 1) + 1
    error_ulps = n + remainder_ulps
    return EvalResult(
        value=FixedPoint.from_scaled(total, scale),
        terms_used=n,
        error_ulps=error_ulps,
        guaranteed_digits=guaranteed_digit_count(scale, error_ulps),
        component_terms=(n,),
    )


def compute_pi(
    formula: PiFormula | PiFormulaId,
    ctx: PrecisionContext,
    *,
    leibniz_max_terms: int = DEFAULT_LEIBNIZ_MAX_TERMS,
) -> EvalResult:
    """Assemble pi along the requested route.

    CASE1 and COMBINED go through the arctangent decomposition; the Machin
    route uses plain ``arctan(1/n)`` series so agreement between the routes
    is meaningful.  The Leibniz baseline is capped (see
    :data:`LEIBNIZ_MAX_DIGITS`).
    """
    formula_id = formula.formula_id if isinstance(formula, PiFormula) else formula
    if formula_id is PiFormulaId.CASE1:
        return _compose([(4, sun(CaseId.X1, ctx))], ctx)
    if formula_id is PiFormulaId.COMBINED:
        return _compose(
            [(8, sun(CaseId.X_HALF, ctx)), (4, sun(CaseId.X_QUARTER, ctx))], ctx
        )
    if formula_id is PiFormulaId.MACHIN_ORACLE:
        parts = [
            (coeff, eval_series(arctan_recip_spec(arg.denominator), ctx))
            for coeff, arg in PI_FORMULAS[PiFormulaId.MACHIN_ORACLE].terms
        ]
        return _compose(parts, ctx)
    if formula_id is PiFormulaId.LEIBNIZ_BASELINE:
        return _eval_leibniz(ctx, leibniz_max_terms)
    raise ValueError(f"unknown formula: {formula_id!r}")


@dataclass(frozen=True)
class AgreementCheck:
    """Pairwise cross-route agreement at one working scale."""

    first: str
    second: str
    passed: bool
    diff_ulps: int
    bound_ulps: int


def cross_formula_agreement(ctx: PrecisionContext) -> list[AgreementCheck]:
    """Evaluate CASE1, COMBINED and the Machin route at one scale and check
    each pair agrees within the sum of the two error bounds."""
    routes = [
        ("case1", compute_pi(PiFormulaId.CASE1, ctx)),
        ("combined", compute_pi(PiFormulaId.COMBINED, ctx)),
        ("machin", compute_pi(PiFormulaId.MACHIN_ORACLE, ctx)),
    ]
    checks = []
    for i in range(len(routes)):
        for j in range(i + 1, len(routes)):
            name_a, a = routes[i]
            name_b, b = routes[j]
            diff = abs(a.value.signed_units - b.value.signed_units)
            bound = a.error_ulps + b.error_ulps
            checks.append(AgreementCheck(name_a, name_b, diff <= bound, diff, bound))
    return checks


# ---------------------------------------------------------------------------
# convergence comparison


@dataclass(frozen=True)
class ComparisonRow:
    """One method in the convergence table.

    ``terms_for_target`` is exact where the method is directly countable;
    methods reported by rate only carry a ``symbolic_terms`` estimate
    instead.  ``terms_per_digit`` is the asymptotic ``ln 10 / ln q_den``.
    """

    method: str
    ratio: str
    terms_per_digit: float | None
    terms_for_target: int | None
    symbolic_terms: str | None
    notes: str


def _leading_spec(case_id: CaseId) -> SeriesSpec:
    """Doubled SATURN series, the dominant row of a case's arctan assembly."""
    base = series_for_case(CASES[case_id], Component.SATURN)
    pref = base.prefactor * 2
    return SeriesSpec(pref.numerator, pref.denominator, base.offset, base.step, base.q_den)


def _leibniz_symbolic(target_digits: int) -> str:
    # remainder ~ 1/(2N): about 10^t / 2 terms for t digits
    if target_digits == 1:
        return "~5"
    return f"~5e{target_digits - 1}"


def compare_convergence(target_digits: int) -> list[ComparisonRow]:
    """Term-count comparison of the series routes at one digit target.

    The Leibniz row is symbolic only (its count is astronomically
    infeasible); the 1/3-ratio model row counts terms for the rate but is
    flagged as never evaluated because its terms are irrational.
    """
    if target_digits < 1:
        raise ValueError("target_digits must be positive")
    t = target_digits
    rows = [
        ComparisonRow(
            method="leibniz",
            ratio="->1",
            terms_per_digit=None,
            terms_for_target=None,
            symbolic_terms=_leibniz_symbolic(t),
            notes=f"alternating remainder 1/(2N); needs > 10^{t - 1} terms; not evaluated",
        ),
        ComparisonRow(
            method="sharp_model",
            ratio="1/3",
            terms_per_digit=1 / math.log10(3),
            terms_for_target=terms_needed(SeriesSpec(1, 1, 1, 2, 3), t),
            symbolic_terms=None,
            notes="rate model only; irrational terms - not evaluated",
        ),
    ]
    for case_id, method, label in (
        (CaseId.X1, "euler_x1", "arctan(1)"),
        (CaseId.X_HALF, "euler_x_half", "arctan(1/3)"),
        (CaseId.X_QUARTER, "euler_x_quarter", "arctan(1/7)"),
    ):
        spec = _leading_spec(case_id)
        rows.append(
            ComparisonRow(
                method=method,
                ratio=f"1/{spec.q_den}",
                terms_per_digit=1 / math.log10(spec.q_den),
                terms_for_target=terms_needed(spec, t),
                symbolic_terms=None,
                notes=f"leading series of the {label} assembly",
            )
        )
    atan5 = arctan_recip_spec(5)
    atan239 = arctan_recip_spec(239)
    rows.append(
        ComparisonRow(
            method="machin",
            ratio="1/25 & 1/57121",
            terms_per_digit=1 / math.log10(25),
            terms_for_target=terms_needed(atan5, t) + terms_needed(atan239, t),
            symbolic_terms=None,
            notes="16*arctan(1/5) - 4*arctan(1/239); terms summed over both series",
        )
    )
    return rows


# ---------------------------------------------------------------------------
# precision planning helpers


def context_for_case(case: CaseParams | CaseId, target_digits: int) -> PrecisionContext:
    """Context sized for one arctangent assembly."""
    params = _case(case)
    specs = [series_for_case(params, component) for component, _ in _SUN_WEIGHTS]
    return context_for(specs, target_digits)


def _formula_specs(formula_id: PiFormulaId) -> list[SeriesSpec]:
    if formula_id is PiFormulaId.CASE1:
        return [series_for_case(CASES[CaseId.X1], c) for c, _ in _SUN_WEIGHTS]
    if formula_id is PiFormulaId.COMBINED:
        return list(combined_series_specs())
    if formula_id is PiFormulaId.MACHIN_ORACLE:
        return [arctan_recip_spec(5), arctan_recip_spec(239)]
    raise ValueError(f"no series plan for {formula_id!r}")


def context_for_formula(
    formula_id: PiFormulaId,
    target_digits: int,
    *,
    leibniz_max_terms: int = DEFAULT_LEIBNIZ_MAX_TERMS,
) -> PrecisionContext:
    """Context sized for one pi route at one digit target."""
    if formula_id is PiFormulaId.LEIBNIZ_BASELINE:
        return PrecisionContext.for_op_count(target_digits, leibniz_max_terms)
    return context_for(_formula_specs(formula_id), target_digits)


def context_for_verify(target_digits: int) -> PrecisionContext:
    """Context wide enough for the identity and all cross-route checks."""
    specs = []
    for case in CASES.values():
        specs.extend(series_for_case(case, c) for c, _ in _SUN_WEIGHTS)
    specs.extend(_formula_specs(PiFormulaId.MACHIN_ORACLE))
    return context_for(specs, target_digits)
