"""Hypothesis predicates and lower-bound formulas for every inequality.

All formulas are expressed through the two products

    P = (1-q)(1-q^nu)        M = 4 P

which keeps the difference-sensitive denominators (M - q^nu, 8 P q^nu -
q^(2nu), 2 P sqrt(q) - q) in their least cancellation-prone shape.

Each theorem-style inequality exists in two variants. The "literal" variant
is the printed lower bound taken at face value. The "pattern" variant is
the structurally consistent value implied by the first value-ratio pair,
where both bounds are algebraic rearrangements of the closed-form modulus
bound L: the ratio bound equals 2 - L and the reciprocal bound equals 1/L
(squares of L for the derivative pairs). For t1 the two variants coincide
identically; for t2/t3/t4 the literal values can exceed 1, which the
verifier then reports as an empirical violation rather than silently
repairing. Both are computed side by side on purpose: this module audits
the printed constants, it does not reinterpret them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import HypothesisViolated, ValidationError
from .qcore import QParams, k_ratio, t_ratio
from .series import Family, PartialSpec, TruncationPolicy, Weight, coefficient_tail_sum

__all__ = [
    "Inequality",
    "Variant",
    "InequalityId",
    "HypothesisResult",
    "TheoremBound",
    "hypothesis_check",
    "lemma_bound",
    "literal_bound",
    "pattern_bound",
    "bound_value",
    "theorem_bound",
    "proof_scale",
    "coefficient_inequality_lhs",
    "full_coefficient_check",
]


class Inequality(Enum):
    """The twelve audited inequalities: lemma modulus bounds and the four
    theorem-style ratio/reciprocal pairs exposed by the CLI as t1..t4."""

    L1_VALUE = "l1_value"
    L1_DERIV = "l1_deriv"
    L2_VALUE = "l2_value"
    L2_DERIV = "l2_deriv"
    T1_RATIO = "t1_ratio"
    T1_RECIPROCAL = "t1_reciprocal"
    T2_DERIV_RATIO = "t2_deriv_ratio"
    T2_DERIV_RECIPROCAL = "t2_deriv_reciprocal"
    T3_RATIO = "t3_ratio"
    T3_RECIPROCAL = "t3_reciprocal"
    T4_DERIV_RATIO = "t4_deriv_ratio"
    T4_DERIV_RECIPROCAL = "t4_deriv_reciprocal"

    @property
    def is_lemma(self) -> bool:
        return self.name.startswith("L")

    @property
    def theorem_number(self) -> int:
        if self.is_lemma:
            raise ValidationError(f"{self.name} is a lemma id, not a theorem id")
        return int(self.name[1])

    @property
    def family(self) -> Family:
        # First/second theorem pair and the first lemma ride on K_n;
        # the rest on T_n.
        return Family.SECOND if self.name[:2] in ("L1", "T1", "T2") else Family.THIRD

    @property
    def is_derivative(self) -> bool:
        return "DERIV" in self.name

    @property
    def is_reciprocal(self) -> bool:
        return self.name.endswith("RECIPROCAL")


class Variant(Enum):
    LITERAL = "literal"
    PATTERN = "pattern"


@dataclass(frozen=True)
class InequalityId:
    inequality: Inequality
    variant: Variant = Variant.LITERAL

    def __post_init__(self):
        if self.inequality.is_lemma and self.variant is not Variant.LITERAL:
            raise ValidationError("lemma ids admit only the literal variant")


@dataclass(frozen=True)
class HypothesisResult:
    holds: bool
    margin: float


@dataclass(frozen=True)
class TheoremBound:
    """Bound record: the value is only present when the hypothesis holds."""

    id: InequalityId
    params: QParams
    hypothesis_holds: bool
    hypothesis_margin: float
    bound_value: float | None


def _prod_p(p: QParams) -> float:
    return (1.0 - p.q) * (1.0 - p.q_pow_nu)


def hypothesis_check(ineq: Inequality, p: QParams) -> HypothesisResult:
    """Margin (LHS - RHS) of the governing inequality, compared exactly as
    printed: strictly for the lemmas, non-strictly for the theorems."""
    pp = _prod_p(p)
    qnu = p.q_pow_nu
    sq = math.sqrt(p.q)
    if ineq is Inequality.L1_VALUE or ineq is Inequality.L1_DERIV:
        margin = 4.0 * pp - qnu
        return HypothesisResult(margin > 0.0, margin)
    if ineq is Inequality.L2_VALUE or ineq is Inequality.L2_DERIV:
        margin = pp - sq
        return HypothesisResult(margin > 0.0, margin)
    num = ineq.theorem_number
    if num == 1:
        margin = 2.0 * pp - qnu
    elif num == 2:
        margin = pp - qnu
    elif num == 3:
        margin = pp - 2.0 * sq
    else:
        margin = pp - 4.0 * sq
    return HypothesisResult(margin >= 0.0, margin)


def _require(ineq: Inequality, p: QParams) -> None:
    res = hypothesis_check(ineq, p)
    if not res.holds:
        raise HypothesisViolated(
            f"hypothesis of {ineq.value} fails at q={p.q}, nu={p.nu} "
            f"(margin {res.margin:.6g})", margin=res.margin)


def _lemma_value_bound(family: Family, p: QParams) -> float:
    if family is Family.SECOND:
        m = 4.0 * _prod_p(p)
        return m / (m - p.q_pow_nu)
    pp = _prod_p(p)
    return pp / (pp - math.sqrt(p.q))


def lemma_bound(ineq: Inequality, p: QParams) -> float:
    """Closed-form modulus bound: L = M/(M-q^nu) resp. P/(P-sqrt q) for the
    function value, and L^2 for its derivative."""
    if not ineq.is_lemma:
        raise ValidationError(f"{ineq.name} is not a lemma id")
    _require(ineq, p)
    base = _lemma_value_bound(ineq.family, p)
    return base * base if ineq.is_derivative else base


def literal_bound(id: InequalityId, p: QParams) -> float:
    """The printed lower-bound formula, evaluated verbatim."""
    ineq = id.inequality
    if ineq.is_lemma:
        raise ValidationError("literal_bound applies to theorem ids only")
    _require(ineq, p)
    pp = _prod_p(p)
    m = 4.0 * pp
    qnu = p.q_pow_nu
    sq = math.sqrt(p.q)
    if ineq is Inequality.T1_RATIO:
        return (m - 2.0 * qnu) / (m - qnu)
    if ineq is Inequality.T1_RECIPROCAL:
        return (m - qnu) / m
    if ineq is Inequality.T2_DERIV_RATIO:
        return (16.0 * pp * (pp - qnu) + 2.0 * qnu * qnu) / (8.0 * pp * qnu - qnu * qnu)
    if ineq is Inequality.T2_DERIV_RECIPROCAL:
        return (m - qnu) ** 2 / (8.0 * pp * qnu - qnu * qnu)
    if ineq is Inequality.T3_RATIO:
        return (pp - 2.0 * sq) / sq
    if ineq is Inequality.T3_RECIPROCAL:
        return (pp - sq) / sq
    if ineq is Inequality.T4_DERIV_RATIO:
        return (pp * pp - 4.0 * pp * sq + 2.0 * p.q) / (2.0 * pp * sq - p.q)
    return (pp - sq) ** 2 / (2.0 * pp * sq - p.q)  # T4_DERIV_RECIPROCAL


def pattern_bound(id: InequalityId, p: QParams) -> float:
    """Structurally consistent variant: 2-L / 1/L for the value pairs,
    2-L^2 / 1/L^2 for the derivative pairs, with L the matching closed-form
    modulus bound. For t1 this reproduces the literal values identically."""
    ineq = id.inequality
    if ineq.is_lemma:
        raise ValidationError("pattern_bound applies to theorem ids only")
    _require(ineq, p)
    ell = _lemma_value_bound(ineq.family, p)
    if ineq.is_derivative:
        ell = ell * ell
    return 1.0 / ell if ineq.is_reciprocal else 2.0 - ell


def bound_value(id: InequalityId, p: QParams) -> float:
    if id.variant is Variant.LITERAL:
        return literal_bound(id, p)
    return pattern_bound(id, p)


def theorem_bound(id: InequalityId, p: QParams) -> TheoremBound:
    """Bound record with hypothesis status; never raises on hypothesis failure."""
    res = hypothesis_check(id.inequality, p)
    value = bound_value(id, p) if res.holds else None
    return TheoremBound(id, p, res.holds, res.margin, value)


def proof_scale(ineq: Inequality, p: QParams) -> float:
    """Scale constant of the Moebius-witness construction for one theorem.

    The ratio direction uses the base scale s; the reciprocal direction uses
    1 + s, matching the construction that pins the witness to 0 at z = 0 for
    the pattern bounds.
    """
    if ineq.is_lemma:
        raise ValidationError(f"{ineq.name} has no witness construction")
    _require(ineq, p)
    pp = _prod_p(p)
    qnu = p.q_pow_nu
    sq = math.sqrt(p.q)
    num = ineq.theorem_number
    if num == 1:
        base = (4.0 * pp - qnu) / qnu
    elif num == 2:
        base = (4.0 * pp - qnu) ** 2 / (8.0 * pp * qnu - qnu * qnu)
    elif num == 3:
        base = (pp - sq) / sq
    else:
        base = (pp - sq) ** 2 / (2.0 * pp * sq - p.q)
    return 1.0 + base if ineq.is_reciprocal else base


def _weight_of(ineq: Inequality) -> Weight:
    return Weight.N_PLUS_ONE if ineq.is_derivative else Weight.UNIT


def _head_sum(ineq: Inequality, p: QParams, m: int) -> float:
    """sum_{n=1..m} w(n) |a_n| with the weighting of the inequality."""
    ratio = k_ratio if ineq.family is Family.SECOND else t_ratio
    q, qnu = p.q, p.q_pow_nu
    coeff = 1.0
    total = 0.0
    for n in range(1, m + 1):
        coeff *= ratio(q, qnu, n - 1)
        w = (n + 1) if ineq.is_derivative else 1
        total += w * abs(coeff)
    return total


def _tail_scale(ineq: Inequality, p: QParams) -> float:
    """The factor the proofs place on the discarded coefficient tail."""
    pp = _prod_p(p)
    qnu = p.q_pow_nu
    sq = math.sqrt(p.q)
    num = ineq.theorem_number
    if num == 1:
        m = 4.0 * pp
        return m / qnu if ineq.is_reciprocal else (m - qnu) / qnu
    if num == 2:
        return (4.0 * pp - qnu) ** 2 / (8.0 * pp * qnu - qnu * qnu)
    if num == 3:
        return (pp - sq) / sq
    return (pp - sq) ** 2 / (2.0 * pp * sq - p.q)


def coefficient_inequality_lhs(ineq: Inequality, p: QParams, spec: PartialSpec,
                               policy: TruncationPolicy | None = None) -> float:
    """Left side of the proof's sufficient coefficient inequality.

    Head coefficients enter with weight one (value pairs) or n+1 (derivative
    pairs); the tail beyond m is scaled by the proof constant. The caller
    compares the result against 1.
    """
    if ineq.is_lemma:
        raise ValidationError(f"{ineq.name} has no partial-sum inequality")
    _require(ineq, p)
    head = _head_sum(ineq, p, spec.m)
    tail = coefficient_tail_sum(ineq.family, p, spec.m + 1, _weight_of(ineq), policy)
    return head + _tail_scale(ineq, p) * tail


def full_coefficient_check(ineq: Inequality, p: QParams,
                           policy: TruncationPolicy | None = None) -> float:
    """Scaled full coefficient sum derived from the closed-form modulus bound.

    For the value pairs this is ((M-q^nu)/q^nu) sum |K_n| and its third-family
    analogue; for the derivative pairs the squared-denominator scale applies
    to sum (n+1)|a_n|. Values <= 1 certify the corresponding modulus bound.
    Gated on the matching lemma hypothesis (strict), which every theorem
    hypothesis implies.
    """
    if ineq.is_lemma:
        raise ValidationError("pass the theorem id whose proof uses the sum")
    lemma = Inequality.L1_VALUE if ineq.family is Family.SECOND else Inequality.L2_VALUE
    _require(lemma, p)
    scale = _tail_scale(ineq, p) if ineq.theorem_number != 1 else (4.0 * _prod_p(p) - p.q_pow_nu) / p.q_pow_nu
    total = coefficient_tail_sum(ineq.family, p, 1, _weight_of(ineq), policy)
    return scale * total
