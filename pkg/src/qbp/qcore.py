"""q-Pochhammer symbols and the series coefficients of both function families.

Everything here is a pure function of its arguments. Coefficients are built
by forward recurrence on the term ratio instead of evaluating q^(n(n+nu))
directly: the raw power underflows for moderate n while the step ratio stays
comfortably representable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError

__all__ = [
    "QParams",
    "Coefficient",
    "q_pochhammer",
    "q_pochhammer_inf",
    "coefficient_k",
    "coefficient_t",
    "k_ratio",
    "t_ratio",
    "normalization_c",
]


@dataclass(frozen=True)
class QParams:
    """Parameter pair (q, nu) governing every series and bound.

    Requires 0 < q < 1 and nu > -1.
    """

    q: float
    nu: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValidationError(f"q must lie in (0, 1), got {self.q!r}")
        if not (self.nu > -1.0):
            raise ValidationError(f"nu must exceed -1, got {self.nu!r}")

    @property
    def q_pow_nu(self) -> float:
        return self.q ** self.nu


@dataclass(frozen=True)
class Coefficient:
    """One series coefficient; sign(value) = (-1)^index for valid params."""

    index: int
    value: float


def q_pochhammer(a: float, q: float, n: int) -> float:
    """Finite product prod_{k=1..n} (1 - a q^(k-1)); n = 0 gives exactly 1."""
    if not (0.0 < q < 1.0):
        raise ValidationError(f"q must lie in (0, 1), got {q!r}")
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n!r}")
    # factor k built from an explicit power so that extending the product by
    # one factor reproduces (a;q)_n * (1 - a q^n) bit for bit
    prod = 1.0
    for k in range(n):
        prod *= 1.0 - a * q**k
    return prod


def q_pochhammer_inf(a: float, q: float, epsilon: float) -> float:
    """Infinite product prod_{k>=1} (1 - a q^(k-1)), adaptively truncated.

    Stops once |a| q^(k-1) / (1-q) < epsilon; that quantity dominates the
    log of the remaining factors, so the cut is sound in relative terms.
    """
    if not (0.0 < q < 1.0):
        raise ValidationError(f"q must lie in (0, 1), got {q!r}")
    if not (epsilon > 0.0):
        raise ValidationError(f"epsilon must be positive, got {epsilon!r}")
    prod = 1.0
    aq = a
    one_minus_q = 1.0 - q
    while abs(aq) / one_minus_q >= epsilon:
        prod *= 1.0 - aq
        aq *= q
    return prod


def k_ratio(q: float, q_pow_nu: float, n: int) -> float:
    """Signed step ratio K_{n+1}/K_n of the second-family coefficients.

    Equals -q^(2n+1+nu) / (4 (1-q^(n+1)) (1-q^(n+1+nu))); assembled from
    integer powers of q and a precomputed q^nu for speed and accuracy.
    """
    qn1 = q ** (n + 1)
    return -(qn1 * q**n * q_pow_nu) / (4.0 * (1.0 - qn1) * (1.0 - qn1 * q_pow_nu))


def t_ratio(q: float, q_pow_nu: float, n: int) -> float:
    """Signed step ratio T_{n+1}/T_n of the third-family coefficients.

    Equals -q^(n+1) / ((1-q^(n+1)) (1-q^(n+1+nu))).
    """
    qn1 = q ** (n + 1)
    return -qn1 / ((1.0 - qn1) * (1.0 - qn1 * q_pow_nu))


def coefficient_k(p: QParams, n: int) -> Coefficient:
    """Second-family coefficient K_n; K_0 = 1."""
    return Coefficient(n, _coefficient(p, n, k_ratio))


def coefficient_t(p: QParams, n: int) -> Coefficient:
    """Third-family coefficient T_n; T_0 = 1."""
    return Coefficient(n, _coefficient(p, n, t_ratio))


def _coefficient(p: QParams, n: int, ratio) -> float:
    if n < 0:
        raise ValidationError(f"coefficient index must be nonnegative, got {n!r}")
    qnu = p.q_pow_nu
    value = 1.0
    for i in range(n):
        value *= ratio(p.q, qnu, i)
    return value


def normalization_c(p: QParams, epsilon: float) -> float:
    """Normalization constant (q;q)_inf / (q^(nu+1);q)_inf."""
    num = q_pochhammer_inf(p.q, p.q, epsilon)
    den = q_pochhammer_inf(p.q * p.q_pow_nu, p.q, epsilon)
    return num / den
