"""Independent extended-precision reference path for validating the fast one.

Terms are generated the opposite way from the fast evaluators: each term's
super-geometric power q^(n(n+nu)) or q^(n(n+1)/2) is raised directly (no
step-ratio chaining) while the Pochhammer denominators are extended one
factor at a time, the full term list is materialized, and the sum is taken
backward from the smallest term. Everything runs under mpmath at >= 25
significant digits, so the certified error it reports sits far below
double-precision resolution. Expect it to be well over 10x slower than the
fast path; it belongs in test suites and the selftest command only.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import TruncationFailure, ValidationError
from .qcore import QParams
from .series import Family, Form, FunctionId, Weight

__all__ = [
    "PrecisionSpec",
    "OracleEval",
    "GeometricIdentityCheck",
    "oracle_eval",
    "oracle_remainder",
    "oracle_coefficient_sum",
    "geometric_identity_check",
]


@dataclass(frozen=True)
class PrecisionSpec:
    """Working precision contract: at least 25 significant decimal digits."""

    significant_digits: int = 30
    term_cap: int = 2000

    def __post_init__(self):
        if self.significant_digits < 25:
            raise ValidationError(
                f"need >= 25 significant digits, got {self.significant_digits!r}")
        if self.term_cap < 2:
            raise ValidationError(f"term_cap must be >= 2, got {self.term_cap!r}")


@dataclass(frozen=True)
class OracleEval:
    value: complex
    certified_error: float


@dataclass(frozen=True)
class GeometricIdentityCheck:
    lhs1: float
    rhs1: float
    lhs2: float
    rhs2: float
    tail1: float
    tail2: float


def _raw_coefficient(family: Family, q, nu, qnu1, n: int, poch_state):
    """Coefficient a_n via direct power over incrementally extended products.

    poch_state holds [(q;q)_n (q^(nu+1);q)_n, factor count]; mutated in
    place so successive calls with n = 0, 1, 2, ... cost O(1) each.
    """
    den, k = poch_state
    while k < n:
        den *= (1 - q ** (k + 1)) * (1 - qnu1 * q**k)
        k += 1
    poch_state[0], poch_state[1] = den, k
    if family is Family.SECOND:
        num = mp.power(q, n * (n + nu)) / mp.power(4, n)
    else:
        num = mp.power(q, mp.mpf(n) * (n + 1) / 2)
    return (-1) ** n * num / den


def _terms(fid: FunctionId, p: QParams, z, prec: PrecisionSpec, start: int = 0,
           digits: int | None = None):
    """Materialize the term list of the selected form, adaptively cut.

    The cut happens once the measured term ratio is below 1/2 and the
    geometric tail estimate falls under 10^-digits relative to the running
    magnitude sum, leaving the certified error ~10 digits beyond double
    precision even under heavy cancellation.
    """
    q = mp.mpf(p.q)
    nu = mp.mpf(p.nu)
    qnu1 = mp.power(q, nu + 1)
    zm = mp.mpc(z)
    form = fid.form

    target_scale = mp.mpf(10) ** (-(digits if digits is not None else prec.significant_digits))
    poch = [mp.mpf(1), 0]
    terms = []
    abs_sum = mp.mpf(0)
    n = start
    while True:
        a = _raw_coefficient(fid.family, q, nu, qnu1, n, poch)
        if form is Form.NORMALIZED:
            t = a * zm ** (n + 1)
        elif form is Form.DERIVATIVE:
            t = (n + 1) * a * zm**n
        elif form is Form.REDUCED:
            t = a * zm**n
        else:  # REDUCED_DERIVATIVE
            t = n * a * zm ** (n - 1) if n >= 1 else mp.mpc(0)
        terms.append(t)
        abs_sum += abs(t)
        if len(terms) >= 2:
            prev = abs(terms[-2])
            cur = abs(t)
            if prev > 0 and cur / prev <= mp.mpf("0.5"):
                tail = cur  # next term is at most cur/2, so tail <= cur
                if tail <= target_scale * max(mp.mpf(1), abs_sum):
                    return terms, tail, abs_sum
            if prev == 0 and cur == 0:
                return terms, mp.mpf(0), abs_sum
        if len(terms) >= prec.term_cap:
            raise TruncationFailure(
                f"oracle term cap {prec.term_cap} reached", terms_used=len(terms))
        n += 1


def oracle_eval(fid: FunctionId, p: QParams, z: complex,
                prec: PrecisionSpec = PrecisionSpec()) -> OracleEval:
    """Backward re-summation of the pre-computed term list.

    If the first pass reveals heavy cancellation (term magnitudes summing
    far above the result), the whole computation is repeated once with the
    working precision widened by the observed condition so the certified
    error keeps its promised distance below double precision.
    """
    if abs(complex(z)) > 1.0:
        raise ValidationError(f"|z| must be <= 1, got {abs(complex(z))!r}")
    extra = 0
    while True:
        digits = prec.significant_digits + extra
        with mp.workdps(digits + 10):
            terms, tail, abs_sum = _terms(fid, p, z, prec, digits=digits)
            total = mp.mpc(0)
            for t in reversed(terms):
                total += t
            condition = abs_sum / max(abs(total), mp.mpf(10) ** (-digits))
            if extra == 0 and condition > 1e4:
                extra = int(mp.ceil(mp.log10(condition)))
                continue
            rounding = abs_sum * mp.mpf(10) ** (-(digits + 5))
            return OracleEval(complex(total), float(tail + rounding))


def oracle_remainder(fid: FunctionId, p: QParams, z: complex, start: int,
                     prec: PrecisionSpec = PrecisionSpec()) -> float:
    """|sum of the series terms from index `start` on|, at full precision.

    This is the exact truncation remainder left behind by a fast evaluation
    that consumed `start` terms, free of any double-precision rounding, so
    it can be compared against tail bounds far below 1e-16.
    """
    with mp.workdps(prec.significant_digits + 10):
        terms, _, _ = _terms(fid, p, z, prec, start=start)
        total = mp.mpc(0)
        for t in reversed(terms):
            total += t
        return float(abs(total))


def oracle_coefficient_sum(family: Family, p: QParams, weight: Weight,
                           prec: PrecisionSpec = PrecisionSpec()) -> float:
    """sum_{n>=1} |a_n| or sum_{n>=1} (n+1)|a_n| in extended precision."""
    with mp.workdps(prec.significant_digits + 10):
        q = mp.mpf(p.q)
        nu = mp.mpf(p.nu)
        qnu1 = mp.power(q, nu + 1)
        target = mp.mpf(10) ** (-prec.significant_digits)
        poch = [mp.mpf(1), 0]
        terms = []
        n = 1
        while True:
            a = abs(_raw_coefficient(family, q, nu, qnu1, n, poch))
            t = (n + 1) * a if weight is Weight.N_PLUS_ONE else a
            terms.append(t)
            if len(terms) >= 2 and terms[-2] > 0 and t / terms[-2] <= mp.mpf("0.5"):
                if t <= target * max(mp.mpf(1), mp.fsum(terms)):
                    break
            if len(terms) >= prec.term_cap:
                raise TruncationFailure(
                    f"oracle term cap {prec.term_cap} reached", terms_used=len(terms))
            n += 1
        total = mp.mpf(0)
        for t in reversed(terms):
            total += t
        return float(total)


def geometric_identity_check(x: float,
                             prec: PrecisionSpec = PrecisionSpec(term_cap=20000)) -> GeometricIdentityCheck:
    """Partial sums of 1 + sum x^n and 1 + sum (n+1) x^n against closed forms.

    The closed forms are 1/(1-x) and 1/(1-x)^2; both partial sums carry a
    certified geometric tail so the agreement check is airtight. The default
    term cap is large because plain geometric decay near x = 1 needs
    thousands of terms to certify a 1e-30 tail (x = 0.99 takes ~8000).
    """
    if not (0.0 < x < 1.0):
        raise ValidationError(f"x must lie in (0, 1), got {x!r}")
    with mp.workdps(prec.significant_digits + 10):
        xm = mp.mpf(x)
        target = mp.mpf(10) ** (-prec.significant_digits)
        s1 = mp.mpf(1)
        s2 = mp.mpf(1)
        pw = xm
        n = 1
        while True:
            s1 += pw
            s2 += (n + 1) * pw
            tail1 = pw * xm / (1 - xm)
            # sum_{k>n} (k+1) x^k = x^(n+1) ((n+2) - (n+1) x) / (1-x)^2
            tail2 = pw * xm * ((n + 2) - (n + 1) * xm) / (1 - xm) ** 2
            if tail2 <= target:
                break
            if n >= prec.term_cap:
                raise TruncationFailure(
                    f"oracle term cap {prec.term_cap} reached", terms_used=n)
            pw *= xm
            n += 1
        return GeometricIdentityCheck(
            lhs1=float(s1), rhs1=float(1 / (1 - xm)),
            lhs2=float(s2), rhs2=float(1 / (1 - xm) ** 2),
            tail1=float(tail1), tail2=float(tail2),
        )
