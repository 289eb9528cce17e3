"""Built-in consistency checks behind the `selftest` CLI command.

Four check groups: fast-vs-oracle equivalence on random parameters and disk
points, lemma modulus bounds on a small hypothesis-satisfying grid, scaled
coefficient-sum inequalities (with fast tail sums certified against the
oracle), and the closed-form geometric identities the proofs repose on.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from .bounds import Inequality, full_coefficient_check
from .config import RunConfig
from .oracle import (
    PrecisionSpec,
    geometric_identity_check,
    oracle_coefficient_sum,
    oracle_eval,
)
from .qcore import QParams
from .series import Family, Form, FunctionId, Weight, coefficient_tail_sum, evaluate
from .verifier import DiskGrid, Lemma, Verdict, check_lemma

__all__ = ["CheckResult", "SelftestReport", "run_selftest"]

# Hypothesis-satisfying anchor cells reused by the lemma and coefficient
# checks; chosen away from hypothesis boundaries so conditioning is benign.
_LEMMA1_CELLS = [(0.05, 1.0), (0.1, 1.0), (0.1, 2.0), (0.2, 1.5), (0.3, 2.0), (0.3, 3.0)]
_LEMMA2_CELLS = [(0.01, 1.0), (0.02, 1.5), (0.05, 2.0), (0.05, 3.0), (0.08, 2.5)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict


@dataclass(frozen=True)
class SelftestReport:
    cases: int
    seed: int
    checks: tuple[CheckResult, ...]
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _oracle_equivalence(cases: int, seed: int, cfg: RunConfig) -> CheckResult:
    rng = random.Random(seed)
    policy = cfg.policy()
    prec = PrecisionSpec()
    worst = 0.0
    worst_at: dict = {}
    n_points = 0
    for _ in range(cases):
        p = QParams(rng.uniform(0.05, 0.95), rng.uniform(-0.5, 5.0))
        for _ in range(4):
            r = math.sqrt(rng.random()) * 0.99
            theta = rng.uniform(0.0, 2.0 * math.pi)
            z = complex(r * math.cos(theta), r * math.sin(theta))
            for family in Family:
                for form in (Form.NORMALIZED, Form.DERIVATIVE):
                    fid = FunctionId(family, form)
                    fast = evaluate(fid, p, z, policy)
                    ref = oracle_eval(fid, p, z, prec)
                    allow = fast.tail_bound + 1e-13 * abs(fast.value) + ref.certified_error
                    err = abs(fast.value - ref.value)
                    n_points += 1
                    score = err / allow if allow > 0 else (0.0 if err == 0.0 else math.inf)
                    if score > worst:
                        worst = score
                        worst_at = {"q": p.q, "nu": p.nu, "z_re": z.real, "z_im": z.imag,
                                    "family": family.value, "form": form.value,
                                    "error": err, "allowance": allow}
    return CheckResult("oracle-equivalence", worst <= 1.0,
                       {"points": n_points, "worst_error_over_allowance": worst,
                        "worst_case": worst_at})


def _lemma_bounds(cfg: RunConfig) -> CheckResult:
    grid = DiskGrid(radii=(0.3, 0.7, 0.99), angles_per_radius=16,
                    random_points=32, seed=cfg.seed)
    policy = cfg.policy()
    failures = []
    total = 0
    for lemma, cells in ((Lemma.L1, _LEMMA1_CELLS), (Lemma.L2, _LEMMA2_CELLS)):
        for q, nu in cells:
            total += 1
            rep = check_lemma(lemma, QParams(q, nu), grid, policy, cfg.tolerance)
            if rep.value_verdict is not Verdict.SATISFIED or rep.deriv_verdict is not Verdict.SATISFIED:
                failures.append({"lemma": lemma.value, "q": q, "nu": nu,
                                 "value_verdict": rep.value_verdict.value,
                                 "deriv_verdict": rep.deriv_verdict.value})
    return CheckResult("lemma-bounds", not failures, {"cells": total, "failures": failures})


def _coefficient_sums(cfg: RunConfig) -> CheckResult:
    policy = cfg.policy()
    prec = PrecisionSpec()
    failures = []
    total = 0
    pairs = [(Inequality.T1_RATIO, _LEMMA1_CELLS), (Inequality.T2_DERIV_RATIO, _LEMMA1_CELLS),
             (Inequality.T3_RATIO, _LEMMA2_CELLS), (Inequality.T4_DERIV_RATIO, _LEMMA2_CELLS)]
    for ineq, cells in pairs:
        for q, nu in cells:
            p = QParams(q, nu)
            total += 1
            lhs = full_coefficient_check(ineq, p, policy)
            if not lhs <= 1.0:
                failures.append({"inequality": ineq.value, "q": q, "nu": nu, "lhs": lhs})
            weight = Weight.N_PLUS_ONE if ineq.is_derivative else Weight.UNIT
            fast_sum = coefficient_tail_sum(ineq.family, p, 1, weight, policy)
            ref_sum = oracle_coefficient_sum(ineq.family, p, weight, prec)
            if abs(fast_sum - ref_sum) > 1e-14 + 1e-12 * abs(ref_sum):
                failures.append({"inequality": ineq.value, "q": q, "nu": nu,
                                 "fast_sum": fast_sum, "oracle_sum": ref_sum})
    return CheckResult("coefficient-sums", not failures, {"cells": total, "failures": failures})


def _geometric_identities() -> CheckResult:
    failures = []
    for x in (0.25, 0.5, 0.9, 0.99):
        chk = geometric_identity_check(x)
        tol1 = chk.tail1 + 1e-13 * abs(chk.rhs1)
        tol2 = chk.tail2 + 1e-13 * abs(chk.rhs2)
        if abs(chk.lhs1 - chk.rhs1) > tol1 or abs(chk.lhs2 - chk.rhs2) > tol2:
            failures.append({"x": x, "lhs1": chk.lhs1, "rhs1": chk.rhs1,
                             "lhs2": chk.lhs2, "rhs2": chk.rhs2})
    return CheckResult("geometric-identities", not failures, {"points": 4, "failures": failures})


def run_selftest(cases: int, seed: int, cfg: RunConfig | None = None) -> SelftestReport:
    """Run all check groups; cases = 0 runs nothing and reports as much."""
    if cfg is None:
        cfg = RunConfig()
    start = time.perf_counter()
    checks: list[CheckResult] = []
    if cases > 0:
        checks.append(_oracle_equivalence(cases, seed, cfg))
        checks.append(_lemma_bounds(cfg))
        checks.append(_coefficient_sums(cfg))
        checks.append(_geometric_identities())
    return SelftestReport(cases, seed, tuple(checks), time.perf_counter() - start)
