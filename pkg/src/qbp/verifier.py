"""Sample-based verification of the bound claims over the open unit disk.

A finite sample can only falsify: the minimum of Re over sampled points is
an upper bound on the true infimum, so a "satisfied" verdict means
*satisfied on this sample*, never proved. Violations, on the other hand,
are genuine counterexamples (up to the verdict tolerance).

Ratios of the function to its partial sum are always formed through the
reduced functions g = h/z and g_m = h_m/z, whose common value at the origin
is exactly 1; the origin is therefore included as a free sample point and
the removable singularity of h/h_m never materializes. Derivative ratios
need no such care since h'(0) = 1 on both sides.

All operations are pure; sample points are generated once, up front, from
the seed, so any parallel evaluation schedule would see the same point set.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from enum import Enum

from .bounds import (
    Inequality,
    InequalityId,
    Variant,
    bound_value,
    hypothesis_check,
    lemma_bound,
    proof_scale,
)
from .errors import DenominatorNearZero, QbpError, ValidationError, WitnessSingular
from .qcore import QParams
from .series import (
    Family,
    Form,
    FunctionId,
    PartialSpec,
    TruncationPolicy,
    eval_h,
    eval_h_deriv,
    eval_partial,
    eval_partial_deriv,
    eval_reduced,
)

__all__ = [
    "DiskGrid",
    "RatioKind",
    "Direction",
    "Verdict",
    "BoundCheck",
    "LemmaCheck",
    "Lemma",
    "MobiusWitness",
    "MinRatioResult",
    "AtlasReport",
    "sample_disk",
    "min_real_ratio",
    "check_inequality",
    "check_inequality_sweep",
    "check_lemma",
    "mobius_witness_eval",
    "atlas",
]

_DENOM_FLOOR = 1e-12
_WITNESS_FLOOR = 1e-12


@dataclass(frozen=True)
class DiskGrid:
    """Deterministic sample of the open unit disk.

    A radial-angular lattice (each radius gets angles_per_radius equally
    spaced points) plus seeded area-uniform random points. All radii must
    be strictly inside the disk; boundary behavior is a limit, not a
    sample point.
    """

    radii: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99)
    angles_per_radius: int = 64
    random_points: int = 256
    seed: int = 12345

    def __post_init__(self):
        for r in self.radii:
            if not (0.0 < r < 1.0):
                raise ValidationError(f"radii must lie in (0, 1), got {r!r}")
        if self.angles_per_radius < 1:
            raise ValidationError("angles_per_radius must be positive")
        if self.random_points < 0:
            raise ValidationError("random_points must be nonnegative")


class RatioKind(Enum):
    VALUE = "value"
    DERIVATIVE = "derivative"


class Direction(Enum):
    FULL_OVER_PARTIAL = "full_over_partial"
    PARTIAL_OVER_FULL = "partial_over_full"


class Verdict(Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    HYPOTHESIS_FAILED = "hypothesis-failed"


class Lemma(Enum):
    L1 = "l1"
    L2 = "l2"


@dataclass(frozen=True)
class MinRatioResult:
    minimum: float
    argmin: complex


@dataclass(frozen=True)
class BoundCheck:
    """Verdict record for one inequality at one (q, nu, m)."""

    id: InequalityId
    params: QParams
    m: int
    hypothesis_holds: bool
    hypothesis_margin: float
    bound_value: float | None
    empirical_min: float | None
    argmin: complex | None
    margin: float | None
    verdict: Verdict


@dataclass(frozen=True)
class LemmaCheck:
    """Sampled maxima of |h| and |h'| against the closed-form bounds."""

    lemma: Lemma
    params: QParams
    hypothesis_holds: bool
    hypothesis_margin: float
    value_bound: float | None
    deriv_bound: float | None
    max_abs_value: float | None
    max_abs_deriv: float | None
    argmax_value: complex | None
    argmax_deriv: complex | None
    value_verdict: Verdict
    deriv_verdict: Verdict


@dataclass(frozen=True)
class MobiusWitness:
    id: InequalityId
    z: complex
    w_value: complex


@dataclass(frozen=True)
class AtlasCellError:
    q: float
    nu: float
    message: str


@dataclass(frozen=True)
class AtlasReport:
    """Per-cell verdicts over a rectangle of the (q, nu) plane."""

    id: InequalityId
    m: int
    cells: tuple[BoundCheck, ...]
    cell_errors: tuple[AtlasCellError, ...] = field(default=())

    @property
    def hypothesis_fraction(self) -> float:
        return self._frac(lambda c: c.hypothesis_holds)

    @property
    def satisfied_fraction(self) -> float:
        return self._frac(lambda c: c.verdict is Verdict.SATISFIED)

    @property
    def violated_fraction(self) -> float:
        return self._frac(lambda c: c.verdict is Verdict.VIOLATED)

    def _frac(self, pred) -> float:
        total = len(self.cells) + len(self.cell_errors)
        if total == 0:
            return 0.0
        return sum(1 for c in self.cells if pred(c)) / total


def sample_disk(grid: DiskGrid) -> list[complex]:
    """Lattice plus seeded uniform points; deterministic and duplicate-free."""
    points: list[complex] = []
    seen: set[complex] = set()

    def push(z: complex) -> None:
        if z not in seen:
            seen.add(z)
            points.append(z)

    for r in grid.radii:
        for k in range(grid.angles_per_radius):
            theta = 2.0 * math.pi * k / grid.angles_per_radius
            push(complex(r * math.cos(theta), r * math.sin(theta)))
    rng = random.Random(grid.seed)
    for _ in range(grid.random_points):
        r = math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        push(cmath.rect(r, theta))
    if not points:
        raise ValidationError("grid produces no sample points")
    return points


def _pair_evaluators(kind: RatioKind):
    if kind is RatioKind.VALUE:
        full = lambda fam, p, z, pol: eval_reduced(fam, p, z, pol).value
        part = lambda fam, p, spec, z: eval_partial(
            FunctionId(fam, Form.REDUCED), p, spec, z)
    else:
        full = lambda fam, p, z, pol: eval_h_deriv(fam, p, z, pol).value
        part = eval_partial_deriv
    return full, part


def min_real_ratio(family: Family, p: QParams, spec: PartialSpec, kind: RatioKind,
                   direction: Direction, grid: DiskGrid,
                   policy: TruncationPolicy = TruncationPolicy()) -> MinRatioResult:
    """Minimum of Re{ratio} over the sample; the origin is always included
    and contributes exactly 1."""
    sweep = _ratio_min_sweep(family, p, [spec.m], kind, direction, grid, policy)
    return sweep[spec.m]


def _ratio_min_sweep(family: Family, p: QParams, ms: list[int], kind: RatioKind,
                     direction: Direction, grid: DiskGrid,
                     policy: TruncationPolicy) -> dict[int, MinRatioResult]:
    """Shared-numerator sweep: the full-function values are computed once
    per sample point and reused across all partial-sum orders."""
    full_eval, part_eval = _pair_evaluators(kind)
    points = sample_disk(grid)
    best: dict[int, tuple[float, complex]] = {m: (1.0, 0j) for m in ms}
    for z in points:
        fz = full_eval(family, p, z, policy)
        for m in ms:
            gz = part_eval(family, p, PartialSpec(m), z)
            den = gz if direction is Direction.FULL_OVER_PARTIAL else fz
            if abs(den) < _DENOM_FLOOR:
                raise DenominatorNearZero(
                    f"ratio denominator magnitude {abs(den):.3e} at z={z} "
                    f"(q={p.q}, nu={p.nu}, m={m})", point=z, magnitude=abs(den))
            ratio = fz / gz if direction is Direction.FULL_OVER_PARTIAL else gz / fz
            re = ratio.real
            if re < best[m][0]:
                best[m] = (re, z)
    return {m: MinRatioResult(v[0], v[1]) for m, v in best.items()}


def _ratio_kind_direction(ineq: Inequality) -> tuple[RatioKind, Direction]:
    kind = RatioKind.DERIVATIVE if ineq.is_derivative else RatioKind.VALUE
    direction = (Direction.PARTIAL_OVER_FULL if ineq.is_reciprocal
                 else Direction.FULL_OVER_PARTIAL)
    return kind, direction


def check_inequality(id: InequalityId, p: QParams, m: int, grid: DiskGrid,
                     policy: TruncationPolicy = TruncationPolicy(),
                     tolerance: float = 1e-9) -> BoundCheck:
    """Hypothesis, bound, and sampled minimum combined into one verdict."""
    return check_inequality_sweep(id, p, [m], grid, policy, tolerance)[0]


def check_inequality_sweep(id: InequalityId, p: QParams, ms: list[int], grid: DiskGrid,
                           policy: TruncationPolicy = TruncationPolicy(),
                           tolerance: float = 1e-9) -> list[BoundCheck]:
    """check_inequality over several m values, sharing the full-function
    evaluations across the sweep."""
    hyp = hypothesis_check(id.inequality, p)
    if not hyp.holds:
        return [BoundCheck(id, p, m, False, hyp.margin, None, None, None, None,
                           Verdict.HYPOTHESIS_FAILED) for m in ms]
    bound = bound_value(id, p)
    kind, direction = _ratio_kind_direction(id.inequality)
    sweep = _ratio_min_sweep(id.inequality.family, p, ms, kind, direction, grid, policy)
    out = []
    for m in ms:
        res = sweep[m]
        margin = res.minimum - bound
        verdict = Verdict.SATISFIED if margin >= -tolerance else Verdict.VIOLATED
        out.append(BoundCheck(id, p, m, True, hyp.margin, bound, res.minimum,
                              res.argmin, margin, verdict))
    return out


def check_lemma(which: Lemma, p: QParams, grid: DiskGrid,
                policy: TruncationPolicy = TruncationPolicy(),
                tolerance: float = 1e-9) -> LemmaCheck:
    """Sampled sup of |h| and |h'| against the closed-form modulus bounds."""
    value_id = Inequality.L1_VALUE if which is Lemma.L1 else Inequality.L2_VALUE
    deriv_id = Inequality.L1_DERIV if which is Lemma.L1 else Inequality.L2_DERIV
    family = value_id.family
    hyp = hypothesis_check(value_id, p)
    if not hyp.holds:
        return LemmaCheck(which, p, False, hyp.margin, None, None, None, None,
                          None, None, Verdict.HYPOTHESIS_FAILED, Verdict.HYPOTHESIS_FAILED)
    vbound = lemma_bound(value_id, p)
    dbound = lemma_bound(deriv_id, p)
    max_v, arg_v = 0.0, 0j
    max_d, arg_d = 1.0, 0j  # |h'(0)| = 1 exactly
    for z in sample_disk(grid):
        av = abs(eval_h(family, p, z, policy).value)
        ad = abs(eval_h_deriv(family, p, z, policy).value)
        if av > max_v:
            max_v, arg_v = av, z
        if ad > max_d:
            max_d, arg_d = ad, z
    vv = Verdict.SATISFIED if vbound - max_v >= -tolerance else Verdict.VIOLATED
    dv = Verdict.SATISFIED if dbound - max_d >= -tolerance else Verdict.VIOLATED
    return LemmaCheck(which, p, True, hyp.margin, vbound, dbound,
                      max_v, max_d, arg_v, arg_d, vv, dv)


def mobius_witness_eval(id: InequalityId, p: QParams, m: int, z: complex,
                        policy: TruncationPolicy = TruncationPolicy()) -> MobiusWitness:
    """Witness w with (1+w)/(1-w) = scale * (ratio - bound).

    |w| <= 1 at a point is equivalent to the bound holding there; the
    pattern bounds make w(0) = 0 exactly, while literal bounds above 1
    drive |w(0)| past 1.
    """
    ineq = id.inequality
    scale = proof_scale(ineq, p)
    bound = bound_value(id, p)
    kind, direction = _ratio_kind_direction(ineq)
    full_eval, part_eval = _pair_evaluators(kind)
    z = complex(z)
    fz = full_eval(ineq.family, p, z, policy)
    gz = part_eval(ineq.family, p, PartialSpec(m), z)
    den = gz if direction is Direction.FULL_OVER_PARTIAL else fz
    if abs(den) < _DENOM_FLOOR:
        raise DenominatorNearZero(
            f"ratio denominator magnitude {abs(den):.3e} at z={z}",
            point=z, magnitude=abs(den))
    ratio = fz / gz if direction is Direction.FULL_OVER_PARTIAL else gz / fz
    r = scale * (ratio - bound)
    if abs(r + 1.0) < _WITNESS_FLOOR:
        raise WitnessSingular(f"shifted ratio hits -1 at z={z}", point=z)
    return MobiusWitness(id, z, (r - 1.0) / (r + 1.0))


def _axis(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValidationError(f"steps must be positive, got {steps!r}")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def atlas(ineq: Inequality, variant: Variant, q_range: tuple[float, float],
          nu_range: tuple[float, float], steps: tuple[int, int], m: int,
          grid: DiskGrid, policy: TruncationPolicy = TruncationPolicy(),
          tolerance: float = 1e-9) -> AtlasReport:
    """Verdict scan over a (q, nu) rectangle.

    Cell evaluation failures (near-zero denominators, truncation) become
    per-cell diagnostics instead of aborting the scan.
    """
    if not (0.0 < q_range[0] <= q_range[1] < 1.0):
        raise ValidationError(f"q range must sit inside (0, 1), got {q_range!r}")
    if not (-1.0 < nu_range[0] <= nu_range[1]):
        raise ValidationError(f"nu range must sit inside (-1, inf), got {nu_range!r}")
    id = InequalityId(ineq, variant)
    cells: list[BoundCheck] = []
    errors: list[AtlasCellError] = []
    for q in _axis(q_range[0], q_range[1], steps[0]):
        for nu in _axis(nu_range[0], nu_range[1], steps[1]):
            p = QParams(q, nu)
            try:
                cells.append(check_inequality(id, p, m, grid, policy, tolerance))
            except QbpError as exc:
                errors.append(AtlasCellError(q, nu, f"{type(exc).__name__}: {exc}"))
    return AtlasReport(id, m, tuple(cells), tuple(errors))
