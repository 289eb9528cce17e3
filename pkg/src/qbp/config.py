"""Run configuration: defaults, key = value config files, CLI merging.

The config file is plain text, one `key = value` per line, `#` comments and
blank lines allowed. Recognized keys mirror the RunConfig fields; anything
else is rejected so a corrupted file fails loudly instead of half-applying.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ValidationError
from .series import TruncationPolicy
from .verifier import DiskGrid

__all__ = ["RunConfig", "load_config", "parse_config_text"]

DEFAULT_RADII = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99)
DEFAULT_M_SWEEP = (1, 2, 3, 5, 10)


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    epsilon: float = 1e-15
    max_terms: int = 500
    radii: tuple[float, ...] = DEFAULT_RADII
    angles_per_radius: int = 64
    random_points: int = 256
    seed: int = 12345
    m_sweep: tuple[int, ...] = DEFAULT_M_SWEEP

    def __post_init__(self):
        if not (self.tolerance > 0.0):
            raise ValidationError(f"tolerance must be positive, got {self.tolerance!r}")
        if not (self.epsilon > 0.0):
            raise ValidationError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.max_terms < 2:
            raise ValidationError(f"max_terms must be >= 2, got {self.max_terms!r}")
        if not self.m_sweep or any(m < 1 for m in self.m_sweep):
            raise ValidationError(f"m_sweep entries must be >= 1, got {self.m_sweep!r}")

    def policy(self) -> TruncationPolicy:
        return TruncationPolicy(epsilon=self.epsilon, max_terms=self.max_terms)

    def grid(self) -> DiskGrid:
        return DiskGrid(radii=self.radii, angles_per_radius=self.angles_per_radius,
                        random_points=self.random_points, seed=self.seed)

    def to_text(self) -> str:
        """Render in the config-file format; parse_config_text round-trips it."""
        return "\n".join([
            f"tolerance = {self.tolerance!r}",
            f"epsilon = {self.epsilon!r}",
            f"max_terms = {self.max_terms}",
            f"radii = {','.join(repr(r) for r in self.radii)}",
            f"angles_per_radius = {self.angles_per_radius}",
            f"random_points = {self.random_points}",
            f"seed = {self.seed}",
            f"m_sweep = {','.join(str(m) for m in self.m_sweep)}",
        ]) + "\n"


_FLOAT_KEYS = {"tolerance", "epsilon"}
_INT_KEYS = {"max_terms", "angles_per_radius", "random_points", "seed"}


def parse_config_text(text: str) -> dict:
    """Parse key = value lines into a RunConfig field dict."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _FLOAT_KEYS:
                fields[key] = float(value)
            elif key in _INT_KEYS:
                fields[key] = int(value)
            elif key == "radii":
                fields[key] = tuple(float(v) for v in value.split(",") if v.strip())
            elif key == "m_sweep":
                fields[key] = tuple(int(v) for v in value.split(",") if v.strip())
            else:
                raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ValidationError(f"config line {lineno}: bad value for {key!r}: {exc}") from exc
    return fields


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional file plus explicit overrides."""
    cfg = RunConfig()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read config file {path!r}: {exc}") from exc
        fields = parse_config_text(text)
        if fields:
            cfg = replace(cfg, **fields)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg
