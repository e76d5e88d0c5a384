"""Tracker configuration and its flat ``key = value`` file format."""

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .likelihood import DEFAULT_TRUNCATION, LikelihoodParams
from .motion import MotionParams
from .representation import TruncationSpec

__all__ = ["TrackerConfig", "load_config", "dump_config"]

MODES = ("particle", "sliding")

# file keys that differ from the attribute name
_ALIASES = {"lambda": "lam", "n1": "patch_rows", "n2": "patch_cols", "v": "particles",
            "cap": "buffer_cap"}


@dataclass(frozen=True)
class TrackerConfig:
    patch_rows: int = 30
    patch_cols: int = 30
    particles: int = 200
    gamma_pos: float = 1.2
    gamma_neg: float = 1.2
    lam: float = 0.1
    k: int = 15
    buffer_cap: int = 500
    delta_u: int = DEFAULT_TRUNCATION.delta_u
    delta_v: int = DEFAULT_TRUNCATION.delta_v
    delta_w: int = DEFAULT_TRUNCATION.delta_w
    sigma_x: float = 6.0
    sigma_y: float = 6.0
    sigma_s: float = 0.02
    n_positive: int = 5
    n_negative: int = 10
    # annulus radii as multiples of max(box w, box h)
    neg_inner: float = 1.0
    neg_outer: float = 2.0
    init_jitter: int = 2
    seed: int = 0
    mode: str = "particle"
    sw_stride: int = 2
    sw_radius: int = 12
    sw_scales: tuple = (0.95, 1.0, 1.05)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.patch_rows < 1 or self.patch_cols < 1:
            raise ValueError("patch dimensions must be positive")
        if self.buffer_cap < 1:
            raise ValueError("buffer cap must be >= 1")
        if self.n_positive < 1 or self.n_negative < 1:
            raise ValueError("sample counts must be >= 1")
        if not 0 < self.neg_inner < self.neg_outer:
            raise ValueError("need 0 < neg_inner < neg_outer")
        if self.sw_stride < 1 or self.sw_radius < 0 or not self.sw_scales:
            raise ValueError("invalid sliding-window settings")
        # validate the sub-parameter groups eagerly
        self.likelihood_params()
        self.motion_params()

    @property
    def patch_dims(self):
        return (self.patch_rows, self.patch_cols)

    def truncation(self):
        return TruncationSpec(self.delta_u, self.delta_v, self.delta_w)

    def likelihood_params(self):
        return LikelihoodParams(self.gamma_pos, self.gamma_neg, self.lam, self.k,
                                self.truncation())

    def motion_params(self):
        return MotionParams(self.sigma_x, self.sigma_y, self.sigma_s, self.particles)

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


def _coerce(name, raw):
    kinds = {f.name: f.type for f in fields(TrackerConfig)}
    kind = kinds[name]
    if name == "sw_scales":
        return tuple(float(v) for v in raw.replace(",", " ").split())
    if kind in ("int", int):
        return int(raw)
    if kind in ("float", float):
        return float(raw)
    return raw


def parse_config(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(TrackerConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key == "patch_dims":
            rows, cols = (int(v) for v in raw.replace(",", " ").split())
            values["patch_rows"], values["patch_cols"] = rows, cols
            continue
        name = _ALIASES.get(key, key)
        if name not in known:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        values[name] = _coerce(name, raw)
    return TrackerConfig(**values)


def load_config(path):
    """Read a :class:`TrackerConfig`; omitted keys take their defaults."""
    return parse_config(Path(path).read_text())


def dump_config(cfg):
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "sw_scales":
            value = ", ".join(repr(v) for v in value)
        elif f.name == "lam":
            lines.append(f"lambda = {value!r}")
            continue
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
