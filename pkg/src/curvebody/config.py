"""Flat TOML run configuration for the ``simulate`` command."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .dynamics import POTENTIAL_KINDS, PotentialSpec
from .errors import ChartDomain, ParseError, UnknownKey, ValidationError
from .kinematics import PhaseState
from .ring import SpaceSign
from .space import ChartPoint

KNOWN_KEYS = (
    "space", "m1", "m2", "q1", "q2", "q1dot", "q2dot",
    "potential", "alpha", "omega", "dt", "steps", "output_every", "seed",
)
REQUIRED_KEYS = ("space", "m1", "m2", "q1", "q2", "dt", "steps")


@dataclass(frozen=True)
class SimConfig:
    space: str
    m1: float
    m2: float
    q1: tuple
    q2: tuple
    dt: float
    steps: int
    q1dot: tuple = (0.0, 0.0, 0.0)
    q2dot: tuple = (0.0, 0.0, 0.0)
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    output_every: int = 1
    seed: int = 0

    @property
    def sign(self) -> SpaceSign:
        return SpaceSign.parse(self.space)

    def initial_state(self) -> PhaseState:
        return PhaseState(np.array(self.q1), np.array(self.q2),
                          np.array(self.q1dot), np.array(self.q2dot), self.sign)


def _line_of(exc: Exception) -> int | None:
    line = getattr(exc, "lineno", None)
    if line is None:
        m = re.search(r"line (\d+)", str(exc))
        line = int(m.group(1)) if m else None
    return line


def _real(key, val, positive=False) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ValidationError(key, f"expected a number, got {val!r}")
    val = float(val)
    if not math.isfinite(val):
        raise ValidationError(key, "must be finite")
    if positive and not val > 0:
        raise ValidationError(key, "must be > 0")
    return val


def _int(key, val, minimum) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise ValidationError(key, f"expected an integer, got {val!r}")
    if val < minimum:
        raise ValidationError(key, f"must be >= {minimum}")
    return val


def _triple(key, val) -> tuple:
    if not isinstance(val, list) or len(val) != 3:
        raise ValidationError(key, "expected an array of three numbers")
    return tuple(_real(key, x) for x in val)


def _potential(doc) -> PotentialSpec:
    raw = doc.get("potential", "free")
    alpha = doc.get("alpha", 0.0)
    omega = doc.get("omega", 0.0)
    if isinstance(raw, dict):
        extra = set(raw) - {"kind", "alpha", "omega"}
        if extra:
            raise UnknownKey(f"potential.{sorted(extra)[0]}")
        if ("alpha" in raw and "alpha" in doc) or ("omega" in raw and "omega" in doc):
            raise ValidationError("potential", "parameter given twice")
        alpha = raw.get("alpha", alpha)
        omega = raw.get("omega", omega)
        raw = raw.get("kind", "free")
    if raw not in POTENTIAL_KINDS:
        raise ValidationError("potential", f"kind must be one of {', '.join(POTENTIAL_KINDS)}")
    return PotentialSpec(raw, _real("alpha", alpha), _real("omega", omega))


def parse_config(text: str) -> SimConfig:
    """Parse and validate a configuration document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc), _line_of(exc)) from None
    for key in doc:
        if key not in KNOWN_KEYS:
            raise UnknownKey(key)
    for key in REQUIRED_KEYS:
        if key not in doc:
            raise ValidationError(key, "missing required key")
    space = doc["space"]
    if space not in ("sphere", "hyperbolic"):
        raise ValidationError("space", "must be 'sphere' or 'hyperbolic'")
    cfg = SimConfig(
        space=space,
        m1=_real("m1", doc["m1"], positive=True),
        m2=_real("m2", doc["m2"], positive=True),
        q1=_triple("q1", doc["q1"]),
        q2=_triple("q2", doc["q2"]),
        q1dot=_triple("q1dot", doc.get("q1dot", [0.0, 0.0, 0.0])),
        q2dot=_triple("q2dot", doc.get("q2dot", [0.0, 0.0, 0.0])),
        potential=_potential(doc),
        dt=_real("dt", doc["dt"], positive=True),
        steps=_int("steps", doc["steps"], 1),
        output_every=_int("output_every", doc.get("output_every", 1), 1),
        seed=_int("seed", doc.get("seed", 0), 0),
    )
    for key in ("q1", "q2"):
        try:
            ChartPoint(getattr(cfg, key), cfg.sign)
        except ChartDomain as exc:
            raise ValidationError(key, str(exc)) from None
    return cfg


def load_config(path) -> SimConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_config(text)
