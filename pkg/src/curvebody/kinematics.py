"""Center of mass and relative variables of a two-body system.

Notation: X1, X2 embedding points, Xc the normalized mass-weighted sum,
Y12 = sigma X2 bar(X1), Y1 = sigma X1 bar(Xc), Y2 = sigma X2 bar(Xc).  The
relative biquaternions are unit (Y bar(Y) = 1) in both spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartInfinity, DegenerateCM, ValidationError
from .ring import Biquaternion, RingScalar, RingVector3, SpaceSign, bq_mul
from .space import (
    ChartPoint,
    pair_vector,
    point_to_embedding,
    point_velocity,
    vector_add,
)

DEGENERATE_TOL = 1e-10
CHART_INFINITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PhaseState:
    """Chart positions v1, v2 and chart velocities w1, w2."""

    v1: np.ndarray
    v2: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    sign: SpaceSign

    def __post_init__(self):
        for name in ("v1", "v2", "w1", "w2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape[-1:] != (3,):
                raise ValueError(f"{name} needs a trailing axis of length 3")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "sign", SpaceSign.parse(self.sign))

    def config(self, m1, m2) -> "TwoBodyConfig":
        return TwoBodyConfig.from_arrays(m1, m2, self.v1, self.v2, self.w1, self.w2, self.sign)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.v1, self.v2, self.w1, self.w2], axis=-1)

    @classmethod
    def from_vector(cls, y, sign) -> "PhaseState":
        y = np.asarray(y, dtype=float)
        return cls(y[..., 0:3], y[..., 3:6], y[..., 6:9], y[..., 9:12], sign)

    def __getitem__(self, idx) -> "PhaseState":
        if not isinstance(idx, tuple):
            idx = (idx,)
        idx = idx + (slice(None),)
        return PhaseState(self.v1[idx], self.v2[idx], self.w1[idx], self.w2[idx], self.sign)


@dataclass(frozen=True, eq=False)
class TwoBodyConfig:
    m1: float
    m2: float
    p1: ChartPoint
    p2: ChartPoint
    v1dot: np.ndarray
    v2dot: np.ndarray

    def __post_init__(self):
        m1 = np.asarray(self.m1, dtype=float)
        m2 = np.asarray(self.m2, dtype=float)
        if np.any(~(m1 > 0)) or np.any(~(m2 > 0)):
            raise ValidationError("mass", "masses must be strictly positive")
        if self.p1.sign != self.p2.sign:
            raise ValidationError("sign", "both points must live in the same space")
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)
        object.__setattr__(self, "v1dot", np.asarray(self.v1dot, dtype=float))
        object.__setattr__(self, "v2dot", np.asarray(self.v2dot, dtype=float))

    @property
    def sign(self) -> SpaceSign:
        return self.p1.sign

    @classmethod
    def from_arrays(cls, m1, m2, v1, v2, w1, w2, sign) -> "TwoBodyConfig":
        sign = SpaceSign.parse(sign)
        return cls(m1, m2, ChartPoint(v1, sign), ChartPoint(v2, sign), w1, w2)

    def embeddings(self):
        return point_to_embedding(self.p1), point_to_embedding(self.p2)

    def velocities(self):
        return point_velocity(self.p1, self.v1dot), point_velocity(self.p2, self.v2dot)


@dataclass(frozen=True, eq=False)
class CenterOfMass:
    Xc: Biquaternion
    qc: ChartPoint


@dataclass(frozen=True, eq=False)
class RelativeSet:
    Y12: Biquaternion
    Y1: Biquaternion
    Y2: Biquaternion
    qy: RingVector3
    qy1: RingVector3
    qy2: RingVector3


@dataclass(frozen=True, eq=False)
class KinematicRates:
    Xc_dot: Biquaternion
    Y12_dot: Biquaternion
    Y1_dot: Biquaternion
    Y2_dot: Biquaternion


def _mass_sum(cfg: TwoBodyConfig, x1: Biquaternion, x2: Biquaternion):
    s = x1 * cfg.m1 + x2 * cfg.m2
    # s is Minkowski type, so its norm is the real number sigma S0^2 + |S|^2
    n = int(cfg.sign) * s.norm().re
    scale = (cfg.m1 + cfg.m2) ** 2
    if np.any(n <= DEGENERATE_TOL * scale):
        raise DegenerateCM("mass-weighted sum has (nearly) null norm")
    return s, n


def center_of_mass_embedding(cfg: TwoBodyConfig) -> Biquaternion:
    """Xc = (m1 X1 + m2 X2) / sqrt(+-(m1 X1 + m2 X2)(m1 bar X1 + m2 bar X2))."""
    x1, x2 = cfg.embeddings()
    s, n = _mass_sum(cfg, x1, x2)
    return s / np.sqrt(n)


def center_of_mass_chart(cfg: TwoBodyConfig) -> np.ndarray:
    """Chart of the center of mass as a flat weighted mean.

    The masses are reweighted by 1/sqrt(1 + q q-bar) = 1/sqrt(lam).
    """
    k1 = cfg.m1 / np.sqrt(cfg.p1.lam)
    k2 = cfg.m2 / np.sqrt(cfg.p2.lam)
    den = k1 + k2
    if np.any(np.abs(den) <= DEGENERATE_TOL * (cfg.m1 + cfg.m2)):
        raise DegenerateCM("center of mass at chart infinity")
    return (k1[..., None] * cfg.p1.v + k2[..., None] * cfg.p2.v) / den[..., None]


def center_of_mass(cfg: TwoBodyConfig) -> CenterOfMass:
    xc = center_of_mass_embedding(cfg)
    return CenterOfMass(xc, ChartPoint(center_of_mass_chart(cfg), cfg.sign))


def relative_variables(cfg: TwoBodyConfig, com: CenterOfMass | None = None) -> RelativeSet:
    sigma = int(cfg.sign)
    if com is None:
        com = center_of_mass(cfg)
    x1, x2 = cfg.embeddings()
    y12 = bq_mul(x2, x1.bar()) * sigma
    y1 = bq_mul(x1, com.Xc.bar()) * sigma
    y2 = bq_mul(x2, com.Xc.bar()) * sigma
    c = y12.s.re
    if np.any(np.abs(c) <= CHART_INFINITY_TOL):
        raise ChartInfinity("relative vector undefined at separation pi/2")
    qy = pair_vector(y12)
    if np.all(c > CHART_INFINITY_TOL):
        qy1, qy2 = per_particle_relative(cfg, RelativeSet(y12, y1, y2, qy, qy, qy))
    else:
        # beyond pi/2 on the sphere the mass-ratio formula has no real root
        qy1, qy2 = pair_vector(y1), pair_vector(y2)
    return RelativeSet(y12, y1, y2, qy, qy1, qy2)


def per_particle_relative(cfg: TwoBodyConfig, rel: RelativeSet, as_printed: bool = False):
    """Chart vectors of Y1 and Y2 built from qy and the mass ratio.

    s = sqrt(1 + qy qy-bar) equals 1 / scalar(Y12).  The vector from the
    center of mass to particle 1 points against qy, hence the minus sign in
    qy1; ``as_printed=True`` drops it (that variant fails to reconstruct
    particle 1 and is kept for the audit).
    """
    c = rel.Y12.s.re
    if np.any(c <= CHART_INFINITY_TOL):
        raise ChartInfinity("scalar(Y12) must be positive (separation below pi/2)")
    s = 1.0 / c
    one = np.ones_like(s)
    d1 = RingScalar.real(one + (cfg.m1 / cfg.m2) * s, cfg.sign)
    d2 = RingScalar.real(one + (cfg.m2 / cfg.m1) * s, cfg.sign)
    qy1 = rel.qy.scale(d1.invert())
    qy2 = rel.qy.scale(d2.invert())
    if not as_printed:
        qy1 = -qy1
    return qy1, qy2


def reconstruct_points(rel: RelativeSet, com: CenterOfMass):
    """q1 = <qy1, qc>, q2 = <qy2, qc> as ring vectors."""
    qc = com.qc.ring_vector()
    return vector_add(rel.qy1, qc), vector_add(rel.qy2, qc)


def kinematic_rates(cfg: TwoBodyConfig, com: CenterOfMass | None = None) -> KinematicRates:
    sigma = int(cfg.sign)
    if com is None:
        com = center_of_mass(cfg)
    x1, x2 = cfg.embeddings()
    x1d, x2d = cfg.velocities()
    s, n = _mass_sum(cfg, x1, x2)
    sd = x1d * cfg.m1 + x2d * cfg.m2
    # n = sigma S bar(S) is real, so ndot = 2 sigma Re scalar(Sdot bar(S))
    ndot = 2.0 * sigma * bq_mul(sd, s.bar()).s.re
    root = np.sqrt(n)
    xc = com.Xc
    xcd = sd / root - s * (0.5 * ndot / (n * root))
    y12d = (bq_mul(x2d, x1.bar()) + bq_mul(x2, x1d.bar())) * sigma
    y1d = (bq_mul(x1d, xc.bar()) + bq_mul(x1, xcd.bar())) * sigma
    y2d = (bq_mul(x2d, xc.bar()) + bq_mul(x2, xcd.bar())) * sigma
    return KinematicRates(xcd, y12d, y1d, y2d)
