"""Points of S^3 and H^3 (R = 1) in the embedding and in Beltrami charts.

A chart point is a real 3-vector ``v``; as a ring vector it is ``q = u v``.
The embedding point is the Minkowski-type unit biquaternion

    X = (u + sigma v) / sqrt(1 + sigma |v|^2),

i.e. the lift (1 + q)/sqrt(1 + q.q) applied to the base point X0 = u.
Beltrami charts are gnomonic on the sphere and Klein on the hyperboloid,
so geodesics are straight chart lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ChartDomain,
    EquatorSingularity,
    NonInvertible,
    NonInvertibleDenominator,
    NotUnit,
    NumericalDomain,
    SignMismatch,
    WrongSheet,
)
from .ring import Biquaternion, RingScalar, RingVector3, SpaceSign, bq_mul, minkowski_check

DISTANCE_GUARD = 1e-12
UNIT_TOL = 1e-10

PairVector = RingVector3


def lam(v, sign) -> np.ndarray:
    """Conformal factor 1 + sigma |v|^2 of the chart."""
    v = np.asarray(v, dtype=float)
    return 1.0 + int(sign) * np.sum(v * v, axis=-1)


@dataclass(frozen=True, eq=False)
class ChartPoint:
    v: np.ndarray
    sign: SpaceSign

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.shape[-1:] != (3,):
            raise ValueError(f"chart points need a trailing axis of length 3, got {v.shape}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "sign", SpaceSign.parse(self.sign))
        if np.any(~(lam(v, self.sign) > 0)):
            raise ChartDomain("1 + sigma |v|^2 must be positive (|v| < 1 in the Klein ball)")

    @property
    def lam(self) -> np.ndarray:
        return lam(self.v, self.sign)

    def ring_vector(self) -> RingVector3:
        return RingVector3.imaginary(self.v, self.sign)

    def __getitem__(self, idx) -> "ChartPoint":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return ChartPoint(self.v[idx + (slice(None),)], self.sign)


def point_to_embedding(p: ChartPoint) -> Biquaternion:
    sigma = int(p.sign)
    root = np.sqrt(p.lam)
    x0 = 1.0 / root
    vec = sigma * p.v / root[..., None]
    return Biquaternion(RingScalar(np.zeros_like(x0), x0, p.sign), RingVector3.real(vec, p.sign))


def embedding_to_point(x: Biquaternion, tol: float = 1e-12) -> ChartPoint:
    """Beltrami coordinates v = sigma * vec(X) / X0.

    On the sphere X and -X give the same chart point.
    """
    if not np.all(minkowski_check(x, max(tol, 1e-12) * 10)):
        raise ChartDomain("not a Minkowski-type biquaternion")
    x0 = x.x0
    if x.sign is SpaceSign.SPHERE:
        if np.any(np.abs(x0) <= tol):
            raise EquatorSingularity("X0 = 0: point at infinity of the gnomonic chart")
    elif np.any(x0 <= 0):
        raise WrongSheet("hyperbolic points need X0 > 0")
    v = int(x.sign) * x.v.re / x0[..., None]
    return ChartPoint(v, x.sign)


def point_velocity(p: ChartPoint, vdot) -> Biquaternion:
    """Time derivative of the embedding along a chart velocity."""
    sigma = int(p.sign)
    vdot = np.asarray(vdot, dtype=float)
    lm = p.lam
    root = np.sqrt(lm)
    vw = np.sum(p.v * vdot, axis=-1)
    k = sigma * vw / (lm * root)
    x0dot = -k
    vec = sigma * vdot / root[..., None] - (sigma * p.v) * k[..., None]
    return Biquaternion(RingScalar(np.zeros_like(x0dot), x0dot, p.sign), RingVector3.real(vec, p.sign))


def embedding_velocity_to_chart(x: Biquaternion, xdot: Biquaternion):
    """Chart position and velocity of an embedding point and its derivative."""
    p = embedding_to_point(x)
    sigma = int(x.sign)
    x0 = x.x0[..., None]
    w = sigma * (xdot.v.re * x0 - x.v.re * xdot.x0[..., None]) / x0 ** 2
    return p, w


def lift(q: RingVector3, normalize: bool = True) -> Biquaternion:
    """Unit biquaternion (1 + q)/sqrt(1 + q.q) attached to a pair vector.

    With ``normalize=False`` the bare 1 + q is returned; its chart is the
    same and no ring square root is needed.
    """
    one = RingScalar.real(np.ones(q.re.shape[:-1]), q.sign)
    b = Biquaternion(one, q)
    if not normalize:
        return b
    return b / (one + q.dot(q)).sqrt_real()


def pair_vector(q: Biquaternion) -> RingVector3:
    """(Q - bar Q)/(Q + bar Q): vector part over scalar part."""
    try:
        inv = q.s.invert()
    except NonInvertible as exc:
        raise NonInvertibleDenominator(str(exc)) from exc
    return q.v.scale(inv)


def vector_add(a: RingVector3, b: RingVector3) -> RingVector3:
    """Triangle rule <a, b> = (a + b + a x b) / (1 - a.b)."""
    den = 1.0 - a.dot(b)
    try:
        inv = den.invert()
    except NonInvertible as exc:
        raise NonInvertibleDenominator(f"1 - a.b is not invertible: {exc}") from exc
    return (a + b + a.cross(b)).scale(inv)


def vector_add_oracle(a: RingVector3, b: RingVector3) -> RingVector3:
    """Triangle rule recomputed as the chart of a product of lifts."""
    return pair_vector(bq_mul(lift(a, normalize=False), lift(b, normalize=False)))


def pair_transform(p1: ChartPoint, p2: ChartPoint) -> Biquaternion:
    """Q12 = sigma X2 bar(X1), the unit biquaternion taking X1 to X2."""
    x1 = point_to_embedding(p1)
    x2 = point_to_embedding(p2)
    return bq_mul(x2, x1.bar()) * int(p1.sign)


def distance_cosine(p1: ChartPoint, p2: ChartPoint) -> np.ndarray:
    """cos r (sphere) or cosh r (hyperbolic) between two chart points."""
    sigma = int(p1.sign)
    return (1.0 + sigma * np.sum(p1.v * p2.v, axis=-1)) / np.sqrt(p1.lam * p2.lam)


def distance_from_cosine(c, sign, guard: float = DISTANCE_GUARD) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if SpaceSign.parse(sign) is SpaceSign.SPHERE:
        if np.any(np.abs(c) > 1 + guard):
            raise NumericalDomain("cos r outside [-1, 1]")
        return np.arccos(np.clip(c, -1.0, 1.0))
    if np.any(c < 1 - guard):
        raise NumericalDomain("cosh r below 1")
    return np.arccosh(np.maximum(c, 1.0))


def geodesic_distance(p1: ChartPoint, p2: ChartPoint) -> np.ndarray:
    """Geodesic length between two chart points.

    The cosine comes from the scalar part of the pair transform; the sine
    from its vector part, which keeps small distances accurate.
    """
    if p1.sign != p2.sign:
        raise SignMismatch("points from different spaces")
    sigma = int(p1.sign)
    c = distance_cosine(p1, p2)
    distance_from_cosine(c, p1.sign)  # domain check only
    d = p2.v - p1.v
    cr = np.cross(p1.v, p2.v)
    # |vec(Q12)|^2 expressed in real chart quantities
    s2 = (np.sum(d * d, axis=-1) + sigma * np.sum(cr * cr, axis=-1)) / (p1.lam * p2.lam)
    s = np.sqrt(np.maximum(s2, 0.0))
    if sigma == 1:
        return np.arctan2(s, c)
    return np.arcsinh(s)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Unit biquaternion A acting by X -> A X star(bar(A))."""

    A: Biquaternion

    def __post_init__(self):
        n = self.A.norm()
        err = np.abs(n.re - 1.0) + np.abs(n.im)
        if np.any(err > UNIT_TOL):
            raise NotUnit(f"|A bar(A) - 1| = {np.max(err):.3e}")

    @property
    def sign(self) -> SpaceSign:
        return self.A.sign

    def apply(self, x: Biquaternion) -> Biquaternion:
        return isometry_apply(self, x)

    def conjugate(self, y: Biquaternion) -> Biquaternion:
        """Action A Y bar(A) on transformation-type biquaternions."""
        return bq_mul(bq_mul(self.A, y), self.A.bar())

    def apply_point(self, p: ChartPoint) -> ChartPoint:
        return embedding_to_point(self.apply(point_to_embedding(p)))


def isometry_apply(a: Isometry, x: Biquaternion) -> Biquaternion:
    return bq_mul(bq_mul(a.A, x), a.A.bar().star())


def _random_unit_quaternion(rng: np.random.Generator, sign: SpaceSign, shape) -> Biquaternion:
    q = rng.normal(size=tuple(shape) + (4,))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    return Biquaternion(RingScalar.real(q[..., 0], sign), RingVector3.real(q[..., 1:], sign))


def random_isometry(rng, sign, max_shift: float = 1.0, shape=()) -> Isometry:
    """Random element R1 * T * R2 of the motion group.

    R1, R2 are real unit quaternions (rotations about the base point) and
    T = cos a + u n sin a (sphere) or cosh a + u n sinh a (hyperbolic) a
    translation by 2a along n; every motion has this form.  ``rng`` may be
    a seed.  No distributional claim is made.
    """
    rng = np.random.default_rng(rng)
    sign = SpaceSign.parse(sign)
    shape = tuple(shape)
    r1 = _random_unit_quaternion(rng, sign, shape)
    r2 = _random_unit_quaternion(rng, sign, shape)
    n = rng.normal(size=shape + (3,))
    n /= np.linalg.norm(n, axis=-1, keepdims=True)
    a = rng.uniform(0.0, max_shift, size=shape)
    if sign is SpaceSign.SPHERE:
        c, s = np.cos(a), np.sin(a)
    else:
        c, s = np.cosh(a), np.sinh(a)
    t = Biquaternion(RingScalar.real(c, sign), RingVector3.imaginary(n * s[..., None], sign))
    return Isometry(bq_mul(bq_mul(r1, t), r2))


def metric_tensor(p: ChartPoint) -> np.ndarray:
    """Pullback of the embedding metric: (lam I - sigma v v^T) / lam^2."""
    sigma = int(p.sign)
    lm = p.lam[..., None, None]
    eye = np.eye(3)
    return (lm * eye - sigma * p.v[..., :, None] * p.v[..., None, :]) / lm ** 2


def metric_tensor_literal(p: ChartPoint) -> np.ndarray:
    """The metric with the inner sign as printed: (I + sigma v v^T / lam) / lam.

    Here q_a q_b = sigma v_a v_b and 1 + q^2 = lam.  Kept for the audit only.
    """
    sigma = int(p.sign)
    lm = p.lam[..., None, None]
    return (np.eye(3) + sigma * p.v[..., :, None] * p.v[..., None, :] / lm) / lm


def inverse_metric(p: ChartPoint) -> np.ndarray:
    sigma = int(p.sign)
    lm = p.lam[..., None, None]
    return lm * (np.eye(3) + sigma * p.v[..., :, None] * p.v[..., None, :])


def christoffel(p: ChartPoint) -> np.ndarray:
    """Gamma[..., a, b, c] = -sigma (v_b delta_ac + v_c delta_ab) / lam."""
    sigma = int(p.sign)
    v = p.v
    eye = np.eye(3)
    g = v[..., None, :, None] * eye[:, None, :] + v[..., None, None, :] * eye[:, :, None]
    return -sigma * g / p.lam[..., None, None, None]
