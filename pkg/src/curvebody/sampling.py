"""Seeded generators of random test inputs."""

from __future__ import annotations

import numpy as np

from .kinematics import PhaseState
from .ring import Biquaternion, RingVector3, SpaceSign

# geodesic radius bounds of random points around the base point: two such
# sphere points stay closer than pi/2, so every chart construction is defined
MAX_RADIUS = {SpaceSign.SPHERE: 0.6, SpaceSign.HYPERBOLIC: 1.5}


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _unit(rng, n):
    e = rng.normal(size=(n, 3))
    return e / np.linalg.norm(e, axis=-1, keepdims=True)


def radius_to_chart(rho, sign):
    """Chart length of a point at geodesic distance rho from the origin."""
    return np.tan(rho) if SpaceSign.parse(sign) is SpaceSign.SPHERE else np.tanh(rho)


def random_biquaternions(rng, n: int, sign) -> Biquaternion:
    rng = _rng(rng)
    return Biquaternion.from_components(rng.normal(size=(n, 8)), SpaceSign.parse(sign))


def random_ring_vectors(rng, n: int, sign, scale: float = 0.3) -> RingVector3:
    rng = _rng(rng)
    return RingVector3(scale * rng.normal(size=(n, 3)), scale * rng.normal(size=(n, 3)), SpaceSign.parse(sign))


def random_points(rng, n: int, sign) -> np.ndarray:
    rng = _rng(rng)
    sign = SpaceSign.parse(sign)
    rho = rng.uniform(0.0, MAX_RADIUS[sign], size=n)
    return _unit(rng, n) * radius_to_chart(rho, sign)[:, None]


def random_masses(rng, n: int):
    rng = _rng(rng)
    return rng.uniform(0.5, 2.0, size=n), rng.uniform(0.5, 2.0, size=n)


def random_states(rng, n: int, sign) -> PhaseState:
    """Random positions in the safe ball with unit-normal chart velocities."""
    rng = _rng(rng)
    sign = SpaceSign.parse(sign)
    v1 = random_points(rng, n, sign)
    v2 = random_points(rng, n, sign)
    return PhaseState(v1, v2, rng.normal(size=(n, 3)), rng.normal(size=(n, 3)), sign)


def dumbbell_states(rng, n: int, sign, m1, m2, r=None, rdot=None, spin=True) -> PhaseState:
    """States whose center of mass sits at rest at the origin.

    The particles lie on a line through the origin at distances rho1, rho2
    with m1 sin rho1 = m2 sin rho2 (sinh for the hyperbolic space), breathe
    along that line and optionally rotate rigidly about the origin.
    """
    rng = _rng(rng)
    sign = SpaceSign.parse(sign)
    sph = sign is SpaceSign.SPHERE
    m1 = np.broadcast_to(np.asarray(m1, dtype=float), (n,))
    m2 = np.broadcast_to(np.asarray(m2, dtype=float), (n,))
    if r is None:
        r = rng.uniform(0.1, 1.0, size=n)
    r = np.broadcast_to(np.asarray(r, dtype=float), (n,))
    if rdot is None:
        rdot = rng.normal(size=n)
    rdot = np.broadcast_to(np.asarray(rdot, dtype=float), (n,))
    sin, cos = (np.sin, np.cos) if sph else (np.sinh, np.cosh)
    rho1 = np.arctan2(m2 * sin(r), m1 + m2 * cos(r)) if sph else np.arctanh(m2 * sin(r) / (m1 + m2 * cos(r)))
    rho2 = r - rho1
    # keep m1 sin rho1 = m2 sin rho2 while r changes at rate rdot
    k = m1 * cos(rho1) + m2 * cos(rho2)
    rho1dot = rdot * m2 * cos(rho2) / k
    rho2dot = rdot * m1 * cos(rho1) / k
    e = _unit(rng, n)
    a1 = radius_to_chart(rho1, sign)
    a2 = radius_to_chart(rho2, sign)
    d1 = (1.0 + a1 ** 2) if sph else (1.0 - a1 ** 2)
    d2 = (1.0 + a2 ** 2) if sph else (1.0 - a2 ** 2)
    v1 = -a1[:, None] * e
    v2 = a2[:, None] * e
    w1 = -(d1 * rho1dot)[:, None] * e
    w2 = (d2 * rho2dot)[:, None] * e
    if spin:
        omega = rng.normal(size=(n, 3))
        w1 = w1 + np.cross(omega, v1)
        w2 = w2 + np.cross(omega, v2)
    return PhaseState(v1, v2, w1, w2, sign)


def collinear_states(rng, n: int, sign, r: float) -> PhaseState:
    """Radial-only states: both particles move along the chart line joining them.

    The chart offset between the particles is r, so the geodesic separation
    is r to leading order; for a fixed seed only the separation changes with r.
    """
    rng = _rng(rng)
    sign = SpaceSign.parse(sign)
    c = random_points(rng, n, sign)
    e = _unit(rng, n)
    speeds = rng.normal(size=(n, 2))
    v1 = c - 0.5 * r * e
    v2 = c + 0.5 * r * e
    return PhaseState(v1, v2, speeds[:, :1] * e, speeds[:, 1:] * e, sign)
