"""Central potentials, chart equations of motion and an RK4 integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartDomain, ChartExit, PotentialSingularity, ValidationError
from .kinematics import PhaseState
from .lagrangian import kinetic_chart
from .ring import SpaceSign

POTENTIAL_KINDS = ("free", "coulomb", "oscillator")
COLLISION_R = 1e-6
SPHERE_GUARD = math.tan(math.pi / 2 - 1e-6)
HYPERBOLIC_GUARD = 1 - 1e-9


@dataclass(frozen=True)
class PotentialSpec:
    """V(r) = -alpha cot r | -alpha coth r (coulomb), omega^2/2 tan^2 r | tanh^2 r."""

    kind: str = "free"
    alpha: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValidationError("potential", f"kind must be one of {POTENTIAL_KINDS}")

    @property
    def singular_at_contact(self) -> bool:
        return self.kind == "coulomb" and self.alpha != 0


def potential_eval(spec: PotentialSpec, r, sign):
    """Return (V, dV/dr) at separation r."""
    sphere = SpaceSign.parse(sign) is SpaceSign.SPHERE
    r = np.asarray(r, dtype=float)
    if spec.kind == "free":
        z = np.zeros_like(r)
        return z, z.copy()
    if spec.kind == "coulomb":
        if np.any(~(r > 0)) or (sphere and np.any(r >= math.pi)):
            raise PotentialSingularity(f"coulomb potential singular at r = {np.min(r):.6g}")
        if sphere:
            s = np.sin(r)
            return -spec.alpha * np.cos(r) / s, spec.alpha / s ** 2
        s = np.sinh(r)
        return -spec.alpha * np.cosh(r) / s, spec.alpha / s ** 2
    # oscillator
    w2 = spec.omega ** 2
    if sphere:
        c = np.cos(r)
        if np.any(np.abs(c) < 1e-15):
            raise PotentialSingularity("oscillator potential singular at r = pi/2")
        t = np.tan(r)
        return 0.5 * w2 * t ** 2, w2 * t / c ** 2
    t = np.tanh(r)
    return 0.5 * w2 * t ** 2, w2 * t / np.cosh(r) ** 2


def _lam(v, sigma):
    return 1.0 + sigma * np.sum(v * v, axis=-1)


def separation(v1, v2, sigma):
    """(r, c, s): distance, its cos/cosh and sin/sinh, from chart vectors."""
    l1 = _lam(v1, sigma)
    l2 = _lam(v2, sigma)
    root = np.sqrt(l1 * l2)
    c = (1.0 + sigma * np.sum(v1 * v2, axis=-1)) / root
    d = v2 - v1
    cr = np.cross(v1, v2)
    s = np.sqrt(np.maximum(np.sum(d * d, axis=-1) + sigma * np.sum(cr * cr, axis=-1), 0.0)) / root
    r = np.arctan2(s, c) if sigma == 1 else np.arcsinh(s)
    return r, c, s


def distance_gradient(v1, v2, sigma):
    """(dr/dv1, dr/dv2) of the geodesic distance."""
    l1 = _lam(v1, sigma)[..., None]
    l2 = _lam(v2, sigma)[..., None]
    root = np.sqrt(l1 * l2)
    r, c, s = separation(v1, v2, sigma)
    c = c[..., None]
    dc1 = sigma * v2 / root - c * sigma * v1 / l1
    dc2 = sigma * v1 / root - c * sigma * v2 / l2
    # c = cos r -> dr/dc = -1/sin r ; c = cosh r -> dr/dc = 1/sinh r
    drdc = (-sigma / s)[..., None]
    return drdc * dc1, drdc * dc2


def geodesic_acceleration(v, w, sigma):
    """-Gamma^a_bc w^b w^c for the Beltrami chart: 2 sigma (v.w) w / lam."""
    vw = np.sum(v * w, axis=-1)[..., None]
    return 2.0 * sigma * vw * w / _lam(v, sigma)[..., None]


def _inverse_metric_apply(v, f, sigma):
    lm = _lam(v, sigma)[..., None]
    return lm * (f + sigma * v * np.sum(v * f, axis=-1)[..., None])


def eom_rhs(state: PhaseState, m1, m2, pot: PotentialSpec):
    """Chart accelerations (a1, a2) from the Euler-Lagrange equations."""
    sigma = int(state.sign)
    v1, v2, w1, w2 = state.v1, state.v2, state.w1, state.w2
    if np.any(_lam(v1, sigma) <= 0) or np.any(_lam(v2, sigma) <= 0):
        raise ChartDomain("state outside the chart")
    a1 = geodesic_acceleration(v1, w1, sigma)
    a2 = geodesic_acceleration(v2, w2, sigma)
    if pot.kind != "free":
        r, _, _ = separation(v1, v2, sigma)
        _, dv = potential_eval(pot, r, state.sign)
        g1, g2 = distance_gradient(v1, v2, sigma)
        dv = np.asarray(dv)[..., None]
        a1 = a1 - _inverse_metric_apply(v1, dv * g1, sigma) / m1
        a2 = a2 - _inverse_metric_apply(v2, dv * g2, sigma) / m2
    return a1, a2


def total_energy(state: PhaseState, m1, m2, pot: PotentialSpec):
    """(kinetic, potential, r)."""
    r, _, _ = separation(state.v1, state.v2, int(state.sign))
    v, _ = potential_eval(pot, r, state.sign)
    return kinetic_chart(state, m1, m2), v, r


@dataclass(frozen=True, eq=False)
class Sample:
    step: int
    t: float
    state: PhaseState
    kinetic: float
    potential: float
    r: float

    @property
    def energy(self) -> float:
        return self.kinetic + self.potential


def _dvdr(pot: PotentialSpec, r: float, sphere: bool) -> float:
    # scalar twin of potential_eval for the integrator hot loop
    if pot.kind == "coulomb":
        if not r > 0 or (sphere and r >= math.pi):
            raise PotentialSingularity(f"coulomb potential singular at r = {r:.6g}")
        s = math.sin(r) if sphere else math.sinh(r)
        return pot.alpha / (s * s)
    w2 = pot.omega ** 2
    if sphere:
        c = math.cos(r)
        if abs(c) < 1e-15:
            raise PotentialSingularity("oscillator potential singular at r = pi/2")
        return w2 * math.tan(r) / (c * c)
    c = math.cosh(r)
    return w2 * math.tanh(r) / (c * c)


def _deriv(y, m1, m2, pot, sigma):
    """d/dt of the flat state [v1, v2, w1, w2] using plain floats."""
    x1, y1, z1, x2, y2, z2, a1, b1, c1, a2, b2, c2 = y
    l1 = 1.0 + sigma * (x1 * x1 + y1 * y1 + z1 * z1)
    l2 = 1.0 + sigma * (x2 * x2 + y2 * y2 + z2 * z2)
    if not (l1 > 0 and l2 > 0):
        raise ChartDomain("state outside the chart")
    k1 = 2.0 * sigma * (x1 * a1 + y1 * b1 + z1 * c1) / l1
    k2 = 2.0 * sigma * (x2 * a2 + y2 * b2 + z2 * c2) / l2
    ax1, ay1, az1 = k1 * a1, k1 * b1, k1 * c1
    ax2, ay2, az2 = k2 * a2, k2 * b2, k2 * c2
    if pot.kind != "free":
        root = math.sqrt(l1 * l2)
        cc = (1.0 + sigma * (x1 * x2 + y1 * y2 + z1 * z2)) / root
        dx, dy, dz = x2 - x1, y2 - y1, z2 - z1
        cx, cy, cz = y1 * z2 - z1 * y2, z1 * x2 - x1 * z2, x1 * y2 - y1 * x2
        sn = math.sqrt(max(dx * dx + dy * dy + dz * dz + sigma * (cx * cx + cy * cy + cz * cz), 0.0)) / root
        r = math.atan2(sn, cc) if sigma == 1 else math.asinh(sn)
        if sn == 0.0:
            raise PotentialSingularity("coincident particles")
        k = _dvdr(pot, r, sigma == 1) * (-sigma / sn)
        # force = k * dc/dv_i, then raised with g^-1 = lam (I + sigma v v^T)
        f1x = k * sigma * (x2 / root - cc * x1 / l1)
        f1y = k * sigma * (y2 / root - cc * y1 / l1)
        f1z = k * sigma * (z2 / root - cc * z1 / l1)
        f2x = k * sigma * (x1 / root - cc * x2 / l2)
        f2y = k * sigma * (y1 / root - cc * y2 / l2)
        f2z = k * sigma * (z1 / root - cc * z2 / l2)
        p1 = sigma * (x1 * f1x + y1 * f1y + z1 * f1z)
        p2 = sigma * (x2 * f2x + y2 * f2y + z2 * f2z)
        g1 = l1 / m1
        g2 = l2 / m2
        ax1 -= g1 * (f1x + x1 * p1)
        ay1 -= g1 * (f1y + y1 * p1)
        az1 -= g1 * (f1z + z1 * p1)
        ax2 -= g2 * (f2x + x2 * p2)
        ay2 -= g2 * (f2y + y2 * p2)
        az2 -= g2 * (f2z + z2 * p2)
    return [a1, b1, c1, a2, b2, c2, ax1, ay1, az1, ax2, ay2, az2]


def rk4_step(y, dt, m1, m2, pot, sigma):
    """One classic RK4 step on a list of 12 floats."""
    k1 = _deriv(y, m1, m2, pot, sigma)
    k2 = _deriv([a + 0.5 * dt * b for a, b in zip(y, k1)], m1, m2, pot, sigma)
    k3 = _deriv([a + 0.5 * dt * b for a, b in zip(y, k2)], m1, m2, pot, sigma)
    k4 = _deriv([a + dt * b for a, b in zip(y, k3)], m1, m2, pot, sigma)
    h = dt / 6.0
    return [a + h * (p + 2.0 * q + 2.0 * r + s) for a, p, q, r, s in zip(y, k1, k2, k3, k4)]


def _sample(step, t, y, m1, m2, pot, sign):
    y = np.array(y, dtype=float)
    st = PhaseState(y[0:3], y[3:6], y[6:9], y[9:12], sign)
    kin, v, r = total_energy(st, m1, m2, pot)
    return Sample(step, t, st, float(kin), float(v), float(r))


def integrate(state0: PhaseState, m1, m2, pot: PotentialSpec, dt: float, steps: int, every: int = 1):
    """Fixed-step RK4 in the chart; returns samples every ``every`` steps.

    The first and the last step are always sampled.  Raises ChartExit when a
    particle leaves the chart guard and PotentialSingularity on collision;
    both carry the samples recorded so far.
    """
    if not dt > 0:
        raise ValidationError("dt", "must be positive")
    if steps < 1 or every < 1:
        raise ValidationError("steps", "steps and output interval must be >= 1")
    sign = state0.sign
    sigma = int(sign)
    guard = SPHERE_GUARD if sigma == 1 else HYPERBOLIC_GUARD
    y = [float(x) for x in np.ravel(state0.as_vector())]
    if len(y) != 12:
        raise ValueError("integrate expects a single (unbatched) state")
    m1, m2 = float(m1), float(m2)
    out = [_sample(0, 0.0, y, m1, m2, pot, sign)]
    last = 0
    for n in range(1, steps + 1):
        d_old = [y[3] - y[0], y[4] - y[1], y[5] - y[2]]
        try:
            y_new = rk4_step(y, dt, m1, m2, pot, sigma)
        except PotentialSingularity as exc:
            raise PotentialSingularity(f"collision during step {n}: {exc}", out, last) from None
        except (ChartDomain, ValueError, OverflowError, ZeroDivisionError):
            raise ChartExit(f"trajectory left the chart during step {n}", out, last) from None
        if not all(math.isfinite(x) for x in y_new):
            raise ChartExit(f"non-finite state during step {n}", out, last)
        if max(math.hypot(*y_new[0:3]), math.hypot(*y_new[3:6])) > guard:
            raise ChartExit(f"particle crossed the chart guard at step {n}", out, last)
        if pot.singular_at_contact:
            v1, v2 = np.array(y_new[0:3]), np.array(y_new[3:6])
            r_new, _, _ = separation(v1, v2, sigma)
            # separation vector flipping within one step: the particles passed through each other
            if r_new < COLLISION_R:
                raise PotentialSingularity(f"collision at step {n} (r = {float(r_new):.3e})", out, last)
            if float(np.dot(d_old, v2 - v1)) < 0:
                raise PotentialSingularity(f"collision at step {n}: particles passed through each other", out, last)
        y = y_new
        last = n
        if n % every == 0 or n == steps:
            out.append(_sample(n, n * dt, y, m1, m2, pot, sign))
    return out
