"""Kinetic terms of the two-body action in every relative-variable form.

The ground truth is the embedding form 1/2 sum m_i Xdot_i bar(Xdot_i),
identical to the chart form 1/2 sum m_i g(v_i)(w_i, w_i).  The forms in
relative variables (Y12, polar r/n, equal masses, small r) are written
for L' = 2T; every function here returns T so all values compare directly.

Printed forms are evaluated literally and reported; the corrected forms
use a frozen set of sign/operator fixes found by ``calibrate_corrections``.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ChartInfinity, CoincidentPoints, CurveBodyError
from .kinematics import (
    KinematicRates,
    PhaseState,
    RelativeSet,
    center_of_mass,
    kinematic_rates,
    relative_variables,
)
from .ring import Biquaternion, RingScalar, RingVector3, SpaceSign, bq_mul, real_scalar_split
from .space import ChartPoint, metric_tensor, metric_tensor_literal, point_velocity

R_MIN = 1e-8


def kinetic_embedding_parts(state: PhaseState, m1, m2):
    """(real part, u part) of 1/2 (m1 Xdot1 bar Xdot1 + m2 Xdot2 bar Xdot2)."""
    x1d = point_velocity(ChartPoint(state.v1, state.sign), state.w1)
    x2d = point_velocity(ChartPoint(state.v2, state.sign), state.w2)
    t = (x1d.norm() * m1 + x2d.norm() * m2) * 0.5
    return t.re, t.im


def kinetic_embedding(state: PhaseState, m1, m2):
    return kinetic_embedding_parts(state, m1, m2)[0]


def kinetic_chart(state: PhaseState, m1, m2):
    g1 = metric_tensor(ChartPoint(state.v1, state.sign))
    g2 = metric_tensor(ChartPoint(state.v2, state.sign))
    e1 = np.einsum("...a,...ab,...b->...", state.w1, g1, state.w1)
    e2 = np.einsum("...a,...ab,...b->...", state.w2, g2, state.w2)
    return 0.5 * (m1 * e1 + m2 * e2)


def kinetic_chart_literal(state: PhaseState, m1, m2):
    """Chart kinetic energy with the metric's inner sign as printed."""
    g1 = metric_tensor_literal(ChartPoint(state.v1, state.sign))
    g2 = metric_tensor_literal(ChartPoint(state.v2, state.sign))
    e1 = np.einsum("...a,...ab,...b->...", state.w1, g1, state.w1)
    e2 = np.einsum("...a,...ab,...b->...", state.w2, g2, state.w2)
    return 0.5 * (m1 * e1 + m2 * e2)


@dataclass(frozen=True, eq=False)
class _Kin:
    """Everything the relative-variable forms need, computed once."""

    sign: SpaceSign
    m1: np.ndarray
    m2: np.ndarray
    Xc: Biquaternion
    rel: RelativeSet
    rates: KinematicRates


def _kin(state: PhaseState, m1, m2) -> _Kin:
    cfg = state.config(m1, m2)
    com = center_of_mass(cfg)
    rel = relative_variables(cfg, com)
    rates = kinematic_rates(cfg, com)
    return _Kin(state.sign, cfg.m1, cfg.m2, com.Xc, rel, rates)


def cross_terms(state: PhaseState, m1, m2, kin: _Kin | None = None) -> Biquaternion:
    """m1 (Y1 Xcdot bar Xc bar Y1dot + Y1dot Xc bar Xcdot bar Y1) + (same for 2)."""
    k = kin if kin is not None else _kin(state, m1, m2)
    xc, xcd = k.Xc, k.rates.Xc_dot
    w = bq_mul(xcd, xc.bar())
    wb = bq_mul(xc, xcd.bar())

    def one(y, yd):
        return bq_mul(bq_mul(y, w), yd.bar()) + bq_mul(bq_mul(yd, wb), y.bar())

    return one(k.rel.Y1, k.rates.Y1_dot) * k.m1 + one(k.rel.Y2, k.rates.Y2_dot) * k.m2


def kinetic_cm_rel(state: PhaseState, m1, m2, as_printed: bool = False, kin: _Kin | None = None):
    """Kinetic term in center-of-mass and per-particle relative variables.

    Substituting X_i = Y_i Xc gives sigma Ydot_i bar(Ydot_i) + Xcdot bar(Xcdot)
    plus the cross terms; the printed form carries +- (i.e. sigma) on the
    Xcdot term as well.  Returns (T, size of the non-real-scalar remainder).
    """
    k = kin if kin is not None else _kin(state, m1, m2)
    sigma = int(k.sign)
    xs = sigma if as_printed else 1
    xcd = k.rates.Xc_dot
    xx = bq_mul(xcd, xcd.bar())
    y1d, y2d = k.rates.Y1_dot, k.rates.Y2_dot
    sep = (bq_mul(y1d, y1d.bar()) * sigma + xx * xs) * k.m1 + (bq_mul(y2d, y2d.bar()) * sigma + xx * xs) * k.m2
    total = (sep + cross_terms(state, m1, m2, k)) * 0.5
    return real_scalar_split(total)


def _lprime_y12(k: _Kin, xs: int) -> Biquaternion:
    sigma = int(k.sign)
    a, b = k.m1, k.m2
    y, yd = k.rel.Y12, k.rates.Y12_dot
    xc, xcd = k.Xc, k.rates.Xc_dot
    c = y.s.re
    cdot = yd.s.re
    f = a * a + b * b + 2 * a * b * c
    w = bq_mul(xcd, xc.bar())  # Xcdot bar(Xc)
    wb = bq_mul(xc, xcd.bar())  # Xc bar(Xcdot)
    yb, ydb = y.bar(), yd.bar()
    t1 = bq_mul(yd, ydb) * (sigma * a * b * (a + b) / f)
    t2 = -sigma * a * a * b * b * (a + b) * cdot ** 2 / f ** 2
    t3 = bq_mul(xcd, xcd.bar()) * (xs * (a + b))
    line2 = (bq_mul(bq_mul(y, w), ydb) + bq_mul(bq_mul(yd, wb), yb)) * a \
        + (bq_mul(bq_mul(yb, w), yd) + bq_mul(bq_mul(ydb, wb), y)) * b
    line3 = (bq_mul(w, yd) + bq_mul(ydb, wb)) * a + (bq_mul(w, ydb) + bq_mul(yd, wb)) * b
    return t1 + t2 + t3 + (line2 + line3) * (a * b / f)


def kinetic_y12(state: PhaseState, m1, m2, as_printed: bool = False, kin: _Kin | None = None):
    """Kinetic term through Y12 and the center of mass; returns (T, remainder).

    The printed Xcdot coefficient is +-(m1 + m2); the substitution gives
    +(m1 + m2) in both spaces.
    """
    k = kin if kin is not None else _kin(state, m1, m2)
    xs = int(k.sign) if as_printed else 1
    value, rest = real_scalar_split(_lprime_y12(k, xs))
    return 0.5 * value, 0.5 * rest


@dataclass(frozen=True, eq=False)
class PolarRelative:
    r: np.ndarray
    rdot: np.ndarray
    n: RingVector3
    ndot: RingVector3
    F: np.ndarray | None
    n_norm_residual: np.ndarray
    sign: SpaceSign

    def trig(self):
        if self.sign is SpaceSign.SPHERE:
            return np.sin(self.r), np.cos(self.r)
        return np.sinh(self.r), np.cosh(self.r)

    def reconstruct(self):
        """(Y12, Y12dot) rebuilt from r, rdot, n, ndot."""
        s, c = self.trig()
        sigma = int(self.sign)
        y = Biquaternion(RingScalar.real(c, self.sign), self.n.scale(s))
        cdot = -sigma * s * self.rdot
        yd = Biquaternion(RingScalar.real(cdot, self.sign), self.ndot.scale(s) + self.n.scale(c * self.rdot))
        return y, yd


def polar_decompose(rel: RelativeSet, rates: KinematicRates, m1=None, m2=None) -> PolarRelative:
    """Write Y12 = cos r + n sin r (sphere) or cosh r + n sinh r (hyperbolic)."""
    y, yd = rel.Y12, rates.Y12_dot
    sign = y.sign
    sigma = int(sign)
    c = y.s.re
    vec = y.v
    s = np.sqrt(np.maximum(sigma * vec.dot(vec).re, 0.0))
    if sign is SpaceSign.SPHERE:
        r = np.arctan2(s, c)
        if np.any(r > np.pi - R_MIN):
            raise ChartInfinity("antipodal separation: relative axis undefined")
    else:
        r = np.arcsinh(s)
    if np.any(r < R_MIN):
        raise CoincidentPoints("particles coincide; relative axis undefined")
    n = vec.scale(1.0 / s)
    cdot = yd.s.re
    rdot = -sigma * cdot / s
    ndot = (yd.v - n.scale(rdot * c)).scale(1.0 / s)
    nn = n.dot(n)
    resid = np.abs(nn.re - sigma) + np.abs(nn.im)
    f = None
    if m1 is not None and m2 is not None:
        f = m1 * m1 + m2 * m2 + 2 * m1 * m2 * c
    return PolarRelative(r, rdot, n, ndot, f, resid, sign)


@dataclass(frozen=True)
class PolarCorrections:
    """Choices that make the polar forms well defined.

    ``term_signs`` are the signs of the four mixed (m1 - m2) terms in the
    order (n P + P n) rdot, (ndot P + P ndot) S C, (n P + P n) rdot C,
    (ndot P + P ndot) S with P = Xcdot bar(Xc), S/C = sin/cos or sinh/cosh.
    ``xc_sign`` multiplies (m1 + m2) Xcdot bar(Xcdot).  ``mixed_cos`` makes
    the mixed-term denominator use cos r even in the hyperbolic space.
    """

    xc_sign: int
    term_signs: tuple
    mixed_cos: bool = False


PRINTED = {
    # the unmarked line break in the sphere bracket is read as "+"
    SpaceSign.SPHERE: PolarCorrections(1, (1, 1, -1, -1), False),
    SpaceSign.HYPERBOLIC: PolarCorrections(-1, (1, 1, -1, -1), True),
}

# result of calibrate_corrections on 100 seeded states per space
FROZEN_CORRECTIONS = {
    SpaceSign.SPHERE: PolarCorrections(1, (-1, -1, 1, 1), False),
    SpaceSign.HYPERBOLIC: PolarCorrections(1, (-1, -1, 1, 1), False),
}

EQUAL_MASS_PRINTED_XC = {SpaceSign.SPHERE: 1, SpaceSign.HYPERBOLIC: -1}
EQUAL_MASS_CORRECTED_XC = {SpaceSign.SPHERE: 1, SpaceSign.HYPERBOLIC: 1}


def _sym(x: Biquaternion, y: Biquaternion) -> Biquaternion:
    return bq_mul(x, y) + bq_mul(y, x)


def _polar_lprime(k: _Kin, pol: PolarRelative, corr: PolarCorrections) -> Biquaternion:
    sigma = int(k.sign)
    a, b = k.m1, k.m2
    s, c = pol.trig()
    f = a * a + b * b + 2 * a * b * c
    f_mixed = a * a + b * b + 2 * a * b * np.cos(pol.r) if corr.mixed_cos else f
    xc, xcd = k.Xc, k.rates.Xc_dot
    p = bq_mul(xcd, xc.bar())
    n = Biquaternion.pure(pol.n)
    nd = Biquaternion.pure(pol.ndot)
    nd2 = pol.ndot.dot(pol.ndot)
    twist = bq_mul(bq_mul(nd, p), n) - bq_mul(bq_mul(n, p), nd)
    first = (Biquaternion.scalar(nd2 * (sigma * s * s) + pol.rdot ** 2, k.sign) + twist * (s * s)) \
        * (a * b * (a + b) / f)
    second = -sigma * a * a * b * b * (a + b) * s * s * pol.rdot ** 2 / f ** 2
    xterm = bq_mul(xcd, xcd.bar()) * (corr.xc_sign * (a + b))
    np_ = _sym(n, p)
    ndp = _sym(nd, p)
    sa, sb, sc, sd = corr.term_signs
    bracket = np_ * (sa * pol.rdot) + ndp * (sb * s * c) + np_ * (sc * pol.rdot * c) + ndp * (sd * s)
    return first + second + xterm + bracket * (a * b * (a - b) / f_mixed)


def _polar(state, m1, m2, kin):
    k = kin if kin is not None else _kin(state, m1, m2)
    return k, polar_decompose(k.rel, k.rates, k.m1, k.m2)


def kinetic_polar_value(state: PhaseState, m1, m2, corr: PolarCorrections, kin: _Kin | None = None):
    k, pol = _polar(state, m1, m2, kin)
    value, rest = real_scalar_split(_polar_lprime(k, pol, corr))
    return 0.5 * value, 0.5 * rest


def kinetic_polar(state: PhaseState, m1, m2, kin: _Kin | None = None):
    """Polar-form kinetic term: (as printed, corrected, corrections used)."""
    k, _ = _polar(state, m1, m2, kin)
    printed, _ = kinetic_polar_value(state, m1, m2, PRINTED[k.sign], k)
    flags = FROZEN_CORRECTIONS[k.sign]
    corrected, _ = kinetic_polar_value(state, m1, m2, flags, k)
    return printed, corrected, flags


def _equal_mass_lprime(k: _Kin, pol: PolarRelative, m, xs: int) -> Biquaternion:
    sigma = int(k.sign)
    half = np.sin(pol.r / 2) if k.sign is SpaceSign.SPHERE else np.sinh(pol.r / 2)
    xc, xcd = k.Xc, k.rates.Xc_dot
    p = bq_mul(xcd, xc.bar())
    n = Biquaternion.pure(pol.n)
    nd = Biquaternion.pure(pol.ndot)
    inner = Biquaternion.scalar(pol.ndot.dot(pol.ndot) * sigma, k.sign) \
        + bq_mul(bq_mul(nd, p), n) - bq_mul(bq_mul(n, p), nd)
    total = inner * (2 * half ** 2) + pol.rdot ** 2 / 2 + bq_mul(xcd, xcd.bar()) * (2 * xs)
    return total * m


def kinetic_equal_mass(state: PhaseState, m, kin: _Kin | None = None):
    """Equal-mass polar form: (as printed, corrected) kinetic energies."""
    k, pol = _polar(state, m, m, kin)
    printed = real_scalar_split(_equal_mass_lprime(k, pol, m, EQUAL_MASS_PRINTED_XC[k.sign]))[0]
    corrected = real_scalar_split(_equal_mass_lprime(k, pol, m, EQUAL_MASS_CORRECTED_XC[k.sign]))[0]
    return 0.5 * printed, 0.5 * corrected


def kinetic_small_r(state: PhaseState, m1, m2, as_printed: bool = False, kin: _Kin | None = None):
    """Small-separation form: reduced mass times rdot^2 plus the CM term (halved).

    The printed CM coefficient is +-(m1 + m2); the corrected one is +.
    """
    k, pol = _polar(state, m1, m2, kin)
    xs = int(k.sign) if as_printed else 1
    xcd = k.rates.Xc_dot
    xx = bq_mul(xcd, xcd.bar()).s.re
    mu = k.m1 * k.m2 / (k.m1 + k.m2)
    return 0.5 * (mu * pol.rdot ** 2 + xs * (k.m1 + k.m2) * xx)


def calibrate_corrections(states: PhaseState, m1, m2):
    """Pick the correction set minimizing max |polar form - embedding form|.

    Returns (best corrections, best residual, {corrections: residual}).
    """
    k = _kin(states, m1, m2)
    pol = polar_decompose(k.rel, k.rates, k.m1, k.m2)
    truth = kinetic_embedding(states, m1, m2)
    scale = np.maximum(1.0, np.abs(truth))
    table = {}
    cos_options = (False,) if k.sign is SpaceSign.SPHERE else (False, True)
    for xs, signs, mc in itertools.product((1, -1), itertools.product((1, -1), repeat=4), cos_options):
        corr = PolarCorrections(xs, signs, mc)
        val = 0.5 * real_scalar_split(_polar_lprime(k, pol, corr))[0]
        table[corr] = float(np.max(np.abs(val - truth) / scale))
    best = min(table, key=table.get)
    return best, table[best], table


@dataclass
class KineticReport:
    values: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    nonscalar: dict = field(default_factory=dict)
    cross_term: float = float("nan")
    small_r_residual: float = float("nan")
    correction_flags: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)


def audit(state: PhaseState, m1: float, m2: float) -> KineticReport:
    """Evaluate every kinetic form at one state and compare with the embedding form."""
    rep = KineticReport()
    t_emb, t_emb_u = kinetic_embedding_parts(state, m1, m2)
    t_emb = float(t_emb)
    rep.values["embedding"] = t_emb
    rep.nonscalar["embedding"] = float(abs(t_emb_u))
    rep.values["chart"] = float(kinetic_chart(state, m1, m2))
    rep.values["chart_literal_metric"] = float(kinetic_chart_literal(state, m1, m2))
    rep.correction_flags = {k.label: asdict(v) for k, v in FROZEN_CORRECTIONS.items()}
    try:
        kin = _kin(state, m1, m2)
    except CurveBodyError as exc:
        rep.errors["kinematics"] = f"{type(exc).__name__}: {exc}"
        kin = None
    if kin is not None:
        for name, fn in (("cm_particle", lambda p: kinetic_cm_rel(state, m1, m2, p, kin)),
                         ("cm_relative", lambda p: kinetic_y12(state, m1, m2, p, kin))):
            for printed in (False, True):
                key = name + ("_printed" if printed else "")
                val, rest = fn(printed)
                rep.values[key] = float(val)
                rep.nonscalar[key] = float(rest)
        rep.cross_term = float(cross_terms(state, m1, m2, kin).magnitude())
        try:
            printed, corrected, _ = kinetic_polar(state, m1, m2, kin)
            rep.values["polar"] = float(corrected)
            rep.values["polar_printed"] = float(printed)
            if m1 == m2:
                ep, ec = kinetic_equal_mass(state, m1, kin)
                rep.values["equal_mass"] = float(ec)
                rep.values["equal_mass_printed"] = float(ep)
            rep.values["small_r"] = float(kinetic_small_r(state, m1, m2, False, kin))
            rep.values["small_r_printed"] = float(kinetic_small_r(state, m1, m2, True, kin))
            rep.small_r_residual = abs(rep.values["small_r"] - t_emb)
        except CurveBodyError as exc:
            rep.errors["polar"] = f"{type(exc).__name__}: {exc}"
    for key, val in rep.values.items():
        if key != "embedding":
            rep.residuals[key] = abs(val - t_emb)
    return rep
