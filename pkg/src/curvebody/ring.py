"""Scalars, 3-vectors and biquaternions over the rings R[u]/(u^2 - sigma).

``sigma = +1`` gives the double (split-complex) numbers that describe the
3-sphere, ``sigma = -1`` the complex numbers that describe Lobachevsky
space.  Every value stores its real and ``u`` parts as float arrays and
broadcasts over leading axes, so a whole batch of samples is one value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Union

import numpy as np

from .errors import NonInvertible, NullNorm, SignMismatch, SqrtDomain, WrongSheet, ZeroDivisor

MINKOWSKI_TOL = 1e-12


class SpaceSign(IntEnum):
    """The value of u^2."""

    SPHERE = 1
    HYPERBOLIC = -1

    @classmethod
    def parse(cls, value) -> "SpaceSign":
        if isinstance(value, SpaceSign):
            return value
        if isinstance(value, str):
            name = value.strip().lower()
            if name in ("sphere", "s3", "+1", "1"):
                return cls.SPHERE
            if name in ("hyperbolic", "lobachevsky", "h3", "-1"):
                return cls.HYPERBOLIC
            raise ValueError(f"unknown space {value!r}")
        if value in (1, -1):
            return cls(int(value))
        raise ValueError(f"sigma must be +1 or -1, got {value!r}")

    @property
    def label(self) -> str:
        return "sphere" if self is SpaceSign.SPHERE else "hyperbolic"


def _same_sign(a, b) -> SpaceSign:
    if a.sign != b.sign:
        raise SignMismatch(f"cannot combine sigma={int(a.sign)} with sigma={int(b.sign)}")
    return a.sign


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class RingScalar:
    re: np.ndarray
    im: np.ndarray
    sign: SpaceSign

    __array_ufunc__ = None

    def __post_init__(self):
        object.__setattr__(self, "re", _arr(self.re))
        object.__setattr__(self, "im", _arr(self.im))
        object.__setattr__(self, "sign", SpaceSign.parse(self.sign))

    @classmethod
    def real(cls, x, sign) -> "RingScalar":
        x = _arr(x)
        return cls(x, np.zeros_like(x), sign)

    @classmethod
    def unit_u(cls, sign) -> "RingScalar":
        return cls(0.0, 1.0, sign)

    def _coerce(self, other) -> "RingScalar":
        if isinstance(other, RingScalar):
            _same_sign(self, other)
            return other
        return RingScalar.real(other, self.sign)

    def __add__(self, other):
        if isinstance(other, (RingVector3, Biquaternion)):
            return NotImplemented
        o = self._coerce(other)
        return RingScalar(self.re + o.re, self.im + o.im, self.sign)

    __radd__ = __add__

    def __neg__(self):
        return RingScalar(-self.re, -self.im, self.sign)

    def __sub__(self, other):
        if isinstance(other, (RingVector3, Biquaternion)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (RingVector3, Biquaternion)):
            return NotImplemented
        o = self._coerce(other)
        s = int(self.sign)
        return RingScalar(self.re * o.re + s * self.im * o.im,
                          self.re * o.im + self.im * o.re, self.sign)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RingScalar):
            return self * other.invert()
        return RingScalar(self.re / other, self.im / other, self.sign)

    def conj_u(self) -> "RingScalar":
        """The ring conjugation u -> -u."""
        return RingScalar(self.re, -self.im, self.sign)

    star = conj_u

    def modulus2(self) -> np.ndarray:
        """a * conj_u(a), a real number; may vanish on nonzero double numbers."""
        if self.sign is SpaceSign.SPHERE:
            # factored form so that re = +-im gives an exact zero
            return (self.re - self.im) * (self.re + self.im)
        return self.re * self.re + self.im * self.im

    def invert(self) -> "RingScalar":
        k = np.maximum(np.abs(self.re), np.abs(self.im))
        if np.any(k == 0):
            raise NonInvertible("inverse of ring zero")
        # rescale first so tiny or huge inputs do not under/overflow the modulus
        re, im = self.re / k, self.im / k
        m = RingScalar(re, im, self.sign).modulus2()
        if np.any(m == 0):
            raise ZeroDivisor("double number with re = +-im has no inverse")
        return RingScalar(re / (m * k), -im / (m * k), self.sign)

    def sqrt_real(self, tol: float = MINKOWSKI_TOL) -> "RingScalar":
        """Positive square root of a real positive element."""
        scale = np.maximum(1.0, np.abs(self.re))
        if np.any(np.abs(self.im) > tol * scale):
            raise SqrtDomain("square root of a non-real ring element")
        if np.any(self.re <= 0):
            raise SqrtDomain("square root of a non-positive real")
        return RingScalar.real(np.sqrt(self.re), self.sign)

    def is_real(self, tol: float = MINKOWSKI_TOL) -> np.ndarray:
        return np.abs(self.im) <= tol * np.maximum(1.0, np.abs(self.re))

    def __getitem__(self, idx) -> "RingScalar":
        return RingScalar(self.re[idx], self.im[idx], self.sign)

    def __repr__(self):
        return f"RingScalar(re={self.re!r}, im={self.im!r}, sigma={int(self.sign)})"


@dataclass(frozen=True, eq=False)
class RingVector3:
    re: np.ndarray  # shape (..., 3)
    im: np.ndarray
    sign: SpaceSign

    __array_ufunc__ = None

    def __post_init__(self):
        re, im = np.broadcast_arrays(_arr(self.re), _arr(self.im))
        if re.shape[-1:] != (3,):
            raise ValueError(f"ring vectors need a trailing axis of length 3, got {re.shape}")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "sign", SpaceSign.parse(self.sign))

    @classmethod
    def real(cls, v, sign) -> "RingVector3":
        v = _arr(v)
        return cls(v, np.zeros_like(v), sign)

    @classmethod
    def imaginary(cls, v, sign) -> "RingVector3":
        """The vector u*v; chart points of both spaces have this form."""
        v = _arr(v)
        return cls(np.zeros_like(v), v, sign)

    @classmethod
    def zero(cls, sign, shape=()) -> "RingVector3":
        z = np.zeros(tuple(shape) + (3,))
        return cls(z, z, sign)

    def __add__(self, other):
        if not isinstance(other, RingVector3):
            return NotImplemented
        _same_sign(self, other)
        return RingVector3(self.re + other.re, self.im + other.im, self.sign)

    def __neg__(self):
        return RingVector3(-self.re, -self.im, self.sign)

    def __sub__(self, other):
        if not isinstance(other, RingVector3):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "RingVector3":
        """Multiply every component by a ring scalar (or a real)."""
        if not isinstance(k, RingScalar):
            k = RingScalar.real(k, self.sign)
        _same_sign(self, k)
        kr, ki = k.re[..., None], k.im[..., None]
        s = int(self.sign)
        return RingVector3(kr * self.re + s * ki * self.im, kr * self.im + ki * self.re, self.sign)

    def __mul__(self, k):
        if isinstance(k, (RingVector3, Biquaternion)):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, RingScalar):
            return self.scale(k.invert())
        return RingVector3(self.re / _arr(k)[..., None], self.im / _arr(k)[..., None], self.sign)

    def dot(self, other: "RingVector3") -> RingScalar:
        _same_sign(self, other)
        s = int(self.sign)
        re = np.sum(self.re * other.re, axis=-1) + s * np.sum(self.im * other.im, axis=-1)
        im = np.sum(self.re * other.im, axis=-1) + np.sum(self.im * other.re, axis=-1)
        return RingScalar(re, im, self.sign)

    def cross(self, other: "RingVector3") -> "RingVector3":
        _same_sign(self, other)
        s = int(self.sign)
        re = np.cross(self.re, other.re) + s * np.cross(self.im, other.im)
        im = np.cross(self.re, other.im) + np.cross(self.im, other.re)
        return RingVector3(re, im, self.sign)

    def conj_u(self) -> "RingVector3":
        return RingVector3(self.re, -self.im, self.sign)

    star = conj_u

    def magnitude(self) -> np.ndarray:
        """Euclidean size of all six real components (for residuals)."""
        return np.sqrt(np.sum(self.re ** 2 + self.im ** 2, axis=-1))

    def __getitem__(self, idx) -> "RingVector3":
        if not isinstance(idx, tuple):
            idx = (idx,)
        idx = idx + (slice(None),)
        return RingVector3(self.re[idx], self.im[idx], self.sign)

    def __repr__(self):
        return f"RingVector3(re={self.re!r}, im={self.im!r}, sigma={int(self.sign)})"


Scalarish = Union[RingScalar, float, np.ndarray]


@dataclass(frozen=True, eq=False)
class Biquaternion:
    """s + v with s a ring scalar and v a ring 3-vector."""

    s: RingScalar
    v: RingVector3

    __array_ufunc__ = None

    def __post_init__(self):
        _same_sign(self.s, self.v)

    @property
    def sign(self) -> SpaceSign:
        return self.s.sign

    @classmethod
    def from_components(cls, comps, sign) -> "Biquaternion":
        """Build from an array (..., 8) ordered [s.re, s.im, v.re(3), v.im(3)]."""
        c = _arr(comps)
        return cls(RingScalar(c[..., 0], c[..., 1], sign), RingVector3(c[..., 2:5], c[..., 5:8], sign))

    @classmethod
    def scalar(cls, k, sign) -> "Biquaternion":
        if not isinstance(k, RingScalar):
            k = RingScalar.real(k, sign)
        shape = np.broadcast(k.re, k.im).shape
        return cls(k, RingVector3.zero(k.sign, shape))

    @classmethod
    def one(cls, sign, shape=()) -> "Biquaternion":
        return cls.scalar(np.ones(shape), sign)

    @classmethod
    def unit_u(cls, sign, shape=()) -> "Biquaternion":
        """The base point X0 = u of the embedding."""
        return cls(RingScalar(np.zeros(shape), np.ones(shape), sign), RingVector3.zero(sign, shape))

    @classmethod
    def pure(cls, v: RingVector3) -> "Biquaternion":
        z = np.zeros(v.re.shape[:-1])
        return cls(RingScalar(z, z, v.sign), v)

    def components(self) -> np.ndarray:
        re_s, im_s = np.broadcast_arrays(self.s.re, self.s.im)
        shape = np.broadcast_shapes(re_s.shape, self.v.re.shape[:-1])
        out = np.empty(shape + (8,))
        out[..., 0] = re_s
        out[..., 1] = im_s
        out[..., 2:5] = self.v.re
        out[..., 5:8] = self.v.im
        return out

    def magnitude(self) -> np.ndarray:
        """Euclidean size of the 8 real components."""
        return np.sqrt(np.sum(self.components() ** 2, axis=-1))

    def __add__(self, other):
        if isinstance(other, Biquaternion):
            return Biquaternion(self.s + other.s, self.v + other.v)
        return Biquaternion(self.s + other, self.v)

    __radd__ = __add__

    def __neg__(self):
        return Biquaternion(-self.s, -self.v)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Biquaternion):
            return bq_mul(self, other)
        return Biquaternion(self.s * other, self.v.scale(other))

    def __rmul__(self, other):
        # ring scalars are central
        return Biquaternion(self.s * other, self.v.scale(other))

    def __truediv__(self, k):
        if isinstance(k, RingScalar):
            return self * k.invert()
        k = _arr(k)
        return Biquaternion(self.s / k, RingVector3(self.v.re / k[..., None], self.v.im / k[..., None], self.sign))

    def bar(self) -> "Biquaternion":
        return Biquaternion(self.s, -self.v)

    def star(self) -> "Biquaternion":
        return Biquaternion(self.s.conj_u(), self.v.conj_u())

    def norm(self) -> RingScalar:
        return bq_norm(self)

    @property
    def x0(self) -> np.ndarray:
        """Coefficient of u in the scalar part (X0 for Minkowski-type points)."""
        return self.s.im

    def __getitem__(self, idx) -> "Biquaternion":
        return Biquaternion(self.s[idx], self.v[idx])

    def __repr__(self):
        return f"Biquaternion(sigma={int(self.sign)}, components={self.components()!r})"


def bq_mul(p: Biquaternion, q: Biquaternion) -> Biquaternion:
    """Quaternion product with ring-valued components."""
    _same_sign(p, q)
    s = p.s * q.s - p.v.dot(q.v)
    v = q.v.scale(p.s) + p.v.scale(q.s) + p.v.cross(q.v)
    return Biquaternion(s, v)


def bq_norm(x: Biquaternion) -> RingScalar:
    """X * bar(X); the vector part of that product vanishes identically."""
    return x.s * x.s + x.v.dot(x.v)


def bq_normalize(x: Biquaternion, tol: float = MINKOWSKI_TOL) -> Biquaternion:
    """Scale X so that X * bar(X) = sigma (the +1 / -1 of the two spaces).

    For the hyperbolic space the upper sheet X0 > 0 is required.
    """
    sigma = int(x.sign)
    n = bq_norm(x)
    signed = n * sigma
    if x.sign is SpaceSign.SPHERE:
        signed.invert()  # raises ZeroDivisor / NonInvertible
    else:
        if np.any(np.abs(n.re) + np.abs(n.im) <= tol):
            raise NullNorm("lightlike biquaternion has zero norm")
        if np.any(x.x0 <= 0):
            raise WrongSheet("hyperbolic points need X0 > 0")
    root = signed.sqrt_real(tol)
    return x / root


def minkowski_check(x: Biquaternion, tol: float = MINKOWSKI_TOL) -> np.ndarray:
    """True where X = -star(bar(X)): imaginary scalar part, real vector part."""
    ok = (np.abs(x.s.re) <= tol) & np.all(np.abs(x.v.im) <= tol, axis=-1)
    return ok if np.ndim(ok) else bool(ok)


def real_scalar_split(x: Biquaternion):
    """Return (real scalar part, size of every other component)."""
    c = x.components()
    rest = np.sqrt(np.sum(c[..., 1:] ** 2, axis=-1))
    return c[..., 0], rest
