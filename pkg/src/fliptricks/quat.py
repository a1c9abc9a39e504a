"""Quaternion arithmetic and the conjugation action on 3-space.

Scalar-first convention: q = (q0, q1, q2, q3) = q0 + q1*i + q2*j + q3*k,
with i^2 = j^2 = k^2 = ijk = -1. A unit quaternion q = cos(theta) +
sin(theta)*u (u a unit imaginary quaternion) acts on vectors by conjugation
v -> q v q^-1, which is the right-handed rotation by 2*theta about u. That
action is the 2-to-1 covering homomorphism ``rho`` from the unit 3-sphere
onto SO(3); rho(q) = rho(-q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FlipTrickError
from .so3 import Rotation

#: Accepted deviation of |q|^2 from 1 when constructing a UnitQuaternion.
UNIT_TOL = 1e-9

#: Below this norm a quaternion is treated as zero (non-invertible).
ZERO_TOL = 1e-12


class ZeroQuaternion(FlipTrickError):
    """Inversion of a quaternion with negligible norm."""


class NonUnitAxis(FlipTrickError):
    """Rotation axis is not a unit 3-vector."""


class NonUnitQuaternion(FlipTrickError):
    """Components are too far from the unit 3-sphere."""


@dataclass(frozen=True)
class Quaternion:
    """A quaternion stored as four scalars, immutable."""

    q0: float
    q1: float
    q2: float
    q3: float

    def __post_init__(self):
        for name in ("q0", "q1", "q2", "q3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite component {name}={value!r}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    def norm(self) -> float:
        return math.sqrt(self.q0**2 + self.q1**2 + self.q2**2 + self.q3**2)

    @property
    def scalar(self) -> float:
        return self.q0

    @property
    def vector(self) -> "ImaginaryQuaternion":
        return ImaginaryQuaternion(self.q1, self.q2, self.q3)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return Quaternion(self.q0 * other, self.q1 * other, self.q2 * other, self.q3 * other)

    def __rmul__(self, scalar):
        return Quaternion(scalar * self.q0, scalar * self.q1, scalar * self.q2, scalar * self.q3)

    def __truediv__(self, scalar):
        return Quaternion(self.q0 / scalar, self.q1 / scalar, self.q2 / scalar, self.q3 / scalar)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.q0 + other.q0, self.q1 + other.q1, self.q2 + other.q2, self.q3 + other.q3)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.q0 - other.q0, self.q1 - other.q1, self.q2 - other.q2, self.q3 - other.q3)

    def __neg__(self):
        return type(self)(-self.q0, -self.q1, -self.q2, -self.q3)

    def __abs__(self) -> float:
        return self.norm()


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """A quaternion on the unit 3-sphere; renormalized on construction."""

    def __post_init__(self):
        super().__post_init__()
        nsq = self.q0**2 + self.q1**2 + self.q2**2 + self.q3**2
        if abs(nsq - 1.0) > UNIT_TOL:
            raise NonUnitQuaternion(f"|q|^2 = {nsq!r} deviates from 1 by more than {UNIT_TOL}")
        # below a few ulps renormalizing only churns the last bits; skipping
        # keeps algebraically exact identities (like evenness of rho) bit-exact
        if abs(nsq - 1.0) > 1e-15:
            scale = 1.0 / math.sqrt(nsq)
            for name in ("q0", "q1", "q2", "q3"):
                object.__setattr__(self, name, getattr(self, name) * scale)


@dataclass(frozen=True)
class ImaginaryQuaternion:
    """A purely imaginary quaternion, identified with a 3-vector."""

    v1: float
    v2: float
    v3: float

    def __post_init__(self):
        for name in ("v1", "v2", "v3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite component {name}={value!r}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3])

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.v1, self.v2, self.v3)

    def norm(self) -> float:
        return math.sqrt(self.v1**2 + self.v2**2 + self.v3**2)

    def __neg__(self):
        return ImaginaryQuaternion(-self.v1, -self.v2, -self.v3)


ONE = UnitQuaternion(1.0, 0.0, 0.0, 0.0)
MINUS_ONE = UnitQuaternion(-1.0, 0.0, 0.0, 0.0)
I = UnitQuaternion(0.0, 1.0, 0.0, 0.0)
J = UnitQuaternion(0.0, 0.0, 1.0, 0.0)
K = UnitQuaternion(0.0, 0.0, 0.0, 1.0)
MINUS_K = UnitQuaternion(0.0, 0.0, 0.0, -1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p*q (associative, non-commutative, |pq| = |p||q|)."""
    a0, a1, a2, a3 = p.q0, p.q1, p.q2, p.q3
    b0, b1, b2, b3 = q.q0, q.q1, q.q2, q.q3
    out = (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )
    if isinstance(p, UnitQuaternion) and isinstance(q, UnitQuaternion):
        return UnitQuaternion(*out)
    return Quaternion(*out)


def conj(q: Quaternion) -> Quaternion:
    """Conjugate: the vector part changes sign. conj(pq) = conj(q)conj(p)."""
    return type(q)(q.q0, -q.q1, -q.q2, -q.q3)


def inverse(q: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(q)/|q|^2; ZeroQuaternion if |q| ~ 0."""
    n = q.norm()
    if n <= ZERO_TOL:
        raise ZeroQuaternion(f"cannot invert quaternion with norm {n!r}")
    if isinstance(q, UnitQuaternion):
        return conj(q)
    nsq = n * n
    return Quaternion(q.q0 / nsq, -q.q1 / nsq, -q.q2 / nsq, -q.q3 / nsq)


def re(q: Quaternion) -> float:
    """Real (scalar) part."""
    return q.q0


def im(q: Quaternion) -> ImaginaryQuaternion:
    """Imaginary (vector) part as a 3-vector."""
    return ImaginaryQuaternion(q.q1, q.q2, q.q3)


def rho(q: UnitQuaternion) -> Rotation:
    """The rotation obtained from the conjugation action of a unit quaternion.

    This is a group homomorphism onto SO(3) with rho(q) = rho(-q); the two
    preimages of any rotation are recovered by ``so3.to_quaternion`` /
    ``so3.nearest_preimage``.
    """
    q0, q1, q2, q3 = q.q0, q.q1, q.q2, q.q3
    m = np.array(
        [
            [1.0 - 2.0 * (q2 * q2 + q3 * q3), 2.0 * (q1 * q2 - q3 * q0), 2.0 * (q1 * q3 + q0 * q2)],
            [2.0 * (q1 * q2 + q3 * q0), 1.0 - 2.0 * (q1 * q1 + q3 * q3), 2.0 * (q2 * q3 - q1 * q0)],
            [2.0 * (q1 * q3 - q2 * q0), 2.0 * (q2 * q3 + q0 * q1), 1.0 - 2.0 * (q1 * q1 + q2 * q2)],
        ]
    )
    return Rotation(m)


def _axis_array(u) -> np.ndarray:
    if isinstance(u, ImaginaryQuaternion):
        return u.as_array()
    return np.asarray(u, dtype=float)


def from_axis_angle(u, theta: float) -> UnitQuaternion:
    """cos(theta) + sin(theta)*u for a unit axis u.

    Note the half-angle convention: rho of the result rotates by 2*theta
    about u (right-handed). Use ``rotation_about`` to pass the full
    rotation angle instead.
    """
    axis = _axis_array(u)
    if abs(float(np.linalg.norm(axis)) - 1.0) > UNIT_TOL:
        raise NonUnitAxis(f"axis has norm {np.linalg.norm(axis)!r}, expected 1")
    c, s = math.cos(theta), math.sin(theta)
    return UnitQuaternion(c, s * axis[0], s * axis[1], s * axis[2])


def rotation_about(u, angle: float) -> UnitQuaternion:
    """Unit quaternion whose action rotates by ``angle`` about the unit axis u."""
    return from_axis_angle(u, angle / 2.0)


def rotate_vector(q: UnitQuaternion, v) -> ImaginaryQuaternion:
    """Apply the conjugation action q v q^-1 to an imaginary quaternion."""
    if not isinstance(v, ImaginaryQuaternion):
        arr = np.asarray(v, dtype=float)
        v = ImaginaryQuaternion(arr[0], arr[1], arr[2])
    out = mul(mul(q, v.as_quaternion()), conj(q))
    return ImaginaryQuaternion(out.q1, out.q2, out.q3)
