"""Axis stabilization: retracting lifts onto a great circle of rotations.

Fix a unit axis u. Inside the 3-sphere there are two distinguished great
circles: the span of {1, u} (rotations about u) and the circle of unit
imaginary quaternions perpendicular to u. Any lift that stays away from
the perpendicular circle can be pushed onto the parallel one by a
deformation retraction, and the resulting rotation angle can then be
linearized in time. Composing the two stages deforms a trick with a
wandering axis into a constant-rate rotation about u; the wobbling
shove-it is the worked example.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FlipTrickError
from .homotopy import Homotopy
from .lifting import ContinuousLift
from .quat import Quaternion, UnitQuaternion, rho
from .so3 import Rotation
from .tricks import Flip, flip_from_sampler

#: retract() refuses points with x0^2 + x3^2 at or below this.
NEAR_PERP_TOL = 1e-9

#: stabilize() requires this much margin from the perpendicular circle at
#: every lift sample.
PATH_MARGIN = 1e-6

#: Endpoints must sit on the parallel circle within this.
ENDPOINT_CIRCLE_TOL = 1e-9

#: Largest admissible jump between consecutive angle samples.
MAX_ANGLE_JUMP = math.pi / 2.0


class NearPerpendicularCircle(FlipTrickError):
    """Point too close to the perpendicular circle; retraction undefined."""


class IntersectsPerpendicularCircle(FlipTrickError):
    """The lift of the curve meets the perpendicular circle."""


class EndpointNotOnParallelCircle(FlipTrickError):
    """The curve does not start and end as rotations about the axis."""


class DiscontinuousAngle(FlipTrickError):
    """Adjacent angle samples jump by a quarter turn or more."""


@dataclass(frozen=True, eq=False)
class AxisFrame:
    """Right-handed orthonormal basis (a, b, u) adapted to the axis u."""

    u: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        vecs = (a, b, u)
        for v in vecs:
            if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-9:
                raise ValueError("frame vectors must be unit 3-vectors")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(float(vecs[i] @ vecs[j])) > 1e-9:
                    raise ValueError("frame vectors must be pairwise orthogonal")
        if np.abs(np.cross(a, b) - u).max() > 1e-9:
            raise ValueError("frame must be right-handed: a x b = u")
        for name, v in (("u", u), ("a", a), ("b", b)):
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @classmethod
    def from_axis(cls, u) -> "AxisFrame":
        """Complete a unit axis to a right-handed orthonormal frame."""
        u = np.asarray(u, dtype=float)
        norm = float(np.linalg.norm(u))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"axis has norm {norm!r}, expected 1")
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(u)))] = 1.0
        a = helper - (helper @ u) * u
        a /= np.linalg.norm(a)
        b = np.cross(u, a)
        return cls(u=u, a=a, b=b)

    def coords(self, q: Quaternion) -> tuple[float, float, float, float]:
        """Components (x0, x1, x2, x3) of q in the basis (1, a, b, u)."""
        v = np.array([q.q1, q.q2, q.q3])
        return q.q0, float(v @ self.a), float(v @ self.b), float(v @ self.u)

    def from_coords(self, x0: float, x1: float, x2: float, x3: float) -> UnitQuaternion:
        v = x1 * self.a + x2 * self.b + x3 * self.u
        return UnitQuaternion(x0, v[0], v[1], v[2])

    def circle_point(self, theta: float) -> UnitQuaternion:
        """cos(theta) + sin(theta) u, a point of the parallel great circle."""
        s = math.sin(theta)
        v = s * self.u
        return UnitQuaternion(math.cos(theta), v[0], v[1], v[2])


@dataclass(frozen=True)
class WobbleParams:
    """Amplitude in [0, 1) and frequency of the precessing rotation axis.

    Amplitude 1 is rejected: the lift would then touch the perpendicular
    circle and the stabilizing retraction is undefined there.
    """

    a: float
    omega: float

    def __post_init__(self):
        if not 0.0 <= self.a < 1.0:
            raise ValueError(f"wobble amplitude {self.a!r} outside [0, 1)")


@dataclass(frozen=True)
class StabilizedForm:
    """Constant-rate rotation about the frame axis: angle(t) = rate*t + phase."""

    rate: float
    phase: float  # reduced to [0, 2*pi)

    def rotation(self, frame: AxisFrame, t: float) -> Rotation:
        angle = self.rate * t + self.phase
        c, s = math.cos(angle), math.sin(angle)
        rz = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        basis = np.column_stack([frame.a, frame.b, frame.u])
        return Rotation(basis @ rz @ basis.T)


# ---------------------------------------------------------------------------
# The wobbling shove-it


def wobble_axis(p: WobbleParams, t: float) -> np.ndarray:
    """The precessing unit rotation axis at time t."""
    phase = 2.0 * math.pi * p.omega * t
    return np.array(
        [p.a * math.cos(phase), p.a * math.sin(phase), -math.sqrt(1.0 - p.a * p.a)]
    )


def _wobble_quat(p: WobbleParams, t: float) -> UnitQuaternion:
    axis = wobble_axis(p, t)
    s = math.sin(math.pi * t)
    return UnitQuaternion(math.cos(math.pi * t), s * axis[0], s * axis[1], s * axis[2])


def wobble_shuvit(p: WobbleParams) -> Flip:
    """A full turn whose axis precesses around -k.

    At amplitude 0 this is exactly the 360 shove-it; the lift ends at -1
    for every amplitude below 1, so the class is always 2.
    """
    return flip_from_sampler(lambda t: rho(_wobble_quat(p, t)))


def wobble_n(p: WobbleParams, s: float, t: float) -> float:
    """Renormalization factor of the retraction along the wobble lift.

    Algebraically 1 + s*a^2*sin^2(pi*t) / (1 - a^2*sin^2(pi*t)); written in
    this form it is regular at t in {0, 1} (where it equals 1) and agrees
    with the general retract_n evaluated on the wobble lift.
    """
    asq = (p.a * math.sin(math.pi * t)) ** 2
    return 1.0 + s * asq / (1.0 - asq)


# ---------------------------------------------------------------------------
# Deformation retraction onto the parallel circle


def retract_n(frame: AxisFrame, s: float, q: Quaternion) -> float:
    """General renormalization factor (1 - (1-s)(x1^2+x2^2)) / (x0^2+x3^2)."""
    x0, x1, x2, x3 = frame.coords(q)
    perp = x0 * x0 + x3 * x3
    if perp <= NEAR_PERP_TOL:
        raise NearPerpendicularCircle(
            f"x0^2 + x3^2 = {perp!r} is too close to the perpendicular circle"
        )
    return (1.0 - (1.0 - s) * (x1 * x1 + x2 * x2)) / perp


def retract(frame: AxisFrame, s: float, q: UnitQuaternion) -> UnitQuaternion:
    """Deformation retraction of the sphere minus the perpendicular circle.

    Shrinks the (a, b) components by sqrt(1-s) and rescales the (1, u)
    components to keep the result on the unit sphere. At s = 0 this is the
    identity; at s = 1 the image lies on the parallel circle, which stays
    pointwise fixed for every s.
    """
    x0, x1, x2, x3 = frame.coords(q)
    perp = x0 * x0 + x3 * x3
    if perp <= NEAR_PERP_TOL:
        raise NearPerpendicularCircle(
            f"x0^2 + x3^2 = {perp!r} is too close to the perpendicular circle"
        )
    n = (1.0 - (1.0 - s) * (x1 * x1 + x2 * x2)) / perp
    root_n = math.sqrt(n)
    root_rest = math.sqrt(1.0 - s)
    return frame.from_coords(root_n * x0, root_rest * x1, root_rest * x2, root_n * x3)


# ---------------------------------------------------------------------------
# Angle linearization


def unwrap_angles(raw: np.ndarray) -> np.ndarray:
    """Reconstruct a continuous angle function from wrapped atan2 samples.

    Branch accumulation: each step takes the representative of the raw
    difference closest to zero. Adjacent jumps of a quarter turn or more
    raise DiscontinuousAngle.
    """
    raw = np.asarray(raw, dtype=float)
    out = np.empty_like(raw)
    out[0] = raw[0]
    for i in range(1, len(raw)):
        delta = math.remainder(raw[i] - raw[i - 1], 2.0 * math.pi)
        if abs(delta) >= MAX_ANGLE_JUMP:
            raise DiscontinuousAngle(
                f"angle jumps by {delta!r} between samples {i - 1} and {i}"
            )
        out[i] = out[i - 1] + delta
    return out


def linearize_angle(frame: AxisFrame, ts, thetas) -> Homotopy:
    """Deform a rotation about a fixed axis to constant angular velocity.

    ``thetas`` samples a continuous angle function on ``ts``; the homotopy
    is the convex combination of the sampled angle (piecewise-linear in
    between) with the line from theta(0) to theta(1).
    """
    ts = np.asarray(ts, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    if ts.ndim != 1 or thetas.shape != ts.shape or len(ts) < 2:
        raise ValueError("need matching 1-d time and angle samples")
    jumps = np.abs(np.diff(thetas))
    if jumps.size and jumps.max() >= MAX_ANGLE_JUMP:
        raise DiscontinuousAngle(f"largest angle step {jumps.max()!r} exceeds a quarter turn")

    a0 = float(thetas[-1] - thetas[0])
    phi0 = float(thetas[0])

    def theta_at(t: float) -> float:
        return float(np.interp(t, ts, thetas))

    def gamma(s: float, t: float) -> float:
        return (1.0 - s) * theta_at(t) + s * (a0 * t + phi0)

    def mapping(s: float, t: float) -> Rotation:
        return rho(frame.circle_point(gamma(s, t)))

    slope = float(np.abs(np.diff(thetas) / np.diff(ts)).max()) if len(ts) > 1 else 0.0
    speed = 2.2 * max(slope, abs(a0), 1.0)
    # endpoint conditions are not imposed here: an angle curve need not
    # describe a flip (theta(0) may be nonzero), so the source and target
    # are wrapped without validation
    source = Flip(sampler=lambda t: rho(frame.circle_point(theta_at(t))), landing=None)
    target = Flip(sampler=lambda t: rho(frame.circle_point(a0 * t + phi0)), landing=None)
    return Homotopy(
        map=mapping,
        source=source,
        target=target,
        quat_map=lambda s, t: frame.circle_point(gamma(s, t)),
        max_angular_speed=speed,
    )


# ---------------------------------------------------------------------------
# End-to-end stabilization


def _stabilization_data(f: Flip, frame: AxisFrame, n_samples: int):
    """Lift f, check the margins, and unwrap the retracted angle."""
    alift = ContinuousLift(f, n_samples)
    path = alift.path
    coords = np.array([frame.coords(UnitQuaternion(*q)) for q in path.qs])
    margins = coords[:, 0] ** 2 + coords[:, 3] ** 2
    if margins.min() <= PATH_MARGIN:
        raise IntersectsPerpendicularCircle(
            f"lift comes within x0^2+x3^2 = {margins.min()!r} of the perpendicular circle"
        )
    for idx in (0, -1):
        if coords[idx, 1] ** 2 + coords[idx, 2] ** 2 > ENDPOINT_CIRCLE_TOL:
            raise EndpointNotOnParallelCircle(
                "curve endpoints must be rotations about the stabilization axis"
            )
    raw = np.arctan2(coords[:, 3], coords[:, 0])
    try:
        thetas = unwrap_angles(raw)
    except DiscontinuousAngle:
        # A near-half-turn jump of the retracted angle between consecutive
        # samples means the lift crossed the perpendicular circle between
        # sample points even though every sampled margin looked safe.
        raise IntersectsPerpendicularCircle(
            "the retracted angle jumps between consecutive samples; the lift "
            "crosses the perpendicular circle between sample points"
        ) from None

    steps = np.linalg.norm(np.diff(path.qs, axis=0), axis=1) / np.diff(path.ts)
    lift_speed = float(steps.max()) if steps.size else 1.0
    speed_bound = 3.0 * max(2.0 * lift_speed, 1.0) / math.sqrt(float(margins.min()))
    return alift, thetas, speed_bound


def fit_stabilized_form(f: Flip, frame: AxisFrame, n_samples: int = 1024) -> StabilizedForm:
    """Rate and phase of the constant-velocity rotation f stabilizes to.

    The lift angle runs from theta(0) to theta(1); the rotation angle is
    twice the lift angle, so the stabilized curve rotates by
    2*(theta(1) - theta(0)) per unit time with phase 2*theta(0) mod 2*pi.
    """
    _, thetas, _ = _stabilization_data(f, frame, n_samples)
    a0 = float(thetas[-1] - thetas[0])
    phi0 = float(thetas[0])
    return StabilizedForm(rate=2.0 * a0, phase=(2.0 * phi0) % (2.0 * math.pi))


def stabilize(f: Flip, frame: AxisFrame, n_samples: int = 1024) -> Homotopy:
    """Deform f into a constant-rate rotation about the frame axis.

    Two stages glued at s = 1/2, each linearly reparametrized: first the
    retraction pushes the lift onto the parallel circle, then the rotation
    angle is linearized in time. The final slice is the constant-velocity
    rotation described by :func:`fit_stabilized_form`.
    """
    alift, thetas, speed_bound = _stabilization_data(f, frame, n_samples)
    skeleton_ts = alift.path.ts
    a0 = float(thetas[-1] - thetas[0])
    phi0 = float(thetas[0])

    def theta_at(t: float) -> float:
        """Continuous angle of the retracted lift at arbitrary t."""
        q = alift(t)
        x0, _, _, x3 = frame.coords(q)
        raw = math.atan2(x3, x0)
        idx = min(int(np.searchsorted(skeleton_ts, t)), len(skeleton_ts) - 1)
        anchor = float(thetas[idx])
        return anchor + math.remainder(raw - anchor, 2.0 * math.pi)

    def quat_map(s: float, t: float) -> UnitQuaternion:
        if s <= 0.5:
            return retract(frame, 2.0 * s, alift(t))
        sigma = 2.0 * s - 1.0
        gamma = (1.0 - sigma) * theta_at(t) + sigma * (a0 * t + phi0)
        return frame.circle_point(gamma)

    target = flip_from_sampler(lambda t: rho(frame.circle_point(a0 * t + phi0)))
    return Homotopy(
        map=lambda s, t: rho(quat_map(s, t)),
        source=f,
        target=target,
        quat_map=quat_map,
        max_angular_speed=speed_bound,
    )
