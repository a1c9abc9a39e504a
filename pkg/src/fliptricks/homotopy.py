"""Explicit homotopies between tricks and a grid-based verifier.

Each homotopy is a closed-form map H(s, t) of rotations with H(0, .) the
source flip, H(1, .) the target flip, H(s, 0) the identity, and H(s, 1) a
fixed landing configuration. The built-in deformations all act on lifts in
the 3-sphere and push them down through the covering map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import FlipTrickError
from .quat import UnitQuaternion, mul, rho
from .so3 import Rotation
from .tricks import (
    Concat,
    Flip,
    OShift,
    Power,
    Primitive,
    Product,
    TrickExpr,
    concat,
    make_flip,
    parse,
)

#: Default per-slice angular speed bound used by verify's continuity check.
DEFAULT_ANGULAR_SPEED = 4.0 * math.pi


class UnsupportedPair(FlipTrickError):
    """spread_concat is only defined for powers of the shove-it."""


@dataclass(frozen=True, eq=False)
class Homotopy:
    """A continuous deformation between two flips.

    ``map`` takes (s, t) in the unit square to a rotation. ``quat_map``,
    when present, gives the lifted deformation on the 3-sphere with
    quat_map(s, 0) = 1 for every s; it is used by exporters so plots carry
    lift-space data. ``max_angular_speed`` bounds the angular speed of each
    slice t -> map(s, t) and calibrates the verifier's continuity check.
    """

    map: Callable[[float, float], Rotation]
    source: Flip
    target: Flip
    quat_map: Optional[Callable[[float, float], UnitQuaternion]] = None
    max_angular_speed: float = DEFAULT_ANGULAR_SPEED

    def slice(self, s: float) -> Flip:
        """The flip t -> map(s, t)."""
        return Flip(sampler=lambda t: self.map(s, t), landing=self.source.landing, expr=None)


@dataclass(frozen=True)
class VerificationReport:
    """Maximal deviations of a homotopy from its contract on a sample grid.

    ``grid_s`` and ``grid_t`` are subdivision counts: the map is sampled at
    grid+1 equally spaced parameters per axis, endpoints included. The
    continuity modulus is the largest step between t-adjacent samples
    within a slice and must stay below max_angular_speed / min(grid); the
    transverse (s-direction) modulus is reported for information only,
    since contractions may move arbitrarily fast in s while each slice
    stays tame.
    """

    endpoint0_dev: float
    endpoint1_dev: float
    basepoint_dev: float
    landing_dev: float
    continuity_modulus: float
    continuity_bound: float
    s_step_max: float
    tol: float
    grid_s: int
    grid_t: int
    passed: bool

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{status}: source dev {self.endpoint0_dev:.3e}, target dev {self.endpoint1_dev:.3e}, "
            f"basepoint dev {self.basepoint_dev:.3e}, landing dev {self.landing_dev:.3e}, "
            f"t-step {self.continuity_modulus:.3e} (bound {self.continuity_bound:.3e}) "
            f"on a {self.grid_s}x{self.grid_t} grid at tol {self.tol:.1e}"
        )


def verify(h: Homotopy, grid_s: int, grid_t: int, tol: float) -> VerificationReport:
    """Check the homotopy conditions numerically on a (grid_s x grid_t) grid.

    Failures are reported, never raised. The four endpoint/basepoint/landing
    deviations must be at most ``tol``; the per-slice continuity modulus must
    be at most max_angular_speed/min(grid_s, grid_t).
    """
    if grid_s < 2 or grid_t < 2:
        raise ValueError("verification grids must have at least 2 subdivisions")
    ss = np.linspace(0.0, 1.0, grid_s + 1)
    ts = np.linspace(0.0, 1.0, grid_t + 1)
    grid = np.empty((len(ss), len(ts), 3, 3))
    for i, s in enumerate(ss):
        for j, t in enumerate(ts):
            grid[i, j] = h.map(float(s), float(t)).m

    src = np.stack([h.source.sampler(float(t)).m for t in ts])
    tgt = np.stack([h.target.sampler(float(t)).m for t in ts])

    endpoint0 = float(np.abs(grid[0] - src).max())
    endpoint1 = float(np.abs(grid[-1] - tgt).max())
    basepoint = float(np.abs(grid[:, 0] - np.eye(3)).max())
    landing = float(np.abs(grid[:, -1] - grid[0, -1]).max())
    t_steps = float(np.abs(np.diff(grid, axis=1)).max())
    s_steps = float(np.abs(np.diff(grid, axis=0)).max())

    bound = h.max_angular_speed / min(grid_s, grid_t)
    passed = (
        endpoint0 <= tol
        and endpoint1 <= tol
        and basepoint <= tol
        and landing <= tol
        and t_steps <= bound
    )
    return VerificationReport(
        endpoint0_dev=endpoint0,
        endpoint1_dev=endpoint1,
        basepoint_dev=basepoint,
        landing_dev=landing,
        continuity_modulus=t_steps,
        continuity_bound=bound,
        s_step_max=s_steps,
        tol=tol,
        grid_s=grid_s,
        grid_t=grid_t,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# The explicit homotopies


def _contract_quat(s: float, t: float) -> UnitQuaternion:
    c = math.cos(2.0 * math.pi * t)
    return UnitQuaternion(
        1.0 + s * (c - 1.0),
        0.0,
        -s * math.sin(2.0 * math.pi * t),
        -math.sqrt(max(2.0 * s * (1.0 - s) * (1.0 - c), 0.0)),
    )


def contract_double_kickflip() -> Homotopy:
    """Contraction of the double kickflip to the ollie.

    The lift of the double kickflip is a great circle through 1; sliding it
    through the hemisphere below shrinks it to the constant loop. The
    4-vector stays exactly on the unit sphere for all (s, t).
    """
    return Homotopy(
        map=lambda s, t: rho(_contract_quat(s, t)),
        source=make_flip(Primitive("O")),
        target=make_flip(parse("K^2")),
        quat_map=_contract_quat,
    )


def _kick_heel_quat(s: float, t: float) -> UnitQuaternion:
    st = math.sin(math.pi * t)
    return UnitQuaternion(
        math.cos(math.pi * t), 0.0, -st * math.cos(math.pi * s), -st * math.sin(math.pi * s)
    )


def kick_to_heel() -> Homotopy:
    """Deformation of the kickflip into the heelflip.

    The two lifts are great semicircles; rotating one into the other about
    the k axis sweeps through the 360 shove-it at s = 1/2.
    """
    return Homotopy(
        map=lambda s, t: rho(_kick_heel_quat(s, t)),
        source=make_flip(Primitive("K")),
        target=make_flip(parse("K^-1")),
        quat_map=_kick_heel_quat,
        max_angular_speed=2.0 * math.pi,
    )


def _kick_s2_quat(s: float, t: float) -> UnitQuaternion:
    st = math.sin(math.pi * t)
    half = math.pi * s / 2.0
    return UnitQuaternion(math.cos(math.pi * t), 0.0, -st * math.cos(half), -st * math.sin(half))


def kick_to_360shuv() -> Homotopy:
    """Deformation of the kickflip into the 360 shove-it.

    The rotation axis moves continuously from -j to -k; this is the first
    half of :func:`kick_to_heel` with the parameter rescaled to [0, 1].
    """
    return Homotopy(
        map=lambda s, t: rho(_kick_s2_quat(s, t)),
        source=make_flip(Primitive("K")),
        target=make_flip(parse("S^2")),
        quat_map=_kick_s2_quat,
        max_angular_speed=2.0 * math.pi,
    )


def varial_to_540() -> Homotopy:
    """Deformation of the varial kickflip into the 540 shove-it.

    Pointwise left multiplication of :func:`kick_to_360shuv` by the
    shove-it curve.
    """
    shove = make_flip(Primitive("S"))

    def mapping(s: float, t: float) -> Rotation:
        return Rotation(shove.sampler(t).m @ rho(_kick_s2_quat(s, t)).m)

    def quat_map(s: float, t: float) -> UnitQuaternion:
        half = math.pi * t / 2.0
        sigma = UnitQuaternion(math.cos(half), 0.0, 0.0, -math.sin(half))
        return mul(sigma, _kick_s2_quat(s, t))

    return Homotopy(
        map=mapping,
        source=make_flip(parse("S * K")),
        target=make_flip(parse("S^3")),
        quat_map=quat_map,
        max_angular_speed=3.0 * math.pi,
    )


def _shove_power(expr: TrickExpr) -> Optional[int]:
    if isinstance(expr, Primitive):
        if expr.name == "O":
            return 0
        if expr.name == "S":
            return 1
        return None
    if isinstance(expr, Power) and isinstance(expr.base, Primitive) and expr.base.name == "S":
        return expr.n
    return None


def spread_concat(f2: Flip, f1: Flip) -> Homotopy:
    """Deform the concatenation of two shove-it powers into their product.

    Each half is "spread out" until it occupies the whole interval: the
    first factor plays on [0, (s+1)/2] and the second on [(1-s)/2, 1], so
    at s = 0 they play one after the other and at s = 1 simultaneously.
    Stated for the commuting z-axis family only.
    """
    m = _shove_power(f2.expr) if f2.expr is not None else None
    n = _shove_power(f1.expr) if f1.expr is not None else None
    if m is None or n is None:
        raise UnsupportedPair("spread_concat needs powers of the shove-it (O, S or S^n)")

    def angles(s: float, t: float) -> tuple[float, float]:
        a = min(max(2.0 * t / (s + 1.0), 0.0), 1.0)
        b = min(max((2.0 * t + s - 1.0) / (s + 1.0), 0.0), 1.0)
        return math.pi * m * a, math.pi * n * b

    def mapping(s: float, t: float) -> Rotation:
        u, v = angles(s, t)
        c, sn = math.cos(u + v), math.sin(u + v)
        return Rotation(np.array([[c, sn, 0.0], [-sn, c, 0.0], [0.0, 0.0, 1.0]]))

    def quat_map(s: float, t: float) -> UnitQuaternion:
        u, v = angles(s, t)
        half = 0.5 * (u + v)
        return UnitQuaternion(math.cos(half), 0.0, 0.0, -math.sin(half))

    product_expr = Product(f2.expr, f1.expr)
    return Homotopy(
        map=mapping,
        source=concat(f2, f1),
        target=make_flip(product_expr),
        quat_map=quat_map,
        max_angular_speed=2.0 * math.pi * (abs(m) + abs(n)),
    )


#: CLI-facing names of the built-in homotopies.
NAMED_HOMOTOPIES: dict[str, Callable[[], Homotopy]] = {
    "contract-k2": contract_double_kickflip,
    "kick-heel": kick_to_heel,
    "kick-s2": kick_to_360shuv,
    "varial-s3": varial_to_540,
    "spread-s2-s": lambda: spread_concat(make_flip(parse("S^2")), make_flip(Primitive("S"))),
}
