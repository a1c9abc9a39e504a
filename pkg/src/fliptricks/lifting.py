"""Path lifting through the double cover and homotopy classification.

Every flip lifts uniquely to a curve on the unit 3-sphere starting at 1,
whose endpoint lies in the four-element subgroup {1, -k, -1, k}. The
endpoint alone classifies the flip up to deformation; the four classes add
like residues mod 4 under concatenation, with residue n corresponding to
the endpoint (-k)^n.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FlipTrickError
from .quat import K, MINUS_K, MINUS_ONE, ONE, UnitQuaternion
from .so3 import AmbiguousPreimage, nearest_preimage
from .tricks import Flip, NotAFlip

#: Largest accepted 4-distance between consecutive lift samples. Antipodal
#: sheets are sqrt(2) apart in the worst case, so staying safely below
#: sqrt(2) makes sheet selection unambiguous.
SHEET_MARGIN = math.sqrt(2.0) - 0.05

#: Maximum number of interval bisections before a step is declared
#: discontinuous.
MAX_REFINE_DEPTH = 20

#: Default sampling resolution; catalog tricks have angular speed at most
#: 3*pi so this leaves the per-step distance far below the sheet margin.
DEFAULT_SAMPLES = 1024

#: Default endpoint-snap tolerance; lift error is dominated by the matrix
#: to quaternion extraction, which is far below this at default grids.
SNAP_TOL = 1e-6


class InsufficientContinuity(FlipTrickError):
    """Refinement cannot keep consecutive lift samples within the margin."""


class NotALandingLift(FlipTrickError):
    """Lift endpoint is not near any of {1, -k, -1, k}."""


class UnknownLift(FlipTrickError):
    """Analytic lift name outside sigma/kappa/upsilon with integer power."""


#: Landing endpoints in residue order: (-k)^n for n = 0, 1, 2, 3.
LANDING_ENDPOINTS: tuple[UnitQuaternion, ...] = (ONE, MINUS_K, MINUS_ONE, K)

_CLASS_LABELS = ("ollie-class", "180-class", "360-class", "540-class")


@dataclass(frozen=True)
class HomotopyClass:
    """Residue mod 4; residue n corresponds to the lift endpoint (-k)^n."""

    residue: int

    def __post_init__(self):
        if self.residue not in (0, 1, 2, 3):
            raise ValueError(f"residue {self.residue!r} not in 0..3")

    @property
    def endpoint(self) -> UnitQuaternion:
        return LANDING_ENDPOINTS[self.residue]

    @property
    def label(self) -> str:
        return _CLASS_LABELS[self.residue]

    def __add__(self, other: "HomotopyClass") -> "HomotopyClass":
        return HomotopyClass((self.residue + other.residue) % 4)

    def __int__(self) -> int:
        return self.residue

    def __str__(self) -> str:
        return f"{self.residue} ({self.label})"


def class_add(a: HomotopyClass, b: HomotopyClass) -> HomotopyClass:
    """Group law on classes: residues add mod 4."""
    return a + b


@dataclass(frozen=True, eq=False)
class QuatPath:
    """A sampled continuous lift on the unit 3-sphere, based at 1."""

    ts: np.ndarray
    qs: np.ndarray  # shape (n, 4), rows are unit quaternions

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        qs = np.asarray(self.qs, dtype=float)
        if ts.ndim != 1 or qs.shape != (len(ts), 4) or len(ts) < 2:
            raise ValueError("need matching (n,) times and (n, 4) samples with n >= 2")
        if not (np.diff(ts) > 0).all() or ts[0] != 0.0 or ts[-1] != 1.0:
            raise ValueError("times must increase strictly from 0 to 1")
        if np.abs(qs[0] - [1.0, 0.0, 0.0, 0.0]).max() > 1e-9:
            raise ValueError("lift must be based at 1")
        steps = np.linalg.norm(np.diff(qs, axis=0), axis=1)
        if steps.size and steps.max() >= SHEET_MARGIN:
            raise ValueError("consecutive samples exceed the sheet-selection margin")
        ts.flags.writeable = False
        qs.flags.writeable = False
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "qs", qs)

    def __len__(self) -> int:
        return len(self.ts)

    @property
    def samples(self):
        """Iterate (t, UnitQuaternion) pairs."""
        for t, q in zip(self.ts, self.qs):
            yield float(t), UnitQuaternion(*q)

    def endpoint(self) -> UnitQuaternion:
        return UnitQuaternion(*self.qs[-1])


def _step(prev: UnitQuaternion, q: UnitQuaternion) -> float:
    return math.sqrt(
        (q.q0 - prev.q0) ** 2 + (q.q1 - prev.q1) ** 2 + (q.q2 - prev.q2) ** 2 + (q.q3 - prev.q3) ** 2
    )


def _lift_segment(sampler, t0: float, q0: UnitQuaternion, t1: float, depth: int, out: list):
    """Append lift samples for (t0, t1], bisecting when the sheet is unclear."""
    try:
        q1 = nearest_preimage(sampler(t1), q0)
    except AmbiguousPreimage:
        q1 = None
    if q1 is not None and _step(q0, q1) < SHEET_MARGIN:
        out.append((t1, q1))
        return q1
    if depth >= MAX_REFINE_DEPTH:
        raise InsufficientContinuity(
            f"curve jumps more than the sheet margin near t = {t1!r} even after "
            f"{MAX_REFINE_DEPTH} bisections; it is discontinuous at sampling resolution"
        )
    tm = 0.5 * (t0 + t1)
    qm = _lift_segment(sampler, t0, q0, tm, depth + 1, out)
    return _lift_segment(sampler, tm, qm, t1, depth + 1, out)


def lift(f: Flip, n_samples: int = DEFAULT_SAMPLES) -> QuatPath:
    """The unique lift of a flip to the 3-sphere starting at 1.

    Samples at n_samples uniform times; whenever a consecutive step would
    exceed the sheet margin the interval is bisected (up to 20 levels), and
    the extra samples are kept in the output.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    start = f.sampler(0.0)
    if np.abs(start.m - np.eye(3)).max() > 1e-9:
        raise NotAFlip("curve does not start at the identity; cannot lift from the basepoint 1")
    samples = [(0.0, ONE)]
    q_prev = ONE
    grid = np.linspace(0.0, 1.0, n_samples)
    for t0, t1 in zip(grid[:-1], grid[1:]):
        q_prev = _lift_segment(f.sampler, float(t0), q_prev, float(t1), 0, samples)
    ts = np.array([t for t, _ in samples])
    qs = np.array([[q.q0, q.q1, q.q2, q.q3] for _, q in samples])
    return QuatPath(ts, qs)


class ContinuousLift:
    """Callable lift: exact lift values at arbitrary t.

    A sampled lift is kept as a skeleton of anchors; a query at time t
    re-extracts the preimage of f(t) against the nearest anchor, so values
    are exact up to extraction precision rather than interpolation error.
    """

    def __init__(self, f: Flip, n_samples: int = DEFAULT_SAMPLES):
        self.flip = f
        self.path = lift(f, n_samples)
        self._ts = self.path.ts
        self._qs = self.path.qs

    def __call__(self, t: float) -> UnitQuaternion:
        idx = int(np.searchsorted(self._ts, t))
        if idx >= len(self._ts):
            idx = len(self._ts) - 1
        elif idx > 0 and t - self._ts[idx - 1] < self._ts[idx] - t:
            idx -= 1
        anchor = UnitQuaternion(*self._qs[idx])
        return nearest_preimage(self.flip.sampler(t), anchor)


def endpoint_snap(q: UnitQuaternion, tol: float = SNAP_TOL) -> UnitQuaternion:
    """Snap a lift endpoint to the unique element of {1, -k, -1, k} within tol."""
    if not 0.0 < tol < 0.5:
        raise ValueError("snap tolerance must lie in (0, 0.5)")
    for target in LANDING_ENDPOINTS:
        if _step(target, q) <= tol:
            return target
    raise NotALandingLift(f"endpoint {q} is not within {tol} of any landing lift")


def classify(f: Flip, n_samples: int = DEFAULT_SAMPLES, snap_tol: float = SNAP_TOL) -> HomotopyClass:
    """Homotopy class of a flip: lift it, snap the endpoint, read the residue.

    Works from the sampler alone, so numerically defined flips (wobbles,
    homotopy slices) classify exactly like closed-form ones.
    """
    end = endpoint_snap(lift(f, n_samples).endpoint(), snap_tol)
    return HomotopyClass(LANDING_ENDPOINTS.index(end))


# ---------------------------------------------------------------------------
# Analytic lifts

_LIFT_RE = _re.compile(r"^(sigma|kappa|upsilon)(?:\^(-?\d+))?$")


def analytic_lift(name: str) -> Callable[[float], UnitQuaternion]:
    """Closed-form lift curves sigma/kappa/upsilon with integer powers.

    sigma^n(t) = cos(n*pi*t/2) - sin(n*pi*t/2) k   (shove-it family)
    kappa^n(t) = cos(n*pi*t)   - sin(n*pi*t)   j   (kickflip family)
    upsilon^n(t) = cos(n*pi*t/2) + sin(n*pi*t/2) i (x half-turn family)
    """
    m = _LIFT_RE.match(name.strip())
    if m is None:
        raise UnknownLift(f"unknown analytic lift {name!r}")
    base, power = m.group(1), int(m.group(2) or 1)

    if base == "sigma":
        return lambda t: UnitQuaternion(
            math.cos(power * math.pi * t / 2.0), 0.0, 0.0, -math.sin(power * math.pi * t / 2.0)
        )
    if base == "kappa":
        return lambda t: UnitQuaternion(
            math.cos(power * math.pi * t), 0.0, -math.sin(power * math.pi * t), 0.0
        )
    return lambda t: UnitQuaternion(
        math.cos(power * math.pi * t / 2.0), math.sin(power * math.pi * t / 2.0), 0.0, 0.0
    )
