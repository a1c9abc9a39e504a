"""Rotation matrices and the two-valued inverse of the covering map.

A board configuration is a 3x3 special orthogonal matrix whose columns are
the moving frame vectors. Every rotation has exactly two unit-quaternion
preimages q and -q; ``to_quaternion`` returns a canonical one, while
``nearest_preimage`` selects the sheet closest to an anchor (the primitive
used for continuous path lifting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FlipTrickError

#: Construction tolerance for orthogonality / determinant checks.
ROTATION_TOL = 1e-9

#: Two candidate preimages closer than this are considered a tie.
TIE_TOL = 1e-12


class NotARotation(FlipTrickError):
    """The matrix is not special orthogonal within tolerance."""


class AmbiguousPreimage(FlipTrickError):
    """Both quaternion preimages are equidistant from the anchor."""


def is_special_orthogonal(m, tol: float) -> bool:
    """Return True iff ``m.T @ m = I3`` and ``det(m) = 1`` within ``tol``."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.isfinite(m).all():
        return False
    gram_dev = np.abs(m.T @ m - np.eye(3)).max()
    det_dev = abs(float(np.linalg.det(m)) - 1.0)
    return gram_dev <= tol and det_dev <= tol


@dataclass(frozen=True, eq=False)
class Rotation:
    """Element of SO(3), validated on construction and immutable after."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if not is_special_orthogonal(m, ROTATION_TOL):
            raise NotARotation(f"matrix is not in SO(3) within {ROTATION_TOL}")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(self.m @ other.m)

    def inverse(self) -> "Rotation":
        return Rotation(self.m.T)

    def apply(self, v) -> np.ndarray:
        """Apply the rotation to a 3-vector."""
        return self.m @ np.asarray(v, dtype=float)

    def __repr__(self):
        rows = "; ".join(" ".join(f"{x:.6g}" for x in row) for row in self.m)
        return f"Rotation([{rows}])"


IDENTITY = Rotation(np.eye(3))
REVERSED = Rotation(np.diag([-1.0, -1.0, 1.0]))


class LandingConfig(Enum):
    """The two admissible final configurations of a flip.

    IDENTITY is the resting position; REVERSED has nose and tail swapped
    (the diag(-1, -1, 1) configuration).
    """

    IDENTITY = "I"
    REVERSED = "O"

    @property
    def rotation(self) -> Rotation:
        return IDENTITY if self is LandingConfig.IDENTITY else REVERSED


def _extract_quaternion(m: np.ndarray):
    """Raw four-branch matrix -> quaternion extraction.

    Picks the largest of the four squared components (1+trace and
    1+2*m_ii-trace) as the pivot, then reads the rest from off-diagonal
    sums/differences. Stable for all rotation angles, including 180 deg.
    Returns an (unnormalized by up to O(tol)) 4-tuple; sign is arbitrary.
    """
    m00, m01, m02 = float(m[0, 0]), float(m[0, 1]), float(m[0, 2])
    m10, m11, m12 = float(m[1, 0]), float(m[1, 1]), float(m[1, 2])
    m20, m21, m22 = float(m[2, 0]), float(m[2, 1]), float(m[2, 2])
    tr = m00 + m11 + m22

    cand = (1.0 + tr, 1.0 + 2.0 * m00 - tr, 1.0 + 2.0 * m11 - tr, 1.0 + 2.0 * m22 - tr)
    pivot = max(range(4), key=lambda i: cand[i])
    s = math.sqrt(max(cand[pivot], 0.0))  # = 2*|q_pivot|
    inv = 1.0 / (2.0 * s)

    if pivot == 0:
        q0 = 0.5 * s
        q1 = (m21 - m12) * inv
        q2 = (m02 - m20) * inv
        q3 = (m10 - m01) * inv
    elif pivot == 1:
        q1 = 0.5 * s
        q0 = (m21 - m12) * inv
        q2 = (m01 + m10) * inv
        q3 = (m02 + m20) * inv
    elif pivot == 2:
        q2 = 0.5 * s
        q0 = (m02 - m20) * inv
        q1 = (m01 + m10) * inv
        q3 = (m12 + m21) * inv
    else:
        q3 = 0.5 * s
        q0 = (m10 - m01) * inv
        q1 = (m02 + m20) * inv
        q2 = (m12 + m21) * inv
    return q0, q1, q2, q3


def to_quaternion(r: Rotation):
    """Canonical unit-quaternion preimage of a rotation.

    Of the two preimages {q, -q} this returns the one with q0 > 0; if q0 is
    zero (within 1e-12) the first nonzero component among (q1, q2, q3) is
    made positive, so the result is a deterministic function of ``r``.
    """
    from .quat import UnitQuaternion

    if not isinstance(r, Rotation):
        r = Rotation(r)
    q = _extract_quaternion(r.m)
    flip = False
    for comp in q:
        if abs(comp) > TIE_TOL:
            flip = comp < 0.0
            break
    if flip:
        q = tuple(-c for c in q)
    return UnitQuaternion(*q)


def nearest_preimage(r: Rotation, anchor):
    """The preimage of ``r`` (q or -q) closest to ``anchor`` in R^4.

    Raises AmbiguousPreimage when the two candidates are equidistant from
    the anchor (an angular step of pi in the 3-sphere), since sheet
    selection is then meaningless.
    """
    from .quat import UnitQuaternion

    if not isinstance(r, Rotation):
        r = Rotation(r)
    q0, q1, q2, q3 = _extract_quaternion(r.m)
    a0, a1, a2, a3 = anchor.q0, anchor.q1, anchor.q2, anchor.q3
    # |q - a|^2 and |-q - a|^2 differ only through the dot product term.
    dot = q0 * a0 + q1 * a1 + q2 * a2 + q3 * a3
    d_plus = (q0 - a0) ** 2 + (q1 - a1) ** 2 + (q2 - a2) ** 2 + (q3 - a3) ** 2
    d_minus = (q0 + a0) ** 2 + (q1 + a1) ** 2 + (q2 + a2) ** 2 + (q3 + a3) ** 2
    if abs(math.sqrt(d_plus) - math.sqrt(d_minus)) < TIE_TOL:
        raise AmbiguousPreimage(
            "both preimages are equidistant from the anchor; "
            "the step between samples is too large to pick a sheet"
        )
    if dot >= 0.0:
        return UnitQuaternion(q0, q1, q2, q3)
    return UnitQuaternion(-q0, -q1, -q2, -q3)
