"""Sphere projection of lifts and JSON/CSV exporters.

Lift curves with no i-component live on the 2-sphere cut out by the
(1, j, k) subspace; general lifts are orthogonally projected there and
renormalized. Plot coordinates follow the convention (x, -y, -z), i.e. a
sample (q0, q1, q2, q3) is drawn at (q0, -q2, -q3) after renormalization.

Document schemas (UTF-8 JSON, matrices row-major, full float precision):

* frames:    {"trick", "class", "landing": "I"|"O",
              "samples": [{"t", "R": [9 reals]}]}
* lift:      {"trick", "class", "n_samples", "samples": [{"t", "q": [4]}]}
* projected: {"trick", "points": [[x, y, z], ...]}
* homotopy:  {"name", "s_grid", "t_grid", "quat": [[4 reals], ...]}
             with quat row-major over (s, t) and each row a lift based at 1
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import FlipTrickError
from .homotopy import Homotopy
from .lifting import ContinuousLift, QuatPath, classify
from .tricks import Flip

#: Samples whose projected norm falls at or below this cannot be drawn.
PROJECTION_TOL = 1e-12


class DegenerateProjection(FlipTrickError):
    """A sample projects to (nearly) zero; the sphere convention fails."""


@dataclass(frozen=True, eq=False)
class ProjectedCurve:
    """A polyline on the unit 2-sphere in plot coordinates."""

    points: np.ndarray  # shape (n, 3), unit rows
    label: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array")
        norms = np.linalg.norm(pts, axis=1)
        if np.abs(norms - 1.0).max() > 1e-9:
            raise ValueError("projected points must lie on the unit sphere")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)


def project(path: QuatPath, label: str = "") -> ProjectedCurve:
    """Drop the i-component, renormalize, and apply the (x, -y, -z) signs."""
    qs = path.qs
    dropped = qs[:, [0, 2, 3]]
    norms = np.linalg.norm(dropped, axis=1)
    bad = norms <= PROJECTION_TOL
    if bad.any():
        t_bad = float(path.ts[int(np.argmax(bad))])
        raise DegenerateProjection(
            f"sample at t = {t_bad!r} projects to norm <= {PROJECTION_TOL}"
        )
    pts = dropped / norms[:, None]
    pts[:, 1] = -pts[:, 1]
    pts[:, 2] = -pts[:, 2]
    return ProjectedCurve(points=pts, label=label)


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """Sampled configuration matrices of a trick plus identifying metadata."""

    trick: str
    residue: int
    landing: str  # "I" or "O"
    ts: np.ndarray
    matrices: np.ndarray  # shape (n, 3, 3)


def frame_sequence(f: Flip, n: int, name: Optional[str] = None) -> FrameSequence:
    """Sample a flip at n uniform times with its class and landing."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    ts = np.linspace(0.0, 1.0, n)
    mats = np.stack([f.sampler(float(t)).m for t in ts])
    residue = classify(f).residue
    return FrameSequence(
        trick=name if name is not None else f.name,
        residue=residue,
        landing=f.landing.value,
        ts=ts,
        matrices=mats,
    )


def export_frames(f: Flip, n: int, fmt: str = "json", name: Optional[str] = None) -> str:
    """Serialize a frame sequence as a JSON or CSV document."""
    seq = frame_sequence(f, n, name)
    if fmt == "json":
        doc = {
            "trick": seq.trick,
            "class": seq.residue,
            "landing": seq.landing,
            "samples": [
                {"t": float(t), "R": [float(x) for x in m.ravel()]}
                for t, m in zip(seq.ts, seq.matrices)
            ],
        }
        return json.dumps(doc, indent=2)
    if fmt == "csv":
        header = "t," + ",".join(f"r{i}{j}" for i in range(1, 4) for j in range(1, 4))
        lines = [header]
        for t, m in zip(seq.ts, seq.matrices):
            lines.append(",".join(f"{x:.17g}" for x in [t, *m.ravel()]))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'json' or 'csv'")


def lift_document(f: Flip, n_samples: int, name: Optional[str] = None) -> str:
    """Serialize the lift of a flip (sampled on the 3-sphere)."""
    curve = ContinuousLift(f, n_samples)
    path = curve.path
    doc = {
        "trick": name if name is not None else f.name,
        "class": classify(f, n_samples).residue,
        "n_samples": len(path),
        "samples": [
            {"t": float(t), "q": [float(x) for x in q]} for t, q in zip(path.ts, path.qs)
        ],
    }
    return json.dumps(doc, indent=2)


def projection_document(f: Flip, n_samples: int, name: Optional[str] = None) -> str:
    """Serialize the renormalized sphere projection of a flip's lift."""
    from .lifting import lift

    label = name if name is not None else f.name
    curve = project(lift(f, n_samples), label=label)
    doc = {"trick": label, "points": [[float(x) for x in p] for p in curve.points]}
    return json.dumps(doc, indent=2)


def homotopy_document(h: Homotopy, grid_s: int, grid_t: int, name: str = "") -> str:
    """Serialize a homotopy as a lift-space grid.

    ``grid_s`` and ``grid_t`` are subdivision counts (grid+1 samples per
    axis). Rows are the lifted slices based at 1; the rotations are
    recoverable through the covering map. Homotopies without a closed-form
    lift are lifted slice by slice.
    """
    ss = np.linspace(0.0, 1.0, grid_s + 1)
    ts = np.linspace(0.0, 1.0, grid_t + 1)
    rows = []
    for s in ss:
        if h.quat_map is not None:
            row = [h.quat_map(float(s), float(t)) for t in ts]
        else:
            curve = ContinuousLift(h.slice(float(s)), max(257, 2 * grid_t + 1))
            row = [curve(float(t)) for t in ts]
        rows.extend([[q.q0, q.q1, q.q2, q.q3] for q in row])
    doc = {
        "name": name,
        "s_grid": [float(s) for s in ss],
        "t_grid": [float(t) for t in ts],
        "quat": rows,
    }
    return json.dumps(doc)
