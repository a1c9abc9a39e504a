"""Static figures and animations from exported flip-trick JSON.

This package only renders: lifting, classification, and projection all
happen upstream, and their results arrive as JSON documents. The single
piece of geometry applied here is the plotting convention for raw lift
samples, drawing a quaternion (q0, q1, q2, q3) at (q0, -q2, -q3); curves
that already come projected are drawn verbatim.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.animation import FuncAnimation, PillowWriter  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

#: Fixed palette so output bytes do not depend on matplotlib defaults.
PALETTE = ("#1f5fa8", "#c44e52", "#2e8b57", "#8172b2", "#b8860b", "#4c72b0")


class SchemaError(Exception):
    """Input JSON does not match any of the exported document schemas."""


@dataclass(frozen=True)
class PlotSpec:
    """What to render: input documents, kind, output file, view options."""

    inputs: Sequence[str]
    kind: str  # curve | homotopy-sweep | animation
    output: str
    resolution: tuple[int, int] = (800, 800)
    camera: tuple[float, float] = (-60.0, 25.0)  # azimuth, elevation
    fps: int = 30
    dpi: int = 100
    title: str = field(default="")


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return doc


def curve_points(doc: dict) -> np.ndarray:
    """Plot coordinates of a projected-curve or lift document."""
    if "points" in doc:
        pts = np.asarray(doc["points"], dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
            raise SchemaError("'points' must be a non-empty list of [x, y, z]")
        return pts
    if "samples" in doc:
        samples = doc["samples"]
        if not samples or not all("q" in s for s in samples):
            raise SchemaError("'samples' must be a non-empty list with 'q' entries")
        qs = np.asarray([s["q"] for s in samples], dtype=float)
        if qs.ndim != 2 or qs.shape[1] != 4:
            raise SchemaError("lift samples must have 4-component 'q' values")
        return np.column_stack([qs[:, 0], -qs[:, 2], -qs[:, 3]])
    raise SchemaError("document has neither 'points' nor 'samples'")


def homotopy_grid(doc: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    for key in ("s_grid", "t_grid", "quat"):
        if key not in doc:
            raise SchemaError(f"homotopy document is missing {key!r}")
    ss = np.asarray(doc["s_grid"], dtype=float)
    ts = np.asarray(doc["t_grid"], dtype=float)
    qs = np.asarray(doc["quat"], dtype=float)
    if qs.shape != (len(ss) * len(ts), 4):
        raise SchemaError(
            f"quat grid has shape {qs.shape}, expected ({len(ss) * len(ts)}, 4)"
        )
    return ss, ts, qs.reshape(len(ss), len(ts), 4)


def frame_samples(doc: dict) -> tuple[str, np.ndarray]:
    if "samples" not in doc or not doc["samples"]:
        raise SchemaError("frame document needs a non-empty 'samples' list")
    if not all("R" in s for s in doc["samples"]):
        raise SchemaError("frame samples must carry 'R' matrices")
    mats = np.asarray([s["R"] for s in doc["samples"]], dtype=float)
    if mats.ndim != 2 or mats.shape[1] != 9:
        raise SchemaError("'R' entries must be 9-element row-major matrices")
    return str(doc.get("trick", "")), mats.reshape(-1, 3, 3)


# ---------------------------------------------------------------------------
# Drawing


def _new_axes(spec: PlotSpec):
    w, h = spec.resolution
    fig = plt.figure(figsize=(w / spec.dpi, h / spec.dpi), dpi=spec.dpi)
    ax = fig.add_subplot(projection="3d")
    az, el = spec.camera
    ax.view_init(elev=el, azim=az)
    ax.set_box_aspect((1, 1, 1))
    return fig, ax


def _draw_sphere(ax):
    theta = np.linspace(0.0, np.pi, 13)
    phi = np.linspace(0.0, 2.0 * np.pi, 25)
    tt, pp = np.meshgrid(theta, phi)
    ax.plot_wireframe(
        np.sin(tt) * np.cos(pp),
        np.sin(tt) * np.sin(pp),
        np.cos(tt),
        color="0.85",
        linewidth=0.4,
    )
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_zlim(-1.05, 1.05)
    ax.set_axis_off()


def plot_curve(spec: PlotSpec) -> str:
    """One sphere wireframe with one polyline per input document."""
    fig, ax = _new_axes(spec)
    _draw_sphere(ax)
    labels = []
    for idx, path in enumerate(spec.inputs):
        doc = load_document(path)
        pts = curve_points(doc)
        color = PALETTE[idx % len(PALETTE)]
        ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color=color, linewidth=1.8)
        ax.scatter(*pts[0], color=color, s=25, marker="o")
        ax.scatter(*pts[-1], color=color, s=35, marker="^")
        labels.append(str(doc.get("trick", f"curve {idx}")))
    ax.set_title(spec.title or ", ".join(labels))
    fig.savefig(spec.output, dpi=spec.dpi)
    plt.close(fig)
    return spec.output


def plot_homotopy(spec: PlotSpec) -> str:
    """A family of lifted slices on one sphere with a gradient over s."""
    if len(spec.inputs) != 1:
        raise SchemaError("homotopy sweeps take exactly one input document")
    doc = load_document(spec.inputs[0])
    ss, _, grid = homotopy_grid(doc)
    fig, ax = _new_axes(spec)
    _draw_sphere(ax)
    cmap = plt.get_cmap("viridis")
    for i, s in enumerate(ss):
        shade = cmap(0.1 + 0.8 * (s if len(ss) > 1 else 0.0))
        pts = np.column_stack([grid[i, :, 0], -grid[i, :, 2], -grid[i, :, 3]])
        ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color=shade, linewidth=1.2)
    ax.set_title(spec.title or str(doc.get("name", "homotopy sweep")))
    fig.savefig(spec.output, dpi=spec.dpi)
    plt.close(fig)
    return spec.output


#: Board glyph in resting position: deck outline plus a contrasting nose cap
#: (nose towards +y), so orientation and nose/tail stay readable.
_DECK = np.array(
    [
        [-0.24, -0.52, 0.0],
        [0.24, -0.52, 0.0],
        [0.30, -0.30, 0.0],
        [0.30, 0.34, 0.0],
        [0.18, 0.52, 0.0],
        [0.0, 0.60, 0.0],
        [-0.18, 0.52, 0.0],
        [-0.30, 0.34, 0.0],
        [-0.30, -0.30, 0.0],
    ]
)
_NOSE = np.array([[0.0, 0.60, 0.0], [0.16, 0.40, 0.0], [-0.16, 0.40, 0.0]])


def animate(spec: PlotSpec) -> str:
    """Render the board glyph under each sampled configuration as a GIF."""
    if len(spec.inputs) != 1:
        raise SchemaError("animations take exactly one input document")
    trick, mats = frame_samples(load_document(spec.inputs[0]))
    fig, ax = _new_axes(spec)

    def draw(i):
        ax.clear()
        ax.set_xlim(-0.8, 0.8)
        ax.set_ylim(-0.8, 0.8)
        ax.set_zlim(-0.8, 0.8)
        ax.set_axis_off()
        az, el = spec.camera
        ax.view_init(elev=el, azim=az)
        deck = (mats[i] @ _DECK.T).T
        nose = (mats[i] @ _NOSE.T).T
        ax.add_collection3d(
            Poly3DCollection([deck], facecolor="#8c6f4e", edgecolor="#3d2f1f", linewidth=1.0)
        )
        ax.add_collection3d(
            Poly3DCollection([nose], facecolor="#c44e52", edgecolor="#3d2f1f", linewidth=0.8)
        )
        ax.set_title(spec.title or trick)
        return ()

    anim = FuncAnimation(fig, draw, frames=len(mats), blit=False)
    anim.save(spec.output, writer=PillowWriter(fps=spec.fps))
    plt.close(fig)
    return spec.output


RENDERERS = {
    "curve": plot_curve,
    "homotopy-sweep": plot_homotopy,
    "animation": animate,
}


def render(spec: PlotSpec) -> str:
    try:
        renderer = RENDERERS[spec.kind]
    except KeyError:
        raise SchemaError(f"unknown kind {spec.kind!r}; expected one of {sorted(RENDERERS)}")
    return renderer(spec)
