#!/usr/bin/env python3
"""Render figures from spinroof output files.

Three figure types:
  diagram3d          - 3D scatter of uncertainty-diagram tuples with the
                       closed-form bounding plane c1 + c2 + c3 = s
  purity_tetrahedron - QFI-tuple scatter colored by coordinate sum
  bloch_chords       - Bloch sphere with a chord decomposition

Inputs are the CSV/JSON files written by the spinroof CLI; this script never
imports from that package and never modifies its inputs. Output is
deterministic for a fixed input and camera.
"""

import argparse
import json
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DIAGRAM_SCHEMA = "spinroof.sample-diagram.v1"
DECOMPOSITION_SCHEMA = "spinroof.decomposition.v1"

AXIS_LABELS = {
    "vvv": ("var 1", "var 2", "var 3"),
    "vvq": ("var 1", "var 2", "QFI/4"),
    "qqq": ("QFI/4 (1)", "QFI/4 (2)", "QFI/4 (3)"),
}


class InputError(Exception):
    pass


def read_diagram_csv(path):
    """Parse a sample-diagram CSV; returns (two_s, mode, rows array Nx5)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(f"# schema: {DIAGRAM_SCHEMA}"):
        raise InputError(
            f"{path}: first line does not declare schema {DIAGRAM_SCHEMA}"
        )
    meta = dict(
        part.split("=", 1) for part in lines[0].split()[3:] if "=" in part
    )
    try:
        two_s = int(meta["spin"])
        mode = meta["mode"]
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: malformed schema metadata: {exc}") from exc
    if mode not in AXIS_LABELS:
        raise InputError(f"{path}: unknown mode {mode!r}")
    if len(lines) < 2 or lines[1] != "sample_id,purity,c1,c2,c3,mode":
        raise InputError(f"{path}: missing or wrong header row")
    data = []
    for line in lines[2:]:
        if not line:
            continue
        sid, pur, c1, c2, c3, row_mode = line.split(",")
        if row_mode != mode:
            raise InputError(f"{path}: row mode {row_mode!r} disagrees with header")
        data.append((float(pur), float(c1), float(c2), float(c3)))
    if not data:
        raise InputError(f"{path}: no data rows")
    return two_s, mode, np.array(data)


def read_decomposition_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON: {exc}") from exc
    if payload.get("schema") != DECOMPOSITION_SCHEMA:
        raise InputError(
            f"{path}: schema {payload.get('schema')!r} is not {DECOMPOSITION_SCHEMA}"
        )
    for key in ("target", "endpoints", "weights"):
        if key not in payload:
            raise InputError(f"{path}: missing key {key!r}")
    return payload


def _new_3d_axes(azim, elev):
    fig = plt.figure(figsize=(6, 5), dpi=150)
    ax = fig.add_subplot(projection="3d")
    ax.view_init(elev=elev, azim=azim)
    return fig, ax


def render_diagram3d(path, out, azim, elev):
    two_s, mode, rows = read_diagram_csv(path)
    s = two_s / 2
    fig, ax = _new_3d_axes(azim, elev)
    pts = ax.scatter(
        rows[:, 1], rows[:, 2], rows[:, 3], c=rows[:, 0], s=4, cmap="viridis",
        rasterized=True,
    )
    fig.colorbar(pts, ax=ax, shrink=0.6, label="purity")
    if mode in ("vvv", "vvq"):
        # bounding plane c1 + c2 + c3 = s, from the closed form (not fitted)
        hi = float(rows[:, 1:].max())
        grid = np.linspace(0, hi, 12)
        g1, g2 = np.meshgrid(grid, grid)
        g3 = s - g1 - g2
        g3[g3 < 0] = np.nan
        ax.plot_surface(g1, g2, g3, alpha=0.25, color="tab:purple")
    labels = AXIS_LABELS[mode]
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.set_zlabel(labels[2])
    ax.set_title(f"uncertainty diagram, 2s={two_s}, mode={mode}")
    fig.savefig(out)
    plt.close(fig)


def render_purity_tetrahedron(path, out, azim, elev):
    two_s, mode, rows = read_diagram_csv(path)
    if mode != "qqq":
        raise InputError(f"{path}: purity_tetrahedron needs mode qqq, got {mode}")
    fig, ax = _new_3d_axes(azim, elev)
    coord_sum = rows[:, 1] + rows[:, 2] + rows[:, 3]
    pts = ax.scatter(
        rows[:, 1], rows[:, 2], rows[:, 3], c=coord_sum, s=4, cmap="plasma",
        rasterized=True,
    )
    fig.colorbar(pts, ax=ax, shrink=0.6, label="coordinate sum")
    if two_s == 1:
        # qubit region: simplex with vertices at the origin and (1/2) e_k
        verts = np.array(
            [[0, 0, 0], [0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]]
        )
        for i in range(4):
            for j in range(i + 1, 4):
                seg = verts[[i, j]]
                ax.plot(seg[:, 0], seg[:, 1], seg[:, 2], color="gray", lw=0.8)
    labels = AXIS_LABELS[mode]
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.set_zlabel(labels[2])
    ax.set_title(f"QFI tuples colored by purity, 2s={two_s}")
    fig.savefig(out)
    plt.close(fig)


def render_bloch_chords(path, out, azim, elev):
    payload = read_decomposition_json(path)
    target = np.asarray(payload["target"], dtype=float)
    endpoints = np.asarray(payload["endpoints"], dtype=float)
    fig, ax = _new_3d_axes(azim, elev)
    theta = np.linspace(0, np.pi, 25)
    phi = np.linspace(0, 2 * np.pi, 49)
    tt, pp = np.meshgrid(theta, phi)
    ax.plot_wireframe(
        np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt),
        color="lightgray", lw=0.3, alpha=0.6,
    )
    ax.plot(
        endpoints[:, 0], endpoints[:, 1], endpoints[:, 2],
        color="tab:red", lw=2, marker="o", ms=6,
    )
    ax.scatter([target[0]], [target[1]], [target[2]], color="black", s=40)
    if "axis" in payload:
        axis = np.asarray(payload["axis"], dtype=float)
        ax.plot(
            [-axis[0], axis[0]], [-axis[1], axis[1]], [-axis[2], axis[2]],
            color="tab:blue", lw=1, ls="--",
        )
    ax.set_box_aspect((1, 1, 1))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(f"chord decomposition ({payload.get('kind', '?')})")
    fig.savefig(out)
    plt.close(fig)


RENDERERS = {
    "diagram3d": render_diagram3d,
    "purity_tetrahedron": render_purity_tetrahedron,
    "bloch_chords": render_bloch_chords,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot_diagram.py", description=__doc__)
    parser.add_argument("--in", dest="input", required=True, help="input CSV/JSON")
    parser.add_argument("--figure", choices=sorted(RENDERERS), required=True)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--azim", type=float, default=-60.0)
    parser.add_argument("--elev", type=float, default=30.0)
    args = parser.parse_args(argv)
    try:
        RENDERERS[args.figure](args.input, args.out, args.azim, args.elev)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
