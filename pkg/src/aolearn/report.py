"""Report rendering: CSV traces and matplotlib figures written to a directory.

Used by the CLI --report flag.  Figures go to PNG files next to the
delimited trace/summary output; nothing is shown interactively.
"""

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import objective


def _write_trace(path, trace):
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "cost", "grad_norm", "alpha"])
        for row in trace:
            writer.writerow([row[0], f"{row[1]:.12e}", f"{row[2]:.6e}",
                             f"{row[3]:.6e}"])


def _plot_trace(path, trace, title):
    it = [row[0] for row in trace]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
    axes[0].semilogy(it, [row[1] for row in trace])
    axes[0].set_xlabel("iteration")
    axes[0].set_ylabel("cost")
    axes[1].semilogy(it, [row[2] for row in trace])
    axes[1].set_xlabel("iteration")
    axes[1].set_ylabel("gradient norm")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def atom_mosaic(omega, patch_side, path):
    """Render every operator row as a patch tile in one gray-scale grid."""
    k = omega.shape[0]
    cols = int(math.ceil(math.sqrt(k)))
    rows = int(math.ceil(k / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(cols * 0.6, rows * 0.6))
    axes = np.atleast_1d(axes).ravel()
    for i, ax in enumerate(axes):
        ax.set_axis_off()
        if i < k:
            atom = omega[i].reshape(patch_side, patch_side, order="F")
            ax.imshow(atom, cmap="gray", interpolation="nearest")
    fig.tight_layout(pad=0.1)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_learning_report(outdir, trace, omega, patch_side):
    """Write trace.csv, summary.csv and learning figures for an operator."""
    os.makedirs(outdir, exist_ok=True)
    if trace:
        _write_trace(os.path.join(outdir, "trace.csv"), trace)
        _plot_trace(os.path.join(outdir, "learning.png"), trace,
                    "operator learning")
    atom_mosaic(omega, patch_side, os.path.join(outdir, "atoms.png"))

    svals = np.linalg.svd(omega, compute_uv=False)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot(svals, marker=".")
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "singular_values.png"), dpi=120)
    plt.close(fig)

    gram = omega @ omega.T
    np.fill_diagonal(gram, 0.0)
    with open(os.path.join(outdir, "summary.csv"), "w", newline="",
              encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "n", "mutual_coherence", "condition_number",
                         "rank_penalty", "coherence_penalty"])
        writer.writerow([
            omega.shape[0], omega.shape[1],
            f"{np.max(np.abs(gram)):.6f}",
            f"{svals[0] / svals[-1]:.6f}",
            f"{objective.rank_penalty(omega):.6f}",
            f"{objective.coherence_penalty(omega):.6f}",
        ])


def save_reconstruction_report(outdir, observed, restored, trace, title):
    """Write the cost trace and a before/after figure for a reconstruction."""
    os.makedirs(outdir, exist_ok=True)
    if trace:
        _write_trace(os.path.join(outdir, "trace.csv"), trace)
        _plot_trace(os.path.join(outdir, "cost.png"), trace, title)

    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    for ax, img, label in zip(axes, (observed, restored),
                              ("input", "reconstruction")):
        ax.imshow(img, cmap="gray", vmin=0, vmax=255, interpolation="nearest")
        ax.set_title(label)
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "comparison.png"), dpi=120)
    plt.close(fig)
