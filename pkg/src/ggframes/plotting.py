"""Report figures.

Every function returns PNG bytes so the CLI can write figures next to the
CSV output.  Figures are built with the object-oriented Agg API (no pyplot
state), which keeps batch runs in worker processes independent.
"""

from __future__ import annotations

import functools
import io

import matplotlib
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

_RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "image.cmap": "viridis",
}


def _styled(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with matplotlib.rc_context(_RC):
            return func(*args, **kwargs)
    return wrapper


def _new_figure(width=4.5, height=None):
    golden_ratio = (np.sqrt(5) - 1.0) / 2.0
    if height is None:
        height = width * golden_ratio
    fig = Figure(figsize=(width, height), dpi=100)
    FigureCanvasAgg(fig)
    return fig


def _png(fig) -> bytes:
    buf = io.BytesIO()
    # no Software chunk so repeated runs give identical files
    fig.savefig(buf, format="png", metadata={"Software": None})
    return buf.getvalue()


@_styled
def phase_space_image(table, title: str, lattice_points=None, label="") -> bytes:
    """Heatmap of a real L x L phase-space table, optionally marking lattice points."""
    fig = _new_figure(4.2, 3.6)
    ax = fig.add_subplot()
    im = ax.imshow(np.asarray(table, dtype=float).T, origin="lower", aspect="equal",
                   interpolation="nearest")
    fig.colorbar(im, ax=ax, label=label)
    if lattice_points is not None and len(lattice_points):
        P = np.asarray(lattice_points)
        ax.scatter(P[:, 0], P[:, 1], s=12, facecolors="none", edgecolors="w", linewidths=0.8)
    ax.set_xlabel("time shift k")
    ax.set_ylabel("frequency shift l")
    ax.set_title(title)
    fig.tight_layout()
    return _png(fig)


@_styled
def spectrum(eigs, A: float, B: float, title="g-frame operator spectrum") -> bytes:
    fig = _new_figure()
    ax = fig.add_subplot()
    eigs = np.sort(np.asarray(eigs, dtype=float))
    ax.plot(np.arange(1, len(eigs) + 1), eigs, "o-", ms=3, lw=1)
    ax.axhline(A, ls="--", lw=0.8, color="C3", label=f"A = {A:.4g}")
    ax.axhline(B, ls=":", lw=0.8, color="C2", label=f"B = {B:.4g}")
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    return _png(fig)


@_styled
def ratio_histogram(ratios, C: float, D: float, title="norm ratios") -> bytes:
    fig = _new_figure()
    ax = fig.add_subplot()
    ax.hist(np.asarray(ratios, dtype=float), bins=min(30, max(5, len(ratios) // 3)),
            color="C0", alpha=0.8)
    ax.axvline(C, color="C3", lw=0.8, ls="--")
    ax.axvline(D, color="C2", lw=0.8, ls=":")
    ax.set_xlabel("coefficient norm / reference norm")
    ax.set_ylabel("probes")
    ax.set_title(title)
    fig.tight_layout()
    return _png(fig)


@_styled
def windows(ws, title="SVD windows") -> bytes:
    fig = _new_figure()
    ax = fig.add_subplot()
    for n, (w, s) in enumerate(zip(ws.windows, ws.weights)):
        ax.plot(np.abs(w), lw=1, label=f"n={n}, s={s:.3g}")
    ax.set_xlabel("t")
    ax.set_ylabel("|phi_n(t)|")
    ax.set_title(title)
    if len(ws):
        ax.legend(frameon=False, fontsize=7)
    fig.tight_layout()
    return _png(fig)
