"""Constructors for g-frame generators: windows, rank-one and multi-window
operators, localization operators, underspread operators, and the SVD
bridge to weighted multi-window systems."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import Lattice
from .spreading import synthesize
from .tfcore import DimensionError, PhasePoint, as_signal, svd, tf_shift

__all__ = [
    "WindowSet",
    "NotUnderspreadError",
    "rank_one",
    "multiwindow_op",
    "localization_op",
    "partition_mask",
    "fundamental_domain",
    "underspread_op",
    "svd_to_multiwindow",
    "window_gaussian",
    "window_box",
    "random_op",
    "random_signal",
]


class NotUnderspreadError(ValueError):
    def __init__(self, a, b, diff):
        self.difference = tuple(diff)
        super().__init__(
            f"not-underspread: points {tuple(a)} and {tuple(b)} differ by "
            f"{self.difference}, a nonzero adjoint-lattice point"
        )


@dataclass
class WindowSet:
    windows: list = field(default_factory=list)
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.windows = [as_signal(w) for w in self.windows]
        if len({w.shape[0] for w in self.windows}) > 1:
            raise DimensionError("windows must share one length")
        if self.weights is None:
            self.weights = np.ones(len(self.windows))
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.windows),):
            raise DimensionError("need one weight per window")
        if np.any(self.weights <= 0):
            raise ValueError("window weights must be strictly positive")

    def __len__(self):
        return len(self.windows)


def rank_one(xi, phi) -> np.ndarray:
    """Matrix of ``xi (x) phi : psi -> <psi, phi> xi``, i.e. ``xi(x) conj(phi(y))``."""
    xi = as_signal(xi)
    phi = as_signal(phi, xi.shape[0])
    return np.outer(xi, np.conj(phi))


def multiwindow_op(ws: WindowSet, L: int | None = None) -> np.ndarray:
    """``S = sum_n s_n e_n (x) phi_n`` with the standard basis as orthonormal system.

    For any lattice the g-frame operator of ``S`` is the frame operator of
    the multi-window Gabor system ``{s_n pi(lam) phi_n}``.
    """
    if len(ws) == 0:
        if L is None:
            raise DimensionError("empty window set needs an explicit L")
        return np.zeros((L, L), dtype=complex)
    L = ws.windows[0].shape[0]
    if len(ws) > L:
        raise DimensionError(f"{len(ws)} windows do not fit an orthonormal system in C^{L}")
    S = np.zeros((L, L), dtype=complex)
    for n, (s, phi) in enumerate(zip(ws.weights, ws.windows)):
        S[n] = s * np.conj(phi)
    return S


def localization_op(h, phi) -> np.ndarray:
    """Localization operator with mask ``h`` and window ``phi``.

    ``A psi = (1/L) sum_z h(z) V_phi psi(z) pi(z) phi``.  The ``1/L`` makes
    ``h = 1`` with a unit window the identity.
    """
    phi = as_signal(phi)
    L = phi.shape[0]
    h = np.asarray(h)
    if h.shape != (L, L):
        raise DimensionError(f"mask must be {L}x{L}, got {h.shape}")
    if not np.any(phi):
        raise ValueError("zero window")
    # columns of W: pi(z) phi for all z; A = (1/L) W diag(h) W^*
    t = np.arange(L)
    shifted = np.stack([np.roll(phi, k) for k in range(L)])  # [k, t]
    chi = np.exp(2j * np.pi * np.outer(t, t) / L)  # [l, t]
    W = (shifted[:, None, :] * chi[None, :, :]).reshape(L * L, L).T
    return (W * h.reshape(-1)) @ W.conj().T / L


def fundamental_domain(lat: Lattice) -> np.ndarray:
    """Indicator of a fundamental domain: the lexicographically first point of each coset."""
    L = lat.L
    seen = np.zeros((L, L), dtype=bool)
    dom = np.zeros((L, L))
    P = lat.point_array
    for k in range(L):
        for l in range(L):
            if not seen[k, l]:
                dom[k, l] = 1.0
                seen[(k + P[:, 0]) % L, (l + P[:, 1]) % L] = True
    return dom


def partition_mask(lat: Lattice, base) -> tuple[np.ndarray, float, float]:
    """Periodize ``base`` over ``lat`` on phase space; return it with its min and max."""
    base = np.asarray(base, dtype=float)
    L = lat.L
    if base.shape != (L, L):
        raise DimensionError(f"mask must be {L}x{L}, got {base.shape}")
    if np.any(base < 0):
        raise ValueError("base mask must be nonnegative")
    per = np.zeros_like(base)
    for k, l in lat.points:
        per += np.roll(base, (k, l), axis=(0, 1))
    return per, float(per.min()), float(per.max())


def underspread_op(points, coeffs, lat: Lattice) -> np.ndarray:
    """Operator with spreading support ``points`` whose difference set avoids
    the adjoint lattice except at 0; such an operator generates a tight g-frame."""
    L = lat.L
    pts = [PhasePoint.reduce(p, L) for p in points]
    coeffs = np.broadcast_to(np.asarray(coeffs, dtype=complex), (len(pts),))
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate spreading support points")
    adj = lat.adjoint()
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            d = PhasePoint.reduce((a.k - b.k, a.l - b.l), L)
            if d in adj:
                raise NotUnderspreadError(a, b, d)
    c = np.zeros((L, L), dtype=complex)
    for p, v in zip(pts, coeffs):
        c[p] = v
    return synthesize(c)


def svd_to_multiwindow(S) -> WindowSet:
    """Windows ``phi_n`` (right singular vectors) with weights ``s_n``.

    ``||alpha_lam(S) psi||^2 = sum_n s_n^2 |V_{phi_n} psi(lam)|^2`` for all
    lattice points, so the frame bounds of ``S`` are those of the weighted
    multi-window system.
    """
    s, _, phi = svd(S)
    return WindowSet(list(phi), s)


def window_gaussian(L: int, terms: int = 8) -> np.ndarray:
    """Periodized discrete Gaussian ``sum_{|j|<=terms} exp(-pi (t + jL)^2 / L)``, unit norm."""
    if L < 2:
        raise DimensionError("L must be at least 2")
    t = np.arange(L)
    j = np.arange(-terms, terms + 1)
    g = np.exp(-np.pi * (t[None, :] + j[:, None] * L) ** 2 / L).sum(axis=0)
    return (g / np.linalg.norm(g)).astype(complex)


def window_box(L: int, width: int) -> np.ndarray:
    if not 1 <= width <= L:
        raise ValueError(f"box width must be in [1, {L}], got {width}")
    g = np.zeros(L, dtype=complex)
    g[:width] = 1.0 / np.sqrt(width)
    return g


def random_signal(L: int, rng) -> np.ndarray:
    return rng.standard_normal(L) + 1j * rng.standard_normal(L)


def random_op(L: int, rank: int, seed: int) -> np.ndarray:
    """Sum of ``rank`` random complex-Gaussian rank-one operators, unit HS norm."""
    if not 0 <= rank <= L:
        raise ValueError(f"rank must be in [0, {L}], got {rank}")
    rng = np.random.default_rng(seed)
    S = np.zeros((L, L), dtype=complex)
    for _ in range(rank):
        S += rank_one(random_signal(L, rng), random_signal(L, rng))
    n = np.linalg.norm(S)
    return S / n if n > 0 else S


def classical_gabor_frame_operator(phi, lat: Lattice) -> np.ndarray:
    """``psi -> sum_lam <psi, pi(lam) phi> pi(lam) phi`` built column by column."""
    phi = as_signal(phi, lat.L)
    G = np.zeros((lat.L, lat.L), dtype=complex)
    for lam in lat.points:
        g = tf_shift(lat.L, lam) @ phi
        G += np.outer(g, np.conj(g))
    return G
