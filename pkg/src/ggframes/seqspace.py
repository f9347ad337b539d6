"""Weighted vector-valued sequence norms over a lattice and an empirical
norm-equivalence experiment for g-frame coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gframe import CoefSeq, analysis, gframe_operator
from .generators import random_signal, window_gaussian
from .lattice import Lattice
from .tfcore import DimensionError, as_op, stft

__all__ = [
    "Weight",
    "seq_norm",
    "lp_norm",
    "conjugate_exponent",
    "holder_pairing",
    "reference_norm",
    "NormEquivalence",
    "norm_equivalence_experiment",
    "torus_distance",
]


def torus_distance(L: int) -> np.ndarray:
    r = np.arange(L)
    w = np.minimum(r, L - r).astype(float)
    return np.sqrt(w[:, None] ** 2 + w[None, :] ** 2)


@dataclass(frozen=True)
class Weight:
    """Positive weight on Z_L x Z_L: ``constant``, ``polynomial`` or ``table``."""

    kind: str = "constant"
    s: float = 0.0
    values: np.ndarray | None = None

    @classmethod
    def constant(cls) -> "Weight":
        return cls("constant")

    @classmethod
    def polynomial(cls, s: float) -> "Weight":
        if s < 0:
            raise ValueError("polynomial weight exponent must be nonnegative")
        return cls("polynomial", float(s))

    @classmethod
    def table(cls, values) -> "Weight":
        v = np.asarray(values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionError("weight table must be square")
        if not np.all(v > 0):
            raise ValueError("weight table must be strictly positive")
        return cls("table", values=v)

    def grid(self, L: int) -> np.ndarray:
        """Weight values on the whole phase space as an L x L array."""
        if self.kind == "constant":
            return np.ones((L, L))
        if self.kind == "polynomial":
            return (1.0 + torus_distance(L)) ** self.s
        if self.values.shape != (L, L):
            raise DimensionError(f"weight table is {self.values.shape}, expected {(L, L)}")
        return self.values

    def on(self, lat: Lattice) -> np.ndarray:
        P = lat.point_array
        return self.grid(lat.L)[P[:, 0], P[:, 1]]

    def inverse(self) -> "Weight":
        if self.kind == "constant":
            return self
        if self.kind == "polynomial":
            return Weight("polynomial", -self.s)
        return Weight("table", values=1.0 / self.values)

    def spec(self) -> str:
        if self.kind == "constant":
            return "const"
        if self.kind == "polynomial":
            return f"poly:{self.s:g}"
        return "table"


def lp_norm(x, p: float) -> float:
    x = np.abs(np.asarray(x, dtype=float)).ravel()
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p}")
    if x.size == 0:
        return 0.0
    if math.isinf(p):
        return float(x.max())
    # scale out the max to avoid overflow/underflow at large p
    top = x.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((x / top) ** p) ** (1.0 / p))


def seq_norm(c: CoefSeq, p: float, m: Weight) -> float:
    """``(sum_lam ||c_lam||^p m(lam)^p)^(1/p)``; ``p = inf`` takes the max."""
    return lp_norm(c.norms() * m.on(c.lattice), p)


def conjugate_exponent(p: float) -> float:
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def holder_pairing(c: CoefSeq, d: CoefSeq) -> complex:
    """``sum_lam <c_lam, d_lam>``.

    Bounded by ``seq_norm(c, p', 1/m) * seq_norm(d, p, m)``.
    """
    return c.inner(d)


def reference_norm(psi, p: float, m: Weight, window=None) -> float:
    """Finite modulation norm: weighted l^p norm of ``V_g psi`` over all of phase space."""
    psi = np.asarray(psi, dtype=complex)
    L = psi.shape[0]
    g = window_gaussian(L) if window is None else window
    return lp_norm(np.abs(stft(psi, g)) * m.grid(L), p)


@dataclass
class NormEquivalence:
    C_emp: float
    D_emp: float
    ratios: np.ndarray
    p: float
    weight: Weight
    lattice: Lattice
    seed: int

    def rows(self):
        for i, r in enumerate(self.ratios):
            yield {
                "seed": self.seed,
                "probe_index": i,
                "ratio": float(r),
                "p": self.p,
                "s": self.weight.s if self.weight.kind == "polynomial" else 0.0,
                "lattice": self.lattice.spec(),
                "L": self.lattice.L,
            }


def norm_equivalence_experiment(S, lat: Lattice, p: float, m: Weight, probes: int,
                                seed: int, window=None,
                                kernel_probe: bool = True) -> NormEquivalence:
    """Empirical ratios ``seq_norm(analysis(S, lat, psi)) / reference_norm(psi)``.

    Probes are seeded complex Gaussians; with ``kernel_probe`` the last probe
    is the eigenvector of the smallest eigenvalue of the g-frame operator,
    which exposes a vanishing lower constant when ``S`` is not a frame.
    """
    S = as_op(S, lat.L)
    rng = np.random.default_rng(seed)
    psis = [random_signal(lat.L, rng) for _ in range(probes)]
    if kernel_probe:
        _, V = np.linalg.eigh(gframe_operator(S, lat))
        psis.append(V[:, 0])
    ratios = np.array([
        seq_norm(analysis(S, lat, psi), p, m) / reference_norm(psi, p, m, window)
        for psi in psis
    ])
    return NormEquivalence(float(ratios.min()), float(ratios.max()), ratios, p, m, lat, seed)
