"""Discrete spreading (Fourier-Wigner) transform of operators.

Every operator on C^L expands uniquely in time-frequency shifts,
``S = sum_z c[z] pi(z)``, with ``c[k, l] = tr(S pi(k, l)^*) / L``.  Unlike
the continuous Fourier-Wigner transform there is no half-phase factor
``exp(-pi i k l / L)``: it is not well defined for odd L, and all the
frame-theoretic statements below are insensitive to unimodular reindexing.
"""

from __future__ import annotations

import numpy as np

from .lattice import Lattice
from .tfcore import as_op, hs_norm, tf_shift, translate_op

__all__ = [
    "NotPeriodicError",
    "spreading_of",
    "spreading_direct",
    "synthesize",
    "synthesize_direct",
    "weyl_symbol",
    "symplectic_phase",
    "fourier_series_of_periodic",
    "periodicity_residual",
]


class NotPeriodicError(ValueError):
    def __init__(self, lam, residual: float):
        self.lam = tuple(lam)
        self.residual = residual
        super().__init__(f"not-periodic: alpha_{self.lam}(T) differs from T by {residual:.3e} (HS)")


def spreading_of(S) -> np.ndarray:
    """Spreading coefficients ``c[k, l] = tr(S pi(k, l)^*) / L``.

    Row ``k`` is ``fft(d_k) / L`` where ``d_k(t) = S[t, t - k]`` is the
    k-th generalized diagonal.
    """
    S = as_op(S)
    L = S.shape[0]
    t = np.arange(L)
    diags = S[t[None, :], (t[None, :] - t[:, None]) % L]  # diags[k, t] = S[t, t-k]
    return np.fft.fft(diags, axis=1) / L


def spreading_direct(S) -> np.ndarray:
    """Reference path: L^2 explicit traces."""
    S = as_op(S)
    L = S.shape[0]
    c = np.empty((L, L), dtype=complex)
    for k in range(L):
        for l in range(L):
            c[k, l] = np.trace(S @ tf_shift(L, (k, l)).conj().T) / L
    return c


def synthesize(c) -> np.ndarray:
    """Inverse of :func:`spreading_of`: ``S = sum_z c[z] pi(z)``."""
    c = np.asarray(c, dtype=complex)
    L = c.shape[0]
    if c.shape != (L, L):
        raise ValueError(f"spreading table must be square, got {c.shape}")
    diags = np.fft.ifft(c, axis=1) * L  # diags[k, t] = S[t, t-k]
    t = np.arange(L)
    S = np.empty((L, L), dtype=complex)
    S[t[None, :], (t[None, :] - t[:, None]) % L] = diags
    return S


def synthesize_direct(c) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    L = c.shape[0]
    S = np.zeros((L, L), dtype=complex)
    for k, l in zip(*np.nonzero(c)):
        S += c[k, l] * tf_shift(L, (k, l))
    return S


def symplectic_phase(L: int) -> np.ndarray:
    """Array ``E[k1, l1, k2, l2] = exp(2 pi i sigma((k1,l1),(k2,l2)) / L)``."""
    r = np.arange(L)
    k1, l1, k2, l2 = np.ix_(r, r, r, r)
    return np.exp(2j * np.pi * ((l1 * k2 - l2 * k1) % L) / L)


def weyl_symbol(S) -> np.ndarray:
    """Weyl symbol ``a(u) = sum_z c[z] exp(2 pi i sigma(z, u) / L)``.

    Translating the operator, ``alpha_w(S)``, cyclically shifts the symbol
    by ``w``.
    """
    c = spreading_of(S)
    L = c.shape[0]
    # sigma(z, u) = l_z k_u - l_u k_z, so the sum separates into two DFTs
    r = np.arange(L)
    Fk = np.exp(-2j * np.pi * np.outer(r, r) / L)  # over k_z with l_u
    Fl = np.exp(2j * np.pi * np.outer(r, r) / L)  # over l_z with k_u
    # a[ku, lu] = sum_{kz, lz} c[kz, lz] e^{2pi i lz ku / L} e^{-2pi i lu kz / L}
    return Fl @ c.T @ Fk


def periodicity_residual(T, lat: Lattice) -> tuple[tuple[int, int], float]:
    """Worst ``||alpha_lam(T) - T||_HS`` over the lattice and where it occurs."""
    T = as_op(T, lat.L)
    worst, where = 0.0, (0, 0)
    for lam in lat.points:
        r = hs_norm(translate_op(T, lam) - T)
        if r > worst:
            worst, where = r, tuple(lam)
    return where, worst


def fourier_series_of_periodic(T, lat: Lattice, rtol: float = 1e-8) -> dict:
    """Fourier coefficients ``{lam_adj: c_T(lam_adj)}`` of a lattice-periodic operator.

    Raises :class:`NotPeriodicError` if some ``alpha_lam(T)`` deviates from
    ``T`` by more than ``rtol * ||T||_HS``.
    """
    T = as_op(T, lat.L)
    where, res = periodicity_residual(T, lat)
    if res > rtol * max(hs_norm(T), np.finfo(float).tiny):
        raise NotPeriodicError(where, res)
    c = spreading_of(T)
    return {lam: complex(c[lam]) for lam in lat.adjoint().points}


def restrict(c, lat: Lattice) -> np.ndarray:
    """Zero a spreading table off the lattice ``lat``."""
    return np.where(lat.mask(), c, 0)
