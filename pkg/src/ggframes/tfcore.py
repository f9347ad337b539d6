"""Time-frequency shifts, STFT and basic operator algebra on C^L.

Signals are 1-D complex numpy arrays of length L, operators are dense L x L
complex arrays whose entry ``M[x, y]`` is the kernel, so that
``(S psi)(x) = sum_y M[x, y] psi(y)``.  Phase-space points ``(k, l)`` are a
time shift ``k`` and a frequency shift ``l``, both taken mod L.

The inner product is linear in the first slot::

    <a, b> = sum_t a(t) * conj(b(t))
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "DimensionError",
    "PhasePoint",
    "as_signal",
    "as_op",
    "inner",
    "tf_shift",
    "apply_tf_shift",
    "stft",
    "stft_direct",
    "translate_op",
    "translate_op_direct",
    "svd",
    "hs_norm",
    "trace_norm",
    "symplectic_form",
]


class DimensionError(ValueError):
    """Raised when signals/operators of incompatible size are combined."""


class PhasePoint(NamedTuple):
    k: int
    l: int

    @classmethod
    def reduce(cls, z, L: int) -> "PhasePoint":
        k, l = z
        return cls(int(k) % L, int(l) % L)


def as_signal(psi, L: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionError(f"signal must be 1-D, got shape {psi.shape}")
    if psi.shape[0] < 2:
        raise DimensionError("signal length must be at least 2")
    if L is not None and psi.shape[0] != L:
        raise DimensionError(f"signal has length {psi.shape[0]}, expected {L}")
    return psi


def as_op(S, L: int | None = None) -> np.ndarray:
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"operator must be square, got shape {S.shape}")
    if S.shape[0] < 2:
        raise DimensionError("operator dimension must be at least 2")
    if L is not None and S.shape[0] != L:
        raise DimensionError(f"operator has dimension {S.shape[0]}, expected {L}")
    return S


def inner(a, b) -> complex:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(b, a))


def symplectic_form(z1, z2, L: int) -> int:
    """sigma((k1,l1),(k2,l2)) = l1*k2 - l2*k1 mod L."""
    return (z1[1] * z2[0] - z2[1] * z1[0]) % L


def tf_shift(L: int, z) -> np.ndarray:
    """Matrix of pi(k, l) = M_l T_k, i.e. psi(t) -> exp(2 pi i l t / L) psi(t - k).

    Examples
    --------
    >>> np.allclose(tf_shift(4, (0, 0)), np.eye(4))
    True
    """
    if L < 2:
        raise DimensionError("L must be at least 2")
    k, l = PhasePoint.reduce(z, L)
    t = np.arange(L)
    P = np.zeros((L, L), dtype=complex)
    P[t, (t - k) % L] = np.exp(2j * np.pi * l * t / L)
    return P


def apply_tf_shift(psi, z) -> np.ndarray:
    psi = as_signal(psi)
    L = psi.shape[0]
    k, l = PhasePoint.reduce(z, L)
    return np.exp(2j * np.pi * l * np.arange(L) / L) * np.roll(psi, k)


def stft(psi, phi) -> np.ndarray:
    """Short-time Fourier transform ``V[k, l] = <psi, pi(k, l) phi>``.

    Row ``k`` is the L-point DFT of ``psi * conj(T_k phi)``.
    """
    psi = as_signal(psi)
    phi = as_signal(phi, psi.shape[0])
    L = psi.shape[0]
    # rows: shifted windows T_k phi
    shifted = np.stack([np.roll(phi, k) for k in range(L)])
    return np.fft.fft(psi[None, :] * np.conj(shifted), axis=1)


def stft_direct(psi, phi) -> np.ndarray:
    """O(L^3) reference path for :func:`stft` built from explicit shift matrices."""
    psi = as_signal(psi)
    phi = as_signal(phi, psi.shape[0])
    L = psi.shape[0]
    V = np.empty((L, L), dtype=complex)
    for k in range(L):
        for l in range(L):
            V[k, l] = inner(psi, tf_shift(L, (k, l)) @ phi)
    return V


def translate_op(S, z) -> np.ndarray:
    """alpha_z(S) = pi(z) S pi(z)^*.

    Entrywise ``alpha_z(S)[t, s] = exp(2 pi i l (t - s) / L) S[t - k, s - k]``.
    """
    S = as_op(S)
    L = S.shape[0]
    k, l = PhasePoint.reduce(z, L)
    chi = np.exp(2j * np.pi * l * np.arange(L) / L)
    return np.roll(S, (k, k), axis=(0, 1)) * np.outer(chi, np.conj(chi))


def translate_op_direct(S, z) -> np.ndarray:
    S = as_op(S)
    P = tf_shift(S.shape[0], z)
    return P @ S @ P.conj().T


def svd(S, rtol: float = 1e-12):
    """Singular value decomposition ``S = sum_n s_n xi_n (x) phi_n``.

    Returns ``(s, xi, phi)`` with ``s`` descending and the singular vectors as
    rows of ``xi`` and ``phi``.  Singular values below ``rtol * s_1`` are
    dropped, so the zero operator gives empty arrays.
    """
    S = as_op(S)
    U, s, Vh = np.linalg.svd(S)
    if s.size == 0 or s[0] == 0.0:
        L = S.shape[0]
        return np.zeros(0), np.zeros((0, L), complex), np.zeros((0, L), complex)
    keep = s > rtol * s[0]
    # phi_n is the conjugate of the n-th row of Vh since (xi (x) phi)[x, y] = xi(x) conj(phi(y))
    return s[keep], U[:, keep].T.copy(), Vh[keep].conj()


def hs_norm(S) -> float:
    return float(np.linalg.norm(np.asarray(S), "fro"))


def trace_norm(S) -> float:
    return float(np.linalg.svd(np.asarray(S), compute_uv=False).sum())
