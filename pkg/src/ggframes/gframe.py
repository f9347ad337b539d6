"""Gabor g-frames over a lattice in Z_L x Z_L.

A generator ``S`` (an L x L operator) and a lattice ``lat`` define the
family ``{alpha_lam(S)}``; its g-frame operator is the periodization of
``S^* S``.  Summation over lattice points always follows
``lat.points`` order so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lattice import Lattice
from .spreading import spreading_of
from .tfcore import DimensionError, as_op, as_signal, hs_norm, tf_shift, translate_op

__all__ = [
    "EPS_FRAME",
    "NotAFrameError",
    "FrameBoundsError",
    "CoefSeq",
    "GFrameReport",
    "periodize",
    "gframe_operator",
    "frame_bounds",
    "analysis",
    "synthesis",
    "canonical_dual",
    "inverse_frame_operator",
    "inverse_sqrt_frame_operator",
    "janssen_rep",
    "wexler_raz_check",
    "WexlerRazResult",
    "janssen_sufficient",
    "injectivity_check",
    "stacked_analysis_matrix",
    "cohen_map",
    "beauty_upper_bound",
]

EPS_FRAME = 1e-10


class NotAFrameError(ValueError):
    pass


class FrameBoundsError(RuntimeError):
    pass


@dataclass(frozen=True)
class CoefSeq:
    """One length-L vector per lattice point, stacked as a ``(card, L)`` array."""

    lattice: Lattice
    vecs: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vecs, dtype=complex)
        if v.shape != (self.lattice.card, self.lattice.L):
            raise DimensionError(
                f"coefficient array has shape {v.shape}, expected {(self.lattice.card, self.lattice.L)}"
            )
        object.__setattr__(self, "vecs", v)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vecs, axis=1)

    def inner(self, other: "CoefSeq") -> complex:
        if other.lattice != self.lattice or other.vecs.shape != self.vecs.shape:
            raise DimensionError("coefficient sequences live on different lattices")
        return complex(np.vdot(other.vecs, self.vecs))


@dataclass
class GFrameReport:
    L: int
    lattice: str
    A: float
    B: float
    is_frame: bool
    tightness: float
    janssen_residual: float
    dual_residual: float = math.nan
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    FIELDS = ("L", "lattice", "A", "B", "tightness", "janssen_residual",
              "dual_residual", "is_frame", "seed")

    def as_row(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in self.FIELDS}

    def to_text(self) -> str:
        return "".join(f"{k}={_fmt(v)}\n" for k, v in self.as_row().items())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    if v is None:
        return ""
    return str(v)


def periodize(S, lat: Lattice) -> np.ndarray:
    """Operator periodization ``sum_lam alpha_lam(S)``."""
    S = as_op(S, lat.L)
    out = np.zeros_like(S)
    for lam in lat.points:
        out += translate_op(S, lam)
    return out


def gframe_operator(S, lat: Lattice) -> np.ndarray:
    S = as_op(S, lat.L)
    G = periodize(S.conj().T @ S, lat)
    # exact Hermitian symmetrisation; each term already is up to rounding
    return (G + G.conj().T) / 2


def janssen_rep(S, lat: Lattice) -> np.ndarray:
    """``card(lat) * sum_{adjoint points} c_S(lam_adj) pi(lam_adj)``.

    Equals :func:`periodize` exactly (operator Poisson summation) while
    touching only the adjoint lattice.
    """
    S = as_op(S, lat.L)
    c = spreading_of(S)
    L = lat.L
    out = np.zeros((L, L), dtype=complex)
    for mu in lat.adjoint().points:
        if c[mu] != 0:
            out += c[mu] * tf_shift(L, mu)
    return lat.card * out


def _eigh(G):
    try:
        return np.linalg.eigh(G)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise FrameBoundsError(f"Hermitian eigensolver did not converge: {exc}") from exc


def _is_frame(A: float, B: float) -> bool:
    return B > 0 and A > EPS_FRAME * B


def inverse_frame_operator(S, lat: Lattice) -> np.ndarray:
    """Inverse of the g-frame operator via Hermitian eigendecomposition."""
    return _frame_power(S, lat, -1.0)


def inverse_sqrt_frame_operator(S, lat: Lattice) -> np.ndarray:
    return _frame_power(S, lat, -0.5)


def _frame_power(S, lat, power):
    w, V = _eigh(gframe_operator(S, lat))
    if not _is_frame(w[0], w[-1]):
        raise NotAFrameError(f"not-a-frame: lambda_min={w[0]:.3e}, lambda_max={w[-1]:.3e}")
    return (V * w**power) @ V.conj().T


def canonical_dual(S, lat: Lattice) -> np.ndarray:
    """Canonical dual generator ``S G^{-1}`` with ``G`` the g-frame operator."""
    S = as_op(S, lat.L)
    return S @ inverse_frame_operator(S, lat)


def frame_bounds(S, lat: Lattice, seed: int | None = None) -> GFrameReport:
    """Optimal frame bounds as the extreme eigenvalues of the g-frame operator."""
    S = as_op(S, lat.L)
    G = gframe_operator(S, lat)
    w, V = _eigh(G)
    A = max(float(w[0]), 0.0)
    B = max(float(w[-1]), 0.0)
    is_frame = _is_frame(A, B)
    J = janssen_rep(S.conj().T @ S, lat)
    scale = hs_norm(G)
    jres = hs_norm(G - J) / scale if scale > 0 else hs_norm(J)
    dres = math.nan
    if is_frame:
        R = S @ ((V / w) @ V.conj().T)
        dres = float(np.linalg.norm(periodize(S.conj().T @ R, lat) - np.eye(lat.L), 2))
    return GFrameReport(
        L=lat.L,
        lattice=lat.spec(),
        A=A,
        B=B,
        is_frame=is_frame,
        tightness=B / A if A > 0 else math.inf,
        janssen_residual=float(jres),
        dual_residual=dres,
        seed=seed,
    )


def analysis(S, lat: Lattice, psi) -> CoefSeq:
    """``{alpha_lam(S) psi}`` in lattice order."""
    S = as_op(S, lat.L)
    psi = as_signal(psi, lat.L)
    return CoefSeq(lat, np.stack([translate_op(S, lam) @ psi for lam in lat.points]))


def synthesis(S, lat: Lattice, c: CoefSeq) -> np.ndarray:
    """``sum_lam alpha_lam(S^*) c_lam``, the adjoint of :func:`analysis`."""
    S = as_op(S, lat.L)
    if c.lattice != lat or c.vecs.shape != (lat.card, lat.L):
        raise DimensionError("coefficient sequence does not match lattice")
    Sh = S.conj().T
    out = np.zeros(lat.L, dtype=complex)
    for lam, v in zip(lat.points, c.vecs):
        out += translate_op(Sh, lam) @ v
    return out


def stacked_analysis_matrix(S, lat: Lattice) -> np.ndarray:
    """The ``(card * L) x L`` matrix whose blocks are ``alpha_lam(S)``."""
    S = as_op(S, lat.L)
    return np.concatenate([translate_op(S, lam) for lam in lat.points], axis=0)


def injectivity_check(S, lat: Lattice) -> bool:
    """True iff the analysis operator is injective.

    Uses the squared singular values of the stacked analysis matrix so that
    the threshold is on the same scale as the eigenvalues in
    :func:`frame_bounds`.
    """
    s = np.linalg.svd(stacked_analysis_matrix(S, lat), compute_uv=False)
    return _is_frame(float(s[-1]) ** 2, float(s[0]) ** 2)


@dataclass
class WexlerRazResult:
    biorth_ok: bool
    recon_ok: bool
    biorth_residual: float
    recon_residual: float

    def __iter__(self):
        yield self.biorth_ok
        yield self.recon_ok
        yield {"biorth": self.biorth_residual, "recon": self.recon_residual}


def wexler_raz_check(S, T, lat: Lattice, tol: float = 1e-9) -> WexlerRazResult:
    """Compare biorthogonality of ``S^* T`` on the adjoint lattice with reconstruction.

    ``biorth_ok`` tests ``c_{S^*T}(mu) = delta_{mu,0} / card(lat)`` on the
    adjoint lattice (tolerance scaled by ``||S^* T||_HS``);
    ``recon_ok`` tests ``||sum_lam alpha_lam(S^* T) - I|| <= tol``.
    """
    S = as_op(S, lat.L)
    T = as_op(T, lat.L)
    ST = S.conj().T @ T
    c = spreading_of(ST)
    adj = lat.adjoint().mask()
    target = np.zeros_like(c)
    target[0, 0] = 1.0 / lat.card
    scale = hs_norm(ST)
    bres = float(np.max(np.abs((c - target)[adj])))
    biorth_ok = scale > 0 and bres <= tol * scale
    rres = float(np.linalg.norm(periodize(ST, lat) - np.eye(lat.L), 2))
    return WexlerRazResult(bool(biorth_ok), rres <= tol, bres, rres)


def janssen_sufficient(S, lat: Lattice) -> tuple[bool, float]:
    """Diagonal-dominance test on the Janssen coefficients of ``S^* S``.

    Returns ``(passes, guaranteed_A)``; when the test passes,
    ``guaranteed_A`` is a lower frame bound (Neumann series), else 0.
    """
    S = as_op(S, lat.L)
    c = spreading_of(S.conj().T @ S)
    adj = lat.adjoint().mask()
    c0 = float(c[0, 0].real)
    off = float(np.abs(c[adj]).sum() - abs(c[0, 0]))
    passes = off < c0
    return passes, (lat.card * (c0 - off) if passes else 0.0)


def beauty_upper_bound(S, lat: Lattice) -> float:
    """Computable upper frame bound ``card * sum_mu |c_{S^*S}(mu)|`` over the adjoint lattice."""
    S = as_op(S, lat.L)
    c = spreading_of(S.conj().T @ S)
    return lat.card * float(np.abs(c[lat.adjoint().mask()]).sum())


def cohen_map(S, psi) -> np.ndarray:
    """Phase-space energy density ``Q[k, l] = ||alpha_(k,l)(S) psi||^2``.

    Since ``alpha_z(S) psi = pi(z) S pi(z)^* psi`` and ``pi(z)`` is unitary,
    ``Q[z] = ||S pi(z)^* psi||^2``.
    """
    psi = as_signal(psi)
    L = psi.shape[0]
    S = as_op(S, L)
    t = np.arange(L)
    # columns l of X: M_{-l} applied to the back-shifted signal
    demod = np.exp(-2j * np.pi * np.outer(t, t) / L)  # [t, l]
    Q = np.empty((L, L))
    for k in range(L):
        X = np.roll(psi, -k)[:, None] * np.roll(demod, -k, axis=0)
        Q[k] = np.sum(np.abs(S @ X) ** 2, axis=0)
    return Q
