import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ggframes.gframe import (
    EPS_FRAME,
    CoefSeq,
    NotAFrameError,
    analysis,
    beauty_upper_bound,
    canonical_dual,
    cohen_map,
    frame_bounds,
    gframe_operator,
    injectivity_check,
    inverse_frame_operator,
    inverse_sqrt_frame_operator,
    janssen_rep,
    janssen_sufficient,
    periodize,
    synthesis,
    wexler_raz_check,
)
from ggframes.generators import (
    WindowSet,
    classical_gabor_frame_operator,
    multiwindow_op,
    random_op,
    rank_one,
    underspread_op,
    window_gaussian,
)
from ggframes.lattice import Lattice
from ggframes.spreading import fourier_series_of_periodic, spreading_of
from ggframes.tfcore import DimensionError, stft, tf_shift, translate_op

from conftest import crandn, divisors
from oracles import brute_periodize, multiwindow_bounds


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


# periodization ------------------------------------------------------------

def test_periodize_identity():
    lat = Lattice.separable(6, 2, 3)
    np.testing.assert_allclose(periodize(np.eye(6), lat), lat.card * np.eye(6), atol=1e-13)


def test_periodize_matches_conjugation_oracle(rng):
    lat = Lattice.generated(6, [(1, 2)])
    S = crandn(rng, 6, 6)
    assert rel(periodize(S, lat), brute_periodize(S, lat)) < 1e-13


def test_periodize_full_group_is_scaled_trace(rng):
    L = 5
    S = crandn(rng, L, L)
    P = brute_periodize(S, Lattice.full(L))
    np.testing.assert_allclose(P, L * np.trace(S) * np.eye(L), atol=1e-11)
    np.testing.assert_allclose(periodize(S, Lattice.full(L)), P, atol=1e-11)


def test_periodization_is_periodic(rng):
    lat = Lattice.separable(8, 2, 4)
    P = periodize(crandn(rng, 8, 8), lat)
    for mu in lat.points:
        np.testing.assert_allclose(translate_op(P, mu), P, atol=1e-11)


# Janssen representation ---------------------------------------------------

def test_janssen_identity_operator():
    lat = Lattice.separable(6, 3, 2)
    np.testing.assert_allclose(janssen_rep(np.eye(6), lat), lat.card * np.eye(6), atol=1e-13)


def test_janssen_random_sep22(rng):
    S = crandn(rng, 8, 8)
    lat = Lattice.separable(8, 2, 2)
    assert rel(janssen_rep(S, lat), periodize(S, lat)) < 1e-12


def test_janssen_full_lattice_single_term(rng):
    S = crandn(rng, 6, 6)
    lat = Lattice.full(6)
    assert lat.adjoint().card == 1
    np.testing.assert_allclose(janssen_rep(S, lat), 6 * np.trace(S) * np.eye(6), atol=1e-11)


@settings(max_examples=60, deadline=None)
@given(L=st.sampled_from([4, 6, 8, 9, 10, 12]), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_janssen_equals_periodization(L, seed, data):
    a = data.draw(st.sampled_from(divisors(L)))
    b = data.draw(st.sampled_from(divisors(L)))
    lat = Lattice.separable(L, a, b)
    S = crandn(np.random.default_rng(seed), L, L)
    P = periodize(S, lat)
    assert np.linalg.norm(P - janssen_rep(S, lat)) <= 1e-10 * np.linalg.norm(P)


def test_janssen_general_lattice(rng):
    lat = Lattice.generated(8, [(1, 3), (2, 2)])
    S = crandn(rng, 8, 8)
    assert rel(janssen_rep(S, lat), brute_periodize(S, lat)) < 1e-12


# g-frame operator and bounds ---------------------------------------------

def test_gframe_operator_of_identity():
    lat = Lattice.separable(6, 2, 1)
    np.testing.assert_allclose(gframe_operator(np.eye(6), lat), lat.card * np.eye(6), atol=1e-13)


def test_gframe_operator_rank_one_is_classical():
    L = 8
    lat = Lattice.separable(L, 2, 2)
    phi = window_gaussian(L)
    G = gframe_operator(rank_one(phi, phi), lat)
    np.testing.assert_allclose(G, classical_gabor_frame_operator(phi, lat), atol=1e-12)
    # and as the map psi -> sum V_phi psi(lam) pi(lam) phi
    psi = crandn(np.random.default_rng(1), L)
    V = stft(psi, phi)
    direct = sum(V[lam] * (tf_shift(L, lam) @ phi) for lam in lat.points)
    np.testing.assert_allclose(G @ psi, direct, atol=1e-12)


def test_gframe_operator_hermitian_psd_and_energy(rng):
    lat = Lattice.separable(8, 4, 2)
    S = crandn(rng, 8, 8)
    G = gframe_operator(S, lat)
    assert np.linalg.norm(G - G.conj().T) <= 1e-12 * np.linalg.norm(G)
    assert np.linalg.eigvalsh(G)[0] > -1e-10 * np.linalg.norm(G)
    for _ in range(5):
        psi = crandn(rng, 8)
        energy = sum(np.linalg.norm(translate_op(S, lam) @ psi) ** 2 for lam in lat.points)
        assert np.vdot(psi, G @ psi).real == pytest.approx(energy, rel=1e-12)


def test_underspread_tight_bounds():
    L = 12
    lat = Lattice.separable(L, 3, 3)  # adjoint sep(4,4)
    S = underspread_op([(0, 0), (1, 0), (0, 1)], [1.0, 0.5, 0.25j], lat)
    rep = frame_bounds(S, lat)
    # brute force: periodization of S*S is a multiple of I
    expected = lat.card * np.linalg.norm(S) ** 2 / L
    np.testing.assert_allclose(brute_periodize(S.conj().T @ S, lat), expected * np.eye(L), atol=1e-10)
    assert rep.A == pytest.approx(expected, rel=1e-10)
    assert rep.B == pytest.approx(expected, rel=1e-10)
    assert rep.tightness == pytest.approx(1.0, abs=1e-10)


def test_zero_operator_report():
    rep = frame_bounds(np.zeros((6, 6)), Lattice.separable(6, 2, 2))
    assert rep.A == 0 and rep.B == 0 and not rep.is_frame
    assert rep.tightness == math.inf and math.isnan(rep.dual_residual)


def test_multiwindow_bounds_match_stacked_oracle(rng):
    L = 8
    lat = Lattice.separable(L, 2, 4)
    ws = WindowSet([crandn(rng, L), crandn(rng, L)], [1.0, 0.5])
    rep = frame_bounds(multiwindow_op(ws), lat)
    A, B = multiwindow_bounds(ws.windows, ws.weights, lat)
    assert rep.A == pytest.approx(A, rel=1e-9)
    assert rep.B == pytest.approx(B, rel=1e-9)


def test_report_fields_and_text(rng):
    lat = Lattice.separable(6, 2, 3)
    rep = frame_bounds(random_op(6, 3, 5), lat, seed=5)
    assert 0 <= rep.A <= rep.B
    assert rep.janssen_residual < 1e-12
    assert rep.is_frame == (rep.A > EPS_FRAME * rep.B)
    text = rep.to_text()
    assert text.splitlines()[0] == "L=6" and "lattice=sep:2,3" in text and "seed=5" in text


def test_frame_sandwich(rng):
    lat = Lattice.separable(12, 3, 2)
    S = random_op(12, 2, 11)
    rep = frame_bounds(S, lat)
    for _ in range(50):
        psi = crandn(rng, 12)
        r = sum(np.linalg.norm(v) ** 2 for v in analysis(S, lat, psi).vecs) / np.linalg.norm(psi) ** 2
        assert rep.A - 1e-9 <= r <= rep.B + 1e-9


def test_beauty_upper_bound(rng):
    for seed in range(10):
        L = 8
        lat = Lattice.separable(L, *[(1, 2), (2, 2), (2, 4), (4, 4)][seed % 4])
        S = random_op(L, 1 + seed % 3, seed)
        B = frame_bounds(S, lat).B
        ub = beauty_upper_bound(S, lat)
        full = lat.card * np.abs(spreading_of(S.conj().T @ S)).sum()
        assert B <= ub * (1 + 1e-12) <= full * (1 + 1e-12)


# analysis and synthesis ---------------------------------------------------

def test_analysis_identity(rng):
    lat = Lattice.separable(6, 3, 3)
    psi = crandn(rng, 6)
    c = analysis(np.eye(6), lat, psi)
    for v in c.vecs:
        np.testing.assert_allclose(v, psi, atol=1e-14)


def test_analysis_energy(rng):
    lat = Lattice.separable(8, 2, 4)
    S, psi = crandn(rng, 8, 8), crandn(rng, 8)
    c = analysis(S, lat, psi)
    assert np.sum(np.abs(c.vecs) ** 2) == pytest.approx(
        np.vdot(psi, gframe_operator(S, lat) @ psi).real, rel=1e-12)


def test_analysis_rank_one_is_stft(rng):
    L = 8
    lat = Lattice.separable(L, 2, 2)
    xi = crandn(rng, L)
    xi /= np.linalg.norm(xi)
    phi, psi = crandn(rng, L), crandn(rng, L)
    c = analysis(rank_one(xi, phi), lat, psi)
    V = stft(psi, phi)
    for lam, v in zip(lat.points, c.vecs):
        assert np.linalg.norm(v) == pytest.approx(abs(V[lam]), rel=1e-12)


def test_synthesis_examples(rng):
    lat = Lattice.separable(8, 2, 2)
    S, psi = crandn(rng, 8, 8), crandn(rng, 8)
    np.testing.assert_allclose(synthesis(S, lat, analysis(S, lat, psi)),
                               gframe_operator(S, lat) @ psi, atol=1e-10)
    c = CoefSeq(lat, crandn(rng, lat.card, 8))
    np.testing.assert_allclose(synthesis(np.eye(8), lat, c), c.vecs.sum(axis=0), atol=1e-12)


def test_synthesis_is_adjoint_of_analysis(rng):
    lat = Lattice.separable(8, 2, 4)
    for _ in range(10):
        S, psi = crandn(rng, 8, 8), crandn(rng, 8)
        c = CoefSeq(lat, crandn(rng, lat.card, 8))
        lhs = analysis(S, lat, psi).inner(c)
        rhs = np.vdot(synthesis(S, lat, c), psi)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_shape_errors(rng):
    lat = Lattice.separable(8, 2, 4)
    with pytest.raises(DimensionError):
        analysis(np.eye(8), lat, np.ones(6))
    with pytest.raises(DimensionError):
        CoefSeq(lat, np.zeros((3, 8)))
    other = CoefSeq(Lattice.separable(8, 4, 4), np.zeros((4, 8)))
    with pytest.raises(DimensionError):
        synthesis(np.eye(8), lat, other)


# canonical dual -----------------------------------------------------------

def test_tight_dual_is_rescaled():
    lat = Lattice.separable(8, 2, 2)
    S = underspread_op([(0, 0), (1, 0)], [1.0, 0.3], lat)
    A = frame_bounds(S, lat).A
    np.testing.assert_allclose(canonical_dual(S, lat), S / A, atol=1e-12)


def test_gaussian_reconstruction_and_wiener_support():
    L = 12
    lat = Lattice.separable(L, 2, 3)
    phi = window_gaussian(L)
    S = rank_one(phi, phi)
    R = canonical_dual(S, lat)
    assert np.linalg.norm(periodize(S.conj().T @ R, lat) - np.eye(L), 2) <= 1e-9
    assert np.linalg.norm(periodize(R.conj().T @ S, lat) - np.eye(L), 2) <= 1e-9
    Ginv = inverse_frame_operator(S, lat)
    c = spreading_of(Ginv)
    assert np.max(np.abs(c[~lat.adjoint().mask()])) <= 1e-9 * np.linalg.norm(Ginv)
    # the same through the periodic Fourier series
    coeffs = fourier_series_of_periodic(Ginv, lat)
    assert len(coeffs) == lat.adjoint().card


def test_frame_operator_and_inverse_are_periodic(rng):
    lat = Lattice.separable(8, 2, 2)
    S = random_op(8, 2, 3)
    G, Ginv = gframe_operator(S, lat), inverse_frame_operator(S, lat)
    np.testing.assert_allclose(G @ Ginv, np.eye(8), atol=1e-10)
    for mu in lat.points:
        np.testing.assert_allclose(translate_op(G, mu), G, atol=1e-11)
        np.testing.assert_allclose(translate_op(Ginv, mu), Ginv, atol=1e-9)
    H = inverse_sqrt_frame_operator(S, lat)
    np.testing.assert_allclose(H @ H, Ginv, atol=1e-10)


def test_not_a_frame_raises():
    L = 6
    phi = window_gaussian(L)
    with pytest.raises(NotAFrameError):
        canonical_dual(rank_one(phi, phi), Lattice.separable(L, L, L))


# Wexler-Raz -----------------------------------------------------------------

def test_wexler_raz_canonical_dual(rng):
    lat = Lattice.separable(8, 2, 2)
    S = random_op(8, 3, 7)
    T = canonical_dual(S, lat)
    biorth, recon, res = wexler_raz_check(S, T, lat)
    assert biorth and recon
    assert res["recon"] < 1e-9


def test_wexler_raz_full_lattice_scaling():
    L = 6
    lat = Lattice.full(L)
    phi = window_gaussian(L)
    S = rank_one(phi, phi)
    r = wexler_raz_check(S, S, lat)
    np.testing.assert_allclose(periodize(S, lat), L * np.eye(L), atol=1e-12)
    assert not r.recon_ok and not r.biorth_ok
    r2 = wexler_raz_check(S, S / L, lat)
    assert r2.recon_ok and r2.biorth_ok


def test_wexler_raz_orthogonal_product():
    L = 6
    lat = Lattice.separable(L, 2, 2)
    S = np.zeros((L, L), dtype=complex)
    S[0, 0] = 1
    T = np.zeros((L, L), dtype=complex)
    T[1, 1] = 1
    assert not np.any(S.conj().T @ T)
    r = wexler_raz_check(S, T, lat)
    assert not r.biorth_ok and not r.recon_ok


def test_wexler_raz_swapped_roles_and_dual_frames(rng):
    lat = Lattice.separable(12, 2, 3)
    for seed in range(5):
        S = random_op(12, 3, seed)
        T = canonical_dual(S, lat)
        for a, b in ((S, T), (T, S)):
            r = wexler_raz_check(a, b, lat)
            assert r.biorth_ok == r.recon_ok
            if r.recon_ok:
                assert frame_bounds(a, lat).is_frame and frame_bounds(b, lat).is_frame


# sufficient test --------------------------------------------------------------

def test_janssen_sufficient_underspread_exact():
    L = 8
    lat = Lattice.separable(L, 2, 2)
    S = underspread_op([(0, 0), (1, 0)], [1.0, 0.5], lat)
    ok, A_guar = janssen_sufficient(S, lat)
    assert ok
    assert A_guar == pytest.approx(lat.card * np.linalg.norm(S) ** 2 / L, rel=1e-12)
    assert A_guar == pytest.approx(frame_bounds(S, lat).A, rel=1e-10)


def test_janssen_sufficient_concentrated_fails():
    L = 8
    lat = Lattice.separable(L, 2, 2)
    mu = (4, 0)
    assert mu in lat.adjoint()
    S = np.eye(L) + tf_shift(L, mu)
    c = spreading_of(S.conj().T @ S)
    assert abs(c[mu]) >= c[0, 0].real / 2
    assert janssen_sufficient(S, lat) == (False, 0.0)


def test_janssen_sufficient_is_not_necessary():
    # random search for a frame that the test cannot certify
    L = 8
    found = None
    for seed in range(200):
        lat = Lattice.separable(L, *[(2, 4), (4, 2), (4, 4), (2, 2)][seed % 4])
        S = random_op(L, 1 + seed % 3, seed)
        if frame_bounds(S, lat).is_frame and not janssen_sufficient(S, lat)[0]:
            found = seed
            break
    assert found is not None


def test_janssen_sufficient_zero():
    assert janssen_sufficient(np.zeros((4, 4)), Lattice.separable(4, 2, 2)) == (False, 0.0)


def test_janssen_sufficient_lower_bound(rng):
    for seed in range(30):
        L = 6
        lat = Lattice.separable(L, *[(1, 1), (1, 2), (2, 1), (3, 1)][seed % 4])
        S = random_op(L, 3, seed)
        ok, A_guar = janssen_sufficient(S, lat)
        rep = frame_bounds(S, lat)
        if ok:
            assert A_guar <= rep.A + 1e-9 * rep.B


# injectivity ---------------------------------------------------------------

def test_injectivity_identity():
    for lat in (Lattice.separable(6, 6, 6), Lattice.separable(6, 2, 3)):
        assert injectivity_check(np.eye(6), lat)


def test_injectivity_single_point_rank_one():
    for L in (2, 5, 8):
        phi = window_gaussian(L)
        assert not injectivity_check(rank_one(phi, phi), Lattice.separable(L, L, L))


def test_injectivity_agrees_with_frame_bounds():
    rng = np.random.default_rng(3)
    for i in range(60):
        L = (6, 8, 12)[i % 3]
        a, b = rng.choice(divisors(L), 2)
        lat = Lattice.separable(L, int(a), int(b))
        S = random_op(L, int(rng.integers(1, 4)), i)
        assert injectivity_check(S, lat) == frame_bounds(S, lat).is_frame


# Cohen class -------------------------------------------------------------------

def test_cohen_spectrogram(rng):
    L = 8
    phi = window_gaussian(L)
    psi = crandn(rng, L)
    np.testing.assert_allclose(cohen_map(rank_one(phi, phi), psi), np.abs(stft(psi, phi)) ** 2,
                               atol=1e-12)


def test_cohen_zero_signal(rng):
    assert not np.any(cohen_map(crandn(rng, 5, 5), np.zeros(5)))


def test_cohen_matches_definition_and_sum_rule(rng):
    L = 8
    S, psi = crandn(rng, L, L), crandn(rng, L)
    Q = cohen_map(S, psi)
    for z in itertools.product(range(L), repeat=2):
        assert Q[z] == pytest.approx(np.linalg.norm(translate_op(S, z) @ psi) ** 2, rel=1e-11)
    target = L * np.linalg.norm(S) ** 2 * np.linalg.norm(psi) ** 2
    assert abs(Q.sum() - target) <= 1e-10 * target


def test_cohen_dim_mismatch():
    with pytest.raises(DimensionError):
        cohen_map(np.eye(4), np.ones(5))
