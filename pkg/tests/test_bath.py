"""Phaseonium fuel tests: construction, temperatures, inversion, domains."""
import math

import numpy as np
import pytest

from phaseonium_engine.bath import (
    ALPHA_BOUNDARY_CLASSICAL,
    PhaseoniumParams,
    alpha_boundary_apparent,
    apparent_temperature,
    build_phaseonium,
    classical_temperature,
    decohered,
    solve_alpha_for_temperature,
    temperature_ratio,
)

INV_LN2 = 1.4426950408889634  # 1/ln(2), frozen from direct evaluation


class TestConstruction:
    def test_diagonal_and_coherence_phi_zero(self):
        state = build_phaseonium(PhaseoniumParams(math.sqrt(0.2), 0.0, 1.0))
        mat = state.rho.mat
        assert np.allclose(np.diag(mat).real, [0.2, 0.4, 0.4])
        assert mat[1, 2] == pytest.approx(0.4)

    def test_coherence_phase_rotation(self):
        state = build_phaseonium(PhaseoniumParams(math.sqrt(0.2), math.pi / 2, 1.0))
        assert state.rho.mat[1, 2] == pytest.approx(0.4j)
        assert state.rho.mat[2, 1] == pytest.approx(-0.4j)

    def test_eigenvalue_structure(self):
        # Full-magnitude ground coherence makes the state rank 2 with
        # eigenvalues {alpha^2, beta^2, 0}; checked by an eigensolver.
        for alpha_sq, phi in [(0.2, 0.3), (0.05, 4.0), (0.3, 5.9)]:
            params = PhaseoniumParams(math.sqrt(alpha_sq), phi, 2.0)
            evals = np.sort(build_phaseonium(params).rho.eigenvalues())
            expected = np.sort([alpha_sq, 1 - alpha_sq, 0.0])
            assert np.allclose(evals, expected, atol=1e-12)

    def test_alpha_range_enforced(self):
        with pytest.raises(ValueError):
            PhaseoniumParams(0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            PhaseoniumParams(1.0, 0.0, 1.0)

    def test_decohered_drops_coherence_only(self):
        state = build_phaseonium(PhaseoniumParams(0.4, 1.1, 1.0))
        diag = decohered(state)
        assert np.allclose(np.diag(diag.rho.mat), np.diag(state.rho.mat))
        assert diag.rho.mat[1, 2] == 0.0


class TestApparentTemperature:
    def test_direct_evaluation_phi_zero(self):
        t = apparent_temperature(PhaseoniumParams(math.sqrt(0.2), 0.0, 1.0))
        assert t.is_ok
        assert t.value == pytest.approx(INV_LN2, rel=1e-12)

    def test_equals_classical_at_multiples_of_pi(self):
        for phi in (0.0, math.pi, 2 * math.pi):
            params = PhaseoniumParams(0.3, phi, 1.7)
            t_app = apparent_temperature(params)
            t_cl = classical_temperature(params)
            assert t_app.value == pytest.approx(t_cl.value, rel=1e-12)

    def test_boundary_alpha_divergent(self):
        phi = 0.7
        alpha = alpha_boundary_apparent(phi)
        t = apparent_temperature(PhaseoniumParams(alpha, phi, 1.0))
        assert t.status == "divergent"

    def test_inverted_regime_flagged(self):
        # Log argument in (0, 1): alpha above the boundary but below sqrt(1/3).
        phi = 0.4 * math.pi
        alpha = min(0.99 * ALPHA_BOUNDARY_CLASSICAL, 1.3 * alpha_boundary_apparent(phi))
        t = apparent_temperature(PhaseoniumParams(alpha, phi, 1.0))
        assert t.status == "inverted"
        assert t.value < 0

    def test_sin_phi_one_unphysical(self):
        t = apparent_temperature(PhaseoniumParams(0.2, math.pi / 2, 1.0))
        assert t.status == "unphysical"


class TestClassicalTemperature:
    def test_direct_evaluation(self):
        t = classical_temperature(PhaseoniumParams(math.sqrt(0.2), 1.23, 1.0))
        assert t.value == pytest.approx(INV_LN2, rel=1e-12)

    def test_divergent_at_one_third(self):
        t = classical_temperature(PhaseoniumParams(ALPHA_BOUNDARY_CLASSICAL, 0.0, 1.0))
        assert t.status == "divergent"

    def test_coherence_boost_near_half_pi(self):
        phi = 0.49 * math.pi
        params = PhaseoniumParams(0.5 * alpha_boundary_apparent(phi), phi, 1.0)
        assert temperature_ratio(params) > 1.0


class TestTemperatureRatioMap:
    def test_log_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            phi = rng.uniform(0, 2 * math.pi)
            alpha = rng.uniform(0.05, 0.95) * min(
                alpha_boundary_apparent(phi), ALPHA_BOUNDARY_CLASSICAL
            )
            params = PhaseoniumParams(alpha, phi, 2.0)
            t_app, t_cl = apparent_temperature(params), classical_temperature(params)
            if not (t_app.is_ok and t_cl.is_ok):
                continue
            assert temperature_ratio(params) == pytest.approx(
                t_app.value / t_cl.value, rel=1e-12
            )

    def test_ratio_one_at_multiples_of_pi(self):
        for phi in (0.0, math.pi, 2 * math.pi):
            params = PhaseoniumParams(0.31, phi, 1.0)
            assert temperature_ratio(params) == pytest.approx(1.0, abs=1e-12)

    def test_branch_signs(self):
        # Boost for 0 < phi < pi, suppression for pi < phi < 2 pi, where both
        # temperatures are defined and positive.
        alpha = 0.2
        for phi in np.linspace(0.05 * math.pi, 0.95 * math.pi, 7):
            params = PhaseoniumParams(alpha, float(phi), 1.0)
            t_app, t_cl = apparent_temperature(params), classical_temperature(params)
            if t_app.is_ok and t_cl.is_ok:
                assert t_app.value > t_cl.value
        for phi in np.linspace(1.05 * math.pi, 1.95 * math.pi, 7):
            params = PhaseoniumParams(alpha, float(phi), 1.0)
            t_app, t_cl = apparent_temperature(params), classical_temperature(params)
            if t_app.is_ok and t_cl.is_ok:
                assert t_app.value < t_cl.value


class TestSolveAlpha:
    def test_hand_inversion(self):
        # omega = ln 2, T = 1, phi = 0: alpha^2 = 1/(2*2 + 1) = 0.2.
        alpha = solve_alpha_for_temperature(1.0, 0.0, math.log(2.0))
        assert alpha**2 == pytest.approx(0.2, rel=1e-14)

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            t_target = rng.uniform(0.05, 5.0)
            phi = rng.uniform(0, 2 * math.pi)
            if 1.0 - math.sin(phi) < 1e-6:
                continue
            omega = rng.uniform(0.5, 8.0)
            alpha = solve_alpha_for_temperature(t_target, phi, omega)
            back = apparent_temperature(PhaseoniumParams(alpha, phi, omega))
            assert back.is_ok
            assert abs(back.value - t_target) / t_target < 1e-9

    def test_infinite_temperature_limit_matches_boundary(self):
        phi = 0.8
        alpha = solve_alpha_for_temperature(1e12, phi, 1.0)
        assert alpha == pytest.approx(alpha_boundary_apparent(phi), rel=1e-9)

    def test_extremely_cold_stays_positive(self):
        alpha = solve_alpha_for_temperature(0.01, 1.525 * math.pi, 2 * math.pi)
        assert alpha > 0.0
        back = apparent_temperature(PhaseoniumParams(alpha, 1.525 * math.pi, 2 * math.pi))
        assert back.value == pytest.approx(0.01, rel=1e-9)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            solve_alpha_for_temperature(-1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            solve_alpha_for_temperature(1.0, math.pi / 2, 1.0)


class TestBoundary:
    def test_boundary_at_phi_zero(self):
        assert alpha_boundary_apparent(0.0) == pytest.approx(math.sqrt(1 / 3), rel=1e-14)

    def test_boundary_below_classical_in_boost_branch(self):
        for phi in np.linspace(0.1, 3.0, 9):
            assert alpha_boundary_apparent(float(phi)) <= ALPHA_BOUNDARY_CLASSICAL + 1e-12
