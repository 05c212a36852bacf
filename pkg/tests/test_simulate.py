from __future__ import annotations

import math

import numpy as np
import pytest

from stochstab.bifurcation import OscillatorSpec, oscillator_to_system
from stochstab.criteria import Verdict
from stochstab.errors import WrongPattern
from stochstab.model import SystemSpec, dual_transform, stratonovich_to_ito
from stochstab.simulate import (
    SimConfig,
    fit_exponent,
    moment_matrix,
    ms_stable_by_moments,
    path_generator,
    probe_probability_stability,
    second_moment_exact,
    simulate_ensemble,
    spectral_abscissa,
)

DET = SystemSpec(-1, 0, 0, -1)


def moment_matrix_by_lyapunov(spec: SystemSpec) -> np.ndarray:
    """Columns from dP/dt = AP + PA^T + G P G^T on the basis of symmetric P."""
    A = np.array(spec.drift).reshape(2, 2)
    G = np.array(spec.diffusion).reshape(2, 2)
    basis = [np.array([[1, 0], [0, 0]]), np.array([[0, 1], [1, 0]]), np.array([[0, 0], [0, 1]])]
    cols = []
    for P in basis:
        D = A @ P + P @ A.T + G @ P @ G.T
        cols.append([D[0, 0], D[0, 1], D[1, 1]])
    return np.array(cols).T


class TestMomentMatrix:
    def test_deterministic(self):
        assert np.array_equal(moment_matrix(DET), np.diag([-2.0, -2.0, -2.0]))

    def test_matches_lyapunov_equation(self):
        rng = np.random.default_rng(60)
        for _ in range(200):
            spec = SystemSpec(*rng.uniform(-3, 3, 8))
            assert np.allclose(moment_matrix(spec), moment_matrix_by_lyapunov(spec), atol=1e-12)

    def test_oscillator_third_row(self):
        k, w, s1, s2 = 0.7, 1.3, 0.4, 0.9
        row3 = moment_matrix(oscillator_to_system(OscillatorSpec(k, w, s1, s2)))[2]
        assert row3 == pytest.approx([s1 * s1, -2 * w * w + 2 * s1 * s2, -2 * k + s2 * s2])

    def test_singular_on_case_b_boundary(self):
        k = 0.8
        mat = moment_matrix(oscillator_to_system(OscillatorSpec(k, 1.0, 0.0, math.sqrt(2 * k))))
        assert abs(np.linalg.det(mat)) < 1e-12

    def test_determinant_formula_case_b(self):
        for k, w, s2 in [(1.0, 1.0, 0.5), (0.5, 2.0, 1.3), (2.0, 0.7, 0.1)]:
            mat = moment_matrix(oscillator_to_system(OscillatorSpec(k, w, 0.0, s2)))
            assert np.linalg.det(mat) == pytest.approx(2 * w * w * (s2 * s2 - 2 * k))

    def test_rejects_stratonovich(self):
        with pytest.raises(WrongPattern):
            moment_matrix(SystemSpec(-1, 0, 0, -1, calculus="stratonovich"))

    def test_dual_is_permutation_similar(self):
        perm = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
        rng = np.random.default_rng(61)
        for _ in range(100):
            spec = SystemSpec(*rng.uniform(-3, 3, 8))
            assert np.allclose(moment_matrix(dual_transform(spec)), perm @ moment_matrix(spec) @ perm)
            assert spectral_abscissa(dual_transform(spec)) == pytest.approx(spectral_abscissa(spec), abs=1e-10)


class TestOracle:
    def test_deterministic(self):
        assert ms_stable_by_moments(DET) is Verdict.STABLE

    @pytest.mark.parametrize("s2, want", [(0.99, Verdict.STABLE), (1.01, Verdict.UNSTABLE)])
    def test_oscillator_case_c(self, s2, want):
        s = math.sqrt(s2)
        assert ms_stable_by_moments(oscillator_to_system(OscillatorSpec(1, 1, s, s))) is want

    def test_stratonovich_equal_e_c_zero(self):
        # converted a = -1 + 0.95, so the x^2 moment grows at rate 2a + e^2 = 1.8
        spec = SystemSpec(-1, 0, 0, -0.5, e=math.sqrt(1.9), calculus="stratonovich")
        assert moment_matrix(stratonovich_to_ito(spec))[0, 0] == pytest.approx(1.8)
        assert ms_stable_by_moments(spec) is Verdict.UNSTABLE
        assert ms_stable_by_moments(spec.replace(e=math.sqrt(0.9))) is Verdict.STABLE

    def test_duality_invariant(self):
        rng = np.random.default_rng(62)
        for _ in range(300):
            spec = SystemSpec(*rng.uniform(-3, 3, 8), calculus=("ito", "stratonovich")[rng.integers(2)])
            assert ms_stable_by_moments(spec) is ms_stable_by_moments(dual_transform(spec))


class TestSecondMomentExact:
    def test_deterministic_closed_form(self):
        times = np.linspace(0, 5, 11)
        got = second_moment_exact(DET, 1.0, 1.0, times)
        assert np.allclose(got, 2 * np.exp(-2 * times), rtol=1e-8, atol=0)

    def test_linear_in_initial_moments(self):
        spec = SystemSpec(-1, 0.5, -0.3, -0.8, e=0.4, g=0.2)
        t = [0.5, 1.0, 3.0]
        one = np.array(second_moment_exact(spec, 0.3, 0.7, t))
        two = np.array(second_moment_exact(spec, 0.3 * math.sqrt(2), 0.7 * math.sqrt(2), t))
        assert np.allclose(two, 2 * one, rtol=1e-12)

    def test_against_matrix_exponential(self):
        from scipy.linalg import expm

        spec = SystemSpec(-1, 0.5, -0.3, -0.8, e=0.4, g=0.2)
        mat = moment_matrix(spec)
        m0 = np.array([0.09, 0.21, 0.49])
        for t in (0.5, 2.0, 7.0):
            want = expm(mat * t) @ m0
            assert second_moment_exact(spec, 0.3, 0.7, [t])[0] == pytest.approx(want[0] + want[2], rel=1e-9)


def _fast(**kw):
    base = dict(dt=1e-3, horizon=2.0, n_paths=200, seed=7, record_dt=0.05)
    base.update(kw)
    return SimConfig(**base)


class TestEnsemble:
    def test_deterministic_decay(self):
        stats = simulate_ensemble(DET, _fast(horizon=5.0, n_paths=4))
        assert stats.ms_exponent == pytest.approx(2.0, rel=0.01)
        assert np.allclose(stats.second_moment, 2 * np.exp(-2 * stats.times), rtol=0.02)
        assert np.all(stats.second_moment >= 0)
        assert np.all(np.diff(stats.times) > 0)

    def test_reproducible(self):
        spec = SystemSpec(-1, 0.5, -0.3, -0.8, e=0.4, g=0.2)
        s1 = simulate_ensemble(spec, _fast())
        s2 = simulate_ensemble(spec, _fast())
        assert np.array_equal(s1.second_moment, s2.second_moment)
        assert np.array_equal(s1.stderr, s2.stderr)
        s3 = simulate_ensemble(spec, _fast(seed=8))
        assert not np.array_equal(s1.second_moment, s3.second_moment)

    def test_single_path_matches_hand_rolled_scheme(self):
        spec = SystemSpec(-1, 0.5, -0.3, -0.8, e=0.4, g=0.2)
        cfg = SimConfig(dt=1e-2, horizon=3.0, n_paths=1, seed=11, record_dt=1e-2)
        stats = simulate_ensemble(spec, cfg)
        dw = path_generator(11, 0).standard_normal(cfg.n_steps) * math.sqrt(cfg.dt)
        x, y = 1.0, 1.0
        want = [2.0]
        for w in dw:
            x, y = (x + (-x + 0.5 * y) * cfg.dt + 0.4 * x * w,
                    y + (-0.3 * x - 0.8 * y) * cfg.dt + 0.2 * x * w)
            want.append(x * x + y * y)
        assert np.allclose(stats.second_moment, want, rtol=1e-12)

    def test_within_five_stderr_of_exact(self):
        spec = SystemSpec(-1, 0.5, -0.3, -0.8, e=0.4, g=0.2)
        stats = simulate_ensemble(spec, _fast(n_paths=2000, horizon=2.0))
        exact = np.array(second_moment_exact(spec, 1.0, 1.0, stats.times))
        z = np.abs(stats.second_moment[1:] - exact[1:]) / stats.stderr[1:]
        assert z.max() < 5

    def test_dt_halving_halves_exponent_error(self):
        errs = []
        for dt in (0.02, 0.01):
            stats = simulate_ensemble(DET, SimConfig(dt=dt, horizon=5.0, n_paths=1, record_dt=0.1))
            errs.append(abs(stats.ms_exponent - 2.0))
        assert errs[1] <= 0.75 * errs[0]

    def test_oscillator_sign_short_run(self):
        s = math.sqrt(0.5)
        stats = simulate_ensemble(oscillator_to_system(OscillatorSpec(1, 1, s, s)),
                                  _fast(n_paths=500, horizon=6.0))
        assert stats.ms_exponent > 0

    def test_overflow_freezes_paths(self):
        stats = simulate_ensemble(SystemSpec(1000, 0, 0, 1000), SimConfig(dt=1e-2, horizon=2.0, n_paths=3, record_dt=0.1))
        assert stats.exploded == 3
        assert stats.exceedance_prob == 1.0
        assert np.all(np.isfinite(stats.second_moment))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SimConfig(dt=1.0, horizon=0.5)
        with pytest.raises(ValueError):
            SimConfig(n_paths=0)

    def test_csv_and_summary(self, tmp_path):
        stats = simulate_ensemble(DET, _fast(n_paths=2, horizon=0.2))
        stats.write_csv(tmp_path / "e.csv")
        stats.write_summary(tmp_path / "s.json")
        lines = (tmp_path / "e.csv").read_text().splitlines()
        assert lines[0] == "t,second_moment,stderr"
        assert len(lines) == len(stats.times) + 1
        assert '"ms_exponent"' in (tmp_path / "s.json").read_text()


class TestFit:
    def test_exact_exponential(self):
        t = np.linspace(0, 10, 101)
        alpha, amp = fit_exponent(t, 3 * np.exp(-0.7 * t), 1.0, 1.0)
        assert alpha == pytest.approx(0.7)
        assert amp == pytest.approx(1.5)


class TestProbe:
    def test_deterministic_no_exceedance(self):
        stats = probe_probability_stability(DET, _fast(n_paths=16), epsilon=1.0, delta=0.01)
        assert stats.exceedance_prob == 0.0

    def test_exceedance_trend_in_delta(self):
        spec = SystemSpec(-2, 1, 1, -1, e=1.0)
        rho = []
        for delta in (0.1, 0.05, 0.01):
            cfg = SimConfig(dt=1e-3, horizon=5.0, n_paths=400, seed=3, record_dt=0.1)
            rho.append(probe_probability_stability(spec, cfg, epsilon=0.1, delta=delta).exceedance_prob)
        assert rho[0] >= rho[1] >= rho[2]
        assert rho[2] == 0.0

    def test_unstable_exceedance_grows_with_horizon(self):
        spec = SystemSpec(-1, 0, 0, -1, e=2.5)
        rho = []
        for horizon in (1.0, 4.0, 12.0):
            cfg = SimConfig(dt=1e-3, horizon=horizon, n_paths=300, seed=4, record_dt=0.1)
            rho.append(probe_probability_stability(spec, cfg, epsilon=1.0, delta=0.1).exceedance_prob)
        assert rho[0] <= rho[1] <= rho[2]
        assert ms_stable_by_moments(spec) is Verdict.UNSTABLE

    def test_attractor_from_analysis(self):
        spec = SystemSpec(-2, 1, 1, -1, e=0.5)
        cfg = SimConfig(dt=1e-2, horizon=20.0, n_paths=50, seed=5, record_dt=0.1)
        stats = probe_probability_stability(spec, cfg, epsilon=1.0, delta=0.1)
        assert stats.attractor_fraction is not None
        assert stats.attractor_fraction > 0.9
