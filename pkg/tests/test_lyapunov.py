from __future__ import annotations

import numpy as np
import pytest

from draws import drift, rh
from stochstab.bifurcation import OscillatorSpec, oscillator_certificate, oscillator_to_system
from stochstab.errors import UnsupportedPattern, WrongPattern
from stochstab.lyapunov import (
    QuadraticForm,
    apply_generator,
    build_certificate,
    is_negative_definite,
    is_negative_semidefinite,
    is_positive_definite,
    verify_certificate,
)
from stochstab.model import NoisePattern, StabilityNotion, SystemSpec, with_intensity

PROB = StabilityNotion.PROBABILITY
MS = StabilityNotion.MEAN_SQUARE


def generator_by_hand(spec: SystemSpec, v: QuadraticForm, x, y):
    """grad V . drift + (1/2) (G z)^T Hess V (G z), evaluated pointwise."""
    a, b, c, m = spec.drift
    e, f, g, h = spec.diffusion
    dx, dy = a * x + b * y, c * x + m * y
    sx, sy = e * x + f * y, g * x + h * y
    vx, vy = 2 * v.p * x + 2 * v.q * y, 2 * v.q * x + 2 * v.r * y
    return vx * dx + vy * dy + v.p * sx * sx + 2 * v.q * sx * sy + v.r * sy * sy


def generator_matrix(spec: SystemSpec) -> np.ndarray:
    """Columns: LV coefficients of the basis forms x^2, 2xy, y^2."""
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    cols = []
    for basis in (QuadraticForm(1, 0, 0), QuadraticForm(0, 1, 0), QuadraticForm(0, 0, 1)):
        vals = [generator_by_hand(spec, basis, x, y) for x, y in pts]
        p, r = vals[0], vals[1]
        q = (vals[2] - p - r) / 2
        cols.append([p, q, r])
    return np.array(cols).T


class TestGenerator:
    def test_deterministic_example(self):
        lv = apply_generator(SystemSpec(-1, 0, 0, -1), QuadraticForm(1, 0, 1))
        assert (lv.p, lv.q, lv.r) == (-2, 0, -2)

    def test_matches_pointwise_expansion(self):
        spec = SystemSpec(-2, 1, 1, -1, e=0.5)
        v = build_certificate(spec, NoisePattern.ONLY_E, PROB)
        lv = apply_generator(spec, v)
        rng = np.random.default_rng(30)
        for x, y in rng.normal(size=(20, 2)):
            assert lv(x, y) == pytest.approx(generator_by_hand(spec, v, x, y), rel=1e-12, abs=1e-12)

    def test_general_diffusion_cross_term(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            spec = SystemSpec(*rng.uniform(-3, 3, 8))
            v = QuadraticForm(*rng.uniform(-2, 2, 3))
            lv = apply_generator(spec, v)
            for x, y in rng.normal(size=(5, 2)):
                assert lv(x, y) == pytest.approx(generator_by_hand(spec, v, x, y), rel=1e-11, abs=1e-11)

    def test_linearity(self):
        rng = np.random.default_rng(32)
        spec = SystemSpec(*rng.uniform(-3, 3, 8))
        v1, v2 = QuadraticForm(*rng.normal(size=3)), QuadraticForm(*rng.normal(size=3))
        al, be = rng.normal(size=2)
        lhs = apply_generator(spec, al * v1 + be * v2)
        rhs = al * apply_generator(spec, v1) + be * apply_generator(spec, v2)
        assert np.allclose([lhs.p, lhs.q, lhs.r], [rhs.p, rhs.q, rhs.r], rtol=1e-12, atol=1e-12)

    def test_rejects_stratonovich(self):
        with pytest.raises(WrongPattern):
            apply_generator(SystemSpec(-1, 0, 0, -1, calculus="stratonovich"), QuadraticForm(1, 0, 1))


class TestDefiniteness:
    @pytest.mark.parametrize("form, pd", [((1, 0, 1), True), ((1, 1, 1), False), ((3.0, 1.0, 1.0), True)])
    def test_positive(self, form, pd):
        assert is_positive_definite(QuadraticForm(*form)) is pd

    def test_negative(self):
        assert is_negative_semidefinite(QuadraticForm(-1, 0, 0))
        assert not is_negative_definite(QuadraticForm(-1, 0, 0))
        assert is_negative_semidefinite(QuadraticForm(-1, 0, -1))
        assert is_negative_definite(QuadraticForm(-1, 0, -1))

    def test_against_eigenvalues(self):
        rng = np.random.default_rng(33)
        for _ in range(500):
            v = QuadraticForm(*rng.uniform(-2, 2, 3))
            eig = np.linalg.eigvalsh(v.matrix)
            assert is_positive_definite(v) == bool(eig.min() > 1e-9) or abs(eig.min()) < 1e-9


class TestCertificates:
    def test_ve_coefficients(self):
        a, b, c, m = -2.0, 1.0, 1.0, -1.0
        v = build_certificate(SystemSpec(a, b, c, m, e=0.5), NoisePattern.ONLY_E, PROB)
        assert (v.p, v.q, v.r) == (a * m - b * c + m * m, -b * m, b * b)
        assert np.all(np.linalg.eigvalsh(v.matrix) > 0)

    def test_ve_semidefinite_below_first_bound(self):
        spec = SystemSpec(-2, 1, 1, -1, e=1.0)
        rep = verify_certificate(spec, build_certificate(spec, NoisePattern.ONLY_E, PROB))
        theta = np.linspace(0, 2 * np.pi, 400)
        assert np.all(rep.lv_form(np.cos(theta), np.sin(theta)) <= 1e-12)
        assert rep.holds

    def test_equal_ef_mean_square_forms(self):
        a, b, c, m, e = -2.0, 1.0, 1.0, -1.0, 0.3
        s = e * e
        spec = SystemSpec(a, b, c, m, e=e, f=e)
        lit = build_certificate(spec, NoisePattern.EQUAL_EF, MS, printed=True)
        fixed = build_certificate(spec, NoisePattern.EQUAL_EF, MS)
        assert lit.p == fixed.p == c * c + m * m + a * m - b * c
        assert lit.r == fixed.r == pytest.approx(a * a + b * b + a * m - b * c + (b - c) * s)
        assert lit.q == pytest.approx(m * s + a * c + b * m)
        assert fixed.q == pytest.approx(-lit.q)

    def test_equal_ef_mean_square_middle_sign(self):
        """The corrected middle coefficient certifies; the literal one does not."""
        from stochstab.criteria import thm9_ms_ef

        rng = np.random.default_rng(34)
        literal_fail = 0
        for _ in range(300):
            d = drift(rng)
            bound = thm9_ms_ef(SystemSpec(*d, e=1, f=1)).bound.bound
            if bound < 1e-3:
                continue
            s = rng.uniform(0, min(bound, 10)) * (1 - 1e-6) + 1e-9
            spec = with_intensity(SystemSpec(*d), NoisePattern.EQUAL_EF, s)
            assert verify_certificate(spec, build_certificate(spec, NoisePattern.EQUAL_EF, MS)).lv_negative_definite
            lit = build_certificate(spec, NoisePattern.EQUAL_EF, MS, printed=True)
            literal_fail += not verify_certificate(spec, lit).holds
        assert literal_fail > 0

    def test_oscillator_case_b(self):
        v = oscillator_certificate(OscillatorSpec(1, 1, 0, 1), "b")
        assert (v.p, v.q, v.r) == pytest.approx((2.5, 0.5, 2.0))

    def test_oscillator_case_c_below_threshold(self):
        s = 0.5 ** 0.5
        osc = OscillatorSpec(1, 1, s, s)
        rep = verify_certificate(oscillator_to_system(osc), oscillator_certificate(osc, "c"))
        assert rep.v_positive_definite and rep.lv_negative_semidefinite

    def test_only_f_probability_literal_is_cubic(self):
        spec = SystemSpec(-2, 1, 1, -1, f=0.5)
        with pytest.raises(ValueError):
            build_certificate(spec, NoisePattern.ONLY_F, PROB, printed=True)
        v = build_certificate(spec, NoisePattern.ONLY_F, PROB)
        assert (v.p, v.q, v.r) == (1.0, 2.0, 5.0)

    def test_dual_patterns_are_mapped_back(self):
        spec = SystemSpec(-1, 1, 1, -2, h=0.4)
        v = build_certificate(spec, NoisePattern.ONLY_H, PROB)
        assert verify_certificate(spec, v).holds

    def test_errors(self):
        spec = SystemSpec(-1, 1, 1, -2, e=0.4, g=0.4)
        with pytest.raises(UnsupportedPattern):
            build_certificate(spec, NoisePattern.EQUAL_EG, MS)
        with pytest.raises(WrongPattern):
            build_certificate(spec, NoisePattern.ONLY_E, PROB)


class TestVerify:
    def test_deterministic_lyapunov_identity(self):
        spec = SystemSpec(-1, 2, -1, -3)
        v = QuadraticForm(*np.linalg.solve(generator_matrix(spec), [-1, 0, -1]))
        rep = verify_certificate(spec, v)
        assert rep.v_positive_definite and rep.lv_negative_definite

    def test_mean_square_certificate_under_only_e(self):
        spec = SystemSpec(-2, 1, 1, -1, e=0.1 ** 0.5)
        v = QuadraticForm(*np.linalg.solve(generator_matrix(spec), [-1, 0, -1]))
        assert np.all(np.linalg.eigvalsh(v.matrix) > 0)
        rep = verify_certificate(spec, v)
        assert rep.v_positive_definite and rep.lv_negative_definite and rep.holds
        # same V far above the intensity bound
        rep_hi = verify_certificate(spec.replace(e=3.0), v)
        assert not rep_hi.lv_negative_semidefinite
        assert rep_hi.circle_max > 0

    def test_definite_implies_semidefinite(self):
        rng = np.random.default_rng(35)
        for _ in range(100):
            d = drift(rng, rh)
            spec = SystemSpec(*d, e=rng.uniform(0, 1))
            rep = verify_certificate(spec, build_certificate(spec, NoisePattern.ONLY_E, PROB))
            assert not rep.lv_negative_definite or rep.lv_negative_semidefinite
