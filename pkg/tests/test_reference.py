import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from mobius_quad import reference
from mobius_quad.errors import CrossCheckFailure, NoConvergence, NotIntegrable
from mobius_quad.presets import PRESETS
from mobius_quad.reference import (FIXTURE_ENV, Method, ReferenceResult, beta, exact_moment,
                                   load_fixtures, log_beta, lookup_reference, moment_reference,
                                   reference_integral, tanh_sinh, write_fixtures)
from mobius_quad.weightfn import make_omega, make_weight

PI = math.pi
EPS = np.finfo(float).eps


class TestMoments:
    def test_examples(self):
        assert exact_moment(0, 2) == pytest.approx(PI, rel=2 * EPS)
        assert exact_moment(1, 4) == 0.0
        assert exact_moment(2, 4) == pytest.approx(PI / 2, rel=2 * EPS)

    @pytest.mark.parametrize("m, u", [(0, 1), (0, 0.5), (2, 3), (4, 5)])
    def test_not_integrable(self, m, u):
        with pytest.raises(NotIntegrable):
            exact_moment(m, u)

    @pytest.mark.parametrize("m", [-1, 1.5])
    def test_bad_order(self, m):
        with pytest.raises(ValueError):
            exact_moment(m, 10)

    @pytest.mark.parametrize("m, u", [(0, 2), (0, 3.5), (2, 4), (2, 7.25), (4, 10), (6, 9), (8, 40)])
    def test_matches_oracle(self, m, u):
        assert exact_moment(m, u) == pytest.approx(float(oracles.moment(m, u)), rel=1e-14)

    @given(st.floats(1.01, 300))
    def test_beta_symmetry(self, u):
        a, b = 0.5, (u - 1) / 2
        assert beta(a, b) == beta(b, a)
        assert exact_moment(0, u) == beta(0.5, (u - 1) / 2)
        assert log_beta(a, b) == log_beta(b, a)

    def test_large_arguments_use_log_space(self):
        assert beta(100.0, 100.5) == pytest.approx(math.exp(log_beta(100.0, 100.5)), rel=1e-12)
        assert beta(200.0, 0.5) > 0

    def test_moment_reference(self):
        r = moment_reference(2, 4)
        assert r.method is Method.CLOSED_FORM_MOMENT and r.est_error == 0.0


class TestTanhSinh:
    def test_gaussian(self):
        v, diff, evals, ok = tanh_sinh(lambda x: np.exp(-x * x))
        assert ok and v == pytest.approx(math.sqrt(PI), rel=1e-13)

    def test_kink_at_centre(self):
        v, *_ , ok = tanh_sinh(lambda x: np.abs(x) * np.exp(-x * x))
        assert ok and v == pytest.approx(1.0, rel=1e-13)

    def test_off_centre_kink(self):
        v, *_, ok = tanh_sinh(lambda x: np.abs(x - 1) / (1 + x * x) ** 2, center=1.0)
        expected = float(oracles.mp.quad(lambda t: abs(t - 1) / (1 + t * t) ** 2,
                                         [-oracles.mp.inf, 1, oracles.mp.inf]))
        assert ok and v == pytest.approx(expected, rel=1e-12)


class TestReferenceIntegral:
    def test_constant_omega2(self):
        r = reference_integral(lambda x: np.ones_like(x), make_omega(2), tol=1e-10)
        assert abs(r.value - PI) <= 1e-10
        assert r.method is Method.TANH_SINH
        assert r.est_error >= 0 and r.evaluations > 0

    def test_x_squared_omega4(self):
        r = reference_integral(lambda x: x * x, make_omega(4), tol=1e-10)
        assert abs(r.value - PI / 2) <= 1e-10

    @pytest.mark.parametrize("w", [make_omega(3), make_weight([5, -2, 3, -1, 1], 2.5)])
    def test_zero_function(self, w):
        assert reference_integral(lambda x: np.zeros_like(x), w).value == 0.0

    @pytest.mark.parametrize("u", [4, 6, 8])
    def test_closed_form_agreement(self, u):
        for m in range(u - 1):
            exact = exact_moment(m, u)
            r = reference_integral(lambda x, m=m: x**m, make_omega(u), tol=1e-10)
            assert abs(r.value - exact) <= 1e-9 * (1 + abs(exact)), m

    @pytest.mark.parametrize("u, cross", [(6.0, True), (2.5, False)])
    def test_general_weight_against_oracle(self, u, cross):
        # at upsilon = 2.5 the Möbius rule is still 4e-8 off at n = 2^16, so
        # only the double-exponential side can be held to 1e-10
        coeffs = (5, -2, 3, -1, 1)
        r = reference_integral(lambda x: 1 + x / (1 + x * x), make_weight(coeffs, u), tol=1e-11,
                               cross_check=cross)
        mp = oracles.mp
        with mp.workdps(30):
            expected = mp.quad(lambda t: (1 + t / (1 + t * t)) * oracles._poly_weight(coeffs, u, t),
                               [-mp.inf, -1, 0, 1, mp.inf])
        assert r.value == pytest.approx(float(expected), abs=1e-10)

    def test_scalar_integrand(self):
        r = reference_integral(lambda x: 1.0 if x > 0 else 0.0, make_omega(2), cross_check=False)
        assert r.value == pytest.approx(PI / 2, abs=1e-10)

    def test_tolerance_floor(self):
        with pytest.raises(ValueError):
            reference_integral(lambda x: x, make_omega(4), tol=1e-13)

    def test_no_convergence(self):
        # the slowly decaying oscillatory tail of f1 against omega_4 stalls
        # the double-exponential levels around 1e-8
        with pytest.raises(NoConvergence):
            reference_integral(PRESETS["f1"], make_omega(4), tol=1e-10)

    def test_cross_check_failure(self, monkeypatch):
        monkeypatch.setattr(reference, "integrate", lambda rule, f: 1.0)
        with pytest.raises(CrossCheckFailure):
            reference_integral(lambda x: np.ones_like(x), make_omega(2))

    def test_cross_check_enters_estimate(self, monkeypatch):
        monkeypatch.setattr(reference, "integrate", lambda rule, f: PI + 5e-9)
        r = reference_integral(lambda x: np.ones_like(x), make_omega(2), tol=1e-10)
        assert r.est_error == pytest.approx(5e-9, rel=1e-3)


class TestFixtures:
    def test_packaged_rows(self):
        table = load_fixtures()
        for u in (3, 4, 6, 8):
            assert ("f1", float(u), 1.0) in table
        for u in (3, 4, 4.5, 5, 5.5, 6, 7):
            assert ("f2", float(u), 1.0) in table
        assert all(r.est_error >= 0 for r in table.values())

    def test_round_trip(self, tmp_path):
        rows = [("f9", 3.5, 2.0, ReferenceResult(0.1 + 0.2, 1e-15, Method.TANH_SINH))]
        path = tmp_path / "fx.csv"
        write_fixtures(rows, path)
        got = load_fixtures(path)[("f9", 3.5, 2.0)]
        assert got.value == 0.1 + 0.2 and got.method is Method.TANH_SINH

    def test_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "fx.csv"
        write_fixtures([("f1", 6.0, 1.0, ReferenceResult(42.0, 0.0, Method.HIGH_PRECISION))], path)
        monkeypatch.setenv(FIXTURE_ENV, str(path))
        assert lookup_reference("f1", 6).value == 42.0
        assert lookup_reference("f2", 6) is None

    def test_missing_file(self, tmp_path):
        assert lookup_reference("f1", 6, path=tmp_path / "nope.csv") is None

    def test_bad_header(self, tmp_path):
        path = tmp_path / "fx.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_fixtures(path)

    @pytest.mark.parametrize("u", [3.0, 4.0, 4.5, 5.0, 5.5, 6.0, 7.0])
    def test_reverify_f2(self, u):
        stored = load_fixtures()[("f2", u, 1.0)]
        fresh = reference_integral(PRESETS["f2"], make_omega(u), tol=1e-12, cross_check=False)
        assert abs(fresh.value - stored.value) <= max(stored.est_error, 1e-12)

    @pytest.mark.parametrize("u", [3.0, 4.0, 6.0, 8.0])
    def test_reverify_f1(self, u):
        stored = load_fixtures()[("f1", u, 1.0)]
        assert stored.method is Method.HIGH_PRECISION
        assert stored.value == pytest.approx(float(oracles.f1_integral(u, 25)), rel=1e-15, abs=1e-16)
