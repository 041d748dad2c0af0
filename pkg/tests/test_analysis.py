import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import special_ortho_group

from fuzzy_spectra.analysis import (
    VerificationReport,
    build_spectral_map,
    circle_spectrum,
    density_metrics,
    dispersion,
    get_k_rule,
    interlacing_check,
    madore_comparison,
    madore_operators,
    madore_spectrum,
    most_localized,
    norm_chain,
    parity_check,
    rotate_operators,
    sphere_block_spectrum,
    toeplitz_reference,
    top_eig_monotonicity_circle,
    top_eig_monotonicity_sphere,
    union_residual,
)
from fuzzy_spectra.analysis.report import format_float, ordered_map, thread_cap, to_json_text
from fuzzy_spectra.analysis.suite import CheckOptions, run_check
from fuzzy_spectra.circle import build_circle_operators, circle_x_squared
from fuzzy_spectra.core import Spectrum, StateVector, SymTridiag, k_floor, make_params
from fuzzy_spectra.sphere import build_Bm, build_sphere_operators

SQ2 = math.sqrt(2.0)


class TestParity:
    def test_closed_form(self):
        assert parity_check(Spectrum([SQ2 / 2, 0, -SQ2 / 2]))

    def test_asymmetric(self):
        assert not parity_check(Spectrum([1.0, -0.5]))

    def test_B0_lambda5(self):
        assert parity_check(sphere_block_spectrum(make_params(5, kind="sphere"), 0))

    def test_madore(self):
        assert parity_check(madore_spectrum(7))

    @given(st.lists(st.floats(0.01, 1), min_size=1, max_size=10, unique=True))
    def test_symmetrized_sets_pass(self, xs):
        assert parity_check(Spectrum(xs + [-x for x in xs]))


class TestKRules:
    def test_clipped_to_floor(self):
        for name in ("theorem1c", "theorem1c_proof", "lambda6"):
            rule = get_k_rule(name)
            for lam in (1, 2, 3, 10):
                assert rule(lam) >= k_floor(lam)

    def test_values(self):
        assert get_k_rule("lambda6")(10) == 1e6
        assert get_k_rule("theorem1c")(1) == k_floor(1)
        lam = 5
        expected = lam * (lam - 1) * (2 * lam + 3) ** 2 * (2 * lam + 4) ** 4 / (4 * math.pi**4)
        assert get_k_rule("theorem1c")(lam) == pytest.approx(expected)

    def test_explicit_not_clipped(self):
        assert get_k_rule(3.0)(2) == 3.0
        assert get_k_rule("explicit(36)")(2) == 36.0

    def test_unknown(self):
        with pytest.raises(ValueError):
            get_k_rule("nope")


class TestMonotonicity:
    def test_circle_first_step(self):
        rep = top_eig_monotonicity_circle(2, "default")
        a = [r["alpha1"] for r in rep.rows]
        assert a[0] == pytest.approx(SQ2 / 2, abs=1e-12)
        assert a[1] == pytest.approx(0.5 * math.sqrt(3 + 2 / 36), abs=1e-12)
        assert rep.passed

    def test_asymptotic_bound_lambda1(self):
        assert 1 - math.pi**2 / 32 == pytest.approx(0.69157, abs=1e-5)
        assert 1 - math.pi**2 / 32 <= SQ2 / 2

    @pytest.mark.parametrize("rule", ["theorem1c", "theorem1c_proof", "default"])
    def test_circle_sweep(self, rule):
        rep = top_eig_monotonicity_circle(60, rule)
        assert rep.passed, rep.failed_items()

    def test_sphere_lambda1(self):
        rep = top_eig_monotonicity_sphere(2, "default")
        assert rep.rows[0]["alpha1"] == pytest.approx(math.sqrt(5 / 12), abs=1e-12)
        assert rep.rows[0]["m_chain"]

    def test_sphere_sweep(self):
        rep = top_eig_monotonicity_sphere(40, "lambda6")
        assert rep.passed, rep.failed_items()
        assert rep.notes["lambda0"] is not None

    def test_sphere_lambda0_detects_late_failures(self):
        # a decreasing step in the last pair means no Λ₀ in range
        rep = top_eig_monotonicity_sphere(3, "lambda6")
        assert rep.notes["lambda0"] == 1

    def test_range_checks(self):
        with pytest.raises(ValueError):
            top_eig_monotonicity_circle(1)


class TestSpectralMap:
    def test_identity(self):
        ref = toeplitz_reference(7)
        g = build_spectral_map(ref, ref)
        for x, y in g.knots:
            assert x == y
        assert g.sup_deviation() == 0.0

    def test_circle_lambda2_knot(self):
        p = make_params(2, 36)
        g = build_spectral_map(toeplitz_reference(5), circle_spectrum(p))
        assert g(math.sqrt(3) / 2) == pytest.approx(0.5 * math.sqrt(3 + 2 / 36), abs=1e-12)

    def test_odd_and_capped(self):
        g = build_spectral_map(toeplitz_reference(6), sphere_block_spectrum(make_params(5, kind="sphere"), 0))
        assert g(0.0) == 0.0
        xs = np.linspace(-1, 1, 41)
        np.testing.assert_allclose(g(-xs), -g(xs), atol=0)
        top = g.act[-1]
        assert g(1.0) == top and g(g.ref[-1] + 1e-3) == top

    def test_increasing(self):
        g = build_spectral_map(toeplitz_reference(41), circle_spectrum(make_params(20)))
        ys = g(np.linspace(-1, 1, 1001))
        assert np.all(np.diff(ys) >= 0)
        assert np.all(np.diff([y for _, y in g.knots]) > 0)

    def test_rejects_non_simple(self):
        with pytest.raises(ValueError):
            build_spectral_map(Spectrum([0.5, 0.5, -0.5, -0.5]), Spectrum([0.5, 0.5, -0.5, -0.5]))

    def test_rejects_size_mismatch(self):
        with pytest.raises(ValueError):
            build_spectral_map(toeplitz_reference(3), toeplitz_reference(4))


class TestDensity:
    def test_lambda1_exact(self):
        d = density_metrics(make_params(1))
        assert d.hw_lhs < 1e-15
        assert d.hw_rhs == 1 / 8

    def test_hoffman_wielandt_and_weyl(self):
        for lam in (2, 10, 40, 150):
            d = density_metrics(make_params(lam))
            assert d.hw_lhs <= d.frobenius + 1e-12
            assert d.max_abs_dev <= d.spectral + 1e-12

    def test_gap_bound(self):
        for lam in (10, 40, 100):
            d = density_metrics(make_params(lam))
            assert d.max_gap <= 2 * math.sin(math.pi / (d.size + 1)) + 3 * d.sup_dev

    def test_sphere_block_metrics(self):
        d = density_metrics(make_params(30, kind="sphere"), m=0)
        assert d.size == 31
        assert d.hw_lhs < d.hw_rhs

    def test_m_on_circle_rejected(self):
        with pytest.raises(ValueError):
            density_metrics(make_params(3), m=1)


class TestInterlacingAndChain:
    def test_p3(self):
        assert interlacing_check(SymTridiag.toeplitz(3, 0.0, 0.5))

    def test_b0_range(self):
        for lam in range(2, 41, 6):
            assert interlacing_check(build_Bm(make_params(lam, kind="sphere"), 0))

    def test_2x2_block(self):
        p = make_params(6, kind="sphere")
        assert interlacing_check(build_Bm(p, 5))

    def test_failure_detected(self):
        # a zero coupling splits the matrix and breaks strict interlacing
        assert not interlacing_check(SymTridiag([0.0, 0.0, 0.0], [0.5, 0.0]))

    def test_norm_chain(self):
        rows = norm_chain(make_params(12, kind="sphere"))
        assert all(r["chain"] and r["dominated"] for r in rows)
        assert rows[-1]["norm_Bm"] == 0.0 == rows[-1]["norm_sub"]

    @pytest.mark.parametrize("lam", [1, 3, 8])
    def test_union(self, lam):
        assert union_residual(make_params(lam, kind="sphere")) <= 1e-10


class TestDispersion:
    def test_circle_lambda1_psi0(self):
        p = make_params(1)
        ops = build_circle_operators(p)
        psi0 = StateVector(np.array([0, 1, 0]))
        # ψ₀ is the middle basis vector; ⟨x_i⟩ vanish, so (Δx)² = ⟨x²⟩
        assert dispersion([ops.x1, ops.x2], psi0) == pytest.approx(circle_x_squared(p)[1], abs=1e-15)

    def test_needs_normalized_state(self):
        ops = build_circle_operators(make_params(1))
        with pytest.raises(ValueError):
            dispersion([ops.x1], StateVector([1.0, 1.0, 0.0]))

    def test_dimension_mismatch(self):
        ops = build_circle_operators(make_params(1))
        with pytest.raises(ValueError):
            dispersion([ops.x1], StateVector([1.0, 0.0]))

    def test_nonnegative_and_rotation_invariant(self, rng):
        spaces = [
            (build_circle_operators(make_params(4)), 2),
            (build_sphere_operators(make_params(3, kind="sphere")), 3),
        ]
        for ops, D in spaces:
            x = [ops.x1, ops.x2] if D == 2 else list(ops.cartesian()[0])
            dim = ops[0].dim
            for _ in range(20):
                v = StateVector(rng.normal(size=dim) + 1j * rng.normal(size=dim), normalized=True)
                R = special_ortho_group.rvs(D, random_state=rng)
                d0 = dispersion(x, v)
                assert d0 >= -1e-12
                assert dispersion(rotate_operators(x, R), v) == pytest.approx(d0, abs=1e-10)

    def test_circle_top_state_x2_mean_vanishes(self):
        p = make_params(6)
        s = most_localized(p)
        ops = build_circle_operators(p)
        v = s.state.coefficients
        assert abs(np.vdot(v, ops.x2.dense() @ v)) < 1e-14
        x1 = ops.x1.dense()
        x2 = ops.x2.dense()
        xsq = np.vdot(v, (x1 @ x1 + x2 @ x2) @ v).real
        assert s.dispersion == pytest.approx(xsq - s.eigenvalue**2, abs=1e-12)


class TestLocalization:
    @pytest.mark.parametrize("lam", [2, 5, 30])
    def test_sphere_L3_exactly_zero(self, lam):
        s = most_localized(make_params(lam, kind="sphere"))
        assert s.L_expectation == 0.0
        assert s.dispersion < (math.pi**2 - 1) / lam**2

    @pytest.mark.parametrize("lam", [2, 5, 30])
    def test_circle_bound(self, lam):
        assert most_localized(make_params(lam)).dispersion < (math.pi**2 / 4) / lam**2

    def test_madore(self):
        for lam in (1, 4, 10):
            s = most_localized(make_params(lam, kind="madore"))
            assert s.L_expectation == lam
            assert s.eigenvalue == pytest.approx(math.sqrt(lam / (lam + 1)), abs=1e-15)
            # Casimir x² = 1, so (Δx)² = 1 - Λ/(Λ+1)
            assert s.dispersion == pytest.approx(1 / (lam + 1), abs=1e-12)

    def test_madore_operators_su2(self):
        x1, x2, x3 = (o.dense() for o in madore_operators(3))
        r = math.sqrt(12)
        np.testing.assert_allclose(x1 @ x2 - x2 @ x1, 1j * x3 / r, atol=1e-14)
        np.testing.assert_allclose(x1 @ x1 + x2 @ x2 + x3 @ x3, np.eye(7), atol=1e-14)

    def test_madore_comparison(self):
        row = madore_comparison(10)
        assert row["L3_fuzzy"] == 0.0 and row["L3_madore"] == 10
        assert row["top_eig_fuzzy"] > row["top_eig_madore"]


class TestMadoreSpectrum:
    def test_lambda1(self):
        np.testing.assert_allclose(madore_spectrum(1).values, [1 / SQ2, 0, -1 / SQ2], atol=1e-16)

    def test_top(self):
        for lam in (1, 10, 1000):
            s = madore_spectrum(lam)
            assert s.top == pytest.approx(math.sqrt(lam / (lam + 1)))
            assert s.top < 1
            assert s.is_simple()


class TestReport:
    def test_roundtrip_and_pass(self):
        rep = VerificationReport("t", (1, 2), "default", [{"lambda": 1, "x": 0.1}], {"a": True, "b": False})
        assert not rep.passed
        assert rep.failed_items() == ["b"]
        d = json.loads(rep.to_json())
        assert d["rows"][0]["x"] == 0.1
        assert rep.to_csv() == "lambda,x\n1,0.10000000000000001\n"

    def test_float_format(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(-0.0) == "0"
        assert format_float(float("inf")) == "inf"
        assert to_json_text({"a": float("nan"), "b": 1.5}) == '{\n  "a": NaN,\n  "b": 1.5\n}\n'

    def test_thread_cap(self, monkeypatch):
        monkeypatch.setenv("FUZZY_SPECTRA_THREADS", "3")
        assert thread_cap() == 3
        assert ordered_map(lambda x: x * x, range(10)) == [x * x for x in range(10)]
        monkeypatch.setenv("FUZZY_SPECTRA_THREADS", "zero")
        with pytest.raises(ValueError):
            thread_cap()


class TestSuite:
    def test_parity_single(self):
        (rep,) = run_check("parity", CheckOptions(5, 5, "sphere", 0))
        assert rep.passed

    def test_perturbation_reports_stated_bound_separately(self):
        (rep,) = run_check("perturbation", CheckOptions(1, 12))
        assert rep.items["hoffman_wielandt"] and rep.items["weyl"]
        assert rep.items["stated_bound"] is False
        assert rep.notes["stated_bound_first_failure"] == 9

    def test_unknown(self):
        with pytest.raises(ValueError):
            run_check("nope", CheckOptions())
