import random
from fractions import Fraction

import numpy as np
import pytest

from vw3d.bethe import (
    DegenerateParameterError,
    admissible_roots,
    asymptotics_check,
    build_bethe,
    closed_form_value,
    grdim_closed_form,
    limit_specialize,
    point_report,
    r0_limit_elements,
    r2_limit_elements,
    s2s1_generic_expr,
    s2xs1_closed_expr,
    s_elements_generic,
    s_elements_xy,
    s_squared_values,
    verlinde_sum,
)
from vw3d.ratexpr import rational_eval

GENERIC = {"x": 0.3, "y": 0.7, "t": 0.11}


def expansion_oracle(x, y, t):
    """Independent expansion of the cleared saddle polynomial via numpy."""
    a = np.array([1.0])
    b = np.array([1.0])
    for p in (t, x, y):
        a = np.polymul(a, np.array([-1.0, 0.0, p]))       # -z^2 + p
        b = np.polymul(b, np.array([p, 0.0, -1.0]))       # p z^2 - 1
    return np.polymul(a, a) - np.polymul(b, b)            # descending powers


class TestBuild:
    def test_degree_and_forced_roots(self):
        system = build_bethe(GENERIC)
        poly = system.polynomial
        assert poly.degree == 12
        for z in (1.0, -1.0, 1j, -1j):
            assert abs(poly(z)) < 1e-12

    def test_expansion_matches_oracle(self):
        system = build_bethe(GENERIC)
        mine = system.polynomial.as_complex_array()
        oracle = expansion_oracle(**GENERIC)[::-1]        # ascending
        assert len(mine) == len(oracle)
        assert np.allclose(mine, oracle, rtol=1e-12, atol=1e-12)

    def test_leading_coefficient_exact(self):
        # expanding the difference of products gives 1 - (t x y)^2 at z^12
        system = build_bethe({"x": Fraction(3, 10), "y": Fraction(7, 10),
                              "t": Fraction(11, 100)})
        txy = Fraction(3, 10) * Fraction(7, 10) * Fraction(11, 100)
        assert system.polynomial.coefficients[-1] == complex(1 - txy ** 2)

    def test_singular_parameters_rejected(self):
        with pytest.raises(DegenerateParameterError):
            build_bethe({"x": 1.0, "y": 0.5, "t": 0.25})


class TestAdmissible:
    def test_ten_admissible_with_weyl_pairs(self):
        system = build_bethe(GENERIC)
        roots = admissible_roots(system)
        assert len(roots) == 10
        for r in roots:
            partner = roots[r.weyl_partner_index].z
            assert abs(r.z * partner - 1) < 1e-6
        assert any(abs(r.z - 1j) < 1e-8 for r in roots)
        assert any(abs(r.z + 1j) < 1e-8 for r in roots)

    def test_unit_roots_excluded(self):
        system = build_bethe(GENERIC)
        kept = {round(r.z.real, 8) + 1j * round(r.z.imag, 8)
                for r in admissible_roots(system)}
        assert 1.0 + 0j not in kept and -1.0 + 0j not in kept

    def test_stability_sweep(self):
        rng = random.Random(123)
        for _ in range(30):
            params = {k: rng.uniform(0.05, 0.95) for k in ("x", "y", "t")}
            roots = admissible_roots(build_bethe(params))
            assert len(roots) == 10


def _sorted_key(z):
    return (round(z.real, 9), round(z.imag, 9))


def closed_multiset(point, elements, mults):
    values = []
    for m, expr in zip(mults, elements):
        values += [rational_eval(expr, point)] * m
    return sorted(values, key=_sorted_key)


class TestWeights:
    def test_multiset_matches_generic_closed_forms(self):
        values = sorted((v.s_squared for v in s_squared_values(build_bethe(GENERIC))),
                        key=_sorted_key)
        expected = closed_multiset(GENERIC, s_elements_generic(), (2, 4, 4))
        for got, want in zip(values, expected):
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want))

    def test_multiset_and_classes_at_equal_parameters(self):
        params = {"x": 0.25, "y": 0.25, "t": 1 / 9}
        values = s_squared_values(build_bethe(params), classify=True)
        labels = sorted(v.class_label for v in values)
        assert labels.count("S00-class") == 2
        assert labels.count("S02-class") == 4
        assert labels.count("S06-class") == 4
        point = {"x": 0.25, "t": 1 / 9}
        expected = closed_multiset(point, s_elements_xy(), (2, 4, 4))
        got = sorted((v.s_squared for v in values), key=_sorted_key)
        for a, b in zip(got, expected):
            assert abs(a - b) <= 1e-6 * max(1.0, abs(b))

    def test_specialization_coherence(self):
        # generic pipeline evaluated at y = x agrees with the x = y forms
        params = {"x": 0.4, "y": 0.4, "t": 0.2}
        got = sorted((v.s_squared for v in s_squared_values(build_bethe(params))),
                     key=_sorted_key)
        generic = closed_multiset(params, s_elements_generic(), (2, 4, 4))
        for a, b in zip(got, generic):
            assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


class TestVerlindeSum:
    def test_torus_genus_counts_vacua(self):
        for params in (GENERIC, {"x": 0.5, "y": 0.2, "t": 0.8}):
            assert abs(verlinde_sum(1, params) - 10) < 1e-9

    def test_genus_zero_matches_closed_form(self):
        direct = verlinde_sum(0, GENERIC)
        closed = rational_eval(s2s1_generic_expr(),
                               {k: float(v) for k, v in GENERIC.items()})
        assert abs(direct - closed) <= 1e-8 * abs(closed)

    def test_genus_zero_equal_parameters(self):
        params = {"x": 0.25, "y": 0.25, "t": 1 / 9}
        direct = verlinde_sum(0, params)
        closed = rational_eval(s2xs1_closed_expr(), {"x": 0.25, "t": 1 / 9})
        assert abs(direct - closed) <= 1e-8 * abs(closed)

    def test_higher_genus_matches_elements(self):
        params = {"x": 0.35, "y": 0.35, "t": 0.15}
        direct = verlinde_sum(3, params)
        closed = closed_form_value(3, 0.35, 0.15)
        assert abs(direct - closed) <= 1e-7 * abs(closed)

    def test_higher_genus_generic_point(self):
        direct = verlinde_sum(2, GENERIC)
        closed = sum(m * rational_eval(e, GENERIC) ** -1
                     for m, e in zip((2, 4, 4), s_elements_generic()))
        assert abs(direct - closed) <= 1e-7 * abs(closed)


class TestClosedFormSeries:
    def test_three_sphere_tower(self):
        series = grdim_closed_form("S3", order=12)
        for k in range(0, 12, 2):
            assert series.coefficient({"t": k}) == 1
        assert series.coefficient({"t": 3}) == 0

    def test_s2xs1_expansion_oracle(self):
        # independent triple-loop expansion of
        # 2 t^{3/2} (1 + t x^4) sum_i t^{2i} sum_j (t^2 x^4)^j
        order = 8
        series = grdim_closed_form("S2xS1", order=order)
        expected = {}
        for lead in ((0, 0), (1, 4)):
            for i in range(order):
                for j in range(order):
                    te = Fraction(3, 2) + lead[0] + 2 * i + 2 * j
                    xe = lead[1] + 4 * j
                    if te < order and xe < order:
                        key = (te, xe)
                        expected[key] = expected.get(key, 0) + 2
        for (te, xe), coeff in expected.items():
            assert series.coefficient({"t": te, "x": xe}) == coeff
        total = sum(1 for _ in series.terms)
        assert total == len(expected)

    def test_torus_constant(self):
        series = grdim_closed_form("SigmaGxS1", order=6, g=1)
        assert series.coefficient({}) == 10

    def test_genus_zero_element_sum_equals_product_formula(self):
        # two independent routes: the 2+4+4 weighted sum of rational-function
        # expansions versus the closed product form, as exact series
        assert grdim_closed_form("SigmaGxS1", order=10, g=0) == \
            grdim_closed_form("S2xS1", order=10)

    def test_genus_two_series_values(self):
        # numeric consistency of the expanded series with the closed sum
        series = grdim_closed_form("SigmaGxS1", order=26, g=2)
        point = {"t": 0.1, "x": 0.15}
        direct = closed_form_value(2, 0.15, 0.1)
        assert abs(series.evaluate(point) - direct) < 1e-6 * abs(direct)


class TestLimits:
    def test_r2_printed_elements(self):
        # the three tabulated limit weights as rational functions of x
        exprs = r2_limit_elements()
        for xv in np.linspace(0.05, 0.9, 10):
            v00 = rational_eval(exprs[0], {"x": xv})
            assert abs(v00 - (xv - 1) * (xv + 1) ** 3 / (xv + 3)) < 1e-9

    def test_r2_limit_is_minus_printed(self):
        # derivation-consistent limit of (y t / x)^{3/2} S^2 as y, t -> 0
        eps = 1e-6
        for xv in (0.3, 0.6):
            norm = (eps * eps / xv) ** 1.5
            for expr, printed in zip(s_elements_generic(), r2_limit_elements()):
                lim = rational_eval(expr, {"x": xv, "y": eps, "t": eps}) / norm
                ref = rational_eval(printed, {"x": xv})
                assert abs(lim - (-ref)) < 1e-4 * abs(ref)

    def test_r2_genus_two_coefficients(self):
        series = limit_specialize("R2", 2, order=6)
        for k, want in enumerate((35, 75, 186, 274, 469)):
            assert series.coefficient({"x": k}) == want

    def test_r2_genus_two_closed_ratio(self):
        # the same series from the compact rational form
        series = limit_specialize("R2", 2, order=10)
        x = 0.07
        num = 16 * x ** 4 + 49 * x ** 3 + 81 * x ** 2 + 75 * x + 35
        assert abs(series.evaluate({"x": x}) - num / (1 - x * x) ** 3) < 1e-6

    def test_r0_element_matches_substitution(self):
        # substitute x = 0 into the x = y weights (valid evaluation point)
        for mine, full in zip(r0_limit_elements(), s_elements_xy()):
            for tv in (0.1, 0.4, 0.7):
                a = rational_eval(mine, {"t": tv})
                b = rational_eval(full, {"t": tv, "x": 0.0})
                assert abs(a - b) < 1e-12 * max(1.0, abs(b))

    def test_r0_series_half_integer_leading(self):
        series = limit_specialize("R0", 0, order=4)
        lead = series.coefficient({"t": Fraction(3, 2)})
        # 2/3 + 4/12 + 4/4 = 2 at t^{3/2}: sum of the three x->0 weights
        assert lead == 2


class TestAsymptotics:
    def test_genus_zero_ratio_to_one(self):
        report = asymptotics_check(0, -1.0, -1.0)
        assert abs(report["entries"][-1]["ratio"] - 1) < 0.01

    def test_genus_one_exact(self):
        report = asymptotics_check(1, -2.0, -1.0)
        assert all(e["value"] == 10.0 for e in report["entries"])

    def test_genus_two_path_constant(self):
        # On the proportional path the true limit of value/target is
        # ((2a+b)^2 + a^2) / (64 b^2); the quoted target is approached only
        # when (1-x) is negligible against (1-t).
        a, b = -2.0, -1.0
        report = asymptotics_check(2, a, b)
        predicted = ((2 * a + b) ** 2 + a ** 2) / (64 * b * b)
        assert abs(report["entries"][-1]["ratio"] - predicted) < 5e-3

    def test_genus_two_collapsing_x_regime(self):
        # (1-x) << (1-t): the corrected constant 4*8^{g-1} emerges
        g = 2
        eps = 1e-5
        x = 1 - eps
        t = 1 - 1000 * eps
        value = closed_form_value(g, x, t)
        corrected = 4 * 8 ** (g - 1) * ((1 - t) / (1 - x)) ** (3 * g - 3)
        assert abs(value / corrected - 1) < 0.02


class TestReport:
    def test_point_report_shape(self):
        rep = point_report(GENERIC)
        assert len(rep["roots"]) == 12
        assert len(rep["admissible"]) == 10
        assert len(rep["s_squared"]) == 10
        assert abs(rep["verlinde"]["1"][0] - 10) < 1e-9
        assert abs(rep["verlinde"]["0"][0] - rep["closed_form"]["genus0_generic"]) < 1e-9

    def test_point_report_xy_closed_form(self):
        rep = point_report({"x": 0.25, "y": 0.25, "t": 0.111})
        assert "genus0_xy" in rep["closed_form"]
        assert abs(rep["closed_form"]["genus0_xy"]
                   - rep["closed_form"]["genus0_generic"]) < 1e-12

    def test_sweep_report(self):
        from vw3d.bethe import sweep_report
        rep = sweep_report(10, seed=5)
        assert rep["ok"] is True
        assert rep["max_weyl_residual"] < 1e-6
        assert rep["max_multiset_rel_error"] < 1e-6
