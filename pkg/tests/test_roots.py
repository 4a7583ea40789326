import random

import numpy as np
import pytest

from vw3d.roots import ComplexPolynomial, RootConvergenceError, poly_roots


class TestBasicRoots:
    def test_quadratic_pair(self):
        roots = poly_roots(ComplexPolynomial((1, 0, 1)))
        assert len(roots) == 2
        assert abs(roots[0] + 1j) < 1e-12 and abs(roots[1] - 1j) < 1e-12

    def test_double_root_multiset(self):
        # (z-1)^2 (z+2) = z^3 - 3z + 2
        roots = poly_roots(ComplexPolynomial((2, -3, 0, 1)), tol=1e-9)
        near_one = [z for z in roots if abs(z - 1) < 1e-5]
        near_m2 = [z for z in roots if abs(z + 2) < 1e-10]
        assert len(near_one) == 2 and len(near_m2) == 1

    def test_canonical_order_deterministic(self):
        rng = random.Random(0)
        coeffs = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(9))
        a = poly_roots(ComplexPolynomial(coeffs))
        b = poly_roots(ComplexPolynomial(coeffs))
        assert a == b
        assert a == sorted(a, key=lambda z: (round(z.real, 12), round(z.imag, 12)))

    def test_degree_zero_rejected(self):
        with pytest.raises(ValueError):
            poly_roots(ComplexPolynomial((3,)))

    def test_convergence_error_carries_residual(self):
        with pytest.raises(RootConvergenceError) as err:
            poly_roots(ComplexPolynomial((2, -3, 0, 1)), tol=1e-40)
        assert err.value.residual > 0


class TestViete:
    def test_sum_and_product_identities(self):
        rng = random.Random(42)
        for _ in range(20):
            degree = rng.randint(2, 9)
            coeffs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                      for _ in range(degree + 1)]
            if abs(coeffs[-1]) < 0.1:
                coeffs[-1] += 0.5
            roots = poly_roots(ComplexPolynomial(tuple(coeffs)), tol=1e-8)
            total = sum(roots)
            prod = np.prod(roots)
            expect_sum = -coeffs[-2] / coeffs[-1]
            expect_prod = (-1) ** degree * coeffs[0] / coeffs[-1]
            assert abs(total - expect_sum) < 1e-8 * max(1.0, abs(expect_sum))
            assert abs(prod - expect_prod) < 1e-8 * max(1.0, abs(expect_prod))
