"""Complex polynomial container and deterministic root solving.

Roots come from companion-matrix eigenvalues (numpy), tightened by a few
guarded Newton steps, and are returned in a canonical order (real part, then
imaginary part, rounded to 12 digits) so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import ExactComplex

__all__ = ["ComplexPolynomial", "poly_roots", "RootConvergenceError"]


class RootConvergenceError(ArithmeticError):
    """Raised when a root fails its residual bound; carries the best residual."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class ComplexPolynomial:
    """Dense polynomial; coefficients ascending (c[k] multiplies z^k)."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs or (len(coeffs) == 1 and coeffs[0] == 0):
            raise ValueError("zero polynomial")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def as_complex_array(self):
        out = []
        for c in self.coefficients:
            if isinstance(c, ExactComplex):
                out.append(c.to_complex())
            else:
                out.append(complex(c))
        return np.array(out, dtype=np.complex128)

    def __call__(self, z):
        value = 0j
        for c in reversed(self.as_complex_array()):
            value = value * z + c
        return value

    def derivative_at(self, z):
        coeffs = self.as_complex_array()
        value = 0j
        for k in range(len(coeffs) - 1, 0, -1):
            value = value * z + k * coeffs[k]
        return value


def _residual(coeffs, z):
    """|p(z)| scaled by the evaluation norm sum |c_k||z|^k (backward error)."""
    value = 0j
    scale = 0.0
    az = abs(z)
    for k in range(len(coeffs) - 1, -1, -1):
        value = value * z + coeffs[k]
    power = 1.0
    for c in coeffs:
        scale += abs(c) * power
        power *= az
    return abs(value) / scale if scale else abs(value)


def poly_roots(poly, tol=1e-9, polish=True):
    """All `degree` roots (with multiplicity), canonically ordered.

    Each root satisfies |p(z)| / sum_k |c_k||z|^k <= tol; on failure a
    RootConvergenceError reports the worst residual.
    """
    if not isinstance(poly, ComplexPolynomial):
        poly = ComplexPolynomial(tuple(poly))
    if poly.degree < 1:
        raise ValueError("degree must be at least 1")
    coeffs = poly.as_complex_array()
    # numpy's convention is descending coefficients.
    raw = np.roots(coeffs[::-1])
    roots = []
    for z in raw:
        z = complex(z)
        if polish:
            for _ in range(3):
                pv = poly(z)
                dv = poly.derivative_at(z)
                if dv == 0:
                    break
                step = pv / dv
                if abs(step) > 1e-2 * max(1.0, abs(z)):
                    break  # double-root plateau; Newton would wander
                z2 = z - step
                if _residual(coeffs, z2) <= _residual(coeffs, z):
                    z = z2
                else:
                    break
        roots.append(z)
    worst = max(_residual(coeffs, z) for z in roots)
    if worst > tol:
        raise RootConvergenceError(
            f"root residual {worst:.3e} exceeds tolerance {tol:.3e}", worst)
    roots.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return roots
