"""Bethe-vacua pipeline for graded dimensions of circle bundles over surfaces.

For gauge group SU(2) with three adjoint Higgs sectors of R-charges (2, 0, 0)
and equivariant parameters (x, y, t), the saddle equation in the single torus
variable z is

    (t - z^2)^2 (x - z^2)^2 (y - z^2)^2 = (t z^2 - 1)^2 (x z^2 - 1)^2 (y z^2 - 1)^2

Clearing denominators gives a degree-12 polynomial whose admissible solutions
(z not fixed by the Weyl reflection z -> 1/z, i.e. z != +-1) label the ten
vacua.  Each vacuum carries a one-loop weight S^2 assembled from the dilaton,
gauge and superpotential-Hessian factors, and the genus-g graded dimension is
the sum of S^{2-2g} over the ten vacua.

Closed forms for the weights (generic, the x=y specialization, the g=0 sum
and its y=x simplification) are provided as RationalExpr trees for direct
evaluation and exact series expansion.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .ratexpr import T, X, Y, Const, PoleError, rational_eval
from .roots import ComplexPolynomial, poly_roots
from .series import PuiseuxSeries, SeriesError

__all__ = [
    "HiggsSector",
    "BetheSystem",
    "BetheRoot",
    "SMatrixValue",
    "build_bethe",
    "admissible_roots",
    "s_squared",
    "s_squared_values",
    "verlinde_sum",
    "grdim_closed_form",
    "limit_specialize",
    "r2_limit_elements",
    "r0_limit_elements",
    "asymptotics_check",
    "s_elements_xy",
    "s_elements_generic",
    "s2s1_generic_expr",
    "s2xs1_closed_expr",
    "point_report",
    "sweep_report",
    "DegenerateParameterError",
    "ClassAssignmentError",
]

ADMISSIBLE_DELTA = 1e-6
CLASS_MULTIPLICITIES = (2, 4, 4)


class DegenerateParameterError(ArithmeticError):
    """Root collision or count mismatch: parameters sit on a singular locus."""


class ClassAssignmentError(ArithmeticError):
    """No (or ambiguous) closed-form class for a weight at x = y."""


@dataclass(frozen=True)
class HiggsSector:
    """One adjoint Higgs field: its R-charge and equivariant parameter."""

    r_charge: int
    param_name: str
    value: Fraction


@dataclass(frozen=True)
class BetheRoot:
    z: complex
    weyl_partner_index: int
    admissible: bool


@dataclass(frozen=True)
class BetheSystem:
    sectors: tuple
    polynomial: ComplexPolynomial
    delta: float = ADMISSIBLE_DELTA

    @property
    def params(self):
        return {s.param_name: s.value for s in self.sectors}


@dataclass(frozen=True)
class SMatrixValue:
    s_squared: complex
    root: BetheRoot
    class_label: str | None = None


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value).limit_denominator(10**15)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def build_bethe(params, delta=ADMISSIBLE_DELTA):
    """Assemble the cleared degree-12 saddle polynomial at (x, y, t).

    Parameters are positive reals away from {0, 1}; the expansion is done in
    exact rationals and only cast to floats inside the polynomial container.
    """
    x, y, t = (_to_fraction(params[k]) for k in ("x", "y", "t"))
    for name, p in (("x", x), ("y", y), ("t", t)):
        if p <= 0 or p == 1:
            raise DegenerateParameterError(f"parameter {name}={p} on a singular locus")
    sectors = (
        HiggsSector(2, "x", x),
        HiggsSector(0, "y", y),
        HiggsSector(0, "t", t),
    )
    # In w = z^2: A(w) = prod (p - w), B(w) = prod (p w - 1); P = A^2 - B^2.
    a_poly = [Fraction(1)]
    b_poly = [Fraction(1)]
    for p in (t, x, y):
        a_poly = _poly_mul(a_poly, [p, Fraction(-1)])
        b_poly = _poly_mul(b_poly, [Fraction(-1), p])
    a2 = _poly_mul(a_poly, a_poly)
    b2 = _poly_mul(b_poly, b_poly)
    w_coeffs = [ca - cb for ca, cb in zip(a2, b2)]
    if w_coeffs[-1] == 0:
        raise DegenerateParameterError("leading coefficient vanishes (t*x*y = 1)")
    z_coeffs = []
    for c in w_coeffs:
        z_coeffs.append(c)
        z_coeffs.append(Fraction(0))
    z_coeffs.pop()  # no z^13 slot
    poly = ComplexPolynomial(tuple(complex(c) for c in z_coeffs))
    return BetheSystem(sectors=sectors, polynomial=poly, delta=delta)


def admissible_roots(system, tol=1e-9):
    """The ten Weyl-paired admissible roots (z = +-1 excluded).

    Both members of each pair {z, 1/z} are kept; the genus sums below run
    over individual roots, not Weyl orbits.
    """
    roots = poly_roots(system.polynomial, tol=tol)
    delta = system.delta
    n = len(roots)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= 2 * delta:
                raise DegenerateParameterError(
                    f"roots {roots[i]} and {roots[j]} closer than 2*delta")
    kept = [z for z in roots if abs(z - 1) > delta and abs(z + 1) > delta]
    if len(kept) != 10 or n != 12:
        raise DegenerateParameterError(
            f"expected 12 roots with 10 admissible, found {n} and {len(kept)}")
    out = []
    for i, z in enumerate(kept):
        partner = min(range(len(kept)), key=lambda j: abs(z * kept[j] - 1))
        if abs(z * kept[partner] - 1) > delta:
            raise DegenerateParameterError(f"no Weyl partner for root {z}")
        out.append(BetheRoot(z=z, weyl_partner_index=partner, admissible=True))
    return out


def _dilaton_factor(p, w, r_charge, eps_pole):
    num = float(p) ** 1.5 * w
    den = (float(p) - 1.0) * (float(p) - w) * (float(p) * w - 1.0)
    if abs(den) < eps_pole:
        raise PoleError(f"dilaton denominator {den} below {eps_pole}")
    base = num / den
    return base ** (r_charge - 1)


def s_squared(root, system, eps_pole=1e-12, classify=True):
    """One-loop weight S^2 at an admissible root.

    S^2 = [prod_sectors (p^{3/2} z^2 / ((p-1)(p-z^2)(p z^2-1)))^{R-1}]^{-1}
          * (1/z - z)^2
          / sum_sectors (4/(z^2 p^{-1} - 1) - 4/(z^2 p - 1))
    """
    z = root.z
    w = z * z
    dilaton = 1.0 + 0.0j
    hessian = 0.0 + 0.0j
    for sector in system.sectors:
        p = float(sector.value)
        dilaton *= _dilaton_factor(sector.value, w, sector.r_charge, eps_pole)
        d1 = w / p - 1.0
        d2 = w * p - 1.0
        if min(abs(d1), abs(d2)) < eps_pole:
            raise PoleError("superpotential Hessian summand at a pole")
        hessian += 4.0 / d1 - 4.0 / d2
    gauge = (1.0 / z - z) ** 2
    if abs(hessian) < eps_pole:
        raise PoleError("vanishing superpotential Hessian")
    value = (1.0 / dilaton) * gauge / hessian
    label = None
    if classify:
        params = system.params
        if params["x"] == params["y"]:
            label = _classify_xy(value, params, eps_pole)
    return SMatrixValue(s_squared=value, root=root, class_label=label)


def _classify_xy(value, params, eps_pole):
    point = {"t": float(params["t"]), "x": float(params["x"])}
    names = ("S00-class", "S02-class", "S06-class")
    matches = []
    for name, expr in zip(names, s_elements_xy()):
        ref = rational_eval(expr, point, eps_pole)
        if abs(value - ref) <= 1e-6 * max(1.0, abs(ref)):
            matches.append(name)
    if len(matches) != 1:
        raise ClassAssignmentError(
            f"S^2={value} matched classes {matches or 'none'} at x=y")
    return matches[0]


def s_squared_values(system, eps_pole=1e-12, classify=False):
    return [s_squared(r, system, eps_pole, classify) for r in admissible_roots(system)]


def verlinde_sum(g, params, eps_pole=1e-12):
    """Sum of S^{2-2g} over the ten admissible vacua at the given point."""
    if g < 0:
        raise ValueError("genus must be a nonnegative integer")
    system = build_bethe(params)
    values = s_squared_values(system, eps_pole)
    return sum(v.s_squared ** (1 - g) for v in values)


# ----------------------------------------------------------------------
# closed forms


def s_elements_xy():
    """The three squared weights at x = y, as expressions in (t, x)."""
    t32 = T ** Fraction(3, 2)
    bracket = T * (3 * X - 1) + X - 3
    s00 = t32 * (X + 1) / ((T ** 2 - 1) * bracket)
    s02 = t32 * (X - 1) ** 3 / (4 * (T - 1) * (T * X ** 2 - 1) * bracket)
    s06 = t32 * (X ** 2 - 1) / (4 * (T ** 2 - 1) * (T * X ** 2 + 1))
    return (s00, s02, s06)


def s_elements_generic():
    """The three squared weights at generic (x, y, t)."""
    t32 = T ** Fraction(3, 2)
    y32 = Y ** Fraction(3, 2)
    x32 = X ** Fraction(3, 2)
    bracket = T * (3 * X * Y + X + Y - 1) + X * (Y - 1) - Y - 3
    s00 = t32 * (X - 1) * (X + 1) ** 3 * y32 / (
        (T ** 2 - 1) * x32 * (Y ** 2 - 1) * bracket)
    s02 = t32 * (X - 1) ** 3 * y32 * (T * X - 1) * (X * Y - 1) / (
        4 * (T - 1) * x32 * (Y - 1) * (T * Y - 1) * (T * X * Y - 1) * bracket)
    s06 = t32 * (X ** 2 - 1) * y32 * (T * X - 1) * (X * Y - 1) / (
        4 * (T ** 2 - 1) * x32 * (Y ** 2 - 1) * (T * Y - 1) * (T * X * Y + 1))
    return (s00, s02, s06)


def s2s1_generic_expr():
    """Genus-0 sum at generic (x, y, t): the S^2 x S^1 graded dimension."""
    inner = X * (T * (X * Y * (T * (X ** 2 + X + 1) * Y - (T + 1) * X - X * Y)
                      + Y + 1) - X + Y - 1) - 1
    return (2 * T ** Fraction(3, 2) * (X - 1) * Y ** Fraction(3, 2) * inner) / (
        (T ** 2 - 1) * X ** Fraction(3, 2) * (Y ** 2 - 1) * (T * Y - 1)
        * (T ** 2 * X ** 2 * Y ** 2 - 1))


def s2xs1_closed_expr():
    """Genus-0 sum specialized to y = x, in (t, x)."""
    return 2 * T ** Fraction(3, 2) * (T * X ** 4 + 1) / (
        (1 - T ** 2) * (1 - T ** 2 * X ** 4))


def _expand_to(expr, variables, order):
    """Expand with enough internal padding to certify the requested box."""
    den = None
    for pad in (4, 8, 16, 32, 64):
        series = expr.expand(variables, order + pad, den)
        if all(c >= order * series.den for c in series.cutoff):
            return series.truncate(order)
    raise SeriesError(f"could not certify expansion to order {order}")


def grdim_closed_form(manifold, order=20, g=None):
    """Closed-form graded dimension series for the reference 3-manifolds.

    manifold: "S3", "S2xS1", or "SigmaGxS1" (with genus g); the surface case
    uses the x = y weights and the ten-vacua sum.
    """
    if manifold == "S3":
        return _expand_to(Const(1) / (1 - T ** 2), ("t",), order)
    if manifold == "S2xS1":
        return _expand_to(s2xs1_closed_expr(), ("t", "x"), order)
    if manifold == "SigmaGxS1":
        if g is None or g < 0:
            raise ValueError("SigmaGxS1 requires a genus g >= 0")
        if g == 1:
            return PuiseuxSeries.constant(10, ("t", "x"), order=order)
        total = None
        for mult, expr in zip(CLASS_MULTIPLICITIES, s_elements_xy()):
            term = _expand_to(expr ** (1 - g), ("t", "x"), order) * mult
            total = term if total is None else total + term
        return total
    raise ValueError(f"unknown manifold {manifold!r}")


# ----------------------------------------------------------------------
# limits


def r2_limit_elements():
    """Normalized weight limits for y -> 0, t -> 0 (printed convention).

    These are the rational functions the limit is conventionally quoted as;
    the derivation-consistent limits of (y t / x)^{3/2} S^2 are their
    negatives (see r2_series_elements), and the genus sums below use the
    derivation-consistent sign.
    """
    return (
        (X - 1) * (X + 1) ** 3 / (X + 3),
        (X - 1) ** 3 / (4 * (X + 3)),
        (X ** 2 - 1) / 4,
    )


def r2_series_elements():
    return tuple(Const(-1) * e for e in r2_limit_elements())


def r0_limit_elements():
    """Weights at x = y -> 0 with t fixed, as expressions in t."""
    t32 = T ** Fraction(3, 2)
    return (
        t32 / ((1 - T ** 2) * (T + 3)),
        t32 / (4 * (1 - T) * (T + 3)),
        t32 / (4 * (1 - T ** 2)),
    )


def limit_specialize(mode, g, order=20):
    """Equivariant-Verlinde limits of the genus-g sum.

    mode "R2": y -> 0, t -> 0 after normalizing each weight by (y t / x)^{3/2};
    the five surviving vacua (one per Weyl pair, multiplicities 1, 2, 2) give a
    series in x.  mode "R0": x = y -> 0 at fixed t; series in t over the ten
    vacua (multiplicities 2, 4, 4).
    """
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if mode == "R2":
        elements = r2_series_elements()
        multiplicities = (1, 2, 2)
        variables = ("x",)
    elif mode == "R0":
        elements = r0_limit_elements()
        multiplicities = CLASS_MULTIPLICITIES
        variables = ("t",)
    else:
        raise ValueError(f"unknown limit mode {mode!r}")
    if g == 1:
        return PuiseuxSeries.constant(sum(multiplicities), variables, order=order)
    total = None
    for mult, expr in zip(multiplicities, elements):
        term = _expand_to(expr ** (1 - g), variables, order) * mult
        total = term if total is None else total + term
    return total


# ----------------------------------------------------------------------
# asymptotics near x = t = 1


def closed_form_value(g, x, t, eps_pole=1e-12):
    """Genus-g sum via the x = y closed forms at a numeric point."""
    point = {"t": float(t), "x": float(x)}
    if g == 1:
        return 10.0
    total = 0.0j
    for mult, expr in zip(CLASS_MULTIPLICITIES, s_elements_xy()):
        total += mult * rational_eval(expr, point, eps_pole) ** (1 - g)
    return total


def asymptotics_check(g, a, b, eps_values=(1e-2, 1e-3, 1e-4)):
    """Ratio of the genus-g sum to its quoted near-(1,1) asymptotic form.

    Path (x, t) = (1 + a*eps, 1 + b*eps) with fixed a, b < 0.  Targets:
    g > 1: 4 * (8 (1-t)/(1-x))^{3g-3};  g = 1: 10;  g = 0: 1/((1-t)(1-t x^2)).
    """
    if a >= 0 or b >= 0:
        raise ValueError("path slopes a, b must be negative")
    entries = []
    for eps in eps_values:
        x = 1 + a * eps
        t = 1 + b * eps
        value = closed_form_value(g, x, t)
        if g == 1:
            target = 10.0
        elif g == 0:
            target = 1.0 / ((1 - t) * (1 - t * x * x))
        else:
            target = 4.0 * (8.0 * (1 - t) / (1 - x)) ** (3 * g - 3)
        entries.append({
            "eps": eps,
            "x": x,
            "t": t,
            "value": _real_if_close(value),
            "target": target,
            "ratio": _real_if_close(value / target),
        })
    return {"g": g, "a": a, "b": b, "entries": entries}


def _real_if_close(z):
    z = complex(z)
    if abs(z.imag) <= 1e-10 * max(1.0, abs(z.real)):
        return z.real
    return z


# ----------------------------------------------------------------------
# machine-readable per-point report


def point_report(params, genera=(0, 1, 2), eps_pole=1e-12):
    """JSON-ready report: roots, admissible set, weights, genus sums."""
    system = build_bethe(params)
    roots = admissible_roots(system)
    classify = system.params["x"] == system.params["y"]
    values = [s_squared(r, system, eps_pole, classify=classify) for r in roots]
    all_roots = poly_roots(system.polynomial)
    point = {k: float(v) for k, v in system.params.items()}
    closed = {"genus0_generic": rational_eval(s2s1_generic_expr(), point).real}
    if classify:
        closed["genus0_xy"] = rational_eval(
            s2xs1_closed_expr(), {"t": point["t"], "x": point["x"]}).real
    report = {
        "params": point,
        "roots": [[z.real, z.imag] for z in all_roots],
        "admissible": [[v.root.z.real, v.root.z.imag] for v in values],
        "weyl_partners": [v.root.weyl_partner_index for v in values],
        "s_squared": [[v.s_squared.real, v.s_squared.imag] for v in values],
        "class_labels": [v.class_label for v in values],
        "closed_form": closed,
        "verlinde": {},
    }
    for g in genera:
        total = sum(v.s_squared ** (1 - g) for v in values)
        report["verlinde"][str(g)] = [total.real, total.imag]
    return report


def sweep_report(n_points, seed=0, low=0.05, high=0.95, eps_pole=1e-12):
    """Seeded stability sweep: root counts, Weyl pairing, multiset match.

    Draws n_points parameter triples uniformly from (low, high)^3, runs the
    pipeline at each, and accumulates the worst deviations; `ok` requires 12
    roots with both unit roots present, 10 admissible, and the weight
    multiset to match the generic closed forms with multiplicities (2,4,4).
    """
    rng = random.Random(seed)
    start = time.monotonic()
    worst_weyl = 0.0
    worst_rel = 0.0
    counts_ok = True
    for _ in range(n_points):
        params = {k: rng.uniform(low, high) for k in ("x", "y", "t")}
        system = build_bethe(params)
        roots = poly_roots(system.polynomial)
        counts_ok &= len(roots) == 12
        counts_ok &= any(abs(z - 1) < 1e-8 for z in roots)
        counts_ok &= any(abs(z + 1) < 1e-8 for z in roots)
        admissible = admissible_roots(system)
        counts_ok &= len(admissible) == 10
        for r in admissible:
            worst_weyl = max(worst_weyl,
                             abs(r.z * admissible[r.weyl_partner_index].z - 1))
        weights = [s_squared(r, system, eps_pole).s_squared for r in admissible]
        point = {k: float(v) for k, v in params.items()}
        for mult, expr in zip(CLASS_MULTIPLICITIES, s_elements_generic()):
            value = rational_eval(expr, point)
            matches = [w for w in weights
                       if abs(w - value) <= 1e-6 * max(1.0, abs(value))]
            counts_ok &= len(matches) == mult
            for w in matches:
                worst_rel = max(worst_rel,
                                abs(w - value) / max(1.0, abs(value)))
    return {
        "points": n_points,
        "seed": seed,
        "ok": bool(counts_ok and worst_weyl < 1e-6),
        "max_weyl_residual": worst_weyl,
        "max_multiset_rel_error": worst_rel,
        "elapsed_s": time.monotonic() - start,
    }
