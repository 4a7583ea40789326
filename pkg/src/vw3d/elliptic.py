"""Partition functions of elliptic surfaces E(n) as exact q-series.

The Kahler-surface formula expresses the SU(2) partition function through
Seiberg-Witten data and the series G(q) = 1/eta(q)^24; for E(n) (chi = 12n,
sigma = -8n, basic classes (n-2j)F with F.F = 0) every theta-dependent factor
has exponent zero, and the result collapses to combinations of G at the
arguments q^2, q^{1/2}, -q^{1/2}.  The module also performs the fiber-sum
gluing comparison: a naive multiplicative gluing rule fails, and the report
pinpoints the first differing power of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .series import ExactComplex, PuiseuxSeries

__all__ = [
    "QSeries",
    "BasicClass",
    "KahlerTopology",
    "EtaThetaBank",
    "eta24_series",
    "g_series",
    "sw_data_en",
    "z_vw_kahler",
    "en_closed_form",
    "gluing_check",
    "binomial_remainder",
    "second_line_series",
    "UnsupportedTopologyError",
]

Q_DEN = 24


class UnsupportedTopologyError(ValueError):
    """A nonzero theta exponent was requested; those series are not defined."""


def QSeries(terms, order):
    """Series in q on the 1/24 lattice; terms maps integer exponents to coeffs."""
    scaled = {(e * Q_DEN,): c for e, c in terms.items()}
    return PuiseuxSeries(("q",), Q_DEN, scaled, ((order + 1) * Q_DEN,))


def _euler_factor_coeffs(order):
    """Euler product prod (1 - q^n) to q^order, by pentagonal sparse expansion."""
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 > order and e2 > order:
            break
        sign = -1 if k % 2 else 1
        if e1 <= order:
            coeffs[e1] = sign
        if e2 <= order:
            coeffs[e2] = sign
        k += 1
    return coeffs


def _dense_mul(a, b, order):
    out = [0] * (order + 1)
    for i, ca in enumerate(a):
        if ca == 0 or i > order:
            continue
        for j, cb in enumerate(b):
            if i + j > order:
                break
            if cb:
                out[i + j] += ca * cb
    return out


def _dense_inv(a, order):
    # a[0] must be 1; standard recurrence for the reciprocal power series
    out = [0] * (order + 1)
    out[0] = 1
    for n in range(1, order + 1):
        acc = 0
        for k in range(1, n + 1):
            if a[k]:
                acc += a[k] * out[n - k]
        out[n] = -acc
    return out


def eta24_series(order=20):
    """eta(q)^24 = q prod (1 - q^n)^24, exact integers, through q^{order}."""
    base = _euler_factor_coeffs(order)
    power = [1] + [0] * order
    acc = base
    n = 24
    # square-and-multiply on dense integer lists
    while n:
        if n & 1:
            power = _dense_mul(power, acc, order)
        n >>= 1
        if n:
            acc = _dense_mul(acc, acc, order)
    terms = {k + 1: ExactComplex(c) for k, c in enumerate(power) if c}
    return QSeries(terms, order + 1)


def g_series(order=20):
    """G(q) = 1/eta^24 = q^{-1} (1 + 24 q + 324 q^2 + ...), exact."""
    if order < 1:
        raise ValueError("order must be at least 1")
    base = _euler_factor_coeffs(order + 1)
    e24 = [1] + [0] * (order + 1)
    acc = base
    n = 24
    while n:
        if n & 1:
            e24 = _dense_mul(e24, acc, order + 1)
        n >>= 1
        if n:
            acc = _dense_mul(acc, acc, order + 1)
    inv = _dense_inv(e24, order + 1)
    terms = {k - 1: ExactComplex(c) for k, c in enumerate(inv) if c}
    return QSeries(terms, order)


@dataclass(frozen=True)
class BasicClass:
    """A basic class x' = multiple * F with its Seiberg-Witten invariant."""

    multiple: int
    self_intersection: int
    pairing_with_flux: int
    sw: int

    @property
    def is_zero_class(self):
        return self.multiple == 0


@dataclass(frozen=True)
class KahlerTopology:
    chi: int
    sigma: int
    b1: int
    flux: int               # 't Hooft flux; only 0 is in scope
    basic_classes: tuple

    @property
    def chi_plus_sigma_over_8(self):
        value = Fraction(self.chi + self.sigma, 8)
        if value.denominator != 1:
            raise UnsupportedTopologyError("(chi + sigma)/8 must be an integer")
        return int(value)

    @property
    def theta_eta_exponent(self):
        return -2 * self.chi - 3 * self.sigma


@dataclass(frozen=True)
class EtaThetaBank:
    """G at the three arguments; theta series stay undefined (never needed
    while every theta exponent vanishes)."""

    eta24: PuiseuxSeries
    g_q2: PuiseuxSeries
    g_qhalf: PuiseuxSeries
    g_mqhalf: PuiseuxSeries
    theta0: None = None
    theta1: None = None


def make_bank(order):
    g = g_series(order)
    return EtaThetaBank(
        eta24=eta24_series(order),
        g_q2=g.substitute_power("q", 2),
        g_qhalf=g.substitute_power("q", Fraction(1, 2)),
        g_mqhalf=g.substitute_power("q", Fraction(1, 2), sign=-1),
    )


def sw_data_en(n):
    """Topology and Seiberg-Witten data of the elliptic surface E(n), n even.

    chi = 12n, sigma = -8n, b1 = 0; basic classes (n-2j)F for j = 1..n-1 with
    SW = (-1)^{j+1} binom(n-2, j-1); F.F = 0.
    """
    if n < 2 or n % 2:
        raise ValueError("E(n) data here requires even n >= 2")
    classes = tuple(
        BasicClass(multiple=n - 2 * j, self_intersection=0,
                   pairing_with_flux=0, sw=(-1) ** (j + 1) * comb(n - 2, j - 1))
        for j in range(1, n)
    )
    top = KahlerTopology(chi=12 * n, sigma=-8 * n, b1=0, flux=0,
                         basic_classes=classes)
    assert (top.chi + top.sigma) // 4 == n and 2 * top.chi + 3 * top.sigma == 0
    return top


def z_vw_kahler(top, order=20):
    """SU(2) partition function via the Seiberg-Witten expansion, at flux 0.

    The half factor accounts for the center of SU(2).  The first term keeps
    only the zero class (the flux-matching delta with v = 0); the second and
    third carry 2^{1-b1}.  Any nonzero theta exponent is out of scope.
    """
    if top.flux != 0:
        raise UnsupportedTopologyError("only the zero 't Hooft flux is supported")
    if top.theta_eta_exponent != 0:
        raise UnsupportedTopologyError(
            f"theta/eta exponent {top.theta_eta_exponent} != 0 needs theta series")
    for cls in top.basic_classes:
        if cls.self_intersection != 0:
            raise UnsupportedTopologyError(
                "nonzero self-intersection needs theta series")
    exp1 = top.chi_plus_sigma_over_8
    # internal padding: the Laurent tails of G(q^2)^exp1 and G(q^{1/2})^exp1
    # eat into the certified box
    internal = 2 * order + 2 * exp1 + 4
    bank = make_bank(internal)
    sign1 = (-1) ** ((top.chi + top.sigma) // 4)
    quarter = Fraction(1, 4)
    term_q2 = (bank.g_q2 * quarter) ** exp1
    term_h = (bank.g_qhalf * quarter) ** exp1
    term_mh = (bank.g_mqhalf * quarter) ** exp1
    sw_zero = sum(c.sw for c in top.basic_classes if c.is_zero_class)
    sw_all = sum(c.sw for c in top.basic_classes)
    pref = Fraction(2 ** (1 - top.b1))
    total = (term_q2 * (sign1 * sw_zero)
             + term_h * (pref * sw_all)
             + term_mh * (pref * sw_all))
    return (total * Fraction(1, 2)).truncate(order + 1)


def en_closed_form(n, order=20):
    """The collapsed form of z_vw_kahler for E(n), n even."""
    if n < 2 or n % 2:
        raise ValueError("even n >= 2 required")
    internal = 2 * order + 2 * n + 4
    g = g_series(internal)
    quarter = Fraction(1, 4)
    g2q = (g.substitute_power("q", 2) * quarter)
    if n == 2:
        # G(q^2)/8 + G(q^{1/2})/4 + G(-q^{1/2})/4
        gh = g.substitute_power("q", Fraction(1, 2)) * quarter
        gmh = g.substitute_power("q", Fraction(1, 2), sign=-1) * quarter
        return (g2q * Fraction(1, 2) + gh + gmh).truncate(order + 1)
    coeff = Fraction((-1) ** (n // 2 + 1) * comb(n - 2, n // 2 - 1), 2)
    return (g2q ** (n // 2) * coeff).truncate(order + 1)


def binomial_remainder(n):
    """sum_j (-1)^{j+1} binom(n-2, j-1): vanishes for n > 2 (binomial theorem)."""
    return sum((-1) ** (j + 1) * comb(n - 2, j - 1) for j in range(1, n))


def second_line_series(n, order=20):
    """The half-argument part of the E(n) expansion; identically 0 for n > 2."""
    internal = 2 * order + 2 * n + 4
    g = g_series(internal)
    quarter = Fraction(1, 4)
    gh = (g.substitute_power("q", Fraction(1, 2)) * quarter) ** (n // 2)
    gmh = (g.substitute_power("q", Fraction(1, 2), sign=-1) * quarter) ** (n // 2)
    return ((gh + gmh) * binomial_remainder(n)).truncate(order + 1)


def gluing_check(n, order=20):
    """Compare Z(E(n)) with the naive multiplicative fiber-sum prediction.

    The prediction (Z(E(4))/Z(E(2)))^{(n-2)/2} * Z(E(2)) never matches for
    even n >= 6; the report carries both leading values and the first q-power
    where the series differ.
    """
    if n < 6 or n % 2:
        raise ValueError("gluing comparison needs even n >= 6")
    # padding for the division by Z(E(2)) (valuation -2) and the power
    internal = order + 3 * n + 8
    lhs = z_vw_kahler(sw_data_en(n), internal)
    z2 = z_vw_kahler(sw_data_en(2), internal)
    z4 = z_vw_kahler(sw_data_en(4), internal)
    ratio = z4 * z2.invert()
    rhs = ratio ** ((n - 2) // 2) * z2
    lhs_c = lhs.truncate(order + 1)
    rhs_c = rhs.truncate(order + 1)
    diff = lhs_c - rhs_c
    first = None
    if not diff.is_zero():
        exps = sorted(e[0] for e in diff.terms)
        first = Fraction(exps[0], diff.den)
    return {
        "n": n,
        "order": order,
        "equal": diff.is_zero(),
        "first_differing_exponent": None if first is None else str(first),
        "lhs_leading": _leading(lhs_c),
        "rhs_leading": _leading(rhs_c),
    }


def _leading(series):
    if series.is_zero():
        return None
    exps = min(series.terms, key=lambda e: e[0])
    coeff = series.terms[exps]
    return {"exponent": str(Fraction(exps[0], series.den)), "coeff": repr(coeff)}
