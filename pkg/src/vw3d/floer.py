"""Graded-vector-space algebra: towers, reference catalogs, characters.

Covers the boson-tower building block t^n/(1-t^2) and its truncations, the
catalog of plus-flavor Heegaard Floer groups for lens spaces, S^2 x S^1 and
nontrivial circle bundles over surfaces, the rank-2 bundle moduli Poincare
polynomial, the invariant-counting check that local observables form C[u],
descent-degree bookkeeping, the abelian zero-mode superspace character, and
the Brieskorn-sphere reference data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .series import ExactComplex, PuiseuxSeries, SeriesError

__all__ = [
    "Tower",
    "tower_series",
    "HFResult",
    "hf_plus",
    "hn_poincare",
    "gl_vs_sl_cohomology",
    "molien_su2_adjoint",
    "trivial_isotypic_dims",
    "descent_degree",
    "SuperspaceFactor",
    "standard_superspace_factors",
    "superspace_character",
    "BrieskornDatum",
    "brieskorn",
    "conjecture_series",
    "UnbalancedConfigurationError",
]

T_DEN = 2


def _t_series(terms, order):
    scaled = {}
    for e, c in terms.items():
        se = Fraction(e) * T_DEN
        if se.denominator != 1:
            raise SeriesError("t-exponent off the half-integer lattice")
        scaled[(int(se),)] = c
    return PuiseuxSeries(("t",), T_DEN, scaled, (int(order * T_DEN),))


@dataclass(frozen=True)
class Tower:
    """Boson tower with ground degree `bottom`; optional truncated length."""

    bottom: Fraction
    truncation: int | None = None

    def series(self, order):
        return tower_series(self.bottom, self.truncation, order)


def tower_series(bottom, truncation=None, order=20):
    """t^bottom (1 + t^2 + t^4 + ...), cut to `truncation` levels if given."""
    bottom = Fraction(bottom)
    if order < bottom:
        raise ValueError("order must reach the tower bottom")
    terms = {}
    level = 0
    while True:
        degree = bottom + 2 * level
        if degree >= order:
            break
        if truncation is not None and level >= truncation:
            break
        terms[degree] = ExactComplex(1)
        level += 1
    return _t_series(terms, order)


@dataclass(frozen=True)
class HFResult:
    manifold: str
    series: PuiseuxSeries
    rank: int | None            # None for infinite rank
    towers: tuple               # (multiplicity, Tower) summands
    spin_c_count: int | None = None
    relative_grading: bool = False


def hf_plus(manifold, order=20, p=None, g=None, h=None):
    """Plus-flavor Floer groups of the catalog manifolds.

    "lens": one tower per spin-c structure (p of them), series given per
    structure.  "S2xS1": two towers at degrees -1/2 and +1/2.  "SigmaGxS1"
    with 0 < |h| <= g-1: finitely many truncated towers; only relative
    gradings are reported (each tower bottom is normalized to zero), since
    absolute shifts of the exterior-power summands are not part of the
    catalog data.
    """
    if manifold == "lens":
        if p is None or p < 1:
            raise ValueError("lens space needs p >= 1")
        tower = Tower(Fraction(0))
        return HFResult(manifold=f"L({p},1)", series=tower.series(order),
                        rank=None, towers=((1, tower),), spin_c_count=p)
    if manifold == "S2xS1":
        towers = ((1, Tower(Fraction(-1, 2))), (1, Tower(Fraction(1, 2))))
        series = towers[0][1].series(order) + towers[1][1].series(order)
        return HFResult(manifold="S2xS1", series=series, rank=None,
                        towers=towers, spin_c_count=1)
    if manifold == "SigmaGxS1":
        if g is None or h is None:
            raise ValueError("SigmaGxS1 needs g and h")
        if h == 0 or abs(h) > g - 1:
            raise ValueError("catalog covers 0 < |h| <= g-1 only")
        d = g - 1 - abs(h)
        towers = []
        rank = 0
        series = None
        for i in range(d + 1):
            mult = comb(2 * g, i)
            length = d + 1 - i
            tower = Tower(Fraction(0), truncation=length)
            towers.append((mult, tower))
            rank += mult * length
            part = tower.series(order) * mult
            series = part if series is None else series + part
        return HFResult(manifold=f"SigmaGxS1(g={g},h={h})", series=series,
                        rank=rank, towers=tuple(towers), spin_c_count=None,
                        relative_grading=True)
    raise ValueError(f"unknown manifold {manifold!r}")


# ----------------------------------------------------------------------
# moduli of rank-2 bundles

def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def _poly_pow(base, n):
    out = [Fraction(1)]
    acc = list(base)
    while n:
        if n & 1:
            out = _poly_mul(out, acc)
        n >>= 1
        if n:
            acc = _poly_mul(acc, acc)
    return out


def _poly_divmod(num, den):
    num = list(num)
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return q, num


def hn_poincare(g):
    """Poincare polynomial of the fixed-determinant rank-2 moduli over a
    genus-g surface: ((1+t^3)^{2g} - t^{2g}(1+t)^{2g}) / ((1-t^2)(1-t^4)).

    The division must be exact; a nonzero remainder would flag a bug.
    Returns the coefficient list (degree 6g-6).
    """
    if g < 2:
        raise ValueError("formula applies for g >= 2")
    num = _poly_pow([Fraction(1), Fraction(0), Fraction(0), Fraction(1)], 2 * g)
    shift = _poly_pow([Fraction(1), Fraction(1)], 2 * g)
    shifted = [Fraction(0)] * (2 * g) + shift
    num = [a - b for a, b in zip(num + [Fraction(0)] * len(shifted),
                                 shifted + [Fraction(0)] * len(num))]
    while num and num[-1] == 0:
        num.pop()
    den = _poly_mul([Fraction(1), Fraction(0), Fraction(-1)],
                    [Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(-1)])
    q, rem = _poly_divmod(num, den)
    if any(rem):
        raise ArithmeticError("moduli Poincare division left a remainder")
    assert len(q) - 1 == 6 * g - 6
    return q


def hn_poincare_series(g, order=None):
    coeffs = hn_poincare(g)
    order = order if order is not None else len(coeffs) + 1
    return _t_series({k: ExactComplex(c) for k, c in enumerate(coeffs) if c}, order)


def gl_vs_sl_cohomology(N, g, order=20):
    """All-bundles cohomology: H*(T^{2g}) tensor the fixed-determinant part,
    i.e. (1+t)^{2g} times the moduli Poincare polynomial.  Only N = 2."""
    if N != 2:
        raise ValueError("only rank 2 is tabulated")
    torus = _poly_pow([Fraction(1), Fraction(1)], 2 * g)
    total = _poly_mul(torus, hn_poincare(g))
    return _t_series({k: ExactComplex(c) for k, c in enumerate(total) if c}, order)


# ----------------------------------------------------------------------
# invariants of the adjoint scalar

def trivial_isotypic_dims(order):
    """dim of the invariant part of Sym^n(adjoint su(2)), n = 0..order.

    Weight multiplicities of Sym^n of the spin-1 representation are counted
    by enumeration; the number of trivial summands is mult(0) - mult(2).
    """
    dims = []
    for n in range(order + 1):
        m0 = 0
        m2 = 0
        for a in range(n + 1):
            for b in range(n - a + 1):
                c = n - a - b
                w = 2 * a - 2 * c
                if w == 0:
                    m0 += 1
                elif w == 2:
                    m2 += 1
        dims.append(m0 - m2)
    return dims


def molien_su2_adjoint(order=20):
    """Generating series of invariant dimensions; equals 1/(1-t^2)."""
    dims = trivial_isotypic_dims(order)
    return _t_series({n: ExactComplex(d) for n, d in enumerate(dims) if d},
                     order + Fraction(1, 2))


def descent_degree(deg_w0, p):
    """Descent bookkeeping: the p-form observable built from a local class of
    t-degree deg_w0 carries (t-degree, homological degree) =
    (deg_w0 - p/2, 2 deg_w0 - p)."""
    if not 0 <= p <= 4:
        raise ValueError("form degree p must be 0..4")
    deg_w0 = Fraction(deg_w0)
    return (deg_w0 - Fraction(p, 2), 2 * deg_w0 - p)


# ----------------------------------------------------------------------
# abelian zero-mode superspace

class UnbalancedConfigurationError(ValueError):
    """Even and odd complex dimensions differ, or an even factor is weightless."""


@dataclass(frozen=True)
class SuperspaceFactor:
    """One factor of the zero-mode superspace.

    kind: "even" (C^multiplicity, contributes 1/(1-w) per copy), "odd"
    (Pi C^multiplicity, contributes (1+w) per copy), or "torus" (the compact
    Jacobian: weightless, bookkeeping character (1+s)^{2g}, g even complex
    dimensions).  weight maps variable names to exponents.
    """

    kind: str
    weight: dict
    multiplicity: int


def standard_superspace_factors(g, second_odd_weight):
    """The factor list of the abelian zero-mode space.

    Fiber C^g of the cotangent Jacobian: weight x.  One standalone odd line:
    weight x.  The second standalone odd line has no stated weight; the
    caller chooses (a {var: exponent} mapping).  Two blocks C x (Pi C)^g with
    weights y and t.  The Jacobian base is weightless.
    """
    return (
        SuperspaceFactor("torus", {}, g),
        SuperspaceFactor("even", {"x": 1}, g),
        SuperspaceFactor("odd", {"x": 1}, 1),
        SuperspaceFactor("odd", dict(second_odd_weight), 1),
        SuperspaceFactor("even", {"y": 1}, 1),
        SuperspaceFactor("odd", {"y": 1}, g),
        SuperspaceFactor("even", {"t": 1}, 1),
        SuperspaceFactor("odd", {"t": 1}, g),
    )


def superspace_character(g, factors, order=12):
    """Equivariant character of a product superspace.

    Every even factor contributes 1/(1-w) per copy and every odd factor
    (1+w); the torus factor contributes (1+s)^{2g} in the bookkeeping
    variable s.  The configuration must be balanced (equal even and odd
    complex dimensions) and even factors must carry a nontrivial weight.
    """
    even_dim = 0
    odd_dim = 0
    variables = set()
    for f in factors:
        if f.kind == "torus":
            even_dim += f.multiplicity
            if f.multiplicity:
                variables.add("s")
        elif f.kind == "even":
            even_dim += f.multiplicity
            variables |= set(f.weight)
        elif f.kind == "odd":
            odd_dim += f.multiplicity
            variables |= set(f.weight)
        else:
            raise ValueError(f"unknown factor kind {f.kind!r}")
    if even_dim != odd_dim:
        raise UnbalancedConfigurationError(
            f"even dimension {even_dim} != odd dimension {odd_dim}")
    variables = tuple(sorted(variables, key="txyqzs".index))
    result = PuiseuxSeries.constant(1, variables, order=order)
    for f in factors:
        if f.multiplicity == 0:
            continue
        if f.kind == "torus":
            s_line = PuiseuxSeries.constant(1, variables, order=order) + \
                PuiseuxSeries.monomial(variables, {"s": 1}, order=order)
            result = result * s_line ** (2 * f.multiplicity)
            continue
        if not f.weight:
            raise UnbalancedConfigurationError(
                "weightless non-compact factor has a divergent character")
        mono = PuiseuxSeries.monomial(variables, f.weight, order=order)
        one = PuiseuxSeries.constant(1, variables, order=order)
        if f.kind == "even":
            result = result * (one - mono).invert() ** f.multiplicity
        else:
            result = result * (one + mono) ** f.multiplicity
    return result


# ----------------------------------------------------------------------
# Brieskorn reference catalog

@dataclass(frozen=True)
class BrieskornDatum:
    name: str
    instanton_ranks: dict       # degree mod 8 -> rank
    hp_rank: int | None         # sheaf-model rank; None where not tabulated
    flat_connection_counts: tuple  # (trivial, irreducible su2, irreducible sl2c-only)


_BRIESKORN = {
    "P": BrieskornDatum(
        name="Sigma(2,3,5)",
        instanton_ranks={0: 1, 4: 1},
        hp_rank=None,
        flat_connection_counts=(1, 2, 0),
    ),
    "Sigma237": BrieskornDatum(
        name="Sigma(2,3,7)",
        instanton_ranks={2: 1, 6: 1},
        hp_rank=3,
        flat_connection_counts=(1, 2, 1),
    ),
}


def brieskorn(name):
    if name not in _BRIESKORN:
        raise KeyError(f"unknown Brieskorn sphere {name!r}")
    return _BRIESKORN[name]


def conjecture_series(name, order=20):
    """Conjectural graded dimension: one tower plus hp_rank degree-0 classes.

    Flagged conjectural in the returned report; only available where the
    sheaf-model rank is tabulated.
    """
    datum = brieskorn(name)
    if datum.hp_rank is None:
        raise KeyError(f"sheaf-model rank for {datum.name} is not tabulated")
    series = tower_series(0, None, order) + \
        PuiseuxSeries.constant(datum.hp_rank, ("t",), order=order, den=T_DEN)
    return {"manifold": datum.name, "series": series, "conjectural": True}
