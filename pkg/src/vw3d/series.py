"""Exact arithmetic kernel: complex rationals and truncated Puiseux/Laurent series.

Coefficients are exact complex rationals (`ExactComplex`).  Exponents of a
`PuiseuxSeries` live on a scaled integer lattice (1/D)Z per variable, so
half-integer powers such as t^{3/2} and the denominator-24 lattice used for
q-series coexist in one type.  Truncation is a per-variable exclusive upper
bound (a "box"); Laurent tails (negative exponents) are allowed.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

__all__ = [
    "ExactComplex",
    "PuiseuxSeries",
    "SeriesError",
    "VARIABLE_ORDER",
    "default_denominator",
]

# Canonical variable order; every series uses a subsequence of this.
VARIABLE_ORDER = ("t", "x", "y", "q", "z", "s")

# Lattice denominators matching the printed exponent conventions:
# half-integer powers for the grading variables, 1/24 for q-series.
_DEFAULT_DEN = {"t": 2, "x": 2, "y": 2, "q": 24, "z": 1, "s": 1}


def default_denominator(variables):
    """Least common lattice denominator for a set of variables."""
    d = 1
    for v in variables:
        d = d * _DEFAULT_DEN[v] // gcd(d, _DEFAULT_DEN[v])
    return d


class SeriesError(ValueError):
    """Raised for invalid series operations (zero inversion, bad lattice...)."""


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # floats are user-facing parameter values; snap to the shortest
        # rational within 1e-15 so 0.3 means 3/10, not its binary expansion
        if value == int(value):
            return Fraction(int(value))
        return Fraction(value).limit_denominator(10**15)
    raise TypeError(f"cannot coerce {type(value).__name__} to Fraction")


class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @staticmethod
    def coerce(value):
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, complex):
            return ExactComplex(_as_fraction(value.real), _as_fraction(value.imag))
        return ExactComplex(value)

    def __add__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ExactComplex.coerce(other))

    def __rsub__(self, other):
        return ExactComplex.coerce(other) + (-self)

    def __mul__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactComplex.coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (ExactComplex, int, Fraction, complex)):
            other = ExactComplex.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self):
        return ExactComplex(self.re, -self.im)

    def to_complex(self):
        return complex(self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"

    @staticmethod
    def sqrt_of_positive(value):
        """Exact square root of a positive rational that is a perfect square."""
        value = _as_fraction(value)
        if value <= 0:
            raise SeriesError("exact sqrt requires a positive rational")
        num, den = value.numerator, value.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            raise SeriesError(f"{value} is not a perfect rational square")
        return Fraction(rn, rd)


def _isqrt_exact(n):
    r = int(n**0.5)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c == n:
            return c
    return None


ZERO = ExactComplex(0)
ONE = ExactComplex(1)

# Sentinel for "no truncation in this variable"; large enough that cutoff
# arithmetic (shifts by valuations) never brings it into play.
INF_CUTOFF = 10**9


class PuiseuxSeries:
    """Truncated multivariate series on the exponent lattice (1/D)Z.

    terms maps scaled integer exponent tuples to nonzero ExactComplex
    coefficients; `cutoff` is the per-variable exclusive truncation bound in
    scaled units (a stored exponent vector e satisfies e[i] < cutoff[i] for
    every i).  The represented object is the coset "stored terms + O(cutoff)".
    """

    __slots__ = ("variables", "den", "terms", "cutoff")

    def __init__(self, variables, den, terms, cutoff):
        variables = tuple(variables)
        for v in variables:
            if v not in VARIABLE_ORDER:
                raise SeriesError(f"unknown variable {v!r}")
        if list(variables) != [v for v in VARIABLE_ORDER if v in variables]:
            raise SeriesError("variables must follow canonical order")
        if den <= 0:
            raise SeriesError("lattice denominator must be positive")
        cutoff = tuple(cutoff)
        if len(cutoff) != len(variables):
            raise SeriesError("cutoff arity mismatch")
        clean = {}
        for exps, coeff in terms.items():
            coeff = ExactComplex.coerce(coeff)
            if not coeff:
                continue
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise SeriesError("exponent arity mismatch")
            if any(e >= c for e, c in zip(exps, cutoff)):
                continue
            clean[exps] = coeff
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "cutoff", cutoff)

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def constant(value, variables=(), order=None, den=None):
        variables = tuple(variables)
        den = den if den is not None else default_denominator(variables)
        order = order if order is not None else 21
        cutoff = tuple(order * den for _ in variables)
        value = ExactComplex.coerce(value)
        terms = {tuple(0 for _ in variables): value} if value else {}
        return PuiseuxSeries(variables, den, terms, cutoff)

    @staticmethod
    def monomial(variables, exponents, coeff=1, order=None, den=None):
        """Monomial with `exponents` given as Fractions or ints per variable."""
        variables = tuple(variables)
        den = den if den is not None else default_denominator(variables)
        order = order if order is not None else 21
        scaled = []
        for v in variables:
            e = Fraction(exponents.get(v, 0))
            se = e * den
            if se.denominator != 1:
                raise SeriesError(f"exponent {e} of {v} not on lattice 1/{den}")
            scaled.append(int(se))
        cutoff = tuple(order * den for _ in variables)
        return PuiseuxSeries(variables, den, {tuple(scaled): ExactComplex.coerce(coeff)}, cutoff)

    @staticmethod
    def variable(name, variables=None, order=None, den=None):
        variables = (name,) if variables is None else tuple(variables)
        return PuiseuxSeries.monomial(variables, {name: 1}, 1, order=order, den=den)

    # ------------------------------------------------------------------
    # structure helpers

    def is_zero(self):
        return not self.terms

    def rescale(self, new_den):
        """Move to a finer lattice; new_den must be a multiple of den."""
        if new_den == self.den:
            return self
        if new_den % self.den:
            raise SeriesError("lattice denominators must merge by lcm")
        f = new_den // self.den
        terms = {tuple(e * f for e in exps): c for exps, c in self.terms.items()}
        cutoff = tuple(min(c * f, INF_CUTOFF) if c >= INF_CUTOFF // 2 else c * f
                       for c in self.cutoff)
        return PuiseuxSeries(self.variables, new_den, terms, cutoff)

    def extend_variables(self, variables):
        variables = tuple(variables)
        if variables == self.variables:
            return self
        if not set(self.variables) <= set(variables):
            raise SeriesError("can only extend the variable set")
        pos = {v: i for i, v in enumerate(variables)}
        # Variables absent from self carry no truncation; INF_CUTOFF acts as
        # +infinity and the partner's cutoff takes over in binary operations.
        cutoff = [INF_CUTOFF] * len(variables)
        for v, c in zip(self.variables, self.cutoff):
            cutoff[pos[v]] = c
        terms = {}
        for exps, coeff in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                new[pos[v]] = e
            terms[tuple(new)] = coeff
        return PuiseuxSeries(variables, self.den, terms, tuple(cutoff))

    def _valuations(self):
        """Componentwise minimum exponent over stored terms (None if zero)."""
        if not self.terms:
            return None
        mins = None
        for exps in self.terms:
            mins = exps if mins is None else tuple(min(a, b) for a, b in zip(mins, exps))
        return mins

    @staticmethod
    def _align(a, b):
        variables = tuple(v for v in VARIABLE_ORDER if v in set(a.variables) | set(b.variables))
        a = a.extend_variables(variables)
        b = b.extend_variables(variables)
        den = a.den * b.den // gcd(a.den, b.den)
        return a.rescale(den), b.rescale(den)

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction, ExactComplex, complex)):
            other = PuiseuxSeries.constant(other, self.variables,
                                           den=self.den,
                                           order=max(self.cutoff, default=21 * self.den) // self.den + 1)
            other = PuiseuxSeries(other.variables, other.den, other.terms, self.cutoff)
        a, b = PuiseuxSeries._align(self, other)
        cutoff = tuple(min(ca, cb) for ca, cb in zip(a.cutoff, b.cutoff))
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            s = terms.get(exps, ZERO) + coeff
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return PuiseuxSeries(a.variables, a.den, terms, cutoff)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.variables, self.den,
                             {e: -c for e, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, ExactComplex, complex)):
            return self + (-ExactComplex.coerce(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value):
        value = ExactComplex.coerce(value)
        return PuiseuxSeries(self.variables, self.den,
                             {e: c * value for e, c in self.terms.items()}, self.cutoff)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ExactComplex, complex)):
            return self.scale(other)
        a, b = PuiseuxSeries._align(self, other)
        va, vb = a._valuations(), b._valuations()
        if va is None or vb is None:
            # Product with (truncated) zero: keep the sound cutoff.
            cutoff = tuple(min(ca, cb) for ca, cb in zip(a.cutoff, b.cutoff))
            return PuiseuxSeries(a.variables, a.den, {}, cutoff)
        # Sound truncation: a is known mod O(cutoff_a), so a*b is known mod
        # O(min(cutoff_a + val_b, cutoff_b + val_a)) componentwise.
        cutoff = tuple(min(ca + eb, cb + ea)
                       for ca, cb, ea, eb in zip(a.cutoff, b.cutoff, va, vb))
        terms = {}
        for ea, cae in a.terms.items():
            for eb, cbe in b.terms.items():
                exps = tuple(i + j for i, j in zip(ea, eb))
                if any(e >= c for e, c in zip(exps, cutoff)):
                    continue
                s = terms.get(exps, ZERO) + cae * cbe
                if s:
                    terms[exps] = s
                else:
                    terms.pop(exps, None)
        return PuiseuxSeries(a.variables, a.den, terms, cutoff)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            raise SeriesError("series powers must be integers")
        if n < 0:
            return self.invert() ** (-n)
        result = PuiseuxSeries.constant(1, self.variables, den=self.den,
                                        order=max(self.cutoff, default=21 * self.den) // self.den + 1)
        result = PuiseuxSeries(result.variables, result.den, result.terms, self.cutoff)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, order):
        """Restrict to the box with per-variable bound `order` (in 1/1 units)."""
        cutoff = tuple(min(c, order * self.den) for c in self.cutoff)
        return PuiseuxSeries(self.variables, self.den, self.terms, cutoff)

    def invert(self):
        """Multiplicative inverse up to the inherited truncation.

        Requires a "corner" term: a stored exponent vector componentwise <=
        all others with nonzero coefficient (automatic in one variable).
        Writes self = corner * x^m (1 + u) and solves (1 + u) B = 1 by the
        total-degree recurrence over the exponent monoid generated by u, so
        sparse inputs stay sparse.
        """
        import heapq

        if self.is_zero():
            raise SeriesError("cannot invert a series that is zero to its truncation")
        mins = self._valuations()
        corner = self.terms.get(mins)
        if corner is None or not corner:
            raise SeriesError("no corner term: series is not a unit on its exponent box")
        if any(c >= INF_CUTOFF for c in self.cutoff):
            raise SeriesError("inversion needs a fully truncated series")
        inv_corner = ONE / corner
        u_terms = {}
        for exps, coeff in self.terms.items():
            if exps == mins:
                continue
            u_terms[tuple(e - m for e, m in zip(exps, mins))] = coeff * inv_corner
        # B lives below cutoff - m; the result (shifted by -m again) is then
        # certified modulo O(cutoff - 2m) componentwise.
        b_cutoff = tuple(c - m for c, m in zip(self.cutoff, mins))
        if any(c <= 0 for c in b_cutoff):
            return PuiseuxSeries(self.variables, self.den, {},
                                 tuple(c - 2 * m for c, m in zip(self.cutoff, mins)))
        b_terms = {}
        origin = tuple(0 for _ in self.variables)
        heap = [(0, origin)]
        seen = set()
        while heap:
            _, exps = heapq.heappop(heap)
            if exps in seen:
                continue
            seen.add(exps)
            if any(e >= c for e, c in zip(exps, b_cutoff)):
                continue
            if exps == origin:
                value = ONE
            else:
                value = ZERO
                for ue, uc in u_terms.items():
                    prev = tuple(e - f for e, f in zip(exps, ue))
                    if any(p < 0 for p in prev):
                        continue
                    pv = b_terms.get(prev)
                    if pv is not None:
                        value = value - uc * pv
            if value:
                b_terms[exps] = value
            for ue in u_terms:
                nxt = tuple(e + f for e, f in zip(exps, ue))
                if nxt not in seen and all(e < c for e, c in zip(nxt, b_cutoff)):
                    heapq.heappush(heap, (sum(nxt), nxt))
        cutoff = tuple(c - 2 * m for c, m in zip(self.cutoff, mins))
        shifted = {tuple(e - m for e, m in zip(exps, mins)): c * inv_corner
                   for exps, c in b_terms.items()}
        return PuiseuxSeries(self.variables, self.den, shifted, cutoff)

    def substitute_power(self, variable, num, sign=1):
        """Substitute variable -> sign * variable^num (num a positive Fraction).

        Used for argument changes such as q -> q^2 or q -> -q^{1/2}; `sign`
        is +1 or -1 and multiplies each coefficient by sign^exponent (the
        exponent in 1/1 units, which must then be integral).
        """
        num = Fraction(num)
        if num <= 0:
            raise SeriesError("substitution exponent must be positive")
        idx = self.variables.index(variable)
        # On the lattice 1/(den * num.denominator) the image of a scaled
        # exponent e is exactly e * num.numerator, always integral.
        new_den = self.den * num.denominator
        terms = {}
        for exps, coeff in self.terms.items():
            if sign == -1:
                unscaled = Fraction(exps[idx], self.den)
                if unscaled.denominator != 1:
                    raise SeriesError("sign substitution needs integral exponents")
                if unscaled.numerator % 2:
                    coeff = -coeff
            e = [v * num.denominator for v in exps]
            e[idx] = exps[idx] * num.numerator
            terms[tuple(e)] = coeff
        cutoff = [min(c * num.denominator, INF_CUTOFF) for c in self.cutoff]
        cutoff[idx] = min(self.cutoff[idx] * num.numerator, INF_CUTOFF)
        return PuiseuxSeries(self.variables, new_den, terms, tuple(cutoff))

    # ------------------------------------------------------------------
    # queries

    def coefficient(self, exponents):
        """Coefficient at unscaled exponents given as a {var: Fraction} map."""
        key = []
        for v in self.variables:
            se = Fraction(exponents.get(v, 0)) * self.den
            if se.denominator != 1:
                return ZERO
            key.append(int(se))
        return self.terms.get(tuple(key), ZERO)

    def coefficients_of(self, variable):
        """Collapse to {exponent Fraction: coefficient} in a 1-variable series."""
        if len(self.variables) != 1 or self.variables[0] != variable:
            raise SeriesError("coefficients_of expects a univariate series")
        return {Fraction(e[0], self.den): c for e, c in sorted(self.terms.items())}

    def evaluate(self, point):
        """Numerical evaluation; fractional exponents need positive real bases."""
        total = 0j
        for exps, coeff in sorted(self.terms.items()):
            term = coeff.to_complex()
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                base = complex(point[v])
                exponent = Fraction(e, self.den)
                if exponent.denominator == 1:
                    term *= base ** exponent.numerator
                else:
                    if base.imag != 0 or base.real <= 0:
                        raise SeriesError(f"fractional power of non-positive {v}={base}")
                    term *= base.real ** float(exponent)
            total += term
        return total

    def __eq__(self, other):
        """Equality of stored terms on the common box."""
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.variables, den=self.den,
                                           order=max(self.cutoff, default=0) // self.den + 1)
        a, b = PuiseuxSeries._align(self, other)
        cutoff = tuple(min(ca, cb) for ca, cb in zip(a.cutoff, b.cutoff))
        ta = {e: c for e, c in a.terms.items() if all(i < j for i, j in zip(e, cutoff))}
        tb = {e: c for e, c in b.terms.items() if all(i < j for i, j in zip(e, cutoff))}
        return ta == tb

    def __hash__(self):
        return hash((self.variables, self.den, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # presentation

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def to_text(self):
        """One term per line: `coeff * t^{a/D} ...`, sorted by total exponent."""
        if not self.terms:
            return "0"
        lines = []
        for exps, coeff in self._sorted_terms():
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                exponent = Fraction(e, self.den)
                factors.append(f"{v}^{{{exponent}}}")
            mono = " ".join(factors) if factors else "1"
            lines.append(f"{coeff!r} * {mono}")
        return "\n".join(lines)

    def to_json_dict(self):
        return {
            "variables": list(self.variables),
            "denominator": self.den,
            "terms": [[list(e), [str(c.re), str(c.im)]] for e, c in self._sorted_terms()],
            "truncation": list(self.cutoff),
        }

    @staticmethod
    def from_json_dict(data):
        terms = {tuple(e): ExactComplex(Fraction(re), Fraction(im))
                 for e, (re, im) in data["terms"]}
        return PuiseuxSeries(tuple(data["variables"]), data["denominator"],
                             terms, tuple(data["truncation"]))

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __repr__(self):
        body = " + ".join(f"{c!r}*{e}" for e, c in self._sorted_terms()) or "0"
        return f"PuiseuxSeries[{','.join(self.variables)}; 1/{self.den}]({body})"


def series_arith(a, b, kind):
    """Binary arithmetic dispatcher kept as an explicit named operation."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise SeriesError(f"unknown arithmetic kind {kind!r}")


def series_invert(a, order=None):
    """Inverse of `a`; optionally restrict the result to `order` first."""
    inv = a.invert()
    if order is not None:
        inv = inv.truncate(order)
    return inv
