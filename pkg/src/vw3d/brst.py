"""Exact closure checks for the scalar-supercharge transformation tables.

Tables are data: a declarative text format lists the fields (form degree,
parity, doublet structure) and one transformation rule per (operator, field).
Everything is evaluated in the constant-field reduction: pure derivatives
d(...) vanish, covariant derivatives dA(...) keep their commutator part
[A, .] (with a convention coefficient), and each independent form component
is a separate algebra-valued supernumber.

Nilpotency up to gauge transformations is a quadratic identity in the fields,
so it is checked on random exact-rational field configurations.  Operator
composition Q1(Q2 X) is computed with a shift generator: the substitution
X -> X + theta * Q1(X) is a superalgebra homomorphism (theta fresh, odd), so
evaluating the rule for Q2 X on the shifted state and extracting the theta
coefficient implements the signed Leibniz rule exactly.

The expected value of a closure bracket is a gauge variation whose parameter
is fitted exactly (Gaussian elimination over complex rationals) from the
symmetrized output, never asserted a priori; a nonzero final residual is a
reported result, not an error.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .grassmann import GrassmannElement, grassmann_mul, lie_bracket
from .series import ExactComplex

__all__ = [
    "TableSpec",
    "FieldState",
    "SignConvention",
    "load_table",
    "get_table",
    "TABLE_TEXTS",
    "random_state",
    "apply_q",
    "gauge_variation",
    "q_squared_residual",
    "check_closure",
    "check_twistor",
    "closure_pairs",
    "calibrate_signs",
    "RuleMissingError",
    "TableFormatError",
]

I_UNIT = ExactComplex(0, 1)

# eps tensor of the R-symmetry doublet: eps_{12} = eps^{12} = +1.
_EPS = {(1, 1): 0, (1, 2): 1, (2, 1): -1, (2, 2): 0}


class TableFormatError(ValueError):
    """Malformed declarative table text."""


class RuleMissingError(KeyError):
    """An operator has no printed rule for the requested field."""


# ----------------------------------------------------------------------
# declarative table texts
#
# The 4d one-column tables use the shifted auxiliaries (the self-dual and
# 1-form auxiliary fields absorb their curvature shifts), which is the exact
# constant-field shadow of the printed rules.  The second differential is
# stored with precisely the printed rules; three fields have no printed rule
# and stay absent, so applying it to them raises RuleMissingError.

TABLE_TEXTS = {
    "abelian": """
        dim 4
        algebra u1
        field A one even
        field phi scalar even
        field phibar scalar even
        field C scalar even
        field B2 sd even
        field D2 sd even
        field H1 one even
        field eta scalar odd
        field zeta scalar odd
        field psi1 one odd
        field chi2 sd odd
        field psitilde2 sd odd
        field chitilde1 one odd
        Q A = psi1
        Q phi = 0
        Q phibar = eta
        Q eta = 0
        Q psi1 = d(phi)
        Q chi2 = D2
        Q D2 = 0
        Q B2 = psitilde2
        Q psitilde2 = 0
        Q chitilde1 = H1
        Q H1 = 0
        Q C = zeta
        Q zeta = 0
    """,
    "nonabelian": """
        dim 4
        algebra su2
        field A one even
        field phi scalar even
        field phibar scalar even
        field C scalar even
        field B2 sd even
        field D2 sd even
        field H1 one even
        field eta scalar odd
        field zeta scalar odd
        field psi1 one odd
        field chi2 sd odd
        field psitilde2 sd odd
        field chitilde1 one odd
        Q A = psi1
        Q phi = 0
        Q phibar = eta
        Q eta = i [phibar, phi]
        Q psi1 = dA(phi)
        Q chi2 = D2
        Q D2 = i [chi2, phi]
        Q B2 = psitilde2
        Q psitilde2 = i [B2, phi]
        Q chitilde1 = H1
        Q H1 = i [chitilde1, phi]
        Q C = zeta
        Q zeta = i [C, phi]
        Qp A = chitilde1
        Qp phi = zeta
        Qp phibar = 0
        Qp eta = i [C, phibar]
        Qp psi1 = - H1 + dA(C)
        Qp chi2 = i [B2, phibar]
        Qp B2 = chi2
        Qp chitilde1 = - dA(phibar)
        Qp C = - eta
        Qp zeta = i [phibar, phi]
    """,
    "covariant": """
        dim 4
        algebra su2
        field A one even
        field phi scalar even sym2
        field eta scalar odd doublet
        field psi1 one odd doublet
        field chi2 sd odd doublet
        field B2 sd even
        field G2 sd even
        field H1 one even
        Q{a} A = psi1{a}
        Q{a} phi{b,c} = 1/2 eps{a,b} eta{c} + 1/2 eps{a,c} eta{b}
        Q{a} psi1{b} = dA(phi{a,b}) + eps{a,b} H1
        Q{a} chi2{b} = [B2, phi{a,b}] + eps{a,b} G2
        Q{a} B2 = chi2{a}
        Q{a} eta{b} = - eps{c,d} [phi{a,c}, phi{b,d}]
        Q{a} H1 = - 1/2 dA(eta{a}) - eps{c,d} [phi{a,c}, psi1{d}]
        Q{a} G2 = - 1/2 [B2, eta{a}] - eps{b,c} [phi{a,b}, chi2{c}]
    """,
    "threed": """
        dim 3
        algebra su2
        field A one even
        field phi scalar even sym2
        field eta scalar odd doublet
        field etabar scalar odd doublet
        field psi1 one odd doublet
        field psibar1 one odd doublet
        field B1 one even
        field Bbar1 one even
        field V1 one even
        field rho scalar even
        field Y scalar even
        Q{a} A = psi1{a}
        Q{a} phi{b,c} = 1/2 eps{a,b} eta{c} + 1/2 eps{a,c} eta{b}
        Q{a} eta{b} = - eps{c,d} [phi{a,c}, phi{b,d}]
        Q{a} psi1{b} = dA(phi{a,b}) - eps{a,b} [V1, rho] + eps{a,b} B1
        Q{a} B1 = - 1/2 dA(eta{a}) + 1/2 [V1, etabar{a}] - eps{c,d} [phi{a,c}, psi1{d}] - [rho, psibar1{a}]
        Q{a} V1 = psibar1{a}
        Q{a} rho = 1/2 etabar{a}
        Q{a} etabar{b} = 2 [rho, phi{a,b}] + eps{a,b} Y
        Q{a} psibar1{b} = [V1, phi{a,b}] + eps{a,b} dA(rho) + eps{a,b} Bbar1
        Q{a} Bbar1 = - 1/2 dA(etabar{a}) - 1/2 [V1, eta{a}] - eps{c,d} [phi{a,c}, psibar1{d}] + [rho, psi1{a}]
        Q{a} Y = - [rho, eta{a}] - eps{c,d} [phi{a,c}, etabar{d}]
        Qbar{a} A = psibar1{a}
        Qbar{a} phi{b,c} = 1/2 eps{a,b} etabar{c} + 1/2 eps{a,c} etabar{b}
        Qbar{a} etabar{b} = - eps{c,d} [phi{a,c}, phi{b,d}]
        Qbar{a} psibar1{b} = dA(phi{a,b}) - eps{a,b} [V1, rho] - eps{a,b} B1
        Qbar{a} B1 = 1/2 dA(etabar{a}) + 1/2 [V1, eta{a}] + eps{c,d} [phi{a,c}, psibar1{d}] - [rho, psi1{a}]
        Qbar{a} V1 = - psi1{a}
        Qbar{a} rho = - 1/2 eta{a}
        Qbar{a} eta{b} = - 2 [rho, phi{a,b}] - eps{a,b} Y
        Qbar{a} psi1{b} = - [V1, phi{a,b}] - eps{a,b} dA(rho) + eps{a,b} Bbar1
        Qbar{a} Bbar1 = - 1/2 dA(eta{a}) + 1/2 [V1, etabar{a}] - eps{c,d} [phi{a,c}, psi1{d}] - [rho, psibar1{a}]
        Qbar{a} Y = - [rho, etabar{a}] + eps{c,d} [phi{a,c}, eta{d}]
    """,
}


# ----------------------------------------------------------------------
# parsing

@dataclass(frozen=True)
class FieldSpec:
    name: str
    form: str           # scalar | one | sd
    parity: int         # 0 even, 1 odd
    indices: int        # 0 singlet, 1 doublet, 2 symmetric pair

    def slots(self):
        if self.indices == 0:
            return [()]
        if self.indices == 1:
            return [(1,), (2,)]
        return [(1, 1), (1, 2), (2, 2)]


@dataclass(frozen=True)
class Term:
    coeff: ExactComplex
    eps: tuple          # ((l1, l2), ...)
    kind: str           # field | bracket | da | zero
    refs: tuple         # field references (name, index letters)


@dataclass(frozen=True)
class Rule:
    family: str
    field_name: str
    op_letter: str | None
    field_letters: tuple
    terms: tuple


@dataclass(frozen=True)
class TableSpec:
    name: str
    dim: int
    algebra: str
    fields: dict
    rules: dict         # (family, field_name) -> Rule
    families: tuple

    def components(self, form):
        if form == "scalar":
            return 1
        if form == "one":
            return 4 if self.dim == 4 else 3
        if form == "sd":
            if self.dim != 4:
                raise TableFormatError("self-dual forms need dim 4")
            return 3
        raise TableFormatError(f"unknown form {form!r}")

    def state_keys(self):
        keys = []
        for spec in self.fields.values():
            for slot in spec.slots():
                for comp in range(self.components(spec.form)):
                    keys.append((spec.name, slot, comp))
        return keys

    @property
    def ncomp(self):
        return 3 if self.algebra == "su2" else 1


_FACTOR_RE = re.compile(
    r"(?P<frac>\d+/\d+)"
    r"|(?P<eps>eps\{(?P<e1>\w),(?P<e2>\w)\})"
    r"|(?P<da>dA\((?P<daref>[^)]+)\))"
    r"|(?P<dzero>d\((?P<dzref>[^)]+)\))"
    r"|(?P<br>\[\s*(?P<b1>\w+(?:\{[^}]*\})?)\s*,\s*(?P<b2>\w+(?:\{[^}]*\})?)\s*\])"
    r"|(?P<int>\d+)"
    r"|(?P<name>\w+(\{[^}]*\})?)"
)

_LHS_RE = re.compile(
    r"^(?P<fam>[A-Za-z]+?)(\{(?P<oi>\w)\})?\s+(?P<field>\w+)(\{(?P<fi>[^}]*)\})?$")


def _parse_ref(text):
    text = text.strip()
    m = re.fullmatch(r"(\w+)(\{([^}]*)\})?", text)
    if not m:
        raise TableFormatError(f"bad field reference {text!r}")
    letters = tuple(s.strip() for s in m.group(3).split(",")) if m.group(3) else ()
    return (m.group(1), letters)


def _parse_terms(rhs):
    rhs = rhs.strip()
    if rhs == "0":
        return ()
    chunks = re.findall(r"[+-]?[^+-]+", rhs)
    terms = []
    for chunk in chunks:
        chunk = chunk.strip()
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:].strip()
        elif chunk.startswith("+"):
            chunk = chunk[1:].strip()
        coeff = ExactComplex(sign)
        eps = []
        kind = None
        refs = ()
        for m in _FACTOR_RE.finditer(chunk):
            if m.group("frac"):
                num, den = m.group("frac").split("/")
                coeff = coeff * Fraction(int(num), int(den))
            elif m.group("int"):
                coeff = coeff * int(m.group("int"))
            elif m.group("eps"):
                eps.append((m.group("e1"), m.group("e2")))
            elif m.group("da"):
                kind, refs = "da", (_parse_ref(m.group("daref")),)
            elif m.group("dzero"):
                kind, refs = "zero", ()
            elif m.group("br"):
                kind, refs = "bracket", (_parse_ref(m.group("b1")), _parse_ref(m.group("b2")))
            elif m.group("name"):
                name = m.group("name")
                if name == "i":
                    coeff = coeff * I_UNIT
                else:
                    if kind is not None:
                        raise TableFormatError(f"two main factors in term {chunk!r}")
                    kind, refs = "field", (_parse_ref(name),)
        if kind is None:
            raise TableFormatError(f"term {chunk!r} has no field content")
        terms.append(Term(coeff=coeff, eps=tuple(eps), kind=kind, refs=refs))
    return tuple(terms)


def load_table(name, text):
    dim = 4
    algebra = "su2"
    fields = {}
    rules = {}
    families = []
    for raw in text.strip().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()[0]
        if head == "dim":
            dim = int(line.split()[1])
        elif head == "algebra":
            algebra = line.split()[1]
        elif head == "field":
            parts = line.split()
            _, fname, form, parity = parts[:4]
            extra = parts[4] if len(parts) > 4 else ""
            indices = {"": 0, "doublet": 1, "sym2": 2}[extra]
            fields[fname] = FieldSpec(fname, form, 0 if parity == "even" else 1, indices)
        else:
            lhs, rhs = line.split("=", 1)
            m = _LHS_RE.match(lhs.strip())
            if not m:
                raise TableFormatError(f"bad rule head {lhs!r}")
            fam = m.group("fam")
            fname = m.group("field")
            if fname not in fields:
                raise TableFormatError(f"rule for undeclared field {fname!r}")
            letters = tuple(s.strip() for s in m.group("fi").split(",")) if m.group("fi") else ()
            rule = Rule(family=fam, field_name=fname, op_letter=m.group("oi"),
                        field_letters=letters, terms=_parse_terms(rhs))
            rules[(fam, fname)] = rule
            if fam not in families:
                families.append(fam)
    return TableSpec(name=name, dim=dim, algebra=algebra, fields=fields,
                     rules=rules, families=tuple(families))


_TABLE_CACHE = {}


def get_table(name):
    if name not in _TABLE_CACHE:
        if name not in TABLE_TEXTS:
            raise KeyError(f"unknown table {name!r}")
        _TABLE_CACHE[name] = load_table(name, TABLE_TEXTS[name])
    return _TABLE_CACHE[name]


# ----------------------------------------------------------------------
# states and conventions

@dataclass(frozen=True)
class FieldState:
    table: TableSpec
    values: dict        # (field, slot, comp) -> GrassmannElement
    n_generators: int

    def with_values(self, values):
        return replace(self, values=values)


@dataclass(frozen=True)
class SignConvention:
    """Per-rule sign toggles plus the two global convention choices.

    sigma and gauge_includes_i fix the gauge variation delta X =
    sigma * (i) * [X, Lambda]; da_coef is the constant-field reduction
    coefficient of the covariant derivative, dA(X) -> da_coef * [A, X].
    """

    rule_signs: tuple = ()          # ((family, field, +-1), ...)
    sigma: int = 1
    gauge_includes_i: bool = True
    da_coef: ExactComplex = I_UNIT
    calibrated: bool = False

    def sign_of(self, family, fname):
        for fam, fld, s in self.rule_signs:
            if fam == family and fld == fname:
                return s
        return 1


def default_convention(table):
    # The one-column 4d tables write commutators with explicit i, so their
    # covariant derivative reduces to i[A, .]; the doublet tables carry no
    # explicit i anywhere and reduce plainly.
    da = I_UNIT if table.name in ("abelian", "nonabelian") else ExactComplex(1)
    return SignConvention(da_coef=da)


def _random_fraction(rng):
    num = rng.randint(-9, 9)
    if num == 0:
        num = 1
    return Fraction(num, rng.randint(1, 9))


def random_state(table, seed=0):
    """Generic exact-rational configuration: even fields are bodies, each odd
    field component gets an independent Grassmann generator."""
    rng = random.Random(seed)
    ncomp = table.ncomp
    values = {}
    gen = 0
    for key in table.state_keys():
        fname = key[0]
        spec = table.fields[fname]
        vec = tuple(_random_fraction(rng) for _ in range(ncomp))
        if spec.parity == 0:
            values[key] = GrassmannElement.body(vec)
        else:
            values[key] = GrassmannElement.generator(gen, vec)
            gen += 1
    return FieldState(table=table, values=values, n_generators=gen)


# ----------------------------------------------------------------------
# rule evaluation

def _slot_canon(spec, indices):
    if spec.indices == 2:
        return tuple(sorted(indices))
    return tuple(indices)


def _ref_value(ref, binding, state, comp, target_form):
    name, letters = ref
    spec = state.table.fields.get(name)
    if spec is None:
        raise TableFormatError(f"reference to undeclared field {name!r}")
    idx = _slot_canon(spec, tuple(binding[l] for l in letters))
    use_comp = comp if spec.form == target_form else 0
    if spec.form != target_form and spec.form != "scalar":
        raise TableFormatError(
            f"form mismatch: {name} ({spec.form}) inside a {target_form} rule")
    return state.values[(name, idx, use_comp)], spec


def _term_value(term, binding, state, comp, target_form, conv):
    coeff = term.coeff
    for l1, l2 in term.eps:
        e = _EPS[(binding[l1], binding[l2])]
        if e == 0:
            return None
        if e < 0:
            coeff = -coeff
    if term.kind == "zero":
        return None
    if term.kind == "field":
        value, _ = _ref_value(term.refs[0], binding, state, comp, target_form)
        return value.scale(coeff)
    if term.kind == "bracket":
        v1, _ = _ref_value(term.refs[0], binding, state, comp, target_form)
        v2, _ = _ref_value(term.refs[1], binding, state, comp, target_form)
        return lie_bracket(v1, v2).scale(coeff)
    if term.kind == "da":
        if target_form == "scalar":
            raise TableFormatError("dA(...) inside a scalar rule")
        a_value = state.values[("A", (), comp)]
        v, _ = _ref_value(term.refs[0], binding, state, 0, "scalar")
        return lie_bracket(a_value, v).scale(coeff * conv.da_coef)
    raise TableFormatError(f"unknown term kind {term.kind!r}")


def _rule_image(state, rule, op_index, slot, comp, conv):
    table = state.table
    spec = table.fields[rule.field_name]
    binding = {}
    if rule.op_letter is not None:
        binding[rule.op_letter] = op_index
    for letter, value in zip(rule.field_letters, slot):
        binding[letter] = value
    out = GrassmannElement.zero(table.ncomp)
    sign = conv.sign_of(rule.family, rule.field_name)
    for term in rule.terms:
        dummies = []
        for l1, l2 in term.eps:
            for l in (l1, l2):
                if l not in binding and l not in dummies:
                    dummies.append(l)
        for ref in term.refs:
            for l in ref[1]:
                if l not in binding and l not in dummies:
                    dummies.append(l)
        for assignment in itertools.product((1, 2), repeat=len(dummies)):
            local = dict(binding)
            local.update(zip(dummies, assignment))
            value = _term_value(term, local, state, comp, spec.form, conv)
            if value is not None and not value.is_zero():
                out = out + value.scale(sign)
    return out


def _resolve_which(table, which):
    """Accept 'Q', 'Qp', ('Q', a), ('Qbar', a); return (family, op_index)."""
    if isinstance(which, str):
        return which, None
    family, op_index = which
    return family, int(op_index)


def apply_q(state, which, conv=None):
    """One application of a BRST operator: the state of Q-images."""
    table = state.table
    conv = conv or default_convention(table)
    family, op_index = _resolve_which(table, which)
    out = {}
    for key in table.state_keys():
        fname, slot, comp = key
        rule = table.rules.get((family, fname))
        if rule is None:
            raise RuleMissingError(f"no printed rule for {family} {fname}")
        if (rule.op_letter is None) != (op_index is None):
            raise TableFormatError(f"operator index mismatch for {family} {fname}")
        out[key] = _rule_image(state, rule, op_index, slot, comp, conv)
    return state.with_values(out)


def gauge_variation(state, lam, conv=None):
    """delta X = sigma * (i) * [X, Lambda] on every adjoint field."""
    conv = conv or default_convention(state.table)
    coeff = ExactComplex(conv.sigma) * (I_UNIT if conv.gauge_includes_i else ExactComplex(1))
    out = {key: lie_bracket(value, lam).scale(coeff)
           for key, value in state.values.items()}
    return state.with_values(out)


# ----------------------------------------------------------------------
# composition via the shift generator

def _shifted_state(state, images, gen_index):
    theta = GrassmannElement(1, 1, {1 << gen_index: (ExactComplex(1),)})
    values = {}
    for key, value in state.values.items():
        values[key] = value + grassmann_mul(theta, images[key]) \
            if not images[key].is_zero() else value
    return state.with_values(values)


def _extract_theta(element, gen_index):
    from .grassmann import koszul_sign
    bit = 1 << gen_index
    terms = {}
    for mask, comps in element.terms.items():
        if mask & bit:
            rest = mask ^ bit
            sign = koszul_sign(bit, rest)
            terms[rest] = tuple(c * sign for c in comps)
    return GrassmannElement(element.ncomp, (element.parity + 1) % 2, terms)


def compose(state, which_outer, which_inner, conv=None):
    """Values of Q_outer(Q_inner X) on the state, exactly."""
    conv = conv or default_convention(state.table)
    images_outer = apply_q(state, which_outer, conv).values
    gen_index = state.n_generators
    shifted = _shifted_state(state, images_outer, gen_index)
    inner_images = apply_q(shifted, which_inner, conv).values
    return {key: _extract_theta(val, gen_index) for key, val in inner_images.items()}


def anticommutator(state, which1, which2, conv=None):
    a = compose(state, which1, which2, conv)
    b = compose(state, which2, which1, conv)
    return {key: a[key] + b[key] for key in a}


def q_squared_residual(state, which="Q", conv=None, param_field=None, fields=None):
    """Q(Q X) - sigma i [X, param] per field; param None means expected zero."""
    table = state.table
    conv = conv or default_convention(table)
    images = compose(state, which, which, conv)
    if param_field is not None:
        lam = state.values[(param_field, (), 0)]
        expected = gauge_variation(state, lam, conv).values
    else:
        expected = {key: GrassmannElement.zero(table.ncomp) for key in images}
    report = {}
    for key, value in images.items():
        if fields is not None and key[0] not in fields:
            continue
        residual = value - expected[key]
        report[key] = residual
    return report


# ----------------------------------------------------------------------
# exact linear fit of the gauge parameter

def _solve_exact(rows):
    """Gaussian elimination over ExactComplex.

    rows: list of (coefficients tuple, rhs).  Returns (solution list or None,
    consistent bool); free variables are set to zero.
    """
    if not rows:
        return [], True
    n = len(rows[0][0])
    mat = [list(r[0]) + [r[1]] for r in rows]
    pivots = []
    row = 0
    for col in range(n):
        pivot = None
        for r in range(row, len(mat)):
            if mat[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        mat[row] = [v / pv for v in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    consistent = all(not r[n] for r in mat[row:])
    solution = [ExactComplex(0)] * n
    for r, col in enumerate(pivots):
        solution[col] = mat[r][n]
    return solution, consistent


def _gauge_basis(state, op_pair):
    """Candidate gauge parameters for a closure pair, from the state itself."""
    table = state.table
    basis = []
    (fam1, a), (fam2, b) = op_pair
    if table.fields.get("phi") and table.fields["phi"].indices == 2:
        slot = tuple(sorted((a, b)))
        basis.append((f"phi{{{a},{b}}}", state.values[("phi", slot, 0)]))
    elif "phi" in table.fields:
        basis.append(("phi", state.values[("phi", (), 0)]))
        if "phibar" in table.fields:
            basis.append(("phibar", state.values[("phibar", (), 0)]))
        if "C" in table.fields:
            basis.append(("C", state.values[("C", (), 0)]))
    eps = _EPS[(a, b)]
    if "rho" in table.fields and eps:
        basis.append((f"{eps}*rho", state.values[("rho", (), 0)].scale(eps)))
    if "Y" in table.fields and eps:
        basis.append((f"{eps}*Y", state.values[("Y", (), 0)].scale(eps)))
    return basis


def _fit_gauge(state, images, basis):
    """Exact fit images[X] = sum_k c_k [X, B_k]; returns (coeffs, residuals)."""
    table = state.table
    bracket_values = {}
    for key, value in state.values.items():
        bracket_values[key] = [lie_bracket(value, bk) for _, bk in basis]
    rows = []
    for key, target in images.items():
        masks = set(target.terms)
        for bv in bracket_values[key]:
            masks |= set(bv.terms)
        for mask in masks:
            for c in range(table.ncomp):
                coeffs = tuple(bv.terms.get(mask, (ExactComplex(0),) * table.ncomp)[c]
                               for bv in bracket_values[key])
                rhs = target.terms.get(mask, (ExactComplex(0),) * table.ncomp)[c]
                if any(coeffs) or rhs:
                    rows.append((coeffs, rhs))
    solution, _ = _solve_exact(rows)
    residuals = {}
    for key, target in images.items():
        acc = target
        for c, bv in zip(solution, bracket_values[key]):
            acc = acc - bv.scale(c)
        residuals[key] = acc
    return solution, residuals


def check_closure(state, pair, conv=None, fields=None):
    """Closure residual of a pair of supercharges, up to a fitted gauge term.

    pair: (which1, which2); equal entries check the composition Q(QX), and
    distinct entries the anticommutator.  The gauge parameter is solved for
    exactly from the output (a linear combination of the scalar fields the
    table provides); the report lists per-field residuals, the fitted
    parameter, and whether every residual vanishes identically.
    """
    table = state.table
    conv = conv or default_convention(table)
    which1, which2 = pair
    if which1 == which2:
        images = compose(state, which1, which2, conv)
        kind = "square"
    else:
        images = anticommutator(state, which1, which2, conv)
        kind = "anticommutator"
    f1, a = _resolve_which(table, which1)
    f2, b = _resolve_which(table, which2)
    basis = _gauge_basis(state, ((f1, a or 1), (f2, b or 1)))
    solution, residuals = _fit_gauge(state, images, basis)
    if fields is not None:
        residuals = {k: v for k, v in residuals.items() if k[0] in fields}
    ok = all(v.is_zero() for v in residuals.values())
    per_field = {}
    for (fname, slot, comp), res in residuals.items():
        label = fname + ("" if not slot else str(list(slot)))
        per_field[label] = max(per_field.get(label, 0.0), res.max_abs())
    return {
        "pair": [str(which1), str(which2)],
        "kind": kind,
        "gauge_parameter": {name: repr(c) for (name, _), c in zip(basis, solution)},
        "residual_max": per_field,
        "exact_zero": ok,
        "failing_fields": sorted(name for name, v in per_field.items() if v > 0),
    }


def check_twistor(state, s, r, conv=None):
    """Squared residual of d = s_a Q^a + r_b Qbar^b on constant fields.

    The mixed anticommutators produce the translation generator, which acts
    on constant configurations as a gauge rotation; the fit absorbs it, so a
    typo-free table yields an exactly zero residual for every (s, r).
    """
    table = state.table
    conv = conv or default_convention(table)
    coeffs = {("Q", 1): s[0], ("Q", 2): s[1], ("Qbar", 1): r[0], ("Qbar", 2): r[1]}
    total = None
    for w1, c1 in coeffs.items():
        for w2, c2 in coeffs.items():
            if c1 == 0 or c2 == 0:
                continue
            part = compose(state, w1, w2, conv)
            factor = ExactComplex(Fraction(c1) * Fraction(c2))
            for key, value in part.items():
                scaled = value.scale(factor)
                if total is None:
                    total = {k: GrassmannElement.zero(table.ncomp) for k in part}
                total[key] = total[key] + scaled
    basis = []
    for slot in ((1, 1), (1, 2), (2, 2)):
        basis.append((f"phi{{{slot[0]},{slot[1]}}}",
                      state.values[("phi", slot, 0)]))
    basis.append(("rho", state.values[("rho", (), 0)]))
    if "Y" in table.fields:
        basis.append(("Y", state.values[("Y", (), 0)]))
    solution, residuals = _fit_gauge(state, total, basis)
    ok = all(v.is_zero() for v in residuals.values())
    return {
        "s": list(s), "r": list(r),
        "gauge_parameter": {name: repr(c) for (name, _), c in zip(basis, solution)},
        "exact_zero": ok,
        "failing_fields": sorted({k[0] for k, v in residuals.items() if not v.is_zero()}),
    }


# ----------------------------------------------------------------------
# sign calibration

def closure_pairs(table):
    """The inequivalent supercharge pairs a table's algebra constrains."""
    same = [(1, 1), (1, 2), (2, 2)]
    if "Qbar" in table.families:
        pairs = [(("Q", a), ("Q", b)) for a, b in same]
        pairs += [(("Q", a), ("Qbar", b)) for a in (1, 2) for b in (1, 2)]
        pairs += [(("Qbar", a), ("Qbar", b)) for a, b in same]
        return pairs
    if table.rules.get(("Q", "A")) and table.rules[("Q", "A")].op_letter:
        return [(("Q", a), ("Q", b)) for a, b in same]
    return [("Q", "Q")]


def _convention_passes(table, conv, pairs, seeds):
    for seed in seeds:
        state = random_state(table, seed=seed)
        for pair in pairs:
            if not check_closure(state, pair, conv)["exact_zero"]:
                return False
    return True


def calibrate_signs(table_name, seeds=(0, 1, 2), da_candidates=None,
                    max_exhaustive_rules=10):
    """Search sign conventions until all closure residuals vanish exactly.

    Stage 0 tries the identity toggle assignment with each covariant-
    derivative coefficient; stage 1 exhausts per-rule toggles for small
    tables.  If nothing closes, the minimal-failure convention is returned
    with the irreducibly failing rules listed (candidate typos), never
    silently patched.
    """
    table = get_table(table_name)
    pairs = closure_pairs(table)
    base = default_convention(table)
    if da_candidates is None:
        da_candidates = (base.da_coef, ExactComplex(1), ExactComplex(-1),
                         I_UNIT, -I_UNIT)
    tried = []
    for da in da_candidates:
        conv = replace(base, da_coef=ExactComplex.coerce(da))
        if _convention_passes(table, conv, pairs, seeds):
            return replace(conv, calibrated=True), {"calibrated": True,
                                                    "stage": "identity-toggles",
                                                    "failing_rules": []}
        tried.append(conv)
    rule_keys = sorted(table.rules)
    best = None
    if len(rule_keys) <= max_exhaustive_rules:
        for da in da_candidates:
            for signs in itertools.product((1, -1), repeat=len(rule_keys)):
                conv = replace(base,
                               rule_signs=tuple((f, n, s) for (f, n), s in zip(rule_keys, signs)),
                               da_coef=ExactComplex.coerce(da))
                fails = _count_failures(table, conv, pairs, seeds[:1])
                if fails == 0 and _convention_passes(table, conv, pairs, seeds):
                    return replace(conv, calibrated=True), {
                        "calibrated": True, "stage": "exhaustive-toggles",
                        "failing_rules": []}
                if best is None or fails < best[0]:
                    best = (fails, conv)
    else:
        best = _greedy_toggle_search(table, base, pairs, seeds, da_candidates)
        if best[0] == 0:
            return replace(best[1], calibrated=True), {
                "calibrated": True, "stage": "greedy-toggles", "failing_rules": []}
    conv = best[1] if best else tried[0]
    failing = _failing_rules(table, conv, pairs, seeds[:1])
    return conv, {"calibrated": False, "stage": "report",
                  "failing_rules": sorted(failing)}


def _count_failures(table, conv, pairs, seeds):
    count = 0
    for seed in seeds:
        state = random_state(table, seed=seed)
        for pair in pairs:
            report = check_closure(state, pair, conv)
            count += len(report["failing_fields"])
    return count


def _failing_rules(table, conv, pairs, seeds):
    failing = set()
    for seed in seeds:
        state = random_state(table, seed=seed)
        for pair in pairs:
            report = check_closure(state, pair, conv)
            for label in report["failing_fields"]:
                fname = label.split("[")[0]
                for fam in table.families:
                    if (fam, fname) in table.rules:
                        failing.add(f"{fam} {fname}")
    return failing


def _greedy_toggle_search(table, base, pairs, seeds, da_candidates):
    rule_keys = sorted(table.rules)
    best = None
    for da in da_candidates:
        conv = replace(base, da_coef=ExactComplex.coerce(da))
        fails = _count_failures(table, conv, pairs, seeds[:1])
        current = (fails, conv)
        improved = True
        while improved and current[0] > 0:
            improved = False
            for key in rule_keys:
                signs = dict(((f, n), s) for f, n, s in current[1].rule_signs)
                signs[key] = -signs.get(key, 1)
                cand = replace(current[1],
                               rule_signs=tuple((f, n, s) for (f, n), s in sorted(signs.items())))
                fails = _count_failures(table, cand, pairs, seeds[:1])
                if fails < current[0]:
                    current = (fails, cand)
                    improved = True
        if best is None or current[0] < best[0]:
            best = current
        if best[0] == 0:
            break
    return best
