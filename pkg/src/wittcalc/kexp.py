"""The exponential map from integral differential forms to Milnor symbols, and
the passage from symbols to graded pieces ``Omega^{q-1}_F / B_{m-1}``.

Symbols are kept formal: a :class:`MilnorSymbolSum` is a list of terms
``{u; b_1, ..., b_{q-1}}`` with ``u`` a 1-unit, and equality is only decided
after mapping to a :class:`GradedClass`.
"""

from dataclasses import dataclass

from .errors import LevelTooLow, NotIntegral, ParameterError, PrecisionLoss, Unsupported
from .forms import DiffForm, dlog, graded_equal, wedge
from .padic import CohenRing, PadicElem, exp_series, reduce


class IntegralForm(DiffForm):
    """A differential form with coefficients in the truncated Cohen ring, all integral."""

    __slots__ = ()

    def __init__(self, base, degree, coeffs=None):
        if not isinstance(base, CohenRing):
            raise ParameterError(f"integral forms live over a Cohen ring, not {base}")
        super().__init__(base, degree, coeffs)
        for J, c in self.coeffs.items():
            if not c.is_integral():
                raise NotIntegral(f"coefficient {c} of the integral form is not integral")

    @classmethod
    def from_form(cls, omega):
        return cls(omega.base, omega.degree, omega.coeffs)


def residue_form(omega):
    """Reduce the coefficients of an integral form to the residue field."""
    base = omega.base.residue
    return DiffForm(base, omega.degree, {J: reduce(c) for J, c in omega.coeffs.items()})


class MilnorSymbolSum:
    """Formal sum of symbols ``{u; b_1, ..., b_{q-1}}`` in ``U_1 K_q(K)``."""

    __slots__ = ("q", "terms")

    def __init__(self, q, terms=()):
        if q < 1:
            raise ParameterError("symbol degree q must be at least 1")
        out = []
        for unit, entries in terms:
            entries = tuple(entries)
            if len(entries) != q - 1:
                raise ParameterError(f"a degree-{q} symbol needs {q - 1} entries, got {len(entries)}")
            out.append((unit, entries))
        out.sort(key=lambda t: (str(t[0]), tuple(str(b) for b in t[1])))
        self.q = q
        self.terms = tuple(out)

    def __add__(self, other):
        if not isinstance(other, MilnorSymbolSum):
            return NotImplemented
        if other.q != self.q:
            raise ParameterError(f"cannot add symbols of degree {self.q} and {other.q}")
        return MilnorSymbolSum(self.q, self.terms + other.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for unit, entries in self.terms:
            body = _short(unit)
            if entries:
                body += "; " + ", ".join(_short(b) for b in entries)
            parts.append("{" + body + "}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MilnorSymbolSum({self})"


def _short(x):
    return x.ring.format_value(x)


@dataclass(frozen=True, eq=False)
class GradedClass:
    """Class of a (q-1)-form in ``Omega^{q-1}_F / B_{m-1}``, i.e. in gr_m K_q(K)."""

    m: int
    form: DiffForm

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.m == other.m and graded_equal(self.form, other.form, self.m)

    def __add__(self, other):
        if not isinstance(other, GradedClass) or other.m != self.m:
            raise ParameterError("graded classes must share the level m")
        return GradedClass(self.m, self.form + other.form)

    def is_zero(self):
        return self == GradedClass(self.m, DiffForm.zero(self.form.base, self.form.degree))

    def __str__(self):
        return f"[{self.form}] mod B_{self.m - 1}"


def exp_p(omega):
    """Map ``a * dlog b_1 ^ ... ^ dlog b_{q-1}`` to ``{exp(p a), b_1, ..., b_{q-1}}``.

    Each monomial ``x dt_J`` is first rewritten as
    ``(x * prod_{j in J} t_j) dlog t_J``, so the output has one term per
    monomial of ``omega``.
    """
    base = omega.base
    if not isinstance(base, CohenRing):
        raise ParameterError(f"exp_p needs a form over a Cohen ring, not {base}")
    if base.is_finite and omega.degree > 0:
        raise Unsupported("forms of positive degree need a p-base, i.e. a function field")
    q = omega.degree + 1
    p = base.p
    terms = []
    for J, x in omega.items():
        if not x.is_integral():
            raise NotIntegral(f"coefficient {x} is not integral")
        a = x
        entries = []
        for j in J:
            t = base.gen(j, prec=x.N)
            a = a * t
            entries.append(t)
        terms.append((exp_series(a * p).with_precision(x.N), tuple(entries)))
    return MilnorSymbolSum(q, terms)


def symbol_to_graded(s, m, residue=None):
    """Image of a symbol sum in ``Omega^{q-1}_F / B_{m-1}``.

    The term ``{1 + p^m a + O(p^{m+1}); b_1, ...}`` contributes
    ``a_bar dlog b_1_bar ^ ... ^ dlog b_{q-1}_bar``.
    """
    if m < 1:
        raise ParameterError("graded level m must be at least 1")
    total = None
    for unit, entries in s.terms:
        ring = unit.ring
        residue = ring.residue
        for b in entries:
            if b.is_zero() or b.valuation() != 0:
                raise Unsupported(f"symbol entry {b} is not a unit; only unit entries are supported")
        y = unit - 1
        if y.is_zero():
            if y.N < m + 1 and not y.exact:
                raise PrecisionLoss(f"{unit} is too imprecise to read off level {m}")
            abar = residue.zero
        else:
            if y.e < m:
                raise LevelTooLow(f"{unit} is not congruent to 1 mod p^{m}")
            abar = reduce(y / ring.from_terms({(0,) * ring.nvars: 1}, prec=y.N, e=m))
        contribution = DiffForm.function(abar)
        for b in entries:
            contribution = wedge(contribution, dlog(reduce(b)))
        total = contribution if total is None else total + contribution
    if total is None:
        if residue is None:
            raise ParameterError("an empty symbol sum needs an explicit residue field")
        total = DiffForm.zero(residue, s.q - 1)
    return GradedClass(m, total)


def graded_zero(residue, q, m):
    return GradedClass(m, DiffForm.zero(residue, q - 1))
