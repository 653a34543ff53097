"""Differential forms over a rational function field, the Cartier operator and
the B-filtration.

A q-form is stored as ``{J: f_J}`` where ``J`` is a strictly increasing tuple
of variable indices standing for ``dt_{j_1} ^ ... ^ dt_{j_q}``.  The same
class also carries forms whose coefficients live in the truncated Cohen ring
(see :mod:`wittcalc.padic`); only the operations that need characteristic p
(Cartier, B-membership) insist on a residue field.
"""

from .errors import NotClosed, ParameterError, Unsupported
from .ffield import FieldContext, FieldElem, pth_power_component


def _merge_sign(J1, J2):
    """Sign and sorted key of ``dt_J1 ^ dt_J2``, or ``(0, None)`` if they overlap."""
    if set(J1) & set(J2):
        return 0, None
    inversions = sum(1 for a in J1 for b in J2 if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(J1 + J2))


class DiffForm:
    """Immutable differential form of fixed degree over ``base``."""

    __slots__ = ("base", "degree", "coeffs")

    def __init__(self, base, degree, coeffs=None):
        if degree < 0:
            raise ParameterError("form degree must be non-negative")
        clean = {}
        for J, c in (coeffs or {}).items():
            J = tuple(J)
            if len(J) != degree or list(J) != sorted(set(J)):
                raise ParameterError(f"bad basis index {J} for a {degree}-form")
            if any(not 0 <= j < base.nvars for j in J):
                raise ParameterError(f"basis index {J} out of range for {base}")
            c = base(c)
            if c:
                clean[J] = c
        self.base = base
        self.degree = degree
        self.coeffs = clean

    @classmethod
    def function(cls, f):
        """``f`` viewed as a 0-form."""
        return cls(f.ctx if isinstance(f, FieldElem) else f.ring, 0, {(): f})

    @classmethod
    def zero(cls, base, degree):
        return cls(base, degree, {})

    @classmethod
    def dt(cls, base, i):
        return cls(base, 1, {(i,): base.one})

    def _check(self, other):
        if not isinstance(other, DiffForm):
            raise ParameterError(f"expected a differential form, got {other!r}")
        if other.base != self.base:
            raise ParameterError(f"forms over {self.base} and {other.base} do not mix")
        if other.degree != self.degree:
            raise ParameterError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.coeffs)
        for J, c in other.coeffs.items():
            out[J] = out[J] + c if J in out else c
        return DiffForm(self.base, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffForm(self.base, self.degree, {J: -c for J, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, DiffForm):
            return wedge(self, scalar)
        scalar = self.base(scalar)
        return DiffForm(self.base, self.degree, {J: c * scalar for J, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = self.base(scalar)
        return DiffForm(self.base, self.degree, {J: c / scalar for J, c in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, DiffForm):
            return NotImplemented
        if (self.base, self.degree) != (other.base, other.degree):
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(self.coeffs[J] == other.coeffs[J] for J in self.coeffs)

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items())

    def map_coefficients(self, fn, base):
        return DiffForm(base, self.degree, {J: fn(c) for J, c in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.base.names
        fmt = getattr(self.base, "format_value", str)
        parts = []
        for J, c in self.items():
            cs = fmt(c)
            if not J:
                parts.append(cs)
                continue
            basis = "^".join(f"d({names[j]})" for j in J)
            if cs == "1":
                parts.append(basis)
            else:
                if " " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs} * {basis}")
        marker = getattr(self.base, "precision_marker", None)
        suffix = marker(self.coeffs.values()) if marker else ""
        return " + ".join(parts) + suffix

    def __repr__(self):
        return f"DiffForm<{self.degree}>({self})"


def d(omega):
    """Exterior derivative."""
    base, r = omega.base, omega.base.nvars
    out = {}
    for J, f in omega.coeffs.items():
        for i in range(r):
            if i in J:
                continue
            df = f.derivative(i)
            if not df:
                continue
            sign, key = _merge_sign((i,), J)
            term = df if sign > 0 else -df
            out[key] = out[key] + term if key in out else term
    return DiffForm(base, omega.degree + 1, out)


def wedge(a, b):
    """Exterior product; graded-commutative and bilinear."""
    if a.base != b.base:
        raise ParameterError(f"forms over {a.base} and {b.base} do not mix")
    q = a.degree + b.degree
    out = {}
    for J1, f in a.coeffs.items():
        for J2, g in b.coeffs.items():
            sign, key = _merge_sign(J1, J2)
            if not sign:
                continue
            term = f * g if sign > 0 else -(f * g)
            out[key] = out[key] + term if key in out else term
    return DiffForm(a.base, q, out)


def exact(f):
    """``df`` for a function ``f``."""
    return d(DiffForm.function(f))


def dlog(g):
    """``dg / g``; raises ``ZeroDivisionError`` for ``g = 0``."""
    if not g:
        raise ZeroDivisionError("dlog(0) is undefined")
    return exact(g) / g


def _require_residue_field(base, what):
    if not isinstance(base, FieldContext) or base.is_finite:
        raise Unsupported(f"{what} needs forms over a rational function field, not {base}")


def cartier(omega, require_closed=False):
    """Cartier operator by p-th power decomposition of the coefficients.

    Writes each coefficient of ``dt_J`` as ``sum_I f_I^p t^I`` and keeps
    ``f_I dt_J`` for the single index ``I`` with ``I_j = p - 1`` on ``J`` and
    ``0`` elsewhere.  On closed forms this is the Cartier operator; on other
    forms it is just that projection.

    >>> from wittcalc.ffield import FunctionField
    >>> T = FunctionField(3).gen()
    >>> str(cartier(T**2 * exact(T)))
    'd(T)'
    """
    base = omega.base
    _require_residue_field(base, "the Cartier operator")
    if require_closed and d(omega):
        raise NotClosed(f"{omega} is not closed")
    p, r = base.p, base.nvars
    out = {}
    for J, f in omega.coeffs.items():
        target = tuple(p - 1 if j in J else 0 for j in range(r))
        part = pth_power_component(f, target)
        if part:
            out[J] = part
    return DiffForm(base, omega.degree, out)


def b_membership(omega, m):
    """Decide ``omega in B_m``: ``B_0 = 0``, and ``B_m = C^{-1}(B_{m-1})`` on closed forms."""
    if m < 0:
        raise ParameterError("filtration level must be non-negative")
    _require_residue_field(omega.base, "B-filtration membership")
    for _ in range(m):
        if not omega:
            return True
        if d(omega):
            return False
        omega = cartier(omega)
    return not omega


def graded_equal(a, b, m):
    """Equality of the classes of ``a`` and ``b`` in ``Omega^q / B_{m-1}``."""
    if m < 1:
        raise ParameterError("graded level m must be at least 1")
    if a.degree != b.degree:
        raise ParameterError(f"cannot compare forms of degree {a.degree} and {b.degree}")
    return b_membership(a - b, m - 1)
