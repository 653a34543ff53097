"""Truncated Cohen ring of the residue field: a finite-precision model of the
valuation ring O_K of an absolutely unramified field K and of K itself.

An element is ``p^e * u`` where ``u = num/den`` is a unit: ``num`` and ``den``
are polynomials over ``Z/p^R`` (in the residue field's variables), ``den`` is
nonzero mod p and ``num`` has at least one coefficient prime to p.  The
element is known modulo ``p^N`` with ``N = e + R`` (absolute precision).
Over GF(p^r) the polynomials are further reduced modulo a monic lift of the
field's modulus, i.e. the ring is W(F_q) = Z_p[z]/(g).
"""

import math
from fractions import Fraction
from functools import lru_cache

from ._poly import format_fraction, format_poly, mod_ctx, terms
from .errors import DomainError, NotIntegral, ParameterError, PrecisionLoss, Unsupported
from .ffield import FieldContext, FieldElem


def vp(k, p):
    """p-adic valuation of a nonzero integer."""
    if k == 0:
        raise ValueError("v_p(0) is infinite")
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def _gauss_valuation(coeffs, p, cap):
    v = cap
    for c in coeffs.values():
        c %= p**cap
        if c:
            v = min(v, vp(c, p))
    return v


class CohenRing:
    """The truncated Cohen ring with residue field ``residue``.

    ``prec`` is only the default precision for elements built from integers
    and lifts; each element carries its own precision.
    """

    def __init__(self, residue, prec):
        if not isinstance(residue, FieldContext):
            raise ParameterError(f"residue field expected, got {residue!r}")
        if prec < 1:
            raise ParameterError("precision must be at least 1")
        self.residue = residue
        self.p = residue.p
        self.prec = prec
        self.names = residue.names
        self.is_finite = residue.is_finite
        self._lifted_modulus = None
        if residue.is_finite and residue.degree > 1:
            self._lifted_modulus = residue.modulus

    @property
    def nvars(self):
        return len(self.names)

    @property
    def key(self):
        return (self.residue.key, self.prec)

    def __eq__(self, other):
        return isinstance(other, CohenRing) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"W({self.residue})/p^{self.prec}"

    def format_value(self, x):
        """``x`` without its ``+ O(p^N)`` marker."""
        s = str(x)
        return s.rsplit(" + O(", 1)[0] if " + O(" in s else s

    def precision_marker(self, values):
        known = [x.N for x in values if not x.exact]
        return f" + O({self.p}^{min(known)})" if known else ""

    def poly_ctx(self, R):
        return mod_ctx(self.names, self.p**R)

    def __call__(self, value, prec=None):
        if isinstance(value, PadicElem):
            if value.ring.residue != self.residue:
                raise ParameterError(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, FieldElem):
            return lift(value, self.prec if prec is None else prec)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(f"cannot convert {value!r} into {self}")
        return self.from_terms({(0,) * self.nvars: value}, prec=prec)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def gen(self, i=0, prec=None):
        if self.is_finite and self.residue.degree == 1:
            raise ParameterError("W(GF(p)) has no generator")
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return self.from_terms({exps: 1}, prec=prec)

    def gens(self):
        if self.is_finite and self.residue.degree == 1:
            return ()
        return tuple(self.gen(i) for i in range(self.nvars))

    def from_terms(self, num, den=None, prec=None, e=0, exact=True):
        """``p^e * num/den`` from integer coefficient dicts, at precision ``prec``.

        ``den`` must be nonzero mod p.  Zero numerators give an exact zero
        when ``exact`` is set.
        """
        N = self.prec if prec is None else prec
        den = den or {(0,) * self.nvars: 1}
        if not any(c % self.p for c in den.values()):
            raise DomainError("denominator is not a unit of the Cohen ring")
        if not any(num.values()):
            return PadicElem._zero(self, N, exact)
        R = N - e
        if R <= 0:
            return PadicElem._zero(self, N, False)
        ctx = self.poly_ctx(R)
        m = self.p**R
        return _normalize(self, N, e,
                          ctx.from_dict({k: c % m for k, c in num.items() if c % m}),
                          ctx.from_dict({k: c % m for k, c in den.items() if c % m}))

    def _reduce_mod(self, poly, R):
        if self._lifted_modulus is None:
            return poly
        g = self._lifted_modulus
        r = len(g) - 1
        m = self.p**R
        c = [0] * (poly.degrees()[0] + 1 if not poly.is_zero() else 1)
        for (i,), v in poly.to_dict().items():
            c[i] = int(v)
        # z^r = -(g_0 + ... + g_{r-1} z^{r-1}); flint refuses division mod p^R
        for k in range(len(c) - 1, r - 1, -1):
            top = c[k]
            if top:
                c[k] = 0
                for i in range(r):
                    c[k - r + i] -= top * g[i]
        return self.poly_ctx(R).from_dict({(i,): v % m for i, v in enumerate(c) if v % m})


@lru_cache(maxsize=None)
def cohen_ring(residue, prec):
    return CohenRing(residue, prec)


def _convert(ring, poly, R):
    m = ring.p**R
    return ring.poly_ctx(R).from_dict({k: int(c) % m for k, c in poly.to_dict().items() if int(c) % m})


def _normalize(ring, N, e, num, den, exact=False):
    """Pull powers of p out of ``num`` and fix the storage modulus."""
    p = ring.p
    R = N - e
    if R <= 0:
        return PadicElem._zero(ring, N, False)
    num = ring._reduce_mod(num, R)
    den = ring._reduce_mod(den, R)
    coeffs = terms(num)
    k = _gauss_valuation(coeffs, p, R)
    if k >= R:
        return PadicElem._zero(ring, N, exact)
    if k:
        e += k
        R -= k
        m = p**R
        ctx = ring.poly_ctx(R)
        num = ctx.from_dict({x: (c // p**k) % m for x, c in coeffs.items() if (c // p**k) % m})
        den = _convert(ring, den, R)
    if not den.is_constant():
        num, den = _cancel_monomial(ring, num, den, R)
    if den.is_constant():
        c = int(terms(den).get((0,) * ring.nvars, 0))
        if c != 1:
            num = num * pow(c, -1, p**R)
            den = ring.poly_ctx(R).constant(1)
    return PadicElem(ring, N, e, num, den)


def _cancel_monomial(ring, num, den, R):
    # only the common monomial factor can be cancelled without a gcd over Z/p^R
    nt, dt = num.to_dict(), den.to_dict()
    common = [min(k[i] for k in list(nt) + list(dt)) for i in range(ring.nvars)]
    if not any(common):
        return num, den
    ctx = ring.poly_ctx(R)
    shift = lambda d: ctx.from_dict({tuple(a - b for a, b in zip(k, common)): c for k, c in d.items()})
    return shift(nt), shift(dt)


class PadicElem:
    """Immutable element ``p^e * num/den + O(p^N)`` of a :class:`CohenRing`."""

    __slots__ = ("ring", "N", "e", "num", "den", "exact")

    def __init__(self, ring, N, e, num, den, exact=False):
        self.ring = ring
        self.N = N
        self.e = e  # None for zero
        self.num = num
        self.den = den
        self.exact = exact

    @classmethod
    def _zero(cls, ring, N, exact):
        return cls(ring, N, None, None, None, exact)

    @property
    def p(self):
        return self.ring.p

    @property
    def precision(self):
        return self.N

    def is_zero(self):
        return self.e is None

    def __bool__(self):
        return self.e is not None

    def _coerce(self, other):
        if isinstance(other, PadicElem):
            if other.ring.residue != self.ring.residue:
                raise ParameterError(f"cannot combine elements over {self.ring} and {other.ring}")
            return other
        # exact operands are coerced so that they never limit the precision
        prec = max(self.N, self.N - (self.e or 0))
        if isinstance(other, int) and not isinstance(other, bool):
            prec += vp(other, self.p) if other else 0
            return self.ring.from_terms({(0,) * self.ring.nvars: other}, prec=prec)
        if isinstance(other, FieldElem):
            return lift(other, prec)
        return NotImplemented

    def _shifted_num(self, e, R):
        # p^(self.e - e) * num over Z/p^R
        return _convert(self.ring, self.num, R) * (self.p ** (self.e - e))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # an exact zero carries no precision bound
        if self.is_zero() and self.exact:
            return other
        if other.is_zero() and other.exact:
            return self
        N = min(self.N, other.N)
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                return PadicElem._zero(self.ring, N, self.exact and other.exact)
            nz = other if self.is_zero() else self
            return nz.with_precision(N)
        e = min(self.e, other.e)
        R = N - e
        if R <= 0:
            return PadicElem._zero(self.ring, N, False)
        d1, d2 = _convert(self.ring, self.den, R), _convert(self.ring, other.den, R)
        n1, n2 = self._shifted_num(e, R), other._shifted_num(e, R)
        if d1 == d2:
            return _normalize(self.ring, N, e, n1 + n2, d1)
        return _normalize(self.ring, N, e, n1 * d2 + n2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicElem(self.ring, self.N, self.e, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            # O(p^N1) * p^e2 u = O(p^(N1 + e2))
            if self.is_zero() and other.is_zero():
                return PadicElem._zero(self.ring, self.N + other.N,
                                       self.exact or other.exact)
            z, nz = (self, other) if self.is_zero() else (other, self)
            return PadicElem._zero(self.ring, z.N + nz.e, z.exact)
        e = self.e + other.e
        R = min(self.N - self.e, other.N - other.e)
        conv = lambda q: _convert(self.ring, q, R)
        return _normalize(self.ring, e + R, e, conv(self.num) * conv(other.num),
                          conv(self.den) * conv(other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by an element that is zero at its precision")
        if self.is_zero():
            return PadicElem._zero(self.ring, self.N - other.e, self.exact)
        e = self.e - other.e
        R = min(self.N - self.e, other.N - other.e)
        conv = lambda q: _convert(self.ring, q, R)
        return _normalize(self.ring, e + R, e, conv(self.num) * conv(other.den),
                          conv(self.den) * conv(other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.ring.from_terms({(0,) * self.ring.nvars: 1}, prec=self.N) / self ** (-k)
        result = self.ring.from_terms({(0,) * self.ring.nvars: 1}, prec=self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except ParameterError:
            return False
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def with_precision(self, N):
        """Drop precision to ``N`` (never raises it)."""
        if N >= self.N:
            return self
        if self.is_zero():
            return PadicElem._zero(self.ring, N, self.exact)
        R = N - self.e
        if R <= 0:
            return PadicElem._zero(self.ring, N, False)
        return PadicElem(self.ring, N, self.e, _convert(self.ring, self.num, R),
                         _convert(self.ring, self.den, R))

    def valuation(self):
        """``v(x)`` with ``v(p) = 1``; ``math.inf`` for an exact zero.

        Raises :class:`PrecisionLoss` for an element that is zero only at its
        working precision.
        """
        if self.e is not None:
            return self.e
        if self.exact:
            return math.inf
        raise PrecisionLoss(f"valuation undetermined: element is O({self.p}^{self.N})")

    def is_integral(self):
        return self.is_zero() or self.e >= 0

    def unit_part(self):
        return PadicElem(self.ring, self.N - self.e, 0, self.num, self.den)

    def derivative(self, i):
        """Partial derivative in the i-th variable (zero over finite residue fields)."""
        if self.is_zero() or self.ring.is_finite:
            return PadicElem._zero(self.ring, self.N, self.exact or self.ring.is_finite)
        n, dn = self.num, self.den
        num = n.derivative(i) * dn - n * dn.derivative(i)
        if num.is_zero():
            return PadicElem._zero(self.ring, self.N, True)
        return _normalize(self.ring, self.N, self.e, num, dn * dn)

    def representative(self):
        """``(num_terms, den_terms, shift)`` over Z with value ``num/den * p^shift``.

        For integral elements ``shift`` is 0 and the numerator is reduced into
        ``[0, p^N)``; for non-integral ones ``shift = e < 0``.
        """
        if self.is_zero():
            return {}, {(0,) * self.ring.nvars: 1}, 0
        p, N = self.p, self.N
        if self.e >= 0:
            m = p**N
            num = {k: (int(c) * p**self.e) % m for k, c in terms(self.num).items()}
            return {k: c for k, c in num.items() if c}, terms(self.den), 0
        return terms(self.num), terms(self.den), self.e

    def __str__(self):
        p, N = self.p, self.N
        if self.is_zero():
            return "0" if self.exact else f"O({p}^{N})"
        num, den, shift = self.representative()
        names = self.ring.names
        den_s = format_poly(den, names)
        if shift < 0:
            pk = str(p) if shift == -1 else f"{p}^{-shift}"
            den_s = pk if den_s == "1" else f"{pk}*({den_s})"
        return f"{format_fraction(format_poly(num, names), den_s)} + O({p}^{N})"

    def __repr__(self):
        return f"PadicElem({self})"


def lift(a, prec):
    """Coefficientwise representative lift of a residue-field element."""
    ring = cohen_ring(a.ctx, prec)
    return ring.from_terms(a.numerator_terms() or {(0,) * ring.nvars: 0},
                           a.denominator_terms(), prec=prec, exact=True)


def reduce(x):
    """Residue map O_K -> F."""
    ctx = x.ring.residue
    if x.is_zero():
        if x.N < 1:
            raise PrecisionLoss("no residue digit is known")
        return ctx.zero
    if x.e < 0:
        raise NotIntegral(f"{x} has valuation {x.e} < 0")
    if x.e > 0:
        return ctx.zero
    return ctx.from_terms(terms(x.num), terms(x.den))


def valuation(x):
    return x.valuation()


def _check_odd(p, what):
    if p == 2:
        raise Unsupported(f"{what} is only supported for odd p")


def _series_cutoff(N, v, p, slack):
    """Smallest K with ``k*v - slack(k) >= N`` for every ``k >= K``."""
    k = 1
    while k * v - slack(k) < N:
        k += 1
    return k


def exp_series(x):
    """``sum x^k / k!`` for ``v(x) >= 1`` (p odd), summed to precision ``x.N``."""
    p = x.p
    _check_odd(p, "the p-adic exponential")
    ring, N = x.ring, x.N
    one = ring.from_terms({(0,) * ring.nvars: 1}, prec=N)
    if x.is_zero():
        return one if x.exact else one.with_precision(N)
    if x.e < 1:
        raise DomainError(f"exp diverges: v(x) = {x.e} < 1")
    # v_p(k!) <= (k-1)/(p-1)
    K = _series_cutoff(N, x.e, p, lambda k: Fraction(k - 1, p - 1))
    total, term = one, one
    for k in range(1, K):
        term = term * x / k
        total = total + term
    tail = term * x / K
    if not tail.is_zero() and tail.e < N:
        raise AssertionError(f"exp series term {K} does not vanish mod p^{N}")
    return total.with_precision(N)


def log_series(u):
    """``log(u) = sum (-1)^(k+1) (u-1)^k / k`` for ``u = 1 mod p`` (p odd)."""
    p = u.p
    _check_odd(p, "the p-adic logarithm")
    N = u.N
    y = u - 1
    if y.is_zero():
        return PadicElem._zero(u.ring, N, y.exact)
    if y.e < 1:
        raise DomainError(f"log needs u = 1 mod p; v(u - 1) = {y.e}")
    K = _series_cutoff(N, y.e, p, lambda k: math.log(k, p))
    total = PadicElem._zero(u.ring, N, True)
    power = y.ring.from_terms({(0,) * y.ring.nvars: 1}, prec=N)
    for k in range(1, K):
        power = power * y
        term = power / k
        total = total + term if k % 2 else total - term
    tail = power * y / K
    if not tail.is_zero() and tail.e < N:
        raise AssertionError(f"log series term {K} does not vanish mod p^{N}")
    return total.with_precision(N)


def frobenius_lift(x):
    """The Cohen-ring Frobenius: ``t_i -> t_i^p`` (function fields), the lift
    of ``z -> z^p`` (GF(p^r)), identity on W(GF(p)).
    """
    ring = x.ring
    if x.is_zero():
        return x
    p = ring.p
    if not ring.is_finite:
        R = x.N - x.e
        ctx = ring.poly_ctx(R)
        sub = lambda q: ctx.from_dict({tuple(e * p for e in k): c for k, c in q.to_dict().items()})
        return _normalize(ring, x.N, x.e, sub(x.num), sub(x.den))
    if ring.residue.degree == 1:
        return x
    sigma = _sigma_z(ring.residue, x.N)
    unit = x.unit_part()
    R = unit.N
    n = _horner(terms(unit.num), sigma, R)
    d = _horner(terms(unit.den), sigma, R)
    return (n / d) * ring.from_terms({(0,): 1}, prec=x.N, e=x.e)


def _horner(coeffs, z, prec):
    ring = z.ring
    deg = max((k[0] for k in coeffs), default=0)
    acc = ring.from_terms({(0,): 0}, prec=prec)
    for i in range(deg, -1, -1):
        acc = acc * z + ring.from_terms({(0,): coeffs.get((i,), 0)}, prec=prec)
    return acc


@lru_cache(maxsize=None)
def _sigma_z(residue, N):
    """The root of the lifted modulus congruent to ``z^p``, by Newton iteration."""
    ring = cohen_ring(residue, N)
    g = {(i,): c for i, c in enumerate(residue.modulus)}
    dg = {(i - 1,): i * c for (i,), c in g.items() if i}
    y = ring.gen(0, prec=N) ** residue.p
    for _ in range(max(1, N.bit_length()) + 1):
        y = y - _horner(g, y, N) / _horner(dg, y, N)
    if not _horner(g, y, N).is_zero():
        raise AssertionError("Hensel lift of Frobenius did not converge")
    return y


class PadicPolynomial:
    """Polynomial in X with :class:`PadicElem` coefficients; index = degree.

    Missing coefficients are exact zeros.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        coeffs = [ring(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero() and coeffs[-1].exact:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def X(cls, ring):
        return cls(ring, [PadicElem._zero(ring, ring.prec, True), ring.one])

    @classmethod
    def constant(cls, c):
        return cls(c.ring, [c])

    def _coerce(self, other):
        if isinstance(other, PadicPolynomial):
            return other
        if isinstance(other, (int, PadicElem, FieldElem)):
            return PadicPolynomial(self.ring, [self.ring(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        zero = PadicElem._zero(self.ring, self.ring.prec, True)
        n = max(len(a), len(b))
        return PadicPolynomial(self.ring, [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero)
                                           for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PadicPolynomial(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = PadicElem._zero(self.ring, self.ring.prec, True)
        out = [zero] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PadicPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, PadicPolynomial):
            if scalar.degree > 0:
                raise ParameterError("can only divide a polynomial by a constant")
            scalar = scalar.coeffs[0]
        return PadicPolynomial(self.ring, [c / scalar for c in self.coeffs])

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = PadicPolynomial(self.ring, [self.ring.one])
        for _ in range(k):
            result = result * self
        return result

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __str__(self):
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero() and c.exact:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            cs = str(c)
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        return " + ".join(parts) or "0"


def newton_polygon(coeffs, exact=None):
    """Root valuations from the lower convex hull of ``(i, v(a_i))``.

    ``coeffs[i]`` is the coefficient of ``X^i``.  A coefficient that is zero
    at its precision counts as absent only if it is an exact zero (or
    ``exact[i]`` is set); otherwise :class:`PrecisionLoss` is raised.

    Returns ``[(valuation, multiplicity), ...]`` sorted by valuation, with
    ``math.inf`` for the root 0.

    >>> from wittcalc.ffield import GF
    >>> R = cohen_ring(GF(3), 4)
    >>> newton_polygon([R(-3), R(1)])
    [(Fraction(1, 1), 1)]
    """
    if isinstance(coeffs, PadicPolynomial):
        coeffs = coeffs.coeffs
    coeffs = list(coeffs)
    if not coeffs:
        raise ParameterError("the zero polynomial has no Newton polygon")
    points = []
    for i, c in enumerate(coeffs):
        if c.is_zero():
            if c.exact or (exact is not None and exact[i]):
                continue
            raise PrecisionLoss(f"valuation of the X^{i} coefficient is undetermined ({c})")
        points.append((i, Fraction(c.e)))
    if not points or points[-1][0] != len(coeffs) - 1:
        raise ParameterError("leading coefficient must be nonzero")
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    roots = []
    if hull[0][0] > 0:
        roots.append((math.inf, hull[0][0]))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        roots.append((-(y2 - y1) / (x2 - x1), x2 - x1))
    roots.sort(key=lambda r: r[0])
    return roots
