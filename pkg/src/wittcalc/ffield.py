"""Residue fields: finite fields GF(p^r) and rational function fields F_p(t_1..t_r).

Elements are canonical fractions of flint polynomials over F_p, so equality
is structural.  In the finite case the denominator is always 1 and the
numerator is reduced modulo the context's irreducible modulus.
"""

from functools import lru_cache
from itertools import product

import flint

from ._poly import format_fraction, format_poly, freeze, mod_ctx, terms
from .errors import ParameterError, Unsupported
from .rings import Ring

# Irreducible moduli, coefficients low degree first.
CONWAY_TABLE = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),  # z^2 = -1
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


def is_prime(p):
    return isinstance(p, int) and p >= 2 and flint.fmpz(p).is_prime()


def check_prime(p):
    if not is_prime(p):
        raise ParameterError(f"p = {p!r} is not a prime")
    return p


class FieldContext(Ring):
    """Descriptor of the residue field F.

    Use :func:`GF` or :func:`FunctionField` rather than calling this directly;
    both return cached instances, so contexts can be compared with ``is``.
    """

    def __init__(self, p, names, modulus=None):
        self.p = check_prime(p)
        self.characteristic = p
        self.modulus = modulus
        self.is_finite = modulus is not None
        self.names = tuple(names)
        self.poly_ctx = mod_ctx(self.names, p)
        if self.is_finite:
            self.degree = len(modulus) - 1
            self.order = p**self.degree
            self.name = f"GF({p})" if self.degree == 1 else f"GF({p}^{self.degree})"
            self._modpoly = self.poly_ctx.from_dict({(i,): c for i, c in enumerate(modulus) if c})
        else:
            self.degree = len(self.names)
            self.name = f"GF({p})({', '.join(self.names)})"

    @property
    def key(self):
        return (self.p, self.names, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.name

    @property
    def nvars(self):
        return len(self.names)

    def __call__(self, value):
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise ParameterError(f"element of {value.ctx} used in {self}")
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(f"cannot convert {value!r} into {self}")
        return FieldElem(self, self.poly_ctx.constant(value % self.p), self.poly_ctx.constant(1))

    def contains(self, a):
        return isinstance(a, FieldElem) and a.ctx == self

    def gen(self, i=0):
        """The i-th variable t_{i+1}, or the generator z of GF(p^r)."""
        if self.is_finite and self.degree == 1:
            raise ParameterError("GF(p) has no generator")
        return self._make(self.poly_ctx.gens()[i], self.poly_ctx.constant(1))

    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def from_terms(self, coeffs, den=None):
        """Build ``sum c * t^e`` (optionally over ``den``) from ``{exps: int}``."""
        num = self.poly_ctx.from_dict({e: c % self.p for e, c in coeffs.items() if c % self.p})
        d = self.poly_ctx.constant(1) if den is None else self.poly_ctx.from_dict(
            {e: c % self.p for e, c in den.items() if c % self.p})
        return self._make(num, d)

    def _make(self, num, den):
        if den.is_zero():
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.is_finite:
            if not den.is_constant() or den != 1:
                num = num * _finite_inverse(self, den)
            if self.degree > 1:
                num = num % self._modpoly
            return FieldElem(self, num, self.poly_ctx.constant(1))
        if num.is_zero():
            return FieldElem(self, num, self.poly_ctx.constant(1))
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = int(den.leading_coefficient())
        if lc != 1:
            inv = pow(lc, -1, self.p)
            num = num * inv
            den = den * inv
        return FieldElem(self, num, den)

    def elements(self):
        """Iterate over all elements of a finite field in a fixed order."""
        if not self.is_finite:
            raise Unsupported(f"{self} is infinite")
        for coeffs in product(range(self.p), repeat=self.degree):
            yield self.from_terms({(i,): c for i, c in enumerate(coeffs)})

    def frobenius(self, a):
        return a.frobenius()

    def format(self, a):
        return str(a)

    @property
    def prime_field(self):
        return GF(self.p)


def _finite_inverse(ctx, den):
    den = den % ctx._modpoly if ctx.degree > 1 else den
    if den.is_zero():
        raise ZeroDivisionError(f"division by zero in {ctx}")
    e = ctx.order - 2
    result = ctx.poly_ctx.constant(1)
    base = den
    while e:
        if e & 1:
            result = result * base
            if ctx.degree > 1:
                result = result % ctx._modpoly
        base = base * base
        if ctx.degree > 1:
            base = base % ctx._modpoly
        e >>= 1
    return result


@lru_cache(maxsize=None)
def GF(p, r=1, modulus=None):
    """The finite field with ``p**r`` elements.

    ``modulus`` is a tuple of coefficients (low degree first) of a monic
    irreducible polynomial of degree ``r``; omitted, a built-in table entry is
    used.
    """
    check_prime(p)
    if r < 1:
        raise ParameterError("field degree must be positive")
    if r == 1:
        return FieldContext(p, ("z",), (0, 1))
    if modulus is None:
        if (p, r) not in CONWAY_TABLE:
            raise ParameterError(f"no built-in modulus for GF({p}^{r}); supply one")
        modulus = CONWAY_TABLE[p, r]
    modulus = tuple(c % p for c in modulus)
    if len(modulus) != r + 1 or modulus[-1] != 1:
        raise ParameterError("modulus must be monic of degree r")
    _, factors = flint.nmod_poly(list(modulus), p).factor()
    if len(factors) != 1 or factors[0][1] != 1:
        raise ParameterError(f"modulus {modulus} is reducible mod {p}")
    return FieldContext(p, ("z",), modulus)


@lru_cache(maxsize=None)
def FunctionField(p, names=("T",)):
    """The rational function field F_p(names)."""
    if isinstance(names, str):
        names = tuple(s.strip() for s in names.split(","))
    if not names or len(set(names)) != len(names):
        raise ParameterError(f"bad variable list {names!r}")
    return FieldContext(p, tuple(names))


class FieldElem:
    """Immutable element of a :class:`FieldContext`."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx, num, den):
        self.ctx = ctx
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ParameterError(f"cannot combine elements of {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return self.ctx._make(self.num + other.num, self.den)
        return self.ctx._make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.ctx, -self.num, self.den)

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
        return self.ctx._make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError(f"division by zero in {self.ctx}")
        return self.ctx._make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self):
        return self.ctx.one / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.ctx.is_finite:
            return FieldElem(self.ctx, self._finite_pow(k), self.den)
        # num and den stay coprime and den stays monic
        return FieldElem(self.ctx, self.num**k, self.den**k)

    def _finite_pow(self, k):
        ctx = self.ctx
        result = ctx.poly_ctx.constant(1)
        base = self.num
        while k:
            if k & 1:
                result = result * base
                if ctx.degree > 1:
                    result = result % ctx._modpoly
            base = base * base
            if ctx.degree > 1:
                base = base % ctx._modpoly
            k >>= 1
        return result

    def frobenius(self):
        """x -> x^p, computed by exponent scaling in the function-field case."""
        p = self.ctx.p
        if self.ctx.is_finite:
            return self**p
        pc = self.ctx.poly_ctx
        num = pc.from_dict({tuple(e * p for e in ex): c for ex, c in self.num.to_dict().items()})
        den = pc.from_dict({tuple(e * p for e in ex): c for ex, c in self.den.to_dict().items()})
        return FieldElem(self.ctx, num, den)

    def derivative(self, i):
        """Partial derivative with respect to the i-th variable."""
        if self.ctx.is_finite:
            return self.ctx.zero
        n, d = self.num, self.den
        dn, dd = n.derivative(i), d.derivative(i)
        if d.is_one():
            return FieldElem(self.ctx, dn, d)
        return self.ctx._make(dn * d - n * dd, d * d)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.ctx == other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.ctx.key, freeze(self.num), freeze(self.den)))

    def numerator_terms(self):
        return terms(self.num)

    def denominator_terms(self):
        return terms(self.den)

    def __str__(self):
        names = self.ctx.names
        return format_fraction(format_poly(terms(self.num), names), format_poly(terms(self.den), names))

    def __repr__(self):
        return f"FieldElem({self}, {self.ctx})"


def _require_function_field(ctx, what):
    if ctx.is_finite:
        raise Unsupported(f"{what} needs a rational function field, not {ctx}")


def pth_power_decompose(f):
    """Write ``f = sum_I f_I^p * t^I`` over the p-base ``t`` with ``I`` in ``[0, p-1]^r``.

    Returns ``{I: f_I}`` with zero components omitted.  Uses
    ``f = g * h^(p-1) / h^p`` so only polynomial coefficient extraction is
    needed.

    >>> F = FunctionField(3, ("T",)); T = F.gen()
    >>> {I: str(v) for I, v in pth_power_decompose(T**4 + T).items()}
    {(1,): 'T + 1'}
    """
    ctx = f.ctx
    _require_function_field(ctx, "p-th power decomposition")
    g, h = _pth_split(f)
    buckets = {}
    for exps, c in terms(g).items():
        index = tuple(e % ctx.p for e in exps)
        root = tuple(e // ctx.p for e in exps)
        buckets.setdefault(index, {})[root] = c  # c^(1/p) = c in F_p
    return {
        index: ctx._make(ctx.poly_ctx.from_dict(coeffs), h)
        for index, coeffs in sorted(buckets.items())
    }


def _pth_split(f):
    # f = g / h^p with g, h polynomials and h as small as the factorization allows
    ctx, p = f.ctx, f.ctx.p
    if f.den.is_constant():
        return f.num, f.den
    unit, factors = f.den.factor()
    g, h = f.num, ctx.poly_ctx.constant(1)
    for q, k in factors:
        k = int(k)
        up = -(-k // p)
        h = h * q**up
        if up * p > k:
            g = g * q ** (up * p - k)
    # den = unit * prod q^k, so f = (g / unit) / h^p
    return g * pow(int(unit), -1, p), h


def pth_power_component(f, index):
    """The single component ``f_I`` of :func:`pth_power_decompose` (zero if absent)."""
    ctx = f.ctx
    _require_function_field(ctx, "p-th power decomposition")
    g, h = _pth_split(f)
    p = ctx.p
    coeffs = {tuple(e // p for e in exps): c for exps, c in terms(g).items()
              if all(e % p == i for e, i in zip(exps, index))}
    return ctx._make(ctx.poly_ctx.from_dict(coeffs), h) if coeffs else ctx.zero


def pth_root(f):
    """The p-th root of ``f`` if ``f`` lies in F^p, else ``None``."""
    if f.ctx.is_finite:
        # inverse of Frobenius on a finite field
        return f ** (f.ctx.order // f.ctx.p)
    parts = pth_power_decompose(f)
    if not parts:
        return f.ctx.zero
    zero = (0,) * f.ctx.nvars
    if set(parts) != {zero}:
        return None
    return parts[zero]


def is_pk_power(f, k):
    """Decide ``f in F^(p^k)`` by iterated p-th power decomposition."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    if f.ctx.is_finite:
        return True
    for _ in range(k):
        f = pth_root(f)
        if f is None:
            return False
    return True


def trace(x):
    """Absolute trace Tr_{F_q/F_p}(x), returned in the prime field GF(p)."""
    ctx = x.ctx
    if not ctx.is_finite:
        raise Unsupported(f"trace needs a finite field, not {ctx}")
    total = ctx.zero
    y = x
    for _ in range(ctx.degree):
        total = total + y
        y = y**ctx.p
    if not total.is_constant():
        raise AssertionError("trace left the prime field")
    return ctx.prime_field(terms(total.num).get((0,), 0))


def asw_solve(a):
    """A solution of ``x^p - x = a`` in F_q, or ``None`` when none exists.

    Exhaustive search, guarded by the trace criterion.
    """
    ctx = a.ctx
    if not ctx.is_finite:
        raise Unsupported(f"asw_solve needs a finite field, not {ctx}")
    if trace(a):
        return None
    p = ctx.p
    for x in ctx.elements():
        if x**p - x == a:
            return x
    raise AssertionError(f"trace of {a} vanishes but x^p - x = a has no solution")


def wp_image(ctx, n):
    """The subgroup ``{F(x) - x : x in W_n(F_q)}`` as a set of coordinate tuples."""
    if not ctx.is_finite:
        raise Unsupported(f"enumerating W_n needs a finite field, not {ctx}")
    return _wp_image(ctx, n)


@lru_cache(maxsize=None)
def _wp_image(ctx, n):
    from .witt import WittVector, frobenius

    image = set()
    elems = list(ctx.elements())
    for coords in product(elems, repeat=n):
        x = WittVector(ctx.p, coords, ctx)
        image.add((frobenius(x, n) - x).coords)
    return frozenset(image)


def asw_order(w):
    """Order of the class of ``w`` in ``W_n(F_q) / (F - 1) W_n(F_q)``.

    This is the degree of the cyclic extension of F_q that Artin-Schreier-Witt
    theory attaches to ``w``; it is always a power of p.
    """
    ctx = w.ring
    if not isinstance(ctx, FieldContext) or not ctx.is_finite:
        raise Unsupported(f"asw_order needs a finite field, not {ctx}")
    image = wp_image(ctx, w.n)
    order = 1
    x = w
    for _ in range(w.n + 1):
        if x.coords in image:
            return order
        x = x * w.p
        order *= w.p
    raise AssertionError(f"p^n * {w} not in the image of F - 1")
