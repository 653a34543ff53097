"""Truncated p-typical Witt vectors over a pluggable coefficient ring.

Addition, multiplication and negation are evaluated from universal integer
polynomials, which :func:`gen_witt_polynomials` derives from the ghost
equations and caches per ``(p, n)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from ._poly import int_ctx, terms
from .errors import NotInGhostImage, ParameterError, Unsupported
from .ffield import check_prime
from .rings import ZZ


class WittPoly:
    """An integer polynomial in ``X_0..X_{n-1}, Y_0..Y_{n-1}``.

    Keeps the flint object for fast integer evaluation, and term lists reduced
    modulo each characteristic it has been asked for.
    """

    def __init__(self, poly):
        self.poly = poly
        self._terms = {}

    def terms(self, characteristic=0):
        cached = self._terms.get(characteristic)
        if cached is None:
            items = terms(self.poly).items()
            if characteristic:
                cached = [(c % characteristic, e) for e, c in items if c % characteristic]
            else:
                cached = [(c, e) for e, c in items]
            self._terms[characteristic] = cached
        return cached

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class WittPolynomialSet:
    p: int
    n: int
    sum_polys: tuple = field(repr=False)
    prod_polys: tuple = field(repr=False)
    neg_polys: tuple = field(repr=False)


def _exact_div(poly, d, ctx):
    coeffs = terms(poly)
    bad = [c for c in coeffs.values() if c % d]
    if bad:
        raise AssertionError(f"inexact division by {d} while generating Witt polynomials")
    return ctx.from_dict({e: c // d for e, c in coeffs.items()})


@lru_cache(maxsize=None)
def gen_witt_polynomials(p, n):
    """Solve the ghost equations for the sum, product and negation polynomials.

    Index ``k`` of each tuple is the k-th output coordinate as a polynomial
    in ``X_0..X_{n-1}, Y_0..Y_{n-1}``.

    >>> S = gen_witt_polynomials(2, 2).sum_polys
    >>> str(S[1])
    '-X0*Y0 + X1 + Y1'
    """
    check_prime(p)
    if n < 1:
        raise ParameterError("Witt length must be at least 1")
    ctx = int_ctx(tuple(f"X{i}" for i in range(n)) + tuple(f"Y{i}" for i in range(n)))
    gens = ctx.gens()
    X, Y = gens[:n], gens[n:]
    zero = ctx.from_dict({})

    def ghost(Z, k):
        return sum((p**j * Z[j] ** (p ** (k - j)) for j in range(k + 1)), zero)

    def solve(target, k, sols):
        lower = sum((p**j * sols[j] ** (p ** (k - j)) for j in range(k)), zero)
        return _exact_div(target - lower, p**k, ctx)

    S, P, N = [], [], []
    for k in range(n):
        gx, gy = ghost(X, k), ghost(Y, k)
        S.append(solve(gx + gy, k, S))
        P.append(solve(gx * gy, k, P))
        N.append(solve(-gx, k, N))
    wrap = lambda polys: tuple(WittPoly(q) for q in polys)
    return WittPolynomialSet(p, n, wrap(S), wrap(P), wrap(N))


class WittVector:
    """Immutable length-``n`` Witt vector ``(a_0, ..., a_{n-1})`` over ``ring``."""

    __slots__ = ("p", "ring", "coords")

    def __init__(self, p, coords, ring=ZZ):
        coords = tuple(ring(a) for a in coords)
        if not coords:
            raise ParameterError("Witt vectors have length at least 1")
        char = getattr(ring, "characteristic", 0)
        if char and char != p:
            raise ParameterError(f"W over a ring of characteristic {char} needs p = {char}, got {p}")
        self.p = check_prime(p)
        self.ring = ring
        self.coords = coords

    @property
    def n(self):
        return len(self.coords)

    @classmethod
    def zero(cls, p, n, ring=ZZ):
        return cls(p, [ring.zero] * n, ring)

    @classmethod
    def one(cls, p, n, ring=ZZ):
        return cls(p, [ring.one] + [ring.zero] * (n - 1), ring)

    @classmethod
    def from_int(cls, k, p, n, ring=ZZ):
        """The image of the integer ``k`` under Z -> W_n(ring)."""
        unit = cls.one(p, n, ring)
        result = cls.zero(p, n, ring)
        result = _scale(unit, abs(k), result)
        return -result if k < 0 else result

    def _check(self, other):
        if not isinstance(other, WittVector):
            raise ParameterError(f"expected a Witt vector, got {other!r}")
        if (self.p, self.n) != (other.p, other.n) or self.ring != other.ring:
            raise ParameterError(
                f"mismatched Witt vectors: W<{self.p},{self.n}> over {self.ring} "
                f"vs W<{other.p},{other.n}> over {other.ring}"
            )

    def _apply(self, polys, other):
        values = self.coords + (other.coords if other is not None else self.coords)
        return WittVector(self.p, [self.ring.evaluate(q, values) for q in polys], self.ring)

    def __add__(self, other):
        self._check(other)
        return self._apply(gen_witt_polynomials(self.p, self.n).sum_polys, other)

    def __neg__(self):
        return self._apply(gen_witt_polynomials(self.p, self.n).neg_polys, None)

    def __sub__(self, other):
        self._check(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            multiple = _scale(self, abs(other), WittVector.zero(self.p, self.n, self.ring))
            return multiple if other >= 0 else -multiple
        self._check(other)
        return self._apply(gen_witt_polynomials(self.p, self.n).prod_polys, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.p, self.ring) == (other.p, other.ring) and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __bool__(self):
        return any(a != self.ring.zero for a in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def format_coords(self, sep=", "):
        return sep.join(self.ring.format(a) for a in self.coords)

    def __str__(self):
        return f"W<{self.p},{self.n}>({self.format_coords()})"

    __repr__ = __str__


def _scale(x, k, acc):
    # double-and-add: acc + k*x
    while k:
        if k & 1:
            acc = acc + x
        x = x + x
        k >>= 1
    return acc


def witt_add(x, y):
    return x + y


def witt_mul(x, y):
    return x * y


def ghost_map(x):
    """Ghost components ``w_i = sum_{j<=i} p^j a_j^(p^(i-j))``."""
    p, ring = x.p, x.ring
    out = []
    for i in range(x.n):
        acc = ring.zero
        for j in range(i + 1):
            acc = acc + ring(p**j) * x.coords[j] ** (p ** (i - j))
        out.append(ring(acc))
    return tuple(out)


def from_ghost(g, p, n=None):
    """Invert :func:`ghost_map` over the integers.

    >>> from_ghost((2, 11), 3)
    W<3,2>(2, 1)
    """
    check_prime(p)
    g = tuple(int(v) for v in g)
    if n is None:
        n = len(g)
    if len(g) != n:
        raise ParameterError(f"expected {n} ghost components, got {len(g)}")
    a = []
    for k in range(n):
        rest = g[k] - sum(p**j * a[j] ** (p ** (k - j)) for j in range(k))
        q, r = divmod(rest, p**k)
        if r:
            raise NotInGhostImage(
                f"ghost component {k} gives a_{k} = {rest}/{p**k}, not an integer"
            )
        a.append(q)
    return WittVector(p, a, ZZ)


def frobenius(x, length=None):
    """Frobenius ``(a_0, ..., a_n) -> (a_0^p, ..., a_{m-1}^p)`` to length ``m``.

    ``length`` defaults to ``x.n - 1`` (the map W_{n+1} -> W_n); passing
    ``x.n`` gives the Frobenius endomorphism of W_n.  Only rings of
    characteristic p are supported.
    """
    if length is None:
        length = x.n - 1
    if length < 1:
        raise ParameterError("Frobenius output must have length at least 1")
    if length > x.n:
        raise ParameterError(f"cannot lengthen a Witt vector of length {x.n} to {length}")
    if getattr(x.ring, "characteristic", 0) != x.p:
        raise Unsupported(f"Frobenius on W({x.ring}) is only implemented in characteristic p")
    return WittVector(x.p, [x.ring.frobenius(a) for a in x.coords[:length]], x.ring)


def verschiebung(x):
    """``(a_0, ..., a_{n-1}) -> (0, a_0, ..., a_{n-1})``."""
    return WittVector(x.p, (x.ring.zero,) + x.coords, x.ring)


def teichmuller(a, p, n, ring=ZZ):
    """The Teichmuller representative ``[a] = (a, 0, ..., 0)``."""
    return WittVector(p, [ring(a)] + [ring.zero] * (n - 1), ring)


def restrict(x, length):
    """Truncate to the first ``length`` coordinates (a ring map W_n -> W_m)."""
    if not 1 <= length <= x.n:
        raise ParameterError(f"cannot restrict length {x.n} to {length}")
    return WittVector(x.p, x.coords[:length], x.ring)
