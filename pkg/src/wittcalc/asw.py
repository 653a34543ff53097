"""Character data for cyclic p-power extensions of K and the calculus around
them: degree-p equations, embedding criteria, the Frobenius/Verschiebung
functoriality and the exponential lift of Witt vectors.

A degree-p^n character is modelled by a :class:`CharDatum` holding two Witt
vectors over the residue field: an Artin-Schreier-Witt datum for its
unramified part and its ramified coordinate.  This fixes a splitting of

    0 -> H^1(unramified) -> H^1(K, Z/p^n) -> W_n(F) -> 0

so every statement here is coordinatewise in that model.
"""

from dataclasses import dataclass

from .errors import NotIntegral, ParameterError, Unsupported
from .ffield import asw_order, is_pk_power, wp_image
from .padic import PadicPolynomial, cohen_ring, exp_series, lift, newton_polygon, reduce
from .witt import WittVector, frobenius, verschiebung


@dataclass(frozen=True, eq=False)
class CharDatum:
    p: int
    n: int
    unram: WittVector
    ram: WittVector

    def __post_init__(self):
        for w in (self.unram, self.ram):
            if (w.p, w.n) != (self.p, self.n):
                raise ParameterError(f"coordinate {w} does not have (p, n) = ({self.p}, {self.n})")
        if self.unram.ring != self.ram.ring:
            raise ParameterError("both coordinates must live over the same residue field")

    @classmethod
    def zero(cls, field, n):
        z = WittVector.zero(field.p, n, field)
        return cls(field.p, n, z, z)

    @classmethod
    def ramified(cls, w):
        return cls(w.p, w.n, WittVector.zero(w.p, w.n, w.ring), w)

    @property
    def field(self):
        return self.ram.ring

    def __eq__(self, other):
        if not isinstance(other, CharDatum):
            return NotImplemented
        if (self.p, self.n, self.field) != (other.p, other.n, other.field) or self.ram != other.ram:
            return False
        if self.field.is_finite:
            return (self.unram - other.unram).coords in wp_image(self.field, self.n)
        # over function fields unram is compared as a representative
        return self.unram == other.unram

    def __str__(self):
        return (f"chi<{self.p},{self.n}>{{unram=W({self.unram.format_coords(',')}), "
                f"ram=W({self.ram.format_coords(',')})}}")


@dataclass(frozen=True, eq=False)
class AswEquation:
    """``X^p - X - a/p`` over K for an integral lift ``a``."""

    p: int
    lift: object

    def __post_init__(self):
        if not self.lift.is_integral():
            raise NotIntegral(f"{self.lift} is not integral")

    @property
    def degenerate(self):
        """True when ``a = 0 mod p``: the equation is then unramified or split."""
        return self.lift.is_zero() or self.lift.e > 0

    def polynomial(self):
        ring = self.lift.ring
        X = PadicPolynomial.X(ring)
        p_elem = ring.from_terms({(0,) * ring.nvars: self.p}, prec=self.lift.N + 1)
        return X**self.p - X - self.lift / p_elem

    def newton_polygon(self):
        return newton_polygon(self.polynomial())

    def __str__(self):
        a = self.lift.ring.format_value(self.lift)
        if self.lift.is_zero():
            return f"X^{self.p} - X"
        if " " in a:
            a = f"({a})"
        return f"X^{self.p} - X - {a}/{self.p}"


def phi1_of_equation(a):
    """Residue ``a mod p``: the ramified coordinate of the character of ``K(x)``,
    ``x^p - x = a/p``."""
    if not a.is_integral():
        raise NotIntegral(f"{a} is not integral")
    return reduce(a)


def construct_equation(abar, prec=2):
    """The equation ``X^p - X = lift(abar)/p`` attached to ``abar`` in F."""
    return AswEquation(abar.ctx.p, lift(abar, prec))


def miki_criterion(a, n):
    """Whether ``K(x)``, ``x^p - x = a/p``, embeds in a cyclic extension of degree
    ``p^n``: decided by ``a mod p in F^(p^(n-1))``."""
    if n < 1:
        raise ParameterError("target level n must be at least 1")
    return is_pk_power(phi1_of_equation(a), n - 1)


def embedding_criterion(w, m):
    """Whether the degree-p^n extension with ramified coordinate ``w`` embeds in a
    cyclic extension of degree ``p^m``: every ``a_i`` must lie in ``F^(p^(m-n))``.

    ``m == n`` returns True (the extension itself).
    """
    if m < w.n:
        raise ParameterError(f"target level m = {m} is below the level n = {w.n}")
    return all(is_pk_power(a, m - w.n) for a in w.coords)


def scale_by_p(chi):
    """Multiplication by p on characters: Frobenius W_{n+1} -> W_n on both coordinates."""
    if chi.n < 2:
        raise ParameterError("scale_by_p needs level at least 2 (there is no level 0)")
    return CharDatum(chi.p, chi.n - 1, frobenius(chi.unram), frobenius(chi.ram))


def include_level(chi):
    """Inclusion Z/p^n -> Z/p^(n+1) on characters: Verschiebung on both coordinates."""
    return CharDatum(chi.p, chi.n + 1, verschiebung(chi.unram), verschiebung(chi.ram))


def psi_exponent(w, prec):
    """``sum_{i<n} sum_{1<=j<=n-i} p^(i+j) * lift(a_i)^(p^(n-i-j))`` in the Cohen ring."""
    ring = cohen_ring(w.ring, prec)
    p, n = w.p, w.n
    total = ring.from_terms({(0,) * ring.nvars: 0}, prec=prec)
    for i, a in enumerate(w.coords):
        at = lift(a, prec)
        for j in range(1, n - i + 1):
            total = total + at ** (p ** (n - i - j)) * p ** (i + j)
    return total


def psi_n(w, prec):
    """``exp`` of :func:`psi_exponent`; a 1-unit of the Cohen ring."""
    if w.p == 2:
        raise Unsupported("psi_n needs p odd")
    return exp_series(psi_exponent(w, prec)).with_precision(prec)


def asw_character(w):
    """``(order, trivial)`` of the unramified character Artin-Schreier-Witt theory
    attaches to ``w`` over a finite field."""
    order = asw_order(w)
    return order, order == 1
