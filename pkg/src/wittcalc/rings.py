"""Coefficient rings for Witt vectors.

A coefficient ring is any object with the attributes below.  Elements only
need the usual arithmetic operators and ``==``; the ring object carries what
elements cannot know about themselves (characteristic, identity elements,
how to build an element from an integer).
"""

from functools import lru_cache

import flint

from .errors import ParameterError, Unsupported


class Ring:
    """Base coefficient ring; subclasses set ``characteristic``."""

    characteristic = 0
    name = "?"

    def __call__(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def eq(self, a, b):
        return a == b

    def contains(self, a):
        return True

    def frobenius(self, a):
        """The p-th power map; only meaningful in characteristic p."""
        p = self.characteristic
        if not p:
            raise Unsupported(f"Frobenius needs a ring of characteristic p, not {self.name}")
        return a**p

    def evaluate(self, wpoly, values):
        """Evaluate a Witt polynomial at ``values`` with power caching.

        ``wpoly.terms(char)`` yields ``(coeff, exps)`` pairs, already reduced
        modulo the characteristic when it is positive.
        """
        poly_terms = wpoly.terms(self.characteristic)
        maxdeg = [0] * len(values)
        for _, exps in poly_terms:
            for i, e in enumerate(exps):
                if e > maxdeg[i]:
                    maxdeg[i] = e
        powers = []
        for v, m in zip(values, maxdeg):
            row = [self.one]
            for _ in range(m):
                row.append(row[-1] * v)
            powers.append(row)
        acc = self.zero
        for c, exps in poly_terms:
            term = self(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * powers[i][e]
            acc = acc + term
        return acc

    def format(self, a):
        return str(a)


class IntegerRing(Ring):
    name = "ZZ"

    def __call__(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(f"{value!r} is not an integer")
        return value

    def contains(self, a):
        return isinstance(a, int) and not isinstance(a, bool)

    def evaluate(self, wpoly, values):
        return int(wpoly.poly(*values))

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


ZZ = IntegerRing()


class IntegersMod(Ring):
    """Z/m with elements stored as Python ints in ``range(m)``."""

    def __init__(self, m):
        if m < 2:
            raise ParameterError("modulus must be at least 2")
        self.m = m
        self.name = f"Z/{m}"
        fac = flint.fmpz(m).factor()
        self.characteristic = m if len(fac) == 1 and fac[0][1] == 1 else 0

    def __call__(self, value):
        return int(value) % self.m

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.m

    def add(self, a, b):
        return (a + b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return -a % self.m

    def frobenius(self, a):
        if not self.characteristic:
            raise Unsupported(f"Frobenius needs a ring of characteristic p, not {self.name}")
        return a  # Fermat

    def evaluate(self, wpoly, values):
        return int(wpoly.poly(*values)) % self.m

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.m == self.m

    def __hash__(self):
        return hash(("Zmod", self.m))


@lru_cache(maxsize=None)
def Zmod(m):
    return IntegersMod(m)
