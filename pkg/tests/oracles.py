"""Random generators and independent reference computations for the tests.

Nothing here calls the routine it is used to check.
"""

from fractions import Fraction


def random_poly(F, rng, max_deg=3, max_terms=3):
    """Random polynomial over F_p in the generators of ``F``."""
    gens = F.gens()
    total = F.zero
    for _ in range(rng.randint(1, max_terms)):
        mono = F(rng.randrange(1, F.p))
        for g in gens:
            mono = mono * g ** rng.randint(0, max_deg)
        total = total + mono
    return total


def random_rational(F, rng, max_deg=3):
    num = random_poly(F, rng, max_deg)
    while not num:
        num = random_poly(F, rng, max_deg)
    if rng.random() < 0.5:
        return num
    den = random_poly(F, rng, 2)
    while not den:
        den = random_poly(F, rng, 2)
    return num / den


def random_finite(F, rng):
    return rng.choice(list(F.elements()))


def random_padic_integral(R, rng, max_deg=2):
    """Random element of the truncated Cohen ring with unit denominator."""
    gens = R.gens()
    total = R(0)
    for _ in range(rng.randint(1, 3)):
        mono = R(rng.randrange(-30, 31))
        for g in gens:
            mono = mono * g ** rng.randint(0, max_deg)
        total = total + mono
    if gens and rng.random() < 0.3:
        total = total / (1 + R.p * gens[0] if rng.random() < 0.5 else 1 + gens[0])
    return total


def vp_fraction(x, p):
    if x == 0:
        return float("inf")
    x = Fraction(x)
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def fraction_mod(x, m):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, m) % m


def exp_by_fractions(x, p, N):
    """exp(x) mod p^N by direct summation in Q; requires v_p(x) >= 1."""
    v = vp_fraction(x, p)
    total, term, k = Fraction(0), Fraction(1), 0
    # v(x^k / k!) >= k*v - (k-1)/(p-1), which grows with k
    while k == 0 or k * v - (k - 1) / (p - 1) < N:
        total += term
        k += 1
        term = term * x / k
    return fraction_mod(total, p**N)


def teichmuller_zp(a, p, n):
    """Teichmuller lift of a in F_p to Z/p^n, via a^(p^(n-1))."""
    return pow(a, p ** (n - 1), p**n)


def witt_fp_to_int(coords, p):
    """The isomorphism W_n(F_p) -> Z/p^n: last ghost component of the Teichmuller lift."""
    n = len(coords)
    m = p**n
    lifted = [teichmuller_zp(int(str(a)), p, n) for a in coords]
    return sum(p**i * pow(lifted[i], p ** (n - 1 - i), m) for i in range(n)) % m


def is_monomial_pk_power(k, p, e):
    """T^k in F_p(T)^(p^e)."""
    return k % p**e == 0
