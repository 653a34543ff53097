"""Small helpers around flint's sparse multivariate polynomials."""

from functools import lru_cache

import flint


@lru_cache(maxsize=None)
def mod_ctx(names, modulus):
    """Polynomial context over Z/modulus with graded-lex term order."""
    return flint.fmpz_mod_mpoly_ctx.get(tuple(names), modulus=modulus, ordering="deglex")


@lru_cache(maxsize=None)
def int_ctx(names):
    return flint.fmpz_mpoly_ctx.get(tuple(names), ordering="deglex")


def terms(poly):
    """Return ``{exponent tuple: int}`` for a flint polynomial."""
    return {tuple(int(k) for k in e): int(c) for e, c in poly.to_dict().items()}


def freeze(poly):
    return frozenset(terms(poly).items())


def _graded_lex_key(exps):
    return (sum(exps), exps)


def _monomial(exps, names):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(coeffs, names, symmetric_mod=None):
    """Render ``{exps: int}`` with terms in descending graded-lex order.

    With ``symmetric_mod`` coefficients above half the modulus print as
    negatives.
    """
    items = [(e, c) for e, c in coeffs.items() if c]
    if not items:
        return "0"
    items.sort(key=lambda ec: _graded_lex_key(ec[0]), reverse=True)
    out = []
    for i, (exps, c) in enumerate(items):
        if symmetric_mod is not None and c > symmetric_mod // 2:
            c -= symmetric_mod
        neg = c < 0
        c = abs(c)
        mono = _monomial(exps, names)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _is_atomic(s):
    return not any(ch in s for ch in " *+/") and not s.startswith("-")


def format_fraction(num, den):
    """Join rendered numerator/denominator with the fewest parentheses."""
    if den == "1":
        return num
    if " " in num:
        num = f"({num})"
    if not _is_atomic(den):
        den = f"({den})"
    return f"{num}/{den}"
