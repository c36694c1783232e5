"""Binary quadratic forms of positive non-square discriminant: reduction
cycles, class counting, and Frobenius classes in unramified cyclic extensions
of real quadratic fields.

This is the offline derivation route for the shipped number-field fixtures:
both built-in fields are unramified cyclic extensions K/Q(sqrt(D)) (class
field theory), so the decomposition group of an unramified rational prime is
read off from its splitting in Q(sqrt(D)) and, when split, from the form class
of a prime ideal above it.
"""

from __future__ import annotations

from math import isqrt

from .numtheory import legendre

__all__ = ["reduce_form", "form_cycle", "class_cycles", "prime_form",
           "is_principal", "frobenius_order"]


def _is_reduced(a, b, c, D):
    s = isqrt(D)
    return 0 < b and (abs(s - 2 * abs(a)) < b <= s or (b == s and s * s != D))


def _rho(a, b, c, D):
    # b' = -b mod 2c, normalized into the standard window
    cc = c
    s = isqrt(D)
    if abs(cc) > s:
        # -|c| < b' <= |c|
        b2 = (-b) % (2 * abs(cc))
        if b2 > abs(cc):
            b2 -= 2 * abs(cc)
    else:
        # sqrt(D) - 2|c| < b' < sqrt(D): take the largest b' = -b (mod 2|c|) <= s
        b2 = (-b) % (2 * abs(cc))
        while b2 + 2 * abs(cc) <= s:
            b2 += 2 * abs(cc)
    c2 = (b2 * b2 - D) // (4 * cc)
    return (cc, b2, c2)


def reduce_form(form, D):
    a, b, c = form
    assert b * b - 4 * a * c == D
    for _ in range(10000):
        if _is_reduced(a, b, c, D):
            return (a, b, c)
        a, b, c = _rho(a, b, c, D)
    raise RuntimeError("form reduction did not terminate")


def form_cycle(form, D):
    """The cycle of reduced forms properly equivalent to the given form."""
    f = reduce_form(form, D)
    cycle = []
    g = f
    for _ in range(10000):
        cycle.append(g)
        g = _rho(*g, D)
        g = reduce_form(g, D)
        if g == f:
            return frozenset(cycle)
    raise RuntimeError("cycle did not close")


def class_cycles(D):
    """All cycles of reduced forms: the narrow form class group, as a set
    partition.  len(class_cycles(D)) is the narrow class number."""
    s = isqrt(D)
    reduced = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        prod = (b * b - D) // 4  # = a*c, negative
        for a in range(1, s + 1):
            if prod % a:
                continue
            for aa in (a, -a):
                c = prod // aa
                if _is_reduced(aa, b, c, D):
                    reduced.append((aa, b, c))
    cycles = []
    seen = set()
    for f in reduced:
        if f in seen:
            continue
        cyc = form_cycle(f, D)
        cycles.append(cyc)
        seen |= set(cyc)
    return cycles


def principal_form(D):
    s = isqrt(D)
    b = s if (s - D) % 2 == 0 else s - 1
    return (1, b, (b * b - D) // 4)


def prime_form(ell, D):
    """A form (ell, b, c) of discriminant D; requires ell split or ramified."""
    if D % ell == 0:
        b = D % (2 * ell)
        # solve b = 0 mod ell with b = D mod 2
        for b in range(ell % 2, 2 * ell, 2 if D % 2 else 1):
            if b % ell == 0 and (b * b - D) % (4 * ell) == 0:
                return (ell, b, (b * b - D) // (4 * ell))
    if legendre(D % ell, ell) != 1:
        raise ValueError(f"{ell} is inert for discriminant {D}")
    r = _sqrt_mod(D % ell, ell)
    for b in (r, ell - r, r + ell, 2 * ell - r):
        if (b - D) % 2 == 0 and (b * b - D) % (4 * ell) == 0:
            return (ell, b, (b * b - D) // (4 * ell))
    raise ValueError("no prime form found")


def _sqrt_mod(a, p):
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    raise ValueError("not a square")


def is_principal(form, D):
    return form_cycle(form, D) == form_cycle(principal_form(D), D)


def frobenius_order(ell, D, h):
    """Order of Frobenius at ell in the unramified cyclic degree-h extension
    of Q(sqrt(D)) (prime h): 'inert' / 1 / h for inert, principal split,
    non-principal split."""
    if D % ell == 0:
        raise ValueError("ramified prime")
    if legendre(D % ell, ell) == -1:
        return "inert"
    return 1 if is_principal(prime_form(ell, D), D) else h
