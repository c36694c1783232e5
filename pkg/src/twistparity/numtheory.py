"""Exact local arithmetic over Q: residue symbols, square and cube classes, Hilbert symbols.

Everything here is pure integer/Fraction arithmetic; no floating point.  Square
classes are canonical representatives of F_v^x/(F_v^x)^2 at a place v of Q, with
the standard eight representatives {+-1, +-2, +-5, +-10} at v = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Place",
    "SquareClass",
    "CubeClassMu3",
    "is_prime",
    "primes_up_to",
    "valuation",
    "legendre",
    "square_class",
    "hilbert_symbol",
    "cube_class_mu3",
    "unit_is_square_unramified",
    "quad_char_minus_one",
]


class NumTheoryError(ValueError):
    pass


# --- primes -----------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond desk scale."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def primes_up_to(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, b in enumerate(sieve) if b)


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero int or Fraction."""
    x = Fraction(x)
    if x == 0:
        raise NumTheoryError("valuation of zero")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit_part(x, p: int) -> Fraction:
    return Fraction(x) / Fraction(p) ** valuation(x, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


# --- places and square classes ----------------------------------------------


@dataclass(frozen=True)
class Place:
    """A place of Q: finite (odd or 2) or the real place."""

    ell: int | None  # None for the real place

    @staticmethod
    def finite(ell: int) -> "Place":
        if ell < 2 or not is_prime(ell):
            raise NumTheoryError(f"{ell} is not a prime")
        return Place(ell)

    @staticmethod
    def real() -> "Place":
        return Place(None)

    @property
    def is_real(self) -> bool:
        return self.ell is None

    def __repr__(self):
        return "v_real" if self.is_real else f"v_{self.ell}"


# Representatives for Q_2^x / squares, keyed by (valuation mod 2, unit mod 8).
_TWO_ADIC_REP = {
    (0, 1): 1, (0, 3): -5, (0, 5): 5, (0, 7): -1,
    (1, 1): 2, (1, 3): -10, (1, 5): 10, (1, 7): -2,
}


@dataclass(frozen=True)
class SquareClass:
    """Class of a nonzero rational in F_v^x / (F_v^x)^2.

    Odd finite v: (valuation parity, whether the unit part is a residue-field
    square).  v = 2: one of the eight representatives.  Real v: the sign.
    """

    place: Place
    val_parity: int | None = None      # finite places
    unit_square: bool | None = None    # odd finite places
    two_adic_rep: int | None = None    # place 2
    sign: int | None = None           # real place

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.place != other.place:
            raise NumTheoryError("square classes at different places")
        v = self.place
        if v.is_real:
            return SquareClass(v, sign=self.sign * other.sign)
        if v.ell == 2:
            return square_class(self.two_adic_rep * other.two_adic_rep, v)
        return SquareClass(
            v,
            val_parity=(self.val_parity + other.val_parity) % 2,
            unit_square=(self.unit_square == other.unit_square),
        )

    @property
    def is_trivial(self) -> bool:
        if self.place.is_real:
            return self.sign == 1
        if self.place.ell == 2:
            return self.two_adic_rep == 1
        return self.val_parity == 0 and self.unit_square

    @property
    def is_ramified(self) -> bool:
        """Whether the quadratic extension F_v(sqrt(class)) is ramified."""
        if self.place.is_real:
            return self.sign == -1
        if self.place.ell == 2:
            return self.two_adic_rep not in (1, 5)
        return self.val_parity == 1 or not (self.val_parity == 0 and self.unit_square)

    @property
    def is_unramified_nontrivial(self) -> bool:
        if self.place.is_real or self.place.ell == 2:
            return (not self.is_trivial) and (not self.is_ramified)
        return self.val_parity == 0 and not self.unit_square

    def representative(self) -> int:
        """A small integer representing the class."""
        if self.place.is_real:
            return self.sign
        if self.place.ell == 2:
            return self.two_adic_rep
        ell = self.place.ell
        u = 1 if self.unit_square else _least_nonresidue(ell)
        return u * (ell if self.val_parity else 1)

    def to_dict(self) -> dict:
        if self.place.is_real:
            return {"v": "real", "sign": self.sign}
        if self.place.ell == 2:
            return {"v": 2, "rep": self.two_adic_rep}
        return {
            "v": self.place.ell,
            "val_parity": self.val_parity,
            "unit": "sq" if self.unit_square else "nsq",
        }


@lru_cache(maxsize=None)
def _least_nonresidue(ell: int) -> int:
    for u in range(2, ell):
        if legendre(u, ell) == -1:
            return u
    raise NumTheoryError(f"no nonresidue mod {ell}")


def square_class(x, v: Place) -> SquareClass:
    """Class of a nonzero rational x in F_v^x/(F_v^x)^2."""
    x = Fraction(x)
    if x == 0:
        raise NumTheoryError("square class of zero")
    if v.is_real:
        return SquareClass(v, sign=1 if x > 0 else -1)
    ell = v.ell
    val = valuation(x, ell)
    u = _unit_part(x, ell)
    if ell == 2:
        umod8 = (u.numerator * pow(u.denominator, -1, 8)) % 8
        return SquareClass(v, val_parity=val % 2, two_adic_rep=_TWO_ADIC_REP[(val % 2, umod8)])
    num = (u.numerator * pow(u.denominator, -1, ell)) % ell
    return SquareClass(v, val_parity=val % 2, unit_square=legendre(num, ell) == 1)


def unit_is_square_unramified(x, ell: int, f: int) -> bool:
    """Whether an ell-adic unit x is a square in the unramified extension of
    residue degree f over Q_ell (odd ell)."""
    if ell == 2:
        raise NumTheoryError("use two-adic classes at 2")
    if valuation(x, ell) != 0:
        raise NumTheoryError("not a unit")
    # u^((ell^f - 1)/2) = legendre(u, ell)^f for rational units.
    return f % 2 == 0 or square_class(x, Place.finite(ell)).unit_square


def hilbert_symbol(a, b, v: Place) -> int:
    """Quadratic Hilbert symbol (a, b)_v for nonzero rationals."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise NumTheoryError("Hilbert symbol of zero")
    if v.is_real:
        return -1 if (a < 0 and b < 0) else 1
    ell = v.ell
    alpha, beta = valuation(a, ell), valuation(b, ell)
    u, w = _unit_part(a, ell), _unit_part(b, ell)
    if ell == 2:
        um = (u.numerator * pow(u.denominator, -1, 16)) % 16
        wm = (w.numerator * pow(w.denominator, -1, 16)) % 16
        eps = ((um - 1) // 2) * ((wm - 1) // 2)
        omega_u = (um * um - 1) // 8
        omega_w = (wm * wm - 1) // 8
        exp = eps + alpha * omega_w + beta * omega_u
        return -1 if exp % 2 else 1
    lu = legendre((u.numerator * pow(u.denominator, -1, ell)) % ell, ell)
    lw = legendre((w.numerator * pow(w.denominator, -1, ell)) % ell, ell)
    sign = 1
    if (alpha * beta) % 2 and ell % 4 == 3:
        sign = -sign
    if beta % 2 and lu == -1:
        sign = -sign
    if alpha % 2 and lw == -1:
        sign = -sign
    return sign


def quad_char_minus_one(d: SquareClass, q: int) -> int:
    """Value at -1 of the quadratic character of F_v cut out by sqrt(d), where
    F_v is the unramified extension of Q_ell with residue cardinality q.

    By local reciprocity this is (-1, d)_{F_v}.  Only the odd residue case is
    needed for ramified d; for q a power of 2 we refuse rather than guess.
    """
    if d.place.is_real:
        raise NumTheoryError("archimedean d")
    ell = d.place.ell
    if q == ell:
        return hilbert_symbol(-1, d.representative(), d.place)
    if ell == 2:
        raise NumTheoryError("2-adic quadratic character over an extension not supported")
    # (-1, d) = (residue-field Legendre of -1)^{v(d)}; unit parts contribute
    # trivially since -1 pairs trivially with units at odd residue char.
    if d.val_parity == 0:
        return 1
    return -1 if (q - 1) // 2 % 2 else 1


# --- cube classes in Q_ell(mu_3), for ell = 2 (mod 3) -------------------------


@dataclass(frozen=True)
class CubeClassMu3:
    """Class of a rational in L^x/(L^x)^3 where L = Q_ell(mu_3), ell = 2 (mod 3).

    L/Q_ell is unramified quadratic with residue field of ell^2 elements, so a
    class is (valuation mod 3, unit exponent mod 3 w.r.t. a fixed non-cube).
    """

    ell: int
    val_mod_3: int
    unit_class: int

    def __mul__(self, other: "CubeClassMu3") -> "CubeClassMu3":
        if self.ell != other.ell:
            raise NumTheoryError("cube classes at different primes")
        return CubeClassMu3(
            self.ell,
            (self.val_mod_3 + other.val_mod_3) % 3,
            (self.unit_class + other.unit_class) % 3,
        )

    @property
    def is_trivial(self) -> bool:
        return self.val_mod_3 == 0 and self.unit_class == 0

    def generates_same_cubic(self, other: "CubeClassMu3") -> bool:
        """Whether the two classes cut out the same cubic Kummer extension."""
        if self.ell != other.ell:
            return False
        if self.is_trivial or other.is_trivial:
            return False
        sq = CubeClassMu3(self.ell, (2 * self.val_mod_3) % 3, (2 * self.unit_class) % 3)
        return other == self or other == sq

    def to_dict(self) -> dict:
        return {"ell": self.ell, "val_mod_3": self.val_mod_3, "unit_class": self.unit_class}


def _fq2_mul(x, y, ell):
    # F_{ell^2} = F_ell[t]/(t^2 + t + 1); valid since ell = 2 (mod 3).
    a, b = x
    c, d = y
    # (a + bt)(c + dt) = ac + (ad + bc) t + bd t^2,  t^2 = -t - 1
    return ((a * c - b * d) % ell, (a * d + b * c - b * d) % ell)


def _fq2_pow(x, n, ell):
    r = (1, 0)
    while n:
        if n & 1:
            r = _fq2_mul(r, x, ell)
        x = _fq2_mul(x, x, ell)
        n >>= 1
    return r


@lru_cache(maxsize=None)
def _mu3_generator_power(ell: int) -> tuple:
    """Image under u -> u^((ell^2-1)/3) of a fixed non-cube of F_{ell^2}."""
    e = (ell * ell - 1) // 3
    for a in range(ell):
        for b in range(ell):
            if (a, b) == (0, 0):
                continue
            z = _fq2_pow((a, b), e, ell)
            if z != (1, 0):
                return z
    raise NumTheoryError("no non-cube found")  # unreachable


def cube_class_mu3(x, ell: int) -> CubeClassMu3:
    """Cube class of a nonzero rational in Q_ell(mu_3), ell = 2 (mod 3)."""
    if ell == 3 or ell % 3 != 2:
        raise NumTheoryError("cube classes modelled only for ell = 2 (mod 3)")
    x = Fraction(x)
    if x == 0:
        raise NumTheoryError("cube class of zero")
    val = valuation(x, ell)
    u = _unit_part(x, ell)
    num = (u.numerator * pow(u.denominator, -1, ell)) % ell
    z = _fq2_pow((num, 0), (ell * ell - 1) // 3, ell)
    if z == (1, 0):
        cls = 0
    else:
        g = _mu3_generator_power(ell)
        cls = 1 if z == g else 2
    return CubeClassMu3(ell, val % 3, cls)
