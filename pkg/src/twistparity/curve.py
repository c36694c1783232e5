"""Weierstrass models over Q: invariants, Tate's algorithm, point counts,
conductors, and the refined reduction classification used by the parity engine.

Tate's algorithm is implemented in full (all residue characteristics), with the
Kodaira type, conductor exponent and per-prime minimal model extracted; the
Ogg relation v(Delta_min) = f + m - 1 is asserted on every run as an internal
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numtheory import (
    Place,
    SquareClass,
    is_prime,
    legendre,
    primes_up_to,
    square_class,
    valuation,
)

__all__ = [
    "WeierstrassCurve",
    "KodairaSymbol",
    "LocalReductionData",
    "ReductionKind",
    "SingularCurveError",
    "NeedsOverrideError",
    "tate_local",
    "trace_of_frobenius",
    "conductor",
    "bad_primes",
    "classify_reduction",
]


class SingularCurveError(ValueError):
    pass


class NeedsOverrideError(ValueError):
    """Wild potentially-good case where the inertia order is not decided by
    the built-in rules and must be supplied explicitly."""


class BadReductionError(ValueError):
    pass


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _c_invariants(b2, b4, b6, b8):
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str | None = None

    def __post_init__(self):
        for a in self.ainvs:
            if not isinstance(a, int):
                raise SingularCurveError("a-invariants must be integers")
        if self.discriminant == 0:
            raise SingularCurveError("singular curve: discriminant is zero")

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self):
        return _b_invariants(*self.ainvs)

    @property
    def c_invariants(self):
        b2, b4, b6, b8 = self.b_invariants
        c4, c6, _ = _c_invariants(b2, b4, b6, b8)
        return c4, c6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = _b_invariants(*self.ainvs)
        return _c_invariants(b2, b4, b6, b8)[2]

    @property
    def j_invariant(self) -> Fraction:
        c4, _ = self.c_invariants
        return Fraction(c4**3, self.discriminant)

    def invariants(self):
        """(b2, b4, b6, b8, c4, c6, Delta, j)."""
        b2, b4, b6, b8 = self.b_invariants
        c4, c6, disc = _c_invariants(b2, b4, b6, b8)
        return b2, b4, b6, b8, c4, c6, disc, Fraction(c4**3, disc)

    @staticmethod
    def from_ainvs(ainvs, label=None) -> "WeierstrassCurve":
        a = [int(x) for x in ainvs]
        if len(a) != 5:
            raise SingularCurveError("expected five a-invariants")
        return WeierstrassCurve(*a, label=label)

    def __repr__(self):
        lbl = f" {self.label}" if self.label else ""
        return f"E{lbl}{list(self.ainvs)}"


def transform(ainvs, r=0, s=0, t=0, u=1):
    """Change of Weierstrass coordinates x = u^2 x' + r, y = u^3 y' + u^2 s x' + t."""
    a1, a2, a3, a4, a6 = ainvs
    A1 = a1 + 2 * s
    A2 = a2 - s * a1 + 3 * r - s * s
    A3 = a3 + r * a1 + 2 * t
    A4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    A6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    out = (A1, A2, A3, A4, A6)
    if u != 1:
        for Ai, i in zip(out, (1, 2, 3, 4, 6)):
            if Ai % u**i:
                raise SingularCurveError("non-integral rescaling")
        out = tuple(Ai // u**i for Ai, i in zip(out, (1, 2, 3, 4, 6)))
    return out


@dataclass(frozen=True)
class KodairaSymbol:
    kind: str  # "I0" "In" "II" "III" "IV" "I0*" "In*" "IV*" "III*" "II*"
    n: int = 0

    def __str__(self):
        if self.kind == "In":
            return f"I{self.n}"
        if self.kind == "In*":
            return f"I{self.n}*"
        return self.kind

    @property
    def components(self) -> int:
        return {
            "I0": 1, "In": max(self.n, 1), "II": 1, "III": 2, "IV": 3,
            "I0*": 5, "In*": 5 + self.n, "IV*": 7, "III*": 8, "II*": 9,
        }[self.kind]


class ReductionKind:
    GOOD = "Good"
    SPLIT = "SplitMult"
    NONSPLIT = "NonsplitMult"
    PMR = "AdditivePMR"
    PGA = "AdditivePGA"
    PGNA = "AdditivePGNA"

    MULTIPLICATIVE = (SPLIT, NONSPLIT)
    ADDITIVE = (PMR, PGA, PGNA)


@dataclass
class LocalReductionData:
    ell: int
    kodaira: KodairaSymbol
    f: int
    v_delta_min: int
    vj: int | None  # None means +infinity (c4 = 0)
    reduction: str  # a ReductionKind value, or "Additive" before classification
    minimal_model: tuple
    split: bool | None = None
    a_ell: int | None = None
    minus_c6_class: SquareClass | None = None
    e: int | None = None  # inertia image order, potentially good case
    pg_override_used: bool = False
    mu_p_in_base: bool | None = None
    delta_min_cube_class: object = None  # synthetic-data hook; computed from
    #   the minimal model when absent

    @property
    def is_good(self):
        return self.reduction == ReductionKind.GOOD

    @property
    def is_multiplicative(self):
        return self.reduction in ReductionKind.MULTIPLICATIVE

    @property
    def is_additive(self):
        return self.reduction in ReductionKind.ADDITIVE or self.reduction == "Additive"


def _curve_poly_values(ainvs, x, y, p):
    a1, a2, a3, a4, a6 = ainvs
    F = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
    Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
    Fy = 2 * y + a1 * x + a3
    return F % p, Fx % p, Fy % p


def _singular_point(ainvs, p):
    """The unique singular point of the reduced curve, lifted to small ints."""
    if p == 2:
        for x in range(2):
            for y in range(2):
                if _curve_poly_values(ainvs, x, y, 2) == (0, 0, 0):
                    return x, y
        raise SingularCurveError("no singular point found at 2")
    inv2 = pow(2, -1, p)
    a1, a2, a3, a4, a6 = ainvs
    for x in range(p):
        y = (-(a1 * x + a3) * inv2) % p
        F, Fx, _ = _curve_poly_values(ainvs, x, y, p)
        if F == 0 and Fx == 0:
            return x, y
    raise SingularCurveError(f"no singular point found at {p}")


def _split_multiplicative(ainvs, p):
    """Tangent-cone rationality at the node of a multiplicative reduction."""
    r, t = _singular_point(ainvs, p)
    a1, a2, a3, a4, a6 = transform(ainvs, r=r, t=t)
    if p == 2:
        # node forces a1 odd; the cone y^2 + xy + a2 x^2 splits iff a2 is even
        if a1 % 2 == 0:
            raise SingularCurveError("cusp where node expected at 2")
        return a2 % 2 == 0
    disc = (a1 * a1 + 4 * a2) % p
    if disc == 0:
        raise SingularCurveError("cusp where node expected")
    return legendre(disc, p) == 1


def _poly_gcd_fp(f, g, p):
    f = [c % p for c in f]
    g = [c % p for c in g]

    def trim(h):
        while h and h[-1] % p == 0:
            h.pop()
        return h

    f, g = trim(f), trim(g)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            coef = f[-1] * inv % p
            shift = len(f) - len(g)
            for i, c in enumerate(g):
                f[i + shift] = (f[i + shift] - coef * c) % p
            f = trim(f)
            if not f:
                break
        f, g = g, f
    return f


def _cubic_root_structure(A2, A4, A6, p):
    """For P(T) = T^3 + A2 T^2 + A4 T + A6 over F_p: (kind, multiple_root)
    where kind is 'separable', 'double', or 'triple'."""
    P = [A6 % p, A4 % p, A2 % p, 1]
    dP = [A4 % p, (2 * A2) % p, 3 % p]
    g = _poly_gcd_fp(P, dP, p)
    if len(g) <= 1:
        return "separable", None
    for tau in range(p):
        if (tau**3 + A2 * tau * tau + A4 * tau + A6) % p == 0:
            # multiple root must be rational; check multiplicity 3
            shifted = [
                (A6 + A4 * tau + A2 * tau * tau + tau**3) % p,
                (A4 + 2 * A2 * tau + 3 * tau * tau) % p,
                (A2 + 3 * tau) % p,
            ]
            if shifted[0] == 0 and shifted[1] == 0:
                if shifted[2] == 0:
                    return "triple", tau
                return "double", tau
    raise SingularCurveError("inseparable cubic without rational multiple root")


def _quad_y_separable(b, c, p):
    """Y^2 + b Y - c over F_p: separable? If not, the double root."""
    if p == 2:
        if b % 2:
            return True, None
        return False, c % 2
    disc = (b * b + 4 * c) % p
    if disc:
        return True, None
    return False, (-b * pow(2, -1, p)) % p


def _quad_x_separable(a, b, c, p):
    """a X^2 + b X + c over F_p, a nonzero: separable? If not, the double root."""
    if p == 2:
        if b % 2:
            return True, None
        return False, (c * pow(a, -1, 2)) % 2
    disc = (b * b - 4 * a * c) % p
    if disc:
        return True, None
    return False, (-b * pow(2 * a, -1, p)) % p


def _normalize_step6(ainvs, p):
    """Coordinates with p|a1, p|a2, p^2|a3, p^2|a4, p^3|a6 (type >= I0*)."""

    def ok(m):
        a1, a2, a3, a4, a6 = m
        return (a1 % p == 0 and a2 % p == 0 and a3 % p**2 == 0
                and a4 % p**2 == 0 and a6 % p**3 == 0)

    if p >= 5:
        p3 = p**3
        a1 = ainvs[0]
        s = (-a1 * pow(2, -1, p3)) % p3
        m = transform(ainvs, s=s)
        r = (-m[1] * pow(3, -1, p3)) % p3
        m = transform(m, r=r)
        t = (-m[2] * pow(2, -1, p3)) % p3
        m = transform(m, t=t)
        if not ok(m):
            raise SingularCurveError("step-6 normalization failed")
        return m
    # wild primes: bounded search (existence guaranteed once steps II-IV fail;
    # the target congruences only involve r, s, t mod p^3)
    p3 = p**3
    for s in range(p3):
        m1 = transform(ainvs, s=s)
        if m1[0] % p:
            continue
        for r in range(p3):
            m2 = transform(m1, r=r)
            if m2[1] % p:
                continue
            for t in range(p3):
                m3 = transform(m2, t=t)
                if ok(m3):
                    return m3
    raise SingularCurveError("step-6 normalization failed (wild)")


def tate_local(curve: WeierstrassCurve, ell: int) -> LocalReductionData:
    """Run Tate's algorithm at ell: Kodaira type, conductor exponent, minimal
    model, and the coarse reduction type with splitness for I_n."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    p = ell
    model = curve.ainvs
    minimal = model

    while True:
        b2, b4, b6, b8 = _b_invariants(*model)
        c4, c6, disc = _c_invariants(b2, b4, b6, b8)
        n = valuation(disc, p) if disc % p == 0 else 0
        minimal = model

        if n == 0:
            return _finish(curve, p, KodairaSymbol("I0"), 0, 0, minimal)

        if c4 % p:
            split = _split_multiplicative(model, p)
            data = _finish(curve, p, KodairaSymbol("In", n), 1, n, minimal)
            data.reduction = ReductionKind.SPLIT if split else ReductionKind.NONSPLIT
            data.split = split
            return data

        # additive reduction from here on
        r0, t0 = _singular_point(model, p)
        model = transform(model, r=r0, t=t0)
        a1, a2, a3, a4, a6 = model

        if a6 % p**2:
            return _finish(curve, p, KodairaSymbol("II"), n, n, model)
        b8 = _b_invariants(*model)[3]
        if b8 % p**3:
            return _finish(curve, p, KodairaSymbol("III"), n - 1, n, model)
        b6 = _b_invariants(*model)[2]
        if b6 % p**3:
            return _finish(curve, p, KodairaSymbol("IV"), n - 2, n, model)

        model = _normalize_step6(model, p)
        a1, a2, a3, a4, a6 = model
        kind, tau = _cubic_root_structure(a2 // p, a4 // p**2, a6 // p**3, p)

        if kind == "separable":
            return _finish(curve, p, KodairaSymbol("I0*"), n - 4, n, model)

        if kind == "double":
            model = transform(model, r=p * tau)
            m = 1
            j = 1
            while True:
                a1, a2, a3, a4, a6 = model
                if m % 2 == 1:
                    sep, root = _quad_y_separable(a3 // p ** (j + 1), a6 // p ** (2 * j + 2), p)
                    if sep:
                        break
                    model = transform(model, t=p ** (j + 1) * root)
                else:
                    sep, root = _quad_x_separable(a2 // p, a4 // p ** (j + 2), a6 // p ** (2 * j + 3), p)
                    if sep:
                        break
                    model = transform(model, r=p ** (j + 1) * root)
                    j += 1
                m += 1
            return _finish(curve, p, KodairaSymbol("In*", m), n - 4 - m, n, model)

        # triple root
        model = transform(model, r=p * tau)
        a1, a2, a3, a4, a6 = model
        sep, root = _quad_y_separable(a3 // p**2, a6 // p**4, p)
        if sep:
            return _finish(curve, p, KodairaSymbol("IV*"), n - 6, n, model)
        model = transform(model, t=p**2 * root)
        a1, a2, a3, a4, a6 = model
        if a4 % p**4:
            return _finish(curve, p, KodairaSymbol("III*"), n - 7, n, model)
        if a6 % p**6:
            return _finish(curve, p, KodairaSymbol("II*"), n - 8, n, model)
        # non-minimal: rescale and restart
        model = transform(model, u=p)


def _finish(curve, p, kod, f, n, model) -> LocalReductionData:
    if n != f + kod.components - 1:
        raise SingularCurveError(
            f"Ogg consistency failed at {p}: v(D)={n}, f={f}, type {kod}")
    b2, b4, b6, b8 = _b_invariants(*model)
    c4, c6, disc = _c_invariants(b2, b4, b6, b8)
    vj = 3 * valuation(c4, p) - n if c4 != 0 else None
    if f == 0:
        red = ReductionKind.GOOD
    elif f == 1:
        red = "Multiplicative"  # refined by caller
    else:
        red = ReductionKind.PMR if (vj is not None and vj < 0) else "Additive"
    data = LocalReductionData(
        ell=p, kodaira=kod, f=f, v_delta_min=n, vj=vj,
        reduction=red, minimal_model=tuple(model),
    )
    if red in (ReductionKind.PMR, "Multiplicative") or f == 1:
        data.minus_c6_class = square_class(-c6, Place.finite(p))
    if f == 0:
        data.a_ell = trace_on_model(model, p)
    return data


def trace_on_model(model, p) -> int:
    """a_p for a model with good reduction at p, by direct point counting."""
    a1, a2, a3, a4, a6 = model
    if p == 2:
        count = 1  # point at infinity
        for x in range(2):
            for y in range(2):
                if _curve_poly_values(model, x, y, 2)[0] == 0:
                    count += 1
        return 2 + 1 - count
    b2, b4, b6, _ = _b_invariants(*model)
    total = 0
    for x in range(p):
        rhs = (4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p
        total += legendre(rhs, p)
    return -total


def trace_of_frobenius(curve: WeierstrassCurve, ell: int) -> int:
    """a_ell = ell + 1 - #E(F_ell) for a prime of good reduction."""
    data = tate_local(curve, ell)
    if not data.is_good:
        raise BadReductionError(f"bad reduction at {ell}")
    return data.a_ell


@lru_cache(maxsize=None)
def _local_data_cached(ainvs, label, ell):
    return tate_local(WeierstrassCurve(*ainvs, label=label), ell)


def local_data(curve: WeierstrassCurve, ell: int) -> LocalReductionData:
    return _local_data_cached(curve.ainvs, curve.label, ell)


def bad_primes(curve: WeierstrassCurve) -> list:
    """Primes of bad reduction (of the minimal model)."""
    disc = abs(curve.discriminant)
    out = []
    for p in _factor(disc):
        if local_data(curve, p).f > 0:
            out.append(p)
    return out


def _factor(n: int) -> list:
    out = []
    for p in primes_up_to(10000):
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    if n > 1:
        if not is_prime(n):
            raise ValueError(f"cannot factor residual {n}")
        out.append(n)
    return sorted(out)


def conductor(curve: WeierstrassCurve) -> int:
    N = 1
    for p in bad_primes(curve):
        N *= p ** local_data(curve, p).f
    return N


def classify_reduction(curve: WeierstrassCurve, ell: int, p: int,
                       override: dict | None = None, q: int | None = None) -> LocalReductionData:
    """Refine the Tate output at ell into the six reduction classes as seen
    from the cyclotomic line of the base completion (residue cardinality q).

    For potentially good reduction the inertia order is e = 12/gcd(v(Dmin), 12)
    when tame (ell >= 5, or ell in {2,3} with conductor exponent 2); wild cases
    need an explicit override {"e": ..., "kind": "PGA"|"PGNA"}.  The local image
    on the cyclotomic line is abelian iff q = 1 (mod e).
    """
    if p == ell:
        raise ValueError("classification is only for residue char away from p")
    q = q if q is not None else ell
    data = local_data(curve, ell)
    out = LocalReductionData(**vars(data))
    out.mu_p_in_base = (q - 1) % p == 0
    if data.is_multiplicative:
        # splitness over an unramified extension of even residue degree
        deg = 0
        qq = 1
        while qq < q:
            qq *= ell
            deg += 1
        if qq != q:
            raise ValueError("q must be a power of the residue characteristic")
        if deg % 2 == 0 and out.reduction == ReductionKind.NONSPLIT:
            out.reduction = ReductionKind.SPLIT
            out.split = True
        return out
    if data.is_good or data.reduction == ReductionKind.PMR:
        return out
    # potentially good additive
    e = None
    if override and override.get("e"):
        e = int(override["e"])
        out.pg_override_used = True
    elif ell >= 5 or data.f == 2:
        e0 = 12 // _gcd(data.v_delta_min % 12 or 12, 12)
        if ell >= 5 or e0 % ell:
            e = e0
    if e is None:
        raise NeedsOverrideError(
            f"wild potentially good reduction at {ell} (f={data.f}): supply e and kind")
    out.e = e
    if override and override.get("kind"):
        out.reduction = (ReductionKind.PGA if override["kind"].upper() == "PGA"
                         else ReductionKind.PGNA)
        out.pg_override_used = True
    else:
        out.reduction = ReductionKind.PGA if (q - 1) % e == 0 else ReductionKind.PGNA
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
