"""Bounded support/refutation for E1[p] = E2[p] via Fourier coefficients.

A "supported" verdict is explicitly a bounded verification (coefficients agree
mod p at all good primes up to the bound), never a proof; a "refuted" verdict
is a hard disproof (one mismatch at a common good prime).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .curve import WeierstrassCurve, bad_primes, local_data
from .numtheory import primes_up_to

__all__ = ["CongruenceVerdict", "sturm_bound", "check_congruence"]


@dataclass
class CongruenceVerdict:
    p: int
    bound_used: int
    checked_primes: list
    status: str  # "supported" or "refuted"
    refutation: tuple | None = None  # (ell, a1, a2)
    skipped_primes: list = field(default_factory=list)  # (ell, reason)

    @property
    def supported(self) -> bool:
        return self.status == "supported"

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "bound_used": self.bound_used,
            "status": self.status,
            "checked_primes": self.checked_primes,
            "skipped_primes": [list(x) for x in self.skipped_primes],
            "note": ("agreement verified for all good primes up to the bound; "
                     "this supports but does not prove the mod-p isomorphism"),
        }
        if self.refutation:
            out["refuted_at"] = {
                "ell": self.refutation[0],
                "a_ell": [self.refutation[1], self.refutation[2]],
            }
        return out


def sturm_bound(N1: int, N2: int, p: int) -> int:
    """ceil(N * prod_{q | N} (1 + 1/q) / 6) with N = lcm(N1, N2)."""
    N = lcm(N1, N2)
    idx = Fraction(N)
    n = N
    for q in primes_up_to(N if N < 10**6 else 10**6):
        if n % q == 0:
            idx *= Fraction(q + 1, q)
            while n % q == 0:
                n //= q
    if n > 1:
        idx *= Fraction(n + 1, n)
    b = idx / 6
    return int(b) if b.denominator == 1 else int(b) + 1


def check_congruence(E1: WeierstrassCurve, E2: WeierstrassCurve, p: int,
                     bound: int | None = None) -> CongruenceVerdict:
    """Compare a_ell(E1) = a_ell(E2) (mod p) at all good primes up to the bound."""
    if p % 2 == 0 or p < 3:
        raise ValueError("p must be an odd prime")
    from .curve import conductor

    N1, N2 = conductor(E1), conductor(E2)
    B = bound if bound is not None else sturm_bound(N1, N2, p)
    bad = set(bad_primes(E1)) | set(bad_primes(E2))
    checked, skipped = [], []
    for ell in primes_up_to(B):
        if ell == p:
            skipped.append((ell, "divides p"))
            continue
        if ell in bad:
            skipped.append((ell, "bad reduction"))
            continue
        a1 = local_data(E1, ell).a_ell
        a2 = local_data(E2, ell).a_ell
        if (a1 - a2) % p:
            return CongruenceVerdict(p, B, checked, "refuted", (ell, a1, a2), skipped)
        checked.append(ell)
    return CongruenceVerdict(p, B, checked, "supported", None, skipped)
