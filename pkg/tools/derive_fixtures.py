#!/usr/bin/env python3
"""Re-derive the shipped number-field fixtures from first principles, offline.

Run from the repository root:  python3 tools/derive_fixtures.py

Prints every derived quantity next to the value shipped in
src/twistparity/fixtures/*.json; exits nonzero on any mismatch.  The test
suite performs the same comparison (tests/test_fixtures.py).
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from twistparity.numtheory import cube_class_mu3, legendre  # noqa: E402
from twistparity.quadforms import class_cycles, frobenius_order  # noqa: E402

FIXDIR = pathlib.Path(__file__).resolve().parent.parent / "src/twistparity/fixtures"

FAIL = []


def check(name, got, want):
    ok = got == want
    print(f"  {name}: derived {got!r}, shipped {want!r} {'ok' if ok else 'MISMATCH'}")
    if not ok:
        FAIL.append(name)


def main():
    print("== discriminant 1093: D5 field (unramified quintic over Q(sqrt(1093))) ==")
    check("narrow class number", len(class_cycles(1093)), 5)
    d5 = json.loads((FIXDIR / "d5_1093.json").read_text())
    for ell in (11, 67):
        order = frobenius_order(ell, 1093, 5)
        want_D = d5["primes"][str(ell)]["D"]
        derived_D = [] if order == 1 else [1]
        check(f"D_{ell} generators", derived_D, want_D)
    # 1093 = 1 (mod 4): ramified with the local kernel field Q_1093(sqrt(1093))
    check("1093 = 1 mod 4", 1093 % 4, 1)

    print("== discriminant 257: S3 sextic (Galois closure of x^3 - 5x - 3) ==")
    check("narrow class number", len(class_cycles(257)), 3)
    check("cubic discriminant", -4 * (-5) ** 3 - 27 * (-3) ** 2, 257)
    s3 = json.loads((FIXDIR / "s3_257.json").read_text())
    for ell in (2, 7, 13):
        order = frobenius_order(ell, 257, 3)
        roots = [x for x in range(ell) if (x**3 - 5 * x - 3) % ell == 0]
        if order == "inert":
            check(f"cubic has one root mod {ell}", len(roots), 1)
            derived_D = [3]
        elif order == 1:
            check(f"cubic splits mod {ell}", len(roots), 3)
            derived_D = []
        else:
            check(f"cubic irreducible mod {ell}", len(roots), 0)
            derived_D = [1]
        check(f"D_{ell} generators", derived_D, s3["primes"][str(ell)]["D"])

    print("== Q(zeta19)+ base data ==")
    # residue degrees: order of ell in (Z/19)^x modulo +-1
    def degree_in_plus_part(ell):
        x, k = ell % 19, 1
        while x != 1 and x != 18:
            x = x * ell % 19
            k += 1
        return k

    check("residue degree of 7", degree_in_plus_part(7), 3)
    check("residue degree of 2", degree_in_plus_part(2), 9)
    check("q over 7", 7**3, 343)
    check("q over 2", 2**9, 512)
    check("mu_3 in F_v over 7", 343 % 3, 1)
    check("mu_3 not in F_v over 2", 512 % 3, 2)
    # 2 is a cube in F_343: its multiplicative order 3 divides (343 - 1) / 3
    check("order of 2 mod 7", pow(2, 3, 7), 1)
    check("(343-1)/3 divisible by 3", ((343 - 1) // 3) % 3, 0)
    m2 = json.loads((FIXDIR / "zeta19_s3_m2.json").read_text())
    check("v|7 split completely for m = 2", m2["primes"]["7a"]["D"], [])
    m14 = json.loads((FIXDIR / "zeta19_s3_m14.json").read_text())
    check("v|7 ramified cubic for m = 14", m14["primes"]["7a"]["I"], [1])
    check("kummer class of 14 at 2", cube_class_mu3(14, 2), cube_class_mu3(2, 2))

    if FAIL:
        print(f"\n{len(FAIL)} mismatch(es): {FAIL}")
        return 1
    print("\nall fixture quantities re-derived successfully")
    return 0


if __name__ == "__main__":
    sys.exit(main())
