"""Exact character theory for the finite groups used by the parity engine.

Groups are explicit multiplication tables (orders <= 48); character values live
in cyclotomic fields Q(zeta_n), n the group exponent, represented exactly as
polynomials modulo the n-th cyclotomic polynomial with Fraction coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

__all__ = [
    "Cyc",
    "FiniteGroup",
    "CharacterRep",
    "cyclic",
    "dihedral",
    "sl2f3",
    "gl2f3",
    "group_by_name",
    "character_table",
    "inner_product",
    "restrict",
    "frobenius_schur",
    "det_character",
    "subgroup_group",
]


class RepTheoryError(ValueError):
    pass


# --- exact cyclotomic numbers --------------------------------------------------


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1, 1) / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + len(b) - 1] * inv
        if coef:
            q[i] = coef
            for j, y in enumerate(b):
                a[i + j] -= coef * y
    return _poly_trim(q), _poly_trim(a)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Coefficients of the n-th cyclotomic polynomial (ascending)."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not rem
    return tuple(poly)


class Cyc:
    """An element of Q(zeta_n), reduced modulo the n-th cyclotomic polynomial."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        phi = cyclotomic_poly(n)
        c = [Fraction(x) for x in coeffs]
        if len(c) >= len(phi):
            _, c = _poly_divmod(c, list(phi))
        self.n = n
        self.coeffs = tuple(_poly_trim(list(c)))

    @staticmethod
    def root(n: int, k: int) -> "Cyc":
        """zeta_n^k."""
        k %= n
        return Cyc(n, [0] * k + [1])

    @staticmethod
    def rational(n: int, q) -> "Cyc":
        return Cyc(n, [Fraction(q)])

    def promote(self, m: int) -> "Cyc":
        """Embed into Q(zeta_m) for n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise RepTheoryError("no embedding of cyclotomic fields")
        d = m // self.n
        out = Cyc.rational(m, 0)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + Cyc(m, [0] * (k * d) + [c])
        return out

    def _pair(self, other):
        if isinstance(other, Cyc):
            if self.n == other.n:
                return self, other
            m = self.n * other.n // _gcd(self.n, other.n)
            return self.promote(m), other.promote(m)
        return self, Cyc.rational(self.n, other)

    def __add__(self, other):
        a, b = self._pair(other)
        ca, cb = list(a.coeffs), list(b.coeffs)
        if len(ca) < len(cb):
            ca, cb = cb, ca
        out = list(ca)
        for i, x in enumerate(cb):
            out[i] += x
        return Cyc(a.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyc) else Cyc.rational(self.n, -Fraction(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        return Cyc(a.n, _poly_mul(list(a.coeffs), list(b.coeffs)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyc):
            raise RepTheoryError("division by Cyc not needed")
        return Cyc(self.n, [c / Fraction(other) for c in self.coeffs])

    def conj(self) -> "Cyc":
        """Complex conjugation: zeta -> zeta^(n-1)."""
        out = Cyc.rational(self.n, 0)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + Cyc.root(self.n, (-k) % self.n) * c
        return out

    @property
    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise RepTheoryError(f"not rational: {self}")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        if self.is_rational:
            return str(self.rational_value())
        return f"Cyc({self.n}, {[str(c) for c in self.coeffs]})"


# --- finite groups --------------------------------------------------------------


class FiniteGroup:
    """A finite group given by an explicit multiplication table on 0..n-1."""

    def __init__(self, name: str, elements, table):
        self.name = name
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        self.n = len(self.elements)
        self._check_axioms()
        self.identity = self._find_identity()
        self.inverse = [next(j for j in range(self.n) if self.table[i][j] == self.identity)
                        for i in range(self.n)]
        self.class_of, self.classes = self._conjugacy_classes()
        self.exponent = 1
        for i in range(self.n):
            o = self.element_order(i)
            self.exponent = self.exponent * o // _gcd(self.exponent, o)

    def _check_axioms(self):
        n = self.n
        rng = range(n)
        for row in self.table:
            if sorted(row) != list(rng):
                raise RepTheoryError("multiplication table row is not a permutation")
        # spot-check associativity on all triples (orders are <= 48)
        for a in rng:
            for b in rng:
                tab = self.table[a][b]
                for c in rng:
                    if self.table[tab][c] != self.table[a][self.table[b][c]]:
                        raise RepTheoryError("non-associative table")

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(self.n)):
                return e
        raise RepTheoryError("no identity")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def element_order(self, a: int) -> int:
        o, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            o += 1
        return o

    def _conjugacy_classes(self):
        class_of = [-1] * self.n
        classes = []
        for a in range(self.n):
            if class_of[a] >= 0:
                continue
            orbit = {self.mul(self.mul(g, a), self.inv(g)) for g in range(self.n)}
            idx = len(classes)
            classes.append(tuple(sorted(orbit)))
            for x in orbit:
                class_of[x] = idx
        return class_of, classes

    def subgroup(self, generators) -> tuple:
        """Closure of a set of element indices, as a sorted tuple."""
        elems = {self.identity} | set(generators)
        changed = True
        while changed:
            changed = False
            for a in list(elems):
                for b in list(elems):
                    c = self.mul(a, b)
                    if c not in elems:
                        elems.add(c)
                        changed = True
        return tuple(sorted(elems))

    def is_normal(self, sub, ambient=None) -> bool:
        amb = range(self.n) if ambient is None else ambient
        s = set(sub)
        return all(self.mul(self.mul(g, h), self.inv(g)) in s for g in amb for h in sub)

    def __repr__(self):
        return f"{self.name} (order {self.n})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def subgroup_group(G: FiniteGroup, elems) -> tuple[FiniteGroup, list]:
    """The subgroup on `elems` as its own FiniteGroup, plus the embedding list."""
    elems = list(elems)
    pos = {g: i for i, g in enumerate(elems)}
    try:
        table = [[pos[G.mul(a, b)] for b in elems] for a in elems]
    except KeyError:
        raise RepTheoryError("element set is not closed under multiplication")
    H = FiniteGroup(f"{G.name}-sub{len(elems)}", [G.elements[g] for g in elems], table)
    return H, elems


# --- built-in families -----------------------------------------------------------


@lru_cache(maxsize=None)
def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(f"C{n}", [f"g^{i}" for i in range(n)],
                       [[(i + j) % n for j in range(n)] for i in range(n)])


@lru_cache(maxsize=None)
def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order 2n, n >= 2.

    Elements 0..n-1 are the rotations r^i; elements n..2n-1 are s*r^i.
    """
    if order % 2 or order < 4:
        raise RepTheoryError("dihedral order must be even and >= 4")
    n = order // 2

    def key(eps, i):
        return eps * n + i % n

    def mult(x, y):
        e1, i1 = divmod(x, n)
        e2, i2 = divmod(y, n)
        return key((e1 + e2) % 2, (i1 * (-1) ** e2 + i2) % n)

    names = [f"r^{i}" for i in range(n)] + [f"s*r^{i}" for i in range(n)]
    return FiniteGroup(f"D{order}", names, [[mult(x, y) for y in range(order)] for x in range(order)])


def _mat_mul(m1, m2, p=3):
    a, b, c, d = m1
    e, f, g, h = m2
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


@lru_cache(maxsize=None)
def _gl2f3_elements():
    out = []
    for m in product(range(3), repeat=4):
        if (m[0] * m[3] - m[1] * m[2]) % 3:
            out.append(m)
    return out


@lru_cache(maxsize=None)
def gl2f3() -> FiniteGroup:
    els = _gl2f3_elements()
    pos = {m: i for i, m in enumerate(els)}
    return FiniteGroup("GL2F3", els, [[pos[_mat_mul(x, y)] for y in els] for x in els])


@lru_cache(maxsize=None)
def sl2f3() -> FiniteGroup:
    els = [m for m in _gl2f3_elements() if (m[0] * m[3] - m[1] * m[2]) % 3 == 1]
    pos = {m: i for i, m in enumerate(els)}
    return FiniteGroup("SL2F3", els, [[pos[_mat_mul(x, y)] for y in els] for x in els])


def group_by_name(name: str) -> FiniteGroup:
    name = name.strip()
    if name.upper() == "S3":
        return dihedral(6)
    if name.upper() in ("SL2F3", "SL(2,3)"):
        return sl2f3()
    if name.upper() in ("GL2F3", "GL(2,3)"):
        return gl2f3()
    if name.upper().startswith("D"):
        return dihedral(int(name[1:]))
    if name.upper().startswith("C"):
        return cyclic(int(name[1:]))
    raise RepTheoryError(f"unknown group {name!r}")


# --- characters -------------------------------------------------------------------


@dataclass(frozen=True)
class CharacterRep:
    """An exact character: one Cyc value per conjugacy class."""

    group: FiniteGroup
    values: tuple  # Cyc per class, indexed like group.classes
    dim: int
    name: str

    def value(self, g: int) -> Cyc:
        return self.values[self.group.class_of[g]]

    def __mul__(self, other: "CharacterRep") -> "CharacterRep":
        if other.group is not self.group:
            raise RepTheoryError("characters on different groups")
        vals = tuple(a * b for a, b in zip(self.values, other.values))
        return CharacterRep(self.group, vals, self.dim * other.dim, f"{self.name}*{other.name}")

    def is_irreducible(self) -> bool:
        return inner_product(self, self) == 1


def _char(G, class_values, dim, name):
    n = G.exponent
    vals = tuple(v if isinstance(v, Cyc) else Cyc.rational(n, v) for v in class_values)
    return CharacterRep(G, vals, dim, name)


def _cyclic_generator(G):
    for g in range(G.n):
        if G.element_order(g) == G.n:
            return g
    return None


def _dihedral_structure(G):
    """(rotation subgroup as ordered powers of r, r) if G is dihedral-like:
    a cyclic index-2 subgroup inverted by the outside elements.  Covers the
    Klein group as D4."""
    if G.n % 2:
        return None
    half = G.n // 2
    candidates = [g for g in range(G.n) if G.element_order(g) == half]
    for r in candidates:
        powers = [G.identity]
        x = r
        while x != G.identity:
            powers.append(x)
            x = G.mul(x, r)
        if len(powers) != half:
            continue
        rot = set(powers)
        outside = [g for g in range(G.n) if g not in rot]
        if not outside:
            continue
        ok = all(G.mul(G.mul(s, r), G.inv(s)) == G.inv(r) for s in outside)
        if ok and len(rot) + len(outside) == G.n:
            return powers, r
    return None


@lru_cache(maxsize=None)
def character_table(G: FiniteGroup) -> tuple:
    """All irreducible characters, exactly (built-in families and their subgroups)."""
    if G.name == "SL2F3":
        return _sl2f3_table(G)
    if G.name == "GL2F3":
        return _gl2f3_table(G)
    gen = _cyclic_generator(G)
    if gen is not None:
        return _cyclic_table(G, gen)
    dih = _dihedral_structure(G)
    if dih is not None:
        return _dihedral_table_structured(G, dih)
    raise RepTheoryError(f"no character table construction for {G.name}")


def _cyclic_table(G, gen):
    n = G.n
    # discrete log w.r.t. the generator
    log = {}
    x, k = G.identity, 0
    while True:
        log[x] = k
        x = G.mul(x, gen)
        k += 1
        if x == G.identity:
            break
    m = G.exponent
    out = []
    for j in range(n):
        vals = []
        for cls in G.classes:
            vals.append(Cyc.root(m, (j * log[cls[0]] * (m // n)) % m))
        out.append(CharacterRep(G, tuple(vals), 1, f"chi{j}"))
    return tuple(out)


def _dihedral_table_structured(G, dih):
    order = G.n
    n = order // 2
    m = G.exponent
    powers, _r = dih
    pos = {g: i for i, g in enumerate(powers)}

    def parts(cls):
        g = cls[0]
        if g in pos:
            return 0, pos[g]
        # reflection s*r^i: the rotation exponent i is immaterial for the
        # formulas below (2-dim chars vanish, linear chars only use eps there
        # when n is odd; for even n use the coset decomposition)
        s0 = next(x for x in range(G.n) if x not in pos)
        i = pos[G.mul(G.inv(s0), g)]
        return 1, i

    chars = []
    # linear characters: value at s^eps r^i is (-1)^(a*eps + b*i)
    lin = [(0, 0, "triv"), (1, 0, "sign")]
    if n % 2 == 0:
        lin += [(0, 1, "rot-sign"), (1, 1, "sign*rot-sign")]
    for (a, b, nm) in lin:
        vals = []
        for cls in G.classes:
            eps, i = parts(cls)
            vals.append((-1) ** ((a * eps + b * i) % 2))
        chars.append(_char(G, vals, 1, nm))
    # two-dimensional characters
    for j in range(1, (n - 1) // 2 + 1 if n % 2 else n // 2):
        vals = []
        for cls in G.classes:
            eps, i = parts(cls)
            if eps:
                vals.append(Cyc.rational(m, 0))
            else:
                vals.append(Cyc.root(m, (j * i * (m // n)) % m) + Cyc.root(m, (-j * i * (m // n)) % m))
        chars.append(_char(G, tuple(vals), 2, f"2dim-{chr(ord('a') + j - 1)}"))
    return tuple(chars)


def _cube_part_exponent(G, g):
    """For SL2F3: exponent in {0,1,2} of the order-3 part of g, w.r.t. a fixed
    order-3 class; characters built from this are validated by orthogonality."""
    o = G.element_order(g)
    if o in (1, 2, 4):
        return 0
    if o == 6:
        g2 = G.mul(g, g)
        g = G.mul(g2, g2)  # g^4 is the order-3 part of an order-6 element
    base = _fixed_order3_rep(G)
    return 1 if G.class_of[g] == G.class_of[base] else 2


@lru_cache(maxsize=None)
def _fixed_order3_rep(G):
    for g in range(G.n):
        if G.element_order(g) == 3:
            return g
    raise RepTheoryError("no order-3 element")


def _sl2f3_table(G):
    m = G.exponent  # 12
    w = Cyc.root(m, m // 3)  # zeta_3

    def omega_pow(k):
        vals = []
        for cls in G.classes:
            e = _cube_part_exponent(G, cls[0])
            vals.append(Cyc.root(m, (k * e * (m // 3)) % m))
        return vals

    def psi_vals():
        vals = []
        for cls in G.classes:
            g = cls[0]
            o = G.element_order(g)
            if o == 1:
                vals.append(Cyc.rational(m, 2))
            elif o == 2:
                vals.append(Cyc.rational(m, -2))
            elif o == 4:
                vals.append(Cyc.rational(m, 0))
            elif o == 3:
                vals.append(Cyc.rational(m, -1))
            else:  # order 6
                vals.append(Cyc.rational(m, 1))
        return vals

    def three_vals():
        vals = []
        for cls in G.classes:
            o = G.element_order(cls[0])
            vals.append({1: 3, 2: 3, 4: -1}.get(o, 0))
        return vals

    chars = [_char(G, omega_pow(0), 1, "triv"),
             _char(G, omega_pow(1), 1, "omega"),
             _char(G, omega_pow(2), 1, "omega2")]
    psi = psi_vals()
    for k, nm in ((0, "2dim-a"), (1, "2dim-b"), (2, "2dim-c")):
        om = omega_pow(k)
        chars.append(CharacterRep(G, tuple(a * b for a, b in zip(psi, om)), 2, nm))
    chars.append(_char(G, three_vals(), 3, "3dim"))
    return tuple(chars)


def _gl2f3_table(G):
    m = G.exponent  # 24
    sqrt_m2 = Cyc.root(m, m // 8) + Cyc.root(m, 3 * (m // 8))  # zeta_8 + zeta_8^3 = sqrt(-2)

    def sig(cls):
        g = cls[0]
        a, b, c, d = G.elements[g]
        det = (a * d - b * c) % 3
        tr = (a + d) % 3
        return (G.element_order(g), det, tr)

    # class invariants: (order, det, trace mod 3)
    # 1:(1,1,2) -1:(2,1,1) s2:(2,2,0) c4:(4,1,0) c3:(3,1,2) c6:(6,1,1) c8:(8,2,1) c8':(8,2,2)
    table = {
        (1, 1, 2):  {"triv": 1, "det": 1, "2a": 2, "3a": 3, "3b": 3, "2b": Cyc.rational(m, 2), "2c": Cyc.rational(m, 2), "4d": 4},
        (2, 1, 1):  {"triv": 1, "det": 1, "2a": 2, "3a": 3, "3b": 3, "2b": Cyc.rational(m, -2), "2c": Cyc.rational(m, -2), "4d": -4},
        (2, 2, 0):  {"triv": 1, "det": -1, "2a": 0, "3a": 1, "3b": -1, "2b": Cyc.rational(m, 0), "2c": Cyc.rational(m, 0), "4d": 0},
        (4, 1, 0):  {"triv": 1, "det": 1, "2a": 2, "3a": -1, "3b": -1, "2b": Cyc.rational(m, 0), "2c": Cyc.rational(m, 0), "4d": 0},
        (3, 1, 2):  {"triv": 1, "det": 1, "2a": -1, "3a": 0, "3b": 0, "2b": Cyc.rational(m, -1), "2c": Cyc.rational(m, -1), "4d": 1},
        (6, 1, 1):  {"triv": 1, "det": 1, "2a": -1, "3a": 0, "3b": 0, "2b": Cyc.rational(m, 1), "2c": Cyc.rational(m, 1), "4d": -1},
        (8, 2, 1):  {"triv": 1, "det": -1, "2a": 0, "3a": -1, "3b": 1, "2b": sqrt_m2, "2c": -sqrt_m2, "4d": 0},
        (8, 2, 2):  {"triv": 1, "det": -1, "2a": 0, "3a": -1, "3b": 1, "2b": -sqrt_m2, "2c": sqrt_m2, "4d": 0},
    }
    dims = {"triv": 1, "det": 1, "2a": 2, "2b": 2, "2c": 2, "3a": 3, "3b": 3, "4d": 4}
    chars = []
    for nm in ("triv", "det", "2a", "2b", "2c", "3a", "3b", "4d"):
        vals = []
        for cls in G.classes:
            v = table[sig(cls)][nm]
            vals.append(v if isinstance(v, Cyc) else Cyc.rational(m, v))
        chars.append(CharacterRep(G, tuple(vals), dims[nm], nm))
    return tuple(chars)


# --- operations -------------------------------------------------------------------


def inner_product(chi: CharacterRep, psi: CharacterRep) -> int:
    """<chi, psi> = (1/|G|) sum chi(g) conj(psi(g)); must be a nonneg integer."""
    if chi.group is not psi.group and chi.group.table != psi.group.table:
        raise RepTheoryError("characters on different groups")
    G = chi.group
    total = Cyc.rational(1, 0)
    for idx, cls in enumerate(G.classes):
        total = total + chi.values[idx] * psi.values[idx].conj() * len(cls)
    val = total
    if not val.is_rational:
        raise RepTheoryError("inner product not rational (non-character input?)")
    q = val.rational_value() / G.n
    if q.denominator != 1 or q < 0:
        raise RepTheoryError(f"inner product {q} is not a nonnegative integer")
    return int(q)


def restrict(chi: CharacterRep, H: FiniteGroup, embed=None) -> CharacterRep:
    """Restrict chi to the subgroup H; embed maps H-element indices into G."""
    G = chi.group
    if embed is None:
        if H is G:
            return chi
        raise RepTheoryError("embedding required")
    vals = []
    for cls in H.classes:
        g = embed[cls[0]]
        vals.append(chi.value(g))
    return CharacterRep(H, tuple(vals), chi.dim, f"{chi.name}|{H.name}")


def frobenius_schur(chi: CharacterRep) -> int:
    """+1 orthogonal, -1 symplectic, 0 not self-dual."""
    G = chi.group
    total = Cyc.rational(1, 0)
    for g in range(G.n):
        total = total + chi.value(G.mul(g, g))
    q = total.rational_value() / G.n
    if q.denominator != 1 or q not in (-1, 0, 1):
        raise RepTheoryError(f"Frobenius-Schur value {q} out of range")
    return int(q)


def det_character(chi: CharacterRep) -> CharacterRep:
    """Determinant character, for dim <= 3 via exterior-power formulas."""
    G = chi.group
    if chi.dim == 1:
        return chi
    vals = []
    for cls in G.classes:
        g = cls[0]
        g2 = G.mul(g, g)
        if chi.dim == 2:
            v = (chi.value(g) * chi.value(g) - chi.value(g2)) * Fraction(1, 2)
        elif chi.dim == 3:
            g3 = G.mul(g2, g)
            v = (chi.value(g) * chi.value(g) * chi.value(g)
                 - chi.value(g) * chi.value(g2) * 3
                 + chi.value(g3) * 2) * Fraction(1, 6)
        else:
            raise RepTheoryError("det only for dim <= 3")
        vals.append(v)
    det = CharacterRep(G, tuple(vals), 1, f"det({chi.name})")
    for a in range(G.n):
        for b in range(G.n):
            if det.value(G.mul(a, b)) != det.value(a) * det.value(b):
                raise RepTheoryError("determinant is not multiplicative")
    return det
