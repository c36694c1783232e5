"""Local Galois data at a prime: decomposition/inertia subgroups of the global
group with kernel-field annotations, and the multiplicity engine pairing an
orthogonal representation against the dictionary of local characters
(trivial, unramified quadratic, Teichmueller power, ramified quadratic by
square class, and the two-dimensional dihedral character by cube class).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numtheory import (
    CubeClassMu3,
    Place,
    SquareClass,
    cube_class_mu3,
    is_prime,
    quad_char_minus_one,
    square_class,
)
from .reptheory import (
    CharacterRep,
    Cyc,
    FiniteGroup,
    det_character,
    dihedral,
    frobenius_schur,
    group_by_name,
    inner_product,
    restrict,
    subgroup_group,
)

__all__ = [
    "LocalGaloisDatum",
    "LocalCharSpec",
    "SigmaSpec",
    "GaloisLocalError",
    "PartialDatumError",
    "s3_kummer_local_datum",
    "parse_local_datum",
    "parse_square_class",
    "multiplicity",
    "multiplicity_of_char",
    "det_sigma_minus_one",
    "sigma_is_ramified",
]


class GaloisLocalError(ValueError):
    pass


class PartialDatumError(GaloisLocalError):
    pass


@dataclass(frozen=True)
class SigmaSpec:
    """A validated self-dual orthogonal irreducible representation of Delta."""

    group: FiniteGroup
    char: CharacterRep

    def __post_init__(self):
        if inner_product(self.char, self.char) != 1:
            raise GaloisLocalError("sigma must be irreducible")
        fs = frobenius_schur(self.char)
        if fs != 1:
            kind = "symplectic" if fs == -1 else "non-self-dual"
            raise GaloisLocalError(f"sigma must be orthogonal; got {kind}")

    @property
    def dim(self):
        return self.char.dim


@dataclass(frozen=True)
class LocalCharSpec:
    """A local character built from the engine's dictionary.

    omega_pow: power of the unramified mod-p cyclotomic character (resolved to
    trivial or the unramified quadratic according to q mod p); kappa: the
    unramified quadratic; quad: a ramified quadratic by square class; theta3:
    the 2-dimensional character of the local dihedral image, matched through
    the given cube class of the twisted-kernel field.
    """

    p: int
    omega_pow: int = 0
    kappa: bool = False
    quad: SquareClass | None = None
    theta3_class: CubeClassMu3 | None = None

    @property
    def dim(self):
        return 2 if self.theta3_class is not None else 1

    def label(self) -> str:
        parts = []
        if self.omega_pow:
            parts.append("omega" if self.omega_pow == 1 else f"omega^{self.omega_pow}")
        if self.kappa:
            parts.append("kappa")
        if self.quad is not None:
            parts.append(f"theta[{self.quad.representative()}]")
        if self.theta3_class is not None:
            parts.append("theta3")
        return "*".join(parts) if parts else "1"

    @staticmethod
    def one(p):
        return LocalCharSpec(p)

    @staticmethod
    def kappa_char(p):
        return LocalCharSpec(p, kappa=True)

    @staticmethod
    def omega(p, j=1):
        return LocalCharSpec(p, omega_pow=j)

    @staticmethod
    def theta_quad(p, d: SquareClass):
        if d.is_trivial:
            return LocalCharSpec(p)
        if d.is_unramified_nontrivial:
            return LocalCharSpec(p, kappa=True)
        return LocalCharSpec(p, quad=d)

    def times_omega(self, j=1):
        return LocalCharSpec(self.p, self.omega_pow + j, self.kappa, self.quad,
                             self.theta3_class)

    def times_kappa(self):
        return LocalCharSpec(self.p, self.omega_pow, not self.kappa, self.quad,
                             self.theta3_class)

    def times_theta3(self, cls: CubeClassMu3):
        if self.theta3_class is not None:
            raise GaloisLocalError("theta3 squared not supported")
        return LocalCharSpec(self.p, self.omega_pow, self.kappa, self.quad, cls)


class LocalGaloisDatum:
    """Decomposition data of the global group at one prime of the base field.

    All element references are indices in the ambient group.  q is the residue
    cardinality of the base-field completion (ell^f_over_ell).
    """

    def __init__(self, group: FiniteGroup, ell: int, D, I, frobenius: int,
                 q: int | None = None, e_over_ell: int = 1, f_over_ell: int = 1,
                 quad_annotations=None, cubic_annotation: CubeClassMu3 | None = None,
                 partial: bool = False, label: str | None = None):
        self.group = group
        self.ell = ell
        self.e_over_ell = e_over_ell
        self.f_over_ell = f_over_ell
        self.q = q if q is not None else ell**f_over_ell
        self.D = tuple(sorted(set(group.subgroup(D)))) if D else (group.identity,)
        self.I = tuple(sorted(set(group.subgroup(I)))) if I else (group.identity,)
        self.frobenius = frobenius
        self.quad_annotations = dict(quad_annotations or {})  # frozenset(neg) -> SquareClass
        self.cubic_annotation = cubic_annotation
        self.partial = partial
        self.label = label or f"v_{ell}"
        self._H = None
        self._validate()

    # -- structure ------------------------------------------------------------

    def _validate(self):
        G = self.group
        if not set(self.I) <= set(self.D):
            raise GaloisLocalError("inertia not contained in decomposition group")
        if not G.is_normal(self.I, self.D):
            raise GaloisLocalError("inertia is not normal in the decomposition group")
        if self.frobenius not in self.D:
            raise GaloisLocalError("frobenius representative outside D")
        # D/I cyclic generated by the frobenius coset
        seen = set()
        x = self.group.identity
        for _ in range(self.f_v):
            seen.add(frozenset(self.group.mul(x, i) for i in self.I))
            x = self.group.mul(x, self.frobenius)
        if len(seen) * self.e_v != len(self.D):
            raise GaloisLocalError("frobenius does not generate D/I")
        for neg, cls in self.quad_annotations.items():
            if not self._is_index2_negset(neg):
                raise GaloisLocalError("annotation does not describe an order-2 character")
            if not cls.is_ramified:
                raise GaloisLocalError("annotated class is not ramified")
        classes = [cls.to_dict().__str__() for cls in self.quad_annotations.values()]
        if len(set(classes)) != len(classes):
            raise GaloisLocalError("two annotated characters share a square class")
        if not self.partial:
            for neg in self.ramified_quad_negsets():
                if neg not in self.quad_annotations:
                    raise GaloisLocalError(
                        f"{self.label}: a ramified quadratic character of D lacks an "
                        "annotation (annotate it or mark the record partial)")

    def _is_index2_negset(self, neg) -> bool:
        neg = set(neg)
        ker = [d for d in self.D if d not in neg]
        if len(ker) * 2 != len(self.D) or len(neg) * 2 != len(self.D):
            return False
        kset = set(ker)
        return all(self.group.mul(a, b) in kset for a in ker for b in ker) and all(
            self.group.mul(a, b) in neg for a in ker for b in neg)

    @property
    def e_v(self) -> int:
        return len(self.I)

    @property
    def f_v(self) -> int:
        return len(self.D) // len(self.I)

    def mu_p_in_base(self, p: int) -> bool:
        return (self.q - 1) % p == 0

    def subgroup_rep(self):
        if self._H is None:
            self._H = subgroup_group(self.group, self.D)
        return self._H

    def frobenius_degree(self, d: int) -> int:
        """Exponent k with d in frobenius^k * I."""
        G = self.group
        x = G.identity
        for k in range(self.f_v):
            if G.mul(G.inv(x), d) in set(self.I):
                return k
            x = G.mul(x, self.frobenius)
        raise GaloisLocalError("element not in D")

    def ramified_quad_negsets(self):
        """All order-2 characters of D that are nontrivial on I, as negsets.

        Order-2 characters correspond to index-2 subgroups containing the
        commutator-square subgroup K0 = <[D,D], squares>; the quotient D/K0 is
        elementary abelian and its hyperplanes are enumerated directly.
        """
        G = self.group
        gens = set()
        for a in self.D:
            gens.add(G.mul(a, a))
            for b in self.D:
                gens.add(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))))
        k0 = set(G.subgroup(gens)) & set(self.D)
        # coset space D/K0: a vector space over F2
        cosets = []
        assigned = {}
        for d in self.D:
            for idx, rep in enumerate(cosets):
                if G.mul(G.inv(rep), d) in k0:
                    assigned[d] = idx
                    break
            else:
                assigned[d] = len(cosets)
                cosets.append(d)
        r = len(cosets)
        out = []
        if r == 1:
            return out
        # characters of D/K0: pick value -1 on any nonempty subset of a basis;
        # enumerate all homs to {+-1} directly (r is tiny)
        reps = cosets
        for mask in range(1, 2**r):
            vals = {i: -1 if (mask >> i) & 1 else 1 for i in range(r)}
            if not _is_coset_hom(G, reps, k0, assigned, vals):
                continue
            neg = frozenset(d for d in self.D if vals[assigned[d]] == -1)
            if neg and neg & set(self.I) and self._is_index2_negset(neg):
                out.append(neg)
        return sorted(set(out), key=sorted)

    # -- character construction -------------------------------------------------

    def unramified_char_values(self, order: int):
        """Values of the unramified character of the given order (dividing f_v),
        or None if it does not factor through D."""
        if self.f_v % order:
            return None
        return {d: Cyc.root(order, self.frobenius_degree(d) % order) for d in self.D}

    def quad_char_values(self, d_class: SquareClass):
        """Values of the annotated ramified quadratic character with the given
        square class, or None if no annotation matches."""
        for neg, cls in self.quad_annotations.items():
            if cls == d_class:
                return {d: Cyc.rational(1, -1 if d in neg else 1) for d in self.D}
        unannotated = [n for n in self.ramified_quad_negsets()
                       if n not in self.quad_annotations]
        if unannotated and self.partial:
            raise PartialDatumError(
                f"{self.label}: ramified quadratic characters lack annotations")
        return None

    def theta3_values(self, curve_class: CubeClassMu3):
        """Values of the 2-dimensional dihedral character cut out by the cubic
        Kummer class, matched against the curve-side class; None if absent."""
        ann = self.cubic_annotation
        if ann is None:
            if self.partial:
                raise PartialDatumError(f"{self.label}: cubic annotation missing")
            return None
        if not ann.generates_same_cubic(curve_class):
            return None
        if self.f_v % 2:
            return None  # no unramified quadratic part: mu_3 setup impossible
        if self.e_v % 3:
            return None
        G = self.group
        c = _c3_quotient_map(G, self.I)
        # Frobenius must invert the C3 quotient (mu_3 outside the base field)
        f = self.frobenius
        for i in self.I:
            conj = G.mul(G.mul(f, i), G.inv(f))
            if conj not in set(self.I) or c[conj] != (-c[i]) % 3:
                return None
        vals = {}
        for d in self.D:
            deg = self.frobenius_degree(d)
            if deg % 2:
                vals[d] = Cyc.rational(1, 0)
            else:
                # d = frob^deg * i with even deg; image in S3 is the rotation c(i)
                x = G.identity
                for _ in range(deg):
                    x = G.mul(x, self.frobenius)
                i = G.mul(G.inv(x), d)
                vals[d] = Cyc.rational(1, 2 if c[i] == 0 else -1)
        return vals

    def char_from_spec(self, spec: LocalCharSpec):
        """CharacterRep of D realizing the given character specification, or
        None if it does not factor through D."""
        H, embed = self.subgroup_rep()
        vals = {d: Cyc.rational(1, 1) for d in self.D}
        dim = 1
        if spec.omega_pow:
            qj = pow(self.q, spec.omega_pow, spec.p)
            if qj == 1:
                pass
            elif qj == spec.p - 1:
                k = self.unramified_char_values(2)
                if k is None:
                    return None
                vals = {d: vals[d] * k[d] for d in self.D}
            else:
                raise GaloisLocalError(
                    "omega of order > 2 requested; not needed by any admissible row")
        if spec.kappa:
            k = self.unramified_char_values(2)
            if k is None:
                return None
            vals = {d: vals[d] * k[d] for d in self.D}
        if spec.quad is not None:
            k = self.quad_char_values(spec.quad)
            if k is None:
                return None
            vals = {d: vals[d] * k[d] for d in self.D}
        if spec.theta3_class is not None:
            k = self.theta3_values(spec.theta3_class)
            if k is None:
                return None
            vals = {d: vals[d] * k[d] for d in self.D}
            dim = 2
        class_vals = []
        for cls in H.classes:
            class_vals.append(vals[embed[cls[0]]])
        return CharacterRep(H, tuple(class_vals), dim, spec.label())


def _is_coset_hom(G, reps, k0, assigned, vals):
    """Whether the +-1 assignment on D/K0 cosets is multiplicative."""
    for a in reps:
        for b in reps:
            if vals[assigned[G.mul(a, b)]] != vals[assigned[a]] * vals[assigned[b]]:
                return False
    return True


def _c3_quotient_map(G, I):
    """I -> Z/3 through the unique index-3 subgroup (I cyclic, 3 | |I|)."""
    n = len(I)
    if n % 3:
        raise GaloisLocalError("inertia order not divisible by 3")
    gen = next((i for i in I if G.element_order(i) == n), None)
    if gen is None:
        raise GaloisLocalError("inertia is not cyclic; cannot form the C3 quotient")
    c = {}
    x = G.identity
    for k in range(n):
        c[x] = k % 3
        x = G.mul(x, gen)
    return c


def sigma_is_ramified(sigma: SigmaSpec, datum: LocalGaloisDatum) -> bool:
    dimval = Cyc.rational(1, sigma.dim)
    return any(sigma.char.value(i) != dimval for i in datum.I)


def multiplicity_of_char(char: CharacterRep, datum: LocalGaloisDatum,
                         spec: LocalCharSpec) -> int:
    target = datum.char_from_spec(spec)
    if target is None:
        return 0
    H, embed = datum.subgroup_rep()
    return inner_product(restrict(char, H, embed), target)


def multiplicity(sigma: SigmaSpec, datum: LocalGaloisDatum, spec: LocalCharSpec) -> int:
    """<sigma_v, chi>: multiplicity of the local character in the restriction
    of sigma to the decomposition group."""
    return multiplicity_of_char(sigma.char, datum, spec)


def det_sigma_minus_one(sigma: SigmaSpec, datum: LocalGaloisDatum) -> int:
    """det sigma_v(-1) via local reciprocity: +1 when det sigma_v is unramified,
    else evaluated through the annotated ramified quadratic character."""
    H, embed = datum.subgroup_rep()
    det = det_character(restrict(sigma.char, H, embed))
    pos = {g: h for h, g in enumerate(embed)}
    one = Cyc.rational(1, 1)
    minus = Cyc.rational(1, -1)
    ivals = {i: det.value(pos[i]) for i in datum.I}
    if all(v == one for v in ivals.values()):
        return 1
    if any(v not in (one, minus) for v in ivals.values()):
        raise GaloisLocalError("det sigma_v ramified of order > 2; unsupported")
    for neg, cls in datum.quad_annotations.items():
        if all((ivals[i] == minus) == (i in neg) for i in datum.I):
            return quad_char_minus_one(cls, datum.q)
    raise PartialDatumError(
        f"{datum.label}: det sigma_v is ramified quadratic but no annotation matches")


# --- built-in family: S3 Kummer fields over Q -----------------------------------


def s3_kummer_local_datum(m: int, ell: int, p: int) -> LocalGaloisDatum:
    """Local datum at ell for K = Q(mu_3, m^(1/3)) with Delta = S3, m cube-free.

    Rotations of Dihedral(6) are the Kummer C3; reflections act on mu_3.
    """
    if m in (0, 1, -1):
        raise GaloisLocalError("need |m| > 1")
    mm = abs(m)
    for q in range(2, 100):
        if mm % q**3 == 0:
            raise GaloisLocalError("m must be cube-free")
    if not is_prime(ell):
        raise GaloisLocalError(f"{ell} is not prime")
    if ell == 3:
        raise PartialDatumError("wild prime 3 for the Kummer family: supply a record")
    G = dihedral(6)
    kummer_ramified = m % ell == 0
    mu3_in = ell % 3 == 1
    if not kummer_ramified:
        if mu3_in:
            if pow(m % ell, (ell - 1) // 3, ell) == 1:
                return LocalGaloisDatum(G, ell, [], [], G.identity, label=f"v_{ell}")
            return LocalGaloisDatum(G, ell, [1], [], 1, label=f"v_{ell}")
        # x^3 - m has exactly one root mod ell: frobenius is a transposition
        return LocalGaloisDatum(G, ell, [3], [], 3, label=f"v_{ell}")
    ann = cube_class_mu3(m, ell) if ell % 3 == 2 else None
    if mu3_in:
        return LocalGaloisDatum(G, ell, [1], [1], G.identity,
                                cubic_annotation=ann, label=f"v_{ell}")
    return LocalGaloisDatum(G, ell, [1, 3], [1], 3,
                            cubic_annotation=ann, label=f"v_{ell}")


# --- generic record parsing -------------------------------------------------------


def parse_square_class(obj) -> SquareClass:
    if isinstance(obj, SquareClass):
        return obj
    v = obj.get("v")
    if v == "real":
        return SquareClass(Place.real(), sign=obj["sign"])
    v = int(v)
    if "rep" in obj:
        return square_class(obj["rep"], Place.finite(v))
    return SquareClass(Place.finite(v), val_parity=int(obj["val_parity"]),
                       unit_square=obj["unit"] == "sq")


def parse_local_datum(record: dict, group: FiniteGroup | None = None) -> LocalGaloisDatum:
    """Build a datum from the documented JSON record format."""
    G = group if group is not None else group_by_name(record["group"])
    ell = int(record["ell"])
    f_over = int(record.get("f_over_ell", 1))
    e_over = int(record.get("e_over_ell", 1))
    q = int(record.get("q", ell**f_over))
    D = list(record.get("D", []))
    I = list(record.get("I", []))
    frob = int(record.get("frobenius", G.identity))
    anns = {}
    for a in record.get("quad_annotations", ()):
        neg = _resolve_char_name(G, D, a["char"])
        anns[neg] = parse_square_class(a["square_class"])
    cubic = None
    if record.get("cubic_annotation"):
        ca = record["cubic_annotation"]
        if "value" in ca:
            cubic = cube_class_mu3(int(ca["value"]), int(ca.get("ell", ell)))
        else:
            cubic = CubeClassMu3(int(ca.get("ell", ell)), int(ca["val_mod_3"]),
                                 int(ca.get("unit_class", 0)))
    return LocalGaloisDatum(
        G, ell, D, I, frob, q=q, e_over_ell=e_over, f_over_ell=f_over,
        quad_annotations=anns, cubic_annotation=cubic,
        partial=bool(record.get("partial", False)),
        label=record.get("label"),
    )


def _resolve_char_name(G: FiniteGroup, D, name) -> frozenset:
    if isinstance(name, (list, tuple)):
        return frozenset(int(x) for x in name)
    Dset = set(G.subgroup(D)) if D else {G.identity}
    if name == "sign" and G.name.startswith("D"):
        half = G.n // 2
        return frozenset(d for d in Dset if d >= half)
    raise GaloisLocalError(f"unknown character name {name!r}")
