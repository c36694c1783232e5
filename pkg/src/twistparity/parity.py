"""The core engine: correction-set construction, per-prime classification of a
congruent curve pair into its parity row, the two independently computed sides
(local-invariant corrections vs. local root-number ratios), and the global
consistency report.

Per admissible row the engine emits the exact correction characters; the ratio
side re-derives the same +-1 through the root-number case formulas, and the
aggregate is checked both prime-by-prime and through the S/N/W/X/Y3/Z3
bookkeeping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .congruence import check_congruence
from .curve import (
    LocalReductionData,
    ReductionKind as RK,
    WeierstrassCurve,
    bad_primes,
    classify_reduction,
    local_data,
)
from .galoislocal import (
    GaloisLocalError,
    LocalCharSpec,
    LocalGaloisDatum,
    SigmaSpec,
    det_sigma_minus_one,
    multiplicity,
    parse_local_datum,
    sigma_is_ramified,
)
from .numtheory import (
    CubeClassMu3,
    cube_class_mu3,
    quad_char_minus_one,
    unit_is_square_unramified,
)
from .reptheory import (
    Cyc,
    FiniteGroup,
    character_table,
    det_character,
    frobenius_schur,
    group_by_name,
    restrict,
)

__all__ = [
    "ImpossiblePairError",
    "MissingLocalDataError",
    "PrimePairClass",
    "FieldPrime",
    "FieldData",
    "ParityReport",
    "classify_pair",
    "delta_contribution",
    "local_root_ratio",
    "absolute_local_root_number",
    "archimedean_root_number",
    "sigma0_reasons",
    "compute_sigma_sets",
    "delta_diff_parity",
    "global_report",
    "select_sigma",
]


class ImpossiblePairError(ValueError):
    """The reduction pair contradicts the mod-p congruence of the curves."""


class MissingLocalDataError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rows


@dataclass
class PrimePairClass:
    row: str
    corrections: list  # (side in {1, 2}, LocalCharSpec)
    flags: dict = field(default_factory=dict)

    @property
    def is_divergent(self):
        return bool(self.corrections)


def _theta_class(lcd: LocalReductionData):
    cls = lcd.minus_c6_class
    if cls is None or not cls.is_ramified:
        # a potentially multiplicative curve is an additively-reducing twist of
        # a split multiplicative one, so its kernel class must be ramified
        raise ImpossiblePairError(
            f"at {lcd.ell}: potentially multiplicative reduction with an "
            "unramified twisted-kernel class; local data is inconsistent")
    return cls


def _theta3_curve_class(lcd: LocalReductionData, p: int) -> CubeClassMu3:
    """Cube class of the minimal discriminant: the twisted 3-division kernel
    field is cut out by its cube root (invariant under quadratic twisting)."""
    if lcd.delta_min_cube_class is not None:
        return lcd.delta_min_cube_class
    from .curve import _b_invariants, _c_invariants

    b = _b_invariants(*lcd.minimal_model)
    disc = _c_invariants(*b)[2]
    return cube_class_mu3(disc, lcd.ell)


def classify_pair(lcd1: LocalReductionData, lcd2: LocalReductionData,
                  q: int, p: int) -> PrimePairClass:
    """Assign the parity row and its correction characters to a reduction pair
    at a common prime with residue cardinality q.

    Raises ImpossiblePairError for pairs that contradict E1[p] = E2[p]; each
    rejection states the mathematical obstruction.
    """
    k1, k2 = lcd1.reduction, lcd2.reduction
    mu_p = (q - 1) % p == 0
    flags = {"mu_p_in_Fv": mu_p, "q": q}

    # orient so the description below always sees (first, second) = (k1, k2)
    if (k1, k2) != tuple(sorted((k1, k2), key=_kind_rank)):
        ppc = classify_pair(lcd2, lcd1, q, p)
        ppc.corrections = [(3 - side, spec) for side, spec in ppc.corrections]
        ppc.flags["swapped"] = True
        return ppc

    one = LocalCharSpec.one(p)
    kappa = LocalCharSpec.kappa_char(p)

    if k1 == k2 == RK.GOOD:
        return PrimePairClass("good-good", [], flags)
    if k1 == k2 == RK.SPLIT or k1 == k2 == RK.NONSPLIT:
        return PrimePairClass("split-split" if k1 == RK.SPLIT else "nonsplit-nonsplit",
                              [], flags)
    if k1 == RK.GOOD and k2 in (RK.SPLIT, RK.NONSPLIT):
        if k2 == RK.SPLIT:
            return PrimePairClass("good-split", [(2, one)], flags)
        return PrimePairClass("good-nonsplit", [(2, kappa)], flags)
    if k1 == RK.GOOD:
        raise ImpossiblePairError(
            "good paired with additive: a good curve has unramified p-torsion "
            "while additive reduction forces ramified p-torsion")
    if k1 == RK.SPLIT and k2 == RK.NONSPLIT:
        if (q + 1) % p:
            raise ImpossiblePairError(
                "split/non-split pair requires the mod-p cyclotomic character "
                "to equal the unramified quadratic (q = -1 mod p)")
        return PrimePairClass("split-nonsplit", [(2, one), (2, kappa)], flags)
    if k1 in (RK.SPLIT, RK.NONSPLIT) and k2 == RK.PMR:
        raise ImpossiblePairError(
            "multiplicative paired with potentially multiplicative additive: "
            "the semisimplified p-torsion is unramified on one side and "
            "ramified on the other")
    if k1 in (RK.SPLIT, RK.NONSPLIT) and k2 == RK.PGA:
        if p != 3 or not mu_p:
            raise ImpossiblePairError(
                "multiplicative paired with potentially good needs p = 3 with "
                "mu_3 in the base completion (order-3 unipotent torsion image)")
        _require_e(lcd2, (3,), "multiplicative/potentially-good-abelian")
        spec = one if k1 == RK.SPLIT else kappa
        row = "split-pga" if k1 == RK.SPLIT else "nonsplit-pga"
        return PrimePairClass(row, [(2, spec)], flags)
    if k1 in (RK.SPLIT, RK.NONSPLIT) and k2 == RK.PGNA:
        if p != 3 or mu_p:
            raise ImpossiblePairError(
                "multiplicative paired with non-abelian potentially good needs "
                "p = 3 with mu_3 outside the base completion")
        _require_e(lcd2, (3,), "multiplicative/potentially-good-non-abelian")
        theta3 = LocalCharSpec(p, theta3_class=_theta3_curve_class(lcd2, p))
        if k1 == RK.SPLIT:
            return PrimePairClass("split-pgna", [(1, kappa), (2, theta3)],
                                  dict(flags, y3=True))
        return PrimePairClass("nonsplit-pgna", [(1, one), (2, theta3)],
                              dict(flags, y3=True))
    if k1 == k2 == RK.PMR:
        t1, t2 = _theta_class(lcd1), _theta_class(lcd2)
        if t1 == t2:
            return PrimePairClass("pmr-pmr", [], dict(flags, theta_equal=True))
        if (q + 1) % p:
            raise ImpossiblePairError(
                "twisted-kernel classes of two potentially multiplicative "
                "curves may differ only by the unramified quadratic, forcing "
                "q = -1 (mod p)")
        if t1 * t2 != _kappa_square_class(lcd1):
            raise ImpossiblePairError(
                "twisted-kernel classes differ by more than the unramified "
                "quadratic; incompatible with congruent p-torsion")
        th = LocalCharSpec.theta_quad(p, t1)
        return PrimePairClass("pmr-pmr-twist",
                              [(1, th), (2, th.times_omega())],
                              dict(flags, theta_equal=False, w=True))
    if k1 == RK.PMR and k2 == RK.PGA:
        _require_e(lcd2, (2, 6), "potentially-multiplicative/potentially-good")
        if lcd2.e == 6 and (p != 3 or not mu_p):
            raise ImpossiblePairError(
                "inertia order 6 on the potentially good side needs p = 3 "
                "with mu_3 in the base completion")
        th = LocalCharSpec.theta_quad(p, _theta_class(lcd1))
        return PrimePairClass("pmr-pga", [(2, th)], dict(flags, x=True))
    if k1 == RK.PMR and k2 == RK.PGNA:
        if p != 3 or mu_p:
            raise ImpossiblePairError(
                "potentially-multiplicative/non-abelian potentially good needs "
                "p = 3 with mu_3 outside the base completion")
        _require_e(lcd2, (6,), "potentially-multiplicative/potentially-good-non-abelian")
        t1 = _theta_class(lcd1)
        th = LocalCharSpec.theta_quad(p, t1)
        theta3 = th.times_theta3(_theta3_curve_class(lcd2, p))
        return PrimePairClass("pmr-pgna",
                              [(1, th.times_omega()), (2, theta3)],
                              dict(flags, z3=True))
    if k1 == k2 == RK.PGA or k1 == k2 == RK.PGNA:
        if lcd1.e is not None and lcd2.e is not None and lcd1.e != lcd2.e:
            raise ImpossiblePairError(
                "both potentially good with different inertia orders; "
                "contradicts congruent p-torsion")
        return PrimePairClass("pga-pga" if k1 == RK.PGA else "pgna-pgna", [], flags)
    if {k1, k2} == {RK.PGA, RK.PGNA}:
        raise ImpossiblePairError(
            "abelian and non-abelian potentially good images cannot carry "
            "isomorphic p-torsion")
    raise ImpossiblePairError(f"unclassified pair {k1}/{k2}")


_KIND_ORDER = [RK.GOOD, RK.SPLIT, RK.NONSPLIT, RK.PMR, RK.PGA, RK.PGNA]


def _kind_rank(k):
    return _KIND_ORDER.index(k)


def _require_e(lcd, allowed, label):
    if lcd.e is not None and lcd.e not in allowed:
        raise ImpossiblePairError(
            f"{label}: inertia order {lcd.e} incompatible (allowed {allowed})")


def _kappa_square_class(lcd):
    """Square class of the unramified quadratic extension at lcd's prime."""
    from .numtheory import Place, SquareClass

    ell = lcd.ell
    if ell == 2:
        from .numtheory import square_class

        return square_class(5, Place.finite(2))
    return SquareClass(Place.finite(ell), val_parity=0, unit_square=False)


# ---------------------------------------------------------------------------
# the two sides


def delta_contribution(ppc: PrimePairClass, sigma: SigmaSpec,
                       datum: LocalGaloisDatum):
    """Parity bit of delta_1 - delta_2 at one prime: sum of the correction
    multiplicities mod 2, with the per-term breakdown."""
    detail = []
    total = 0
    for side, spec in ppc.corrections:
        mult = multiplicity(sigma, datum, spec)
        detail.append({"side": side, "char": spec.label(), "multiplicity": mult})
        total += mult
    return total % 2, detail


def local_root_ratio(lcd1: LocalReductionData, lcd2: LocalReductionData,
                     q: int, p: int, sigma: SigmaSpec,
                     datum: LocalGaloisDatum) -> int:
    """W(E1/F_v, sigma_v) / W(E2/F_v, sigma_v), case by case.

    Deliberately a separate code path from the correction emitter: the root
    side uses the root-number case formulas directly.
    """
    k1, k2 = lcd1.reduction, lcd2.reduction
    if _kind_rank(k1) > _kind_rank(k2):
        return local_root_ratio(lcd2, lcd1, q, p, sigma, datum)  # ratios are +-1

    def m(spec):
        return multiplicity(sigma, datum, spec)

    one = LocalCharSpec.one(p)
    kappa = LocalCharSpec.kappa_char(p)

    if k1 == k2 and k1 in (RK.GOOD, RK.SPLIT, RK.NONSPLIT, RK.PGA, RK.PGNA):
        return 1
    if k1 == RK.GOOD and k2 == RK.SPLIT:
        return (-1) ** m(one)
    if k1 == RK.GOOD and k2 == RK.NONSPLIT:
        return (-1) ** m(kappa)
    if k1 == RK.SPLIT and k2 == RK.NONSPLIT:
        return (-1) ** (m(one) + m(kappa))
    if k1 == RK.SPLIT and k2 == RK.PGA:
        return (-1) ** m(one)
    if k1 == RK.NONSPLIT and k2 == RK.PGA:
        return (-1) ** m(kappa)
    if k1 in (RK.SPLIT, RK.NONSPLIT) and k2 == RK.PGNA:
        theta3 = LocalCharSpec(p, theta3_class=_theta3_curve_class(lcd2, p))
        if k1 == RK.SPLIT:
            return (-1) ** (m(kappa) + m(theta3))
        return (-1) ** (m(one) + m(theta3))
    if k1 == k2 == RK.PMR:
        if _theta_class(lcd1) == _theta_class(lcd2):
            return 1
        th = LocalCharSpec.theta_quad(p, _theta_class(lcd1))
        return (-1) ** (m(th) + m(th.times_omega()))
    if k1 == RK.PMR and k2 == RK.PGA:
        th = LocalCharSpec.theta_quad(p, _theta_class(lcd1))
        return (-1) ** m(th)
    if k1 == RK.PMR and k2 == RK.PGNA:
        th = LocalCharSpec.theta_quad(p, _theta_class(lcd1))
        theta3 = th.times_theta3(_theta3_curve_class(lcd2, p))
        return (-1) ** (m(th.times_omega()) + m(theta3))
    raise ImpossiblePairError(f"no ratio formula for {k1}/{k2}")


def archimedean_root_number(sigma: SigmaSpec) -> int:
    """W(E/F_v, sigma_v) at a real place: (-1)^(dim sigma)."""
    return (-1) ** sigma.dim


_ROHRLICH_TAME = {2: -1, 6: -1, 3: -3, 4: -2}  # e -> d with W(E/Q_ell) = (d/ell)


def absolute_local_root_number(lcd: LocalReductionData, sigma: SigmaSpec,
                               datum: LocalGaloisDatum | None, p: int):
    """W(E/F_v, sigma_v) at a finite place, or None when undetermined.

    Good: det sigma_v(-1).  Multiplicative and potentially multiplicative:
    det sigma_v(-1) phi(-1)^dim (-1)^<sigma_v, phi>.  Potentially good abelian:
    det sigma_v(-1) eps(-1)^dim.  Non-abelian potentially good: computable only
    for unramified sigma_v (via the unramified twisting formula); otherwise
    None.
    """
    q = datum.q if datum is not None else lcd.ell
    if datum is None:
        det_minus_one = 1  # sigma unramified at v
        sig_ram = False
    else:
        det_minus_one = det_sigma_minus_one(sigma, datum)
        sig_ram = sigma_is_ramified(sigma, datum)
    kind = lcd.reduction
    if kind == RK.GOOD:
        return det_minus_one

    def m(spec):
        if datum is None:
            raise MissingLocalDataError("multiplicity requires a local datum")
        return multiplicity(sigma, datum, spec)

    if kind == RK.SPLIT:
        return det_minus_one * (-1) ** m(LocalCharSpec.one(p))
    if kind == RK.NONSPLIT:
        return det_minus_one * (-1) ** m(LocalCharSpec.kappa_char(p))
    if kind == RK.PMR:
        theta_m1 = quad_char_minus_one(lcd.minus_c6_class, q)
        th = LocalCharSpec.theta_quad(p, lcd.minus_c6_class)
        return det_minus_one * theta_m1**sigma.dim * (-1) ** m(th)
    if kind == RK.PGA:
        e = lcd.e
        eps_m1 = 1 if e % 2 else (-1) ** (((q - 1) // e) % 2)
        return det_minus_one * eps_m1**sigma.dim
    if kind == RK.PGNA:
        if sig_ram:
            return None  # the unit value of the inducing character is not desk-computable
        # unramified twisting: W(E x sigma) = det sigma_v(Frob)^a(E) W(E/F_v)^dim
        frob_val = _det_frobenius_value(sigma, datum, lcd.ell)
        wa = frob_val ** (lcd.f % 2)
        if sigma.dim % 2 == 0:
            return wa
        if lcd.ell >= 5 and lcd.e in _ROHRLICH_TAME:
            d = _ROHRLICH_TAME[lcd.e]
            we = 1 if unit_is_square_unramified(d, lcd.ell, _residue_degree(q, lcd.ell)) else -1
            return wa * we**sigma.dim
        return None
    raise ValueError(f"unclassified reduction {kind}")


def _det_frobenius_value(sigma, datum, ell):
    if datum is None:
        raise MissingLocalDataError("unramified twisting formula needs the datum")
    H, embed = datum.subgroup_rep()
    det = det_character(restrict(sigma.char, H, embed))
    pos = {g: h for h, g in enumerate(embed)}
    v = det.value(pos[datum.frobenius])
    if v == Cyc.rational(1, 1):
        return 1
    if v == Cyc.rational(1, -1):
        return -1
    raise GaloisLocalError("det sigma_v(Frob) not quadratic for self-dual sigma")


def _residue_degree(q, ell):
    f = 0
    while q > 1:
        q //= ell
        f += 1
    return f


# ---------------------------------------------------------------------------
# Sigma and Sigma_0


def sigma0_reasons(lcd1, lcd2, datum: LocalGaloisDatum | None, p: int):
    """Reasons for membership of the prime in the correction set; empty list
    means it stays outside."""
    reasons = []
    for side, lcd in ((1, lcd1), (2, lcd2)):
        k = lcd.reduction
        if k in (RK.SPLIT, RK.NONSPLIT):
            if lcd.vj is not None and lcd.vj % p == 0:
                reasons.append(f"E{side}: multiplicative with p | ord_v(j)")
        elif k == RK.PMR:
            if lcd.vj is not None and lcd.vj % p == 0:
                reasons.append(
                    f"E{side}: potentially multiplicative with p | ord_v(j) "
                    "(conservative enlargement)")
            if lcd.ell in (2, 3) and lcd.f >= 3:
                reasons.append(
                    f"E{side}: wild additive at {lcd.ell}, conservatively included")
        elif k in (RK.PGA, RK.PGNA):
            if lcd.ell in (2, 3) and lcd.f >= 3:
                reasons.append(
                    f"E{side}: wild additive at {lcd.ell}, conservatively included")
            elif p == 3 and lcd.e == 3:
                reasons.append(
                    f"E{side}: potentially good with inertia order 3 = p "
                    "(mod-3 conductor drop)")
    if datum is not None and datum.e_v % p == 0:
        reasons.append("p divides e_v(K/F)")
    return reasons


def compute_sigma_sets(E1, E2, field_data: "FieldData", p: int):
    """(Sigma places, Sigma_0 entries with inclusion reasons)."""
    report = global_report(E1, E2, field_data, None, p, sigma_sets_only=True)
    return report.sigma_places, report.sigma0


def delta_diff_parity(E1, E2, field_data: "FieldData", sigma: SigmaSpec, p: int):
    """Parity of the invariant-side difference over the correction set, with
    the per-prime breakdown; the aggregate is checked against the bookkeeping
    tabulation inside the report assembly."""
    rep = global_report(E1, E2, field_data, sigma, p)
    breakdown = [
        {"v": e["v"], "bit": e["delta_contribution"], "corrections": e["corrections"]}
        for e in rep.per_prime if e["in_sigma0"]
    ]
    return rep.delta_side_parity, breakdown


# ---------------------------------------------------------------------------
# field data


@dataclass
class FieldPrime:
    label: str
    ell: int
    datum: LocalGaloisDatum
    pg_override: dict | None = None

    @property
    def q(self):
        return self.datum.q


@dataclass
class FieldData:
    name: str
    group: FiniteGroup
    base_label: str = "Q"
    base_degree: int = 1
    real_places: int = 1
    primes: list = field(default_factory=list)
    provenance: str = ""

    @property
    def is_Q(self):
        return self.base_label == "Q"

    def prime_for(self, ell: int) -> "FieldPrime | None":
        for fp in self.primes:
            if fp.ell == ell:
                return fp
        return None

    def primes_over(self, ell: int):
        return [fp for fp in self.primes if fp.ell == ell]

    def sigma_choices(self):
        out = []
        for chi in character_table(self.group):
            if frobenius_schur(chi) == 1 and chi.is_irreducible():
                out.append(chi)
        return out

    @staticmethod
    def from_dict(obj: dict) -> "FieldData":
        G = group_by_name(obj["group"])
        primes = []
        for label, rec in obj.get("primes", {}).items():
            rec = dict(rec)
            rec.setdefault("label", label)
            datum = parse_local_datum(rec, G)
            overrides = rec.get("overrides", {}) or {}
            primes.append(FieldPrime(label, int(rec["ell"]), datum,
                                     overrides.get("pg")))
        base = obj.get("base_field", {})
        return FieldData(
            name=obj.get("name", "field"),
            group=G,
            base_label=base.get("label", "Q"),
            base_degree=int(base.get("degree", 1)),
            real_places=int(base.get("real_places", 1)),
            primes=primes,
            provenance=obj.get("provenance", ""),
        )

    @staticmethod
    def from_json_file(path) -> "FieldData":
        with open(path) as fh:
            return FieldData.from_dict(json.load(fh))


def select_sigma(field_data: FieldData, selector: str | None) -> SigmaSpec:
    """Pick an orthogonal irreducible by name ('2dim-a', ...), index ('irr0'),
    or default (the first 2-dimensional orthogonal irreducible)."""
    choices = field_data.sigma_choices()
    if selector in (None, "", "default"):
        twos = [c for c in choices if c.dim == 2]
        if not twos:
            raise ValueError("no 2-dimensional orthogonal irreducible available")
        return SigmaSpec(field_data.group, twos[0])
    if selector.startswith("irr"):
        return SigmaSpec(field_data.group, character_table(field_data.group)[int(selector[3:])])
    for c in choices:
        if c.name == selector:
            return SigmaSpec(field_data.group, c)
    names = [c.name for c in choices]
    raise ValueError(f"unknown sigma selector {selector!r}; available: {names}")


# ---------------------------------------------------------------------------
# the report


@dataclass
class ParityReport:
    p: int
    sigma_name: str
    field_name: str
    curve1: str
    curve2: str
    sigma_places: list = field(default_factory=list)
    sigma0: list = field(default_factory=list)  # {"v", "reasons"}
    per_prime: list = field(default_factory=list)
    delta_side_parity: int = 0
    root_side_ratio: int = 1
    m1: int = 0
    m2: int = 0
    T: int = 0
    sets: dict = field(default_factory=dict)
    thm_consistent: bool = True
    W1: int | None = None
    W2: int | None = None
    assumptions: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "schema": "twistparity-report/1",
            "p": self.p,
            "sigma": self.sigma_name,
            "field": self.field_name,
            "curves": [self.curve1, self.curve2],
            "sigma_places": self.sigma_places,
            "sigma0": self.sigma0,
            "per_prime": self.per_prime,
            "delta_side_parity": self.delta_side_parity,
            "root_side_ratio": self.root_side_ratio,
            "bookkeeping": {"m1": self.m1, "m2": self.m2, "T": self.T,
                            "sets": self.sets},
            "consistent": self.thm_consistent,
            "absolute_root_numbers": {"W1": self.W1, "W2": self.W2},
            "assumptions": self.assumptions,
            "warnings": self.warnings,
        }


def _curve_class_at(E, fp: FieldPrime, p):
    datum = fp.datum
    if datum.e_over_ell != 1:
        raise MissingLocalDataError(
            f"{fp.label}: transport of curve data through a ramified base prime "
            "is unsupported; supply explicit overrides")
    override = fp.pg_override
    lcd = classify_reduction(E, fp.ell, p, override=override, q=datum.q)
    if lcd.vj is not None:
        lcd.vj *= datum.e_over_ell
    return lcd


def global_report(E1: WeierstrassCurve, E2: WeierstrassCurve,
                  field_data: FieldData, sigma: SigmaSpec | None, p: int,
                  assume_syl: bool = False, congruence_bound: int | None = None,
                  sigma_sets_only: bool = False) -> ParityReport:
    """Assemble the full two-sided parity comparison for a congruent pair."""
    if sigma is None and not sigma_sets_only:
        raise ValueError("sigma required")
    rep = ParityReport(
        p=p,
        sigma_name=sigma.char.name if sigma else "(none)",
        field_name=field_data.name,
        curve1=E1.label or str(list(E1.ainvs)),
        curve2=E2.label or str(list(E2.ainvs)),
    )

    verdict = check_congruence(E1, E2, p, bound=congruence_bound)
    if not verdict.supported:
        raise ValueError(
            f"mod-{p} congruence refuted at ell = {verdict.refutation[0]}: "
            f"a_ell = {verdict.refutation[1]} vs {verdict.refutation[2]}")

    bad1, bad2 = set(bad_primes(E1)), set(bad_primes(E2))
    if p in bad1 | bad2:
        raise ValueError(f"hypothesis violated: a curve has bad reduction at p = {p}")
    ap = local_data(E1, p).a_ell
    ordinary = ap % p != 0
    torsion_shadow = _p_torsion_trivial_shadow(E1, p)
    rep.assumptions = {
        "good_at_p": True,
        "ordinary_at_p": ordinary,
        "congruence": verdict.to_dict(),
        "p_torsion_trivial_over_Q": torsion_shadow,
        "p_torsion_trivial_over_K": "assumed (declared, not verified)",
        "selmer_finiteness_over_Kcyc": "assumed (declared, not verified)",
        "symplectic_isomorphism": bool(assume_syl),
        "overrides_used": [],
    }
    if not ordinary:
        rep.warnings.append(f"E1 is supersingular at {p} (a_p = {ap}); the "
                            "ordinarity hypothesis fails")

    # Sigma: p, infinity, bad primes, ramified primes of K/F
    covered = {fp.ell for fp in field_data.primes}
    needed = (bad1 | bad2) - {p}
    missing = needed - covered
    if missing:
        raise MissingLocalDataError(
            f"no local datum for bad prime(s) {sorted(missing)} in field "
            f"{field_data.name}")

    rep.sigma_places = (["real place"] * field_data.real_places
                        + [f"v | {p} (good for both curves)"]
                        + [fp.label for fp in field_data.primes])

    per_prime = []
    delta_sum = 0
    ratio_prod = 1
    m1 = m2 = T = 0
    sets = {k: [] for k in ("S1", "S2", "N1", "N2", "W", "X", "Y3", "Z3")}
    W1 = W2 = 1
    absolutes_ok = True

    # archimedean places
    arch = archimedean_root_number(sigma) if sigma else 1
    W1 *= arch ** field_data.real_places
    W2 *= arch ** field_data.real_places

    for fp in field_data.primes:
        if fp.ell == p:
            raise MissingLocalDataError("records at v | p are not consumed; "
                                        "both curves are good there by hypothesis")
        lcd1 = _curve_class_at(E1, fp, p)
        lcd2 = _curve_class_at(E2, fp, p)
        for lcd, E in ((lcd1, E1), (lcd2, E2)):
            if lcd.pg_override_used:
                rep.assumptions["overrides_used"].append(
                    {"v": fp.label, "curve": E.label, "e": lcd.e,
                     "kind": lcd.reduction})
        ppc = classify_pair(lcd1, lcd2, fp.q, p)
        reasons = sigma0_reasons(lcd1, lcd2, fp.datum, p)
        in_sigma0 = bool(reasons)
        entry = {
            "v": fp.label, "ell": fp.ell, "q": fp.q,
            "reduction": [lcd1.reduction, lcd2.reduction],
            "row": ppc.row,
            "in_sigma0": in_sigma0,
            "sigma0_reasons": reasons,
        }
        if sigma_sets_only:
            if in_sigma0:
                rep.sigma0.append({"v": fp.label, "reasons": reasons})
            per_prime.append(entry)
            continue

        bit, detail = delta_contribution(ppc, sigma, fp.datum)
        ratio = local_root_ratio(lcd1, lcd2, fp.q, p, sigma, fp.datum)
        entry["corrections"] = detail
        entry["delta_contribution"] = bit if in_sigma0 else 0
        entry["local_root_ratio"] = ratio
        if (-1) ** bit != ratio:
            rep.warnings.append(
                f"{fp.label}: local identity violated (delta bit {bit}, ratio {ratio})")
            rep.thm_consistent = False
        if in_sigma0:
            rep.sigma0.append({"v": fp.label, "reasons": reasons})
            delta_sum += bit
            ratio_prod *= ratio
            m1, m2, T = _bookkeeping(sets, fp, lcd1, lcd2, ppc, sigma, p,
                                     m1, m2, T)
        elif ppc.is_divergent and ratio != 1:
            rep.warnings.append(
                f"{fp.label}: divergent row outside the correction set with "
                "ratio -1; aggregate identity may not account for it")

        # absolute root numbers
        w1 = absolute_local_root_number(lcd1, sigma, fp.datum, p)
        w2 = absolute_local_root_number(lcd2, sigma, fp.datum, p)
        entry["W1_local"] = w1
        entry["W2_local"] = w2
        if w1 is None or w2 is None:
            absolutes_ok = False
        else:
            W1 *= w1
            W2 *= w2
        per_prime.append(entry)

    rep.per_prime = per_prime
    if sigma_sets_only:
        return rep

    # good primes of K/F-ramification are all in field_data.primes; any other
    # finite prime is good for both curves with sigma unramified: contributes
    # det sigma_v(-1) = +1 to each absolute root number and nothing else.

    rep.delta_side_parity = delta_sum % 2
    rep.root_side_ratio = ratio_prod
    rep.m1, rep.m2, rep.T = m1, m2, T
    rep.sets = {k: v for k, v in sets.items()}
    if (m1 + m2 + T) % 2 != rep.delta_side_parity:
        rep.warnings.append("bookkeeping parity disagrees with per-prime sum")
        rep.thm_consistent = False
    if (-1) ** ((m1 - m2 + T) % 2) != rep.root_side_ratio:
        rep.warnings.append("bookkeeping ratio disagrees with per-prime product")
        rep.thm_consistent = False
    if (-1) ** rep.delta_side_parity != rep.root_side_ratio:
        rep.thm_consistent = False
    if absolutes_ok:
        rep.W1, rep.W2 = W1, W2
        if rep.W1 * rep.W2 != rep.root_side_ratio:
            rep.warnings.append(
                "absolute root numbers disagree with the aggregated ratio")
            rep.thm_consistent = False
    return rep


def _bookkeeping(sets, fp, lcd1, lcd2, ppc, sigma, p, m1, m2, T):
    """The S/N/W/X/Y3/Z3 path of the aggregate (independent tabulation)."""
    datum = fp.datum

    def m(spec):
        return multiplicity(sigma, datum, spec)

    one = LocalCharSpec.one(p)
    kappa = LocalCharSpec.kappa_char(p)
    sig_ram = sigma_is_ramified(sigma, datum)
    for side, lcd in ((1, lcd1), (2, lcd2)):
        if lcd.reduction == RK.SPLIT:
            sets[f"S{side}"].append(fp.label)
            contrib = m(one)
            if side == 1:
                m1 += contrib
            else:
                m2 += contrib
        elif lcd.reduction == RK.NONSPLIT:
            sets[f"N{side}"].append(fp.label)
            contrib = m(kappa)
            if side == 1:
                m1 += contrib
            else:
                m2 += contrib
    kinds = {lcd1.reduction, lcd2.reduction}
    mu_p = (fp.q - 1) % p == 0
    if kinds == {RK.PMR} and ppc.row == "pmr-pmr-twist" and sig_ram and not mu_p:
        sets["W"].append(fp.label)
        th = LocalCharSpec.theta_quad(p, _theta_class(lcd1))
        T += m(th) + m(th.times_omega())
    if kinds == {RK.PMR, RK.PGA} and sig_ram:
        sets["X"].append(fp.label)
        pmr = lcd1 if lcd1.reduction == RK.PMR else lcd2
        T += m(LocalCharSpec.theta_quad(p, _theta_class(pmr)))
    if p == 3 and not mu_p and (kinds & {RK.SPLIT, RK.NONSPLIT}) and RK.PGNA in kinds:
        sets["Y3"].append(fp.label)
        pgna = lcd1 if lcd1.reduction == RK.PGNA else lcd2
        theta3 = LocalCharSpec(p, theta3_class=_theta3_curve_class(pgna, p))
        T += m(one) + m(kappa) + m(theta3)
    if p == 3 and not mu_p and kinds == {RK.PMR, RK.PGNA} and sig_ram:
        sets["Z3"].append(fp.label)
        pmr = lcd1 if lcd1.reduction == RK.PMR else lcd2
        pgna = lcd1 if lcd1.reduction == RK.PGNA else lcd2
        th = LocalCharSpec.theta_quad(p, _theta_class(pmr))
        T += m(th.times_omega()) + m(th.times_theta3(_theta3_curve_class(pgna, p)))
    return m1, m2, T


def _p_torsion_trivial_shadow(E, p):
    """Verified shadow of p-torsion triviality over the rationals: some good
    prime ell has p not dividing #E(F_ell) (torsion injects there)."""
    from .numtheory import primes_up_to

    bad = set(bad_primes(E))
    for ell in primes_up_to(200):
        if ell == p or ell in bad or ell == 2:
            continue
        count = ell + 1 - local_data(E, ell).a_ell
        if count % p:
            return f"verified via ell = {ell}: #E(F_ell) = {count} not divisible by {p}"
    return "not verified below 200"
