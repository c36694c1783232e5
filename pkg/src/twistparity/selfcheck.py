"""Self-check sweep: the localized two-sided identity exercised over
synthetic decomposition configurations, every admissible parity row, and
p in {3, 5, 7}.  This is the `selftest` CLI subcommand and the substance of
the acceptance property sweep."""

from twistparity.curve import KodairaSymbol, LocalReductionData, ReductionKind as RK
from twistparity.galoislocal import LocalGaloisDatum, SigmaSpec, s3_kummer_local_datum
from twistparity.numtheory import CubeClassMu3, Place, SquareClass, square_class
from twistparity.parity import classify_pair, delta_contribution, local_root_ratio
from twistparity.reptheory import character_table, cyclic, dihedral, frobenius_schur


def fake_lcd(kind, ell, vj=0, e=None, minus_c6=None, cube=None, f=None):
    if f is None:
        f = {RK.GOOD: 0, RK.SPLIT: 1, RK.NONSPLIT: 1}.get(kind, 2)
    return LocalReductionData(
        ell=ell, kodaira=KodairaSymbol("I0"), f=f, v_delta_min=0, vj=vj,
        reduction=kind, minimal_model=(0, 0, 0, 0, 1),
        minus_c6_class=minus_c6, e=e, delta_min_cube_class=cube,
    )


def ram_class(ell, unit_square=True):
    return SquareClass(Place.finite(ell), val_parity=1, unit_square=unit_square)


def unram_class(ell):
    return SquareClass(Place.finite(ell), val_parity=0, unit_square=False)


def cyclic_unram_datum(n, ell, q):
    G = cyclic(n)
    return G, LocalGaloisDatum(G, ell, list(range(n)), [], 1 % n, q=q)


def c2_ram_datum(ell, q, cls):
    G = cyclic(2)
    return G, LocalGaloisDatum(G, ell, [1], [1], 0, q=q,
                               quad_annotations={frozenset({1}): cls})


def klein_datum(ell, q, cls_ram):
    """C2 x C2 with ramified C2 and unramified quadratic quotient: both the
    unramified quadratic and two ramified quadratics are available."""
    G = dihedral(4)
    anns = {
        frozenset({1, 3}): cls_ram,
        frozenset({1, 2}): cls_ram * unram_class(ell) if ell != 2
        else cls_ram * square_class(5, Place.finite(2)),
    }
    return G, LocalGaloisDatum(G, ell, [1, 2], [1], 2, q=q, quad_annotations=anns)


def s3_ram_datum(m, ell):
    G = dihedral(6)
    return G, s3_kummer_local_datum(m, ell, 3)


def d12_datum(ell, q, cls_ram, cube_cls):
    G = dihedral(12)
    kappa_cls = unram_class(ell)
    anns = {
        frozenset({1, 3, 5, 7, 9, 11}): cls_ram,
        frozenset({1, 3, 5, 6, 8, 10}): cls_ram * kappa_cls,
    }
    return G, LocalGaloisDatum(G, ell, list(range(12)), [1], 6, q=q,
                               quad_annotations=anns, cubic_annotation=cube_cls)


def orthogonal_sigmas(G):
    return [SigmaSpec(G, chi) for chi in character_table(G)
            if frobenius_schur(chi) == 1]


def sweep_cases():
    """Yield (description, p, q, datum, lcd1, lcd2, row_hint) for every
    admissible row over the built-in decomposition configurations."""
    cases = []

    def add(desc, p, q, G, datum, lcd1, lcd2):
        cases.append((desc, p, q, G, datum, lcd1, lcd2))

    for p in (3, 5, 7):
        # unramified configurations with f_v from 1 to 6
        for f_v in range(1, 7):
            for ell in (11, 13, 19, 29, 31, 43):
                q = ell
                if f_v > 1:
                    G, datum = cyclic_unram_datum(f_v, ell, q)
                else:
                    G, datum = cyclic_unram_datum(1, ell, q)
                good = fake_lcd(RK.GOOD, ell)
                split = fake_lcd(RK.SPLIT, ell, vj=-p)
                nonsplit = fake_lcd(RK.NONSPLIT, ell, vj=-p)
                add(f"good-good f={f_v}", p, q, G, datum, good, good)
                add(f"split-split f={f_v}", p, q, G, datum, split, split)
                add(f"ns-ns f={f_v}", p, q, G, datum, nonsplit, nonsplit)
                add(f"good-split f={f_v}", p, q, G, datum, good, split)
                add(f"split-good f={f_v}", p, q, G, datum, split, good)
                add(f"good-ns f={f_v}", p, q, G, datum, good, nonsplit)
                if (q + 1) % p == 0:
                    add(f"split-ns f={f_v}", p, q, G, datum, split, nonsplit)
                # equal-type potentially good pairs, e in {1, 2, 3} surrogate
                for e in (2, 3, 4, 6):
                    kind = RK.PGA if (q - 1) % e == 0 else RK.PGNA
                    if kind == RK.PGNA and not (p == 3 or (q ** 2 - 1) % p == 0 or True):
                        continue
                    lcd = fake_lcd(kind, ell, vj=0, e=e)
                    add(f"pg-pg e={e} f={f_v}", p, q, G, datum, lcd, lcd)
                break  # one ell per f_v is plenty; ells rotate below

        # ramified quadratic configurations: PMR rows
        for ell in (5, 7, 13):
            for us in (True, False):
                cls = ram_class(ell, us)
                for G, datum in (c2_ram_datum(ell, ell, cls),
                                 klein_datum(ell, ell, cls)):
                    pmr1 = fake_lcd(RK.PMR, ell, vj=-p, minus_c6=cls)
                    pmr2_same = fake_lcd(RK.PMR, ell, vj=-p, minus_c6=cls)
                    add(f"pmr-pmr eq ell={ell}", p, ell, G, datum, pmr1, pmr2_same)
                    pga2 = fake_lcd(RK.PGA, ell, vj=0, e=2)
                    add(f"pmr-pga ell={ell}", p, ell, G, datum, pmr1, pga2)
                    add(f"pga-pmr ell={ell}", p, ell, G, datum, pga2, pmr1)
                    if (ell + 1) % p == 0:
                        other = cls * unram_class(ell)
                        pmr2_tw = fake_lcd(RK.PMR, ell, vj=-p, minus_c6=other)
                        add(f"pmr-pmr twist ell={ell}", p, ell, G, datum,
                            pmr1, pmr2_tw)

    # p = 3 rows with mu_3 conditions
    # split/nonsplit vs PGA: q = 1 (mod 3), e = 3: D cyclic C3 (ram cubic ok)
    for qcfg in ((7, 1), (13, 1), (31, 1)):
        ell = qcfg[0]
        G, datum = cyclic_unram_datum(2, ell, ell)
        split = fake_lcd(RK.SPLIT, ell, vj=-3)
        nonsplit = fake_lcd(RK.NONSPLIT, ell, vj=-3)
        pga = fake_lcd(RK.PGA, ell, vj=0, e=3)
        add("split-pga", 3, ell, G, datum, split, pga)
        add("pga-split", 3, ell, G, datum, pga, split)
        add("ns-pga", 3, ell, G, datum, nonsplit, pga)

    # split/nonsplit vs PGNA and PMR vs PGNA: q = 2 (mod 3)
    for m, ell in ((10, 5), (22, 11), (10, 2)):
        G, datum = s3_ram_datum(m, ell)
        match = datum.cubic_annotation
        nomatch = CubeClassMu3(ell, match.val_mod_3, (match.unit_class + 1) % 3)
        split = fake_lcd(RK.SPLIT, ell, vj=-3)
        nonsplit = fake_lcd(RK.NONSPLIT, ell, vj=-3)
        for cube, tag in ((match, "match"), (nomatch, "nomatch")):
            pgna = fake_lcd(RK.PGNA, ell, vj=0, e=3, cube=cube)
            add(f"split-pgna {tag}", 3, ell, G, datum, split, pgna)
            add(f"ns-pgna {tag}", 3, ell, G, datum, nonsplit, pgna)
            add(f"pgna-split {tag}", 3, ell, G, datum, pgna, split)

    for ell in (5, 11):
        cls = ram_class(ell, True)
        cube_match = CubeClassMu3(ell, 1, 0)
        G, datum = d12_datum(ell, ell, cls, cube_match)
        pmr = fake_lcd(RK.PMR, ell, vj=-3, minus_c6=cls)
        for cube, tag in ((cube_match, "match"), (CubeClassMu3(ell, 1, 1), "nomatch")):
            pgna6 = fake_lcd(RK.PGNA, ell, vj=0, e=6, cube=cube)
            add(f"pmr-pgna {tag}", 3, ell, G, datum, pmr, pgna6)
            add(f"pgna-pmr {tag}", 3, ell, G, datum, pgna6, pmr)
        # pmr-pmr twist over the D12 datum as well
        other = cls * unram_class(ell)
        pmr2 = fake_lcd(RK.PMR, ell, vj=-3, minus_c6=other)
        add("pmr-pmr twist d12", 3, ell, G, datum, pmr, pmr2)
        # mult-pgna over the same data
        split = fake_lcd(RK.SPLIT, ell, vj=-3)
        pgna3 = fake_lcd(RK.PGNA, ell, vj=0, e=3, cube=cube_match)
        add("split-pgna d12", 3, ell, G, datum, split, pgna3)
    return cases


EXPECTED_ROWS = frozenset({
    "good-good", "split-split", "nonsplit-nonsplit", "good-split",
    "good-nonsplit", "split-nonsplit", "split-pga", "nonsplit-pga",
    "split-pgna", "nonsplit-pgna", "pmr-pmr", "pmr-pmr-twist",
    "pmr-pga", "pmr-pgna", "pga-pga", "pgna-pgna",
})


def run_selftest():
    """Run the full sweep; returns (total_cases, coverage, failures)."""
    from twistparity.parity import ImpossiblePairError

    coverage = {}
    failures = []
    total = 0
    for desc, p, q, G, datum, lcd1, lcd2 in sweep_cases():
        for sigma in orthogonal_sigmas(G):
            try:
                ppc = classify_pair(lcd1, lcd2, q, p)
            except ImpossiblePairError:
                continue
            bit, _ = delta_contribution(ppc, sigma, datum)
            ratio = local_root_ratio(lcd1, lcd2, q, p, sigma, datum)
            total += 1
            coverage[ppc.row] = coverage.get(ppc.row, 0) + 1
            if (-1) ** bit != ratio:
                failures.append((desc, p, sigma.char.name, bit, ratio))
    return total, coverage, failures
