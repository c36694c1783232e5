import importlib.resources

import pytest

from twistparity.curve import ReductionKind as RK, WeierstrassCurve
from twistparity.galoislocal import LocalCharSpec, SigmaSpec, multiplicity
from twistparity.numtheory import CubeClassMu3
from twistparity.parity import (
    FieldData,
    ImpossiblePairError,
    MissingLocalDataError,
    absolute_local_root_number,
    classify_pair,
    compute_sigma_sets,
    delta_contribution,
    global_report,
    local_root_ratio,
    select_sigma,
    sigma0_reasons,
)
from twistparity.reptheory import character_table, dihedral

from sweep_helpers import (
    c2_ram_datum,
    fake_lcd,
    orthogonal_sigmas,
    ram_class,
    sweep_cases,
    unram_class,
)

E11 = WeierstrassCurve(0, -1, 1, -7820, -263580, label="11.a2")
E737 = WeierstrassCurve(0, -1, 1, 406, -686, label="737.a1")
E52 = WeierstrassCurve(0, 0, 0, 1, -10, label="52.a1")
E364 = WeierstrassCurve(0, 0, 0, -584, 5444, label="364.a1")
E56 = WeierstrassCurve(0, -1, 0, 0, -4, label="56.b1")
E392 = WeierstrassCurve(0, -1, 0, -16, 29, label="392.c1")


def fixture(name):
    ref = importlib.resources.files("twistparity") / "fixtures" / f"{name}.json"
    return FieldData.from_json_file(str(ref))


class TestSigma0Rules:
    def test_multiplicative_rule(self):
        split5 = fake_lcd(RK.SPLIT, 11, vj=-5)
        split6 = fake_lcd(RK.SPLIT, 11, vj=-6)
        good = fake_lcd(RK.GOOD, 11)
        assert sigma0_reasons(split5, split5, None, 3) == []
        assert sigma0_reasons(split6, split6, None, 3)
        assert sigma0_reasons(good, split6, None, 3)

    def test_ramification_index_rule(self):
        from twistparity.galoislocal import LocalGaloisDatum

        G = dihedral(10)
        from twistparity.numtheory import Place, square_class

        cls = square_class(1093, Place.finite(1093))
        d = LocalGaloisDatum(G, 1093, [5], [5], G.identity,
                             quad_annotations={frozenset({5}): cls})
        good = fake_lcd(RK.GOOD, 1093)
        # e_v = 2 and p = 3: not in the correction set
        assert sigma0_reasons(good, good, d, 3) == []
        assert sigma0_reasons(good, good, d, 2) != []  # would enter for p = 2

    def test_pg_inertia_three_rule(self):
        pga = fake_lcd(RK.PGA, 7, vj=0, e=3)
        split = fake_lcd(RK.SPLIT, 7, vj=-1)
        assert sigma0_reasons(split, pga, None, 3)
        # p = 5: stable conductor, no reason
        pga5 = fake_lcd(RK.PGA, 7, vj=0, e=3)
        assert sigma0_reasons(fake_lcd(RK.GOOD, 7), pga5, None, 5) == []

    def test_wild_conservative(self):
        pgna = fake_lcd(RK.PGNA, 2, vj=0, e=24, f=3)
        assert any("conservatively" in r
                   for r in sigma0_reasons(pgna, pgna, None, 3))

    def test_compute_sigma_sets_example1(self):
        fd = fixture("d5_1093")
        places, sigma0 = compute_sigma_sets(E11, E737, fd, 3)
        assert [e["v"] for e in sigma0] == ["67"]
        assert "11" in places and "1093" in places

    def test_1093_not_in_sigma0(self):
        # ramified in K/Q with e_v = 2 and both curves good: stays out for p=3
        fd = fixture("d5_1093")
        _, sigma0 = compute_sigma_sets(E11, E737, fd, 3)
        assert all(e["v"] != "1093" for e in sigma0)


class TestClassifyPair:
    def test_good_split(self):
        ppc = classify_pair(fake_lcd(RK.GOOD, 7), fake_lcd(RK.SPLIT, 7, vj=-5), 7, 5)
        assert ppc.row == "good-split"
        assert [s.label() for _, s in ppc.corrections] == ["1"]

    def test_split_nonsplit(self):
        ppc = classify_pair(fake_lcd(RK.SPLIT, 5, vj=-3),
                            fake_lcd(RK.NONSPLIT, 5, vj=-3), 5, 3)
        assert ppc.row == "split-nonsplit"
        assert sorted(s.label() for _, s in ppc.corrections) == ["1", "kappa"]

    def test_split_nonsplit_needs_q_minus_one(self):
        # 11 is not -1 mod 5, so the pair contradicts the congruence
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.SPLIT, 11, vj=-5),
                          fake_lcd(RK.NONSPLIT, 11, vj=-5), 11, 5)

    def test_good_additive_impossible(self):
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.GOOD, 7), fake_lcd(RK.PGA, 7, e=2), 7, 5)

    def test_mult_pmr_impossible(self):
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.SPLIT, 7, vj=-5),
                          fake_lcd(RK.PMR, 7, vj=-5, minus_c6=ram_class(7)), 7, 5)

    def test_pga_pgna_impossible(self):
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.PGA, 7, e=2), fake_lcd(RK.PGNA, 7, e=3), 7, 5)

    def test_split_pga_needs_mu3(self):
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.SPLIT, 5, vj=-3),
                          fake_lcd(RK.PGA, 5, e=3), 5, 3)
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.SPLIT, 7, vj=-5),
                          fake_lcd(RK.PGA, 7, e=3), 7, 5)

    def test_pmr_classes_must_differ_by_kappa(self):
        a = fake_lcd(RK.PMR, 5, vj=-3, minus_c6=ram_class(5, True))
        bad = fake_lcd(RK.PMR, 5, vj=-3, minus_c6=unram_class(5))
        with pytest.raises(ImpossiblePairError):
            classify_pair(a, bad, 5, 3)

    def test_pg_e_mismatch_impossible(self):
        with pytest.raises(ImpossiblePairError):
            classify_pair(fake_lcd(RK.PGA, 7, e=2), fake_lcd(RK.PGA, 7, e=4), 7, 5)

    def test_orientation_swap(self):
        a = classify_pair(fake_lcd(RK.SPLIT, 7, vj=-5), fake_lcd(RK.GOOD, 7), 7, 5)
        assert a.row == "good-split"
        assert a.corrections[0][0] == 1  # the (originally first) split side


class TestLocalizedIdentitySweep:
    def test_every_case_and_coverage(self):
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
        assert not failures, failures[:10]
        expected_rows = {
            "good-good", "split-split", "nonsplit-nonsplit", "good-split",
            "good-nonsplit", "split-nonsplit", "split-pga", "nonsplit-pga",
            "split-pgna", "nonsplit-pgna", "pmr-pmr", "pmr-pmr-twist",
            "pmr-pga", "pmr-pgna", "pga-pga", "pgna-pgna",
        }
        missing = expected_rows - set(coverage)
        assert not missing, f"rows never exercised: {missing}"
        assert total > 200
        print(f"localized identity sweep: {total} cases, "
              f"{len(coverage)} rows covered: { {k: coverage[k] for k in sorted(coverage)} }")

    def test_enlargement_stability(self):
        # adding an equal-class prime to the correction set changes nothing:
        # its contribution bit is 0 and its ratio is +1 in every equal row
        for desc, p, q, G, datum, lcd1, lcd2 in sweep_cases():
            if lcd1.reduction != lcd2.reduction:
                continue
            for sigma in orthogonal_sigmas(G):
                try:
                    ppc = classify_pair(lcd1, lcd2, q, p)
                except ImpossiblePairError:
                    continue
                if ppc.row in ("pmr-pmr-twist",):
                    continue
                bit, _ = delta_contribution(ppc, sigma, datum)
                assert bit == 0
                assert local_root_ratio(lcd1, lcd2, q, p, sigma, datum) == 1

    def test_correction_self_duality(self):
        # every correction multiplicity is invariant under chi -> chi^(-1):
        # the engine's characters are all self-dual by construction (orders <= 2
        # or the real 2-dimensional), so check <sigma, chi> = <sigma, conj chi>
        for desc, p, q, G, datum, lcd1, lcd2 in sweep_cases()[:60]:
            for sigma in orthogonal_sigmas(G):
                try:
                    ppc = classify_pair(lcd1, lcd2, q, p)
                except ImpossiblePairError:
                    continue
                for _, spec in ppc.corrections:
                    target = datum.char_from_spec(spec)
                    if target is None:
                        continue
                    conj_vals = tuple(v.conj() for v in target.values)
                    assert conj_vals == target.values


class TestGlobalReports:
    def test_example1(self):
        fd = fixture("d5_1093")
        for sel in ("2dim-a", "2dim-b"):
            rep = global_report(E11, E737, fd, select_sigma(fd, sel), 3)
            assert rep.delta_side_parity == 0
            assert rep.root_side_ratio == 1
            assert rep.W1 == 1 and rep.W2 == 1
            assert rep.thm_consistent
            assert not rep.warnings

    def test_example2(self):
        fd = fixture("s3_257")
        rep = global_report(E52, E364, fd, select_sigma(fd, None), 5)
        assert rep.delta_side_parity == 1
        assert rep.root_side_ratio == -1
        assert rep.W1 == 1 and rep.W2 == -1
        assert rep.thm_consistent
        assert [e["v"] for e in rep.sigma0] == ["7"]

    def test_example3_both_kummer_generators(self):
        for name, want_mult in (("zeta19_s3_m2", 2), ("zeta19_s3_m14", 0)):
            fd = fixture(name)
            rep = global_report(E56, E392, fd, select_sigma(fd, None), 3)
            assert rep.delta_side_parity == 0
            assert rep.root_side_ratio == 1
            assert rep.thm_consistent
            for entry in rep.per_prime:
                if entry["ell"] == 7:
                    assert entry["row"] == "split-pga"
                    assert entry["in_sigma0"]
                    mults = [c["multiplicity"] for c in entry["corrections"]]
                    assert mults == [want_mult]

    def test_identical_curves(self):
        fd = fixture("d5_1093")
        rep = global_report(E11, E11, fd, select_sigma(fd, None), 3)
        assert rep.delta_side_parity == 0 and rep.root_side_ratio == 1
        assert rep.thm_consistent

    def test_refuted_congruence_rejected(self):
        fd = fixture("d5_1093")
        with pytest.raises(ValueError, match="refuted"):
            global_report(E11, E52, fd, select_sigma(fd, None), 3)

    def test_missing_datum_rejected(self):
        fd = fixture("d5_1093")
        with pytest.raises(MissingLocalDataError):
            global_report(E52, E364, fd, select_sigma(fd, None), 5)

    def test_bookkeeping_matches_per_prime(self):
        fd = fixture("s3_257")
        rep = global_report(E52, E364, fd, select_sigma(fd, None), 5)
        assert (rep.m1 + rep.m2 + rep.T) % 2 == rep.delta_side_parity
        assert (-1) ** ((rep.m1 - rep.m2 + rep.T) % 2) == rep.root_side_ratio
        assert rep.sets["S2"] == ["7"]

    def test_assumption_ledger(self):
        fd = fixture("d5_1093")
        rep = global_report(E11, E737, fd, select_sigma(fd, None), 3)
        a = rep.assumptions
        assert a["good_at_p"] and a["ordinary_at_p"]
        assert a["congruence"]["status"] == "supported"
        assert "verified via ell" in a["p_torsion_trivial_over_Q"]
        assert "assumed" in a["selmer_finiteness_over_Kcyc"]


class TestAbsoluteRootNumbers:
    def test_archimedean_handled_in_report(self):
        # dim sigma = 2: archimedean contribution +1 regardless of real places
        fd = fixture("zeta19_s3_m2")
        assert fd.real_places == 9

    def test_split_trivial_sigma(self):
        # split multiplicative with sigma = trivial: W = -1
        from twistparity.reptheory import cyclic

        G = cyclic(1)
        from twistparity.galoislocal import LocalGaloisDatum

        datum = LocalGaloisDatum(G, 11, [], [], 0)
        triv = SigmaSpec(G, character_table(G)[0])
        lcd = fake_lcd(RK.SPLIT, 11, vj=-5)
        assert absolute_local_root_number(lcd, triv, datum, 5) == -1

    def test_nonsplit_trivial_sigma(self):
        from twistparity.reptheory import cyclic
        from twistparity.galoislocal import LocalGaloisDatum

        G = cyclic(1)
        datum = LocalGaloisDatum(G, 11, [], [], 0)
        triv = SigmaSpec(G, character_table(G)[0])
        lcd = fake_lcd(RK.NONSPLIT, 11, vj=-5)
        assert absolute_local_root_number(lcd, triv, datum, 5) == 1

    def test_good_unramified_sigma(self):
        G, datum = c2_ram_datum(7, 7, ram_class(7))
        sigma = SigmaSpec(G, character_table(G)[0])
        assert absolute_local_root_number(fake_lcd(RK.GOOD, 7), sigma, datum, 3) == 1

    def test_pgna_ramified_sigma_undetermined(self):
        from twistparity.galoislocal import s3_kummer_local_datum

        datum = s3_kummer_local_datum(10, 5, 3)
        G = dihedral(6)
        sigma = SigmaSpec(G, next(c for c in character_table(G) if c.dim == 2))
        lcd = fake_lcd(RK.PGNA, 5, vj=0, e=3, cube=CubeClassMu3(5, 1, 0))
        assert absolute_local_root_number(lcd, sigma, datum, 3) is None

    def test_pmr_uses_hilbert_value(self):
        # theta(-1) = -1 when the class is a uniformizer at 7 (7 = 3 mod 4)
        G, datum = c2_ram_datum(7, 7, ram_class(7))
        sigma = SigmaSpec(G, character_table(G)[1])  # the sign character, dim 1
        lcd = fake_lcd(RK.PMR, 7, vj=-3, minus_c6=ram_class(7))
        w = absolute_local_root_number(lcd, sigma, datum, 3)
        # det sigma_v(-1) = theta(-1) = -1; theta(-1)^dim = -1; <sigma,theta> = 1
        assert w == (-1) * (-1) * (-1)


class TestDeltaDiffParity:
    def test_matches_report(self):
        from twistparity.parity import delta_diff_parity

        fd = fixture("s3_257")
        sigma = select_sigma(fd, None)
        parity, breakdown = delta_diff_parity(E52, E364, fd, sigma, 5)
        assert parity == 1
        assert [b["v"] for b in breakdown] == ["7"]
        assert breakdown[0]["bit"] == 1
