from fractions import Fraction

import pytest

from twistparity.reptheory import (
    CharacterRep,
    Cyc,
    RepTheoryError,
    character_table,
    cyclic,
    det_character,
    dihedral,
    frobenius_schur,
    gl2f3,
    group_by_name,
    inner_product,
    restrict,
    sl2f3,
    subgroup_group,
)

ALL_GROUPS = lambda: [cyclic(1), cyclic(2), cyclic(3), cyclic(5), cyclic(6),
                      dihedral(4), dihedral(6), dihedral(10), dihedral(12),
                      sl2f3(), gl2f3()]


def induced_character(G, H, embed, psi):
    """Test-local induction: Ind_H^G psi(g) = (1/|H|) sum_{x: x^-1 g x in H} psi(x^-1 g x)."""
    pos = {g: i for i, g in enumerate(embed)}
    vals = []
    for cls in G.classes:
        g = cls[0]
        total = Cyc.rational(1, 0)
        for x in range(G.n):
            y = G.mul(G.mul(G.inv(x), g), x)
            if y in pos:
                total = total + psi.value(pos[y])
        vals.append(total / H.n)
    return CharacterRep(G, tuple(vals), psi.dim * G.n // H.n, f"ind({psi.name})")


class TestCyc:
    def test_roots_of_unity(self):
        z = Cyc.root(5, 1)
        s = z
        for _ in range(4):
            s = s * z
        assert s == Cyc.rational(5, 1)

    def test_sum_of_primitive_roots(self):
        total = Cyc.rational(1, 0)
        for k in range(1, 5):
            total = total + Cyc.root(5, k)
        assert total == Cyc.rational(1, -1)

    def test_conjugation(self):
        z = Cyc.root(8, 1)
        assert z.conj() == Cyc.root(8, 7)
        sqrt_m2 = Cyc.root(8, 1) + Cyc.root(8, 3)
        assert sqrt_m2 * sqrt_m2 == Cyc.rational(1, -2)
        assert sqrt_m2.conj() == -sqrt_m2

    def test_cross_modulus(self):
        assert Cyc.root(3, 1) + Cyc.root(3, 2) == Cyc.rational(1, -1)
        assert Cyc.root(6, 2) == Cyc.root(3, 1)


class TestGroups:
    def test_sizes(self):
        assert cyclic(7).n == 7
        assert dihedral(10).n == 10
        assert sl2f3().n == 24
        assert gl2f3().n == 48

    def test_class_equation(self):
        for G in ALL_GROUPS():
            assert sum(len(c) for c in G.classes) == G.n

    def test_by_name(self):
        assert group_by_name("S3").n == 6
        assert group_by_name("D10").n == 10
        assert group_by_name("C4").n == 4

    def test_subgroup_closure(self):
        G = dihedral(10)
        rot = G.subgroup([1])
        assert len(rot) == 5
        refl = G.subgroup([5])
        assert len(refl) == 2
        assert G.is_normal(rot)
        assert not G.is_normal(refl)


class TestCharacterTables:
    def test_orthonormality_everywhere(self):
        for G in ALL_GROUPS():
            tab = character_table(G)
            assert sum(chi.dim**2 for chi in tab) == G.n
            for i, chi in enumerate(tab):
                for j, psi in enumerate(tab):
                    assert inner_product(chi, psi) == (1 if i == j else 0)

    def test_dihedral10_two_dims(self):
        twos = [c for c in character_table(dihedral(10)) if c.dim == 2]
        assert len(twos) == 2
        for c in twos:
            assert frobenius_schur(c) == 1

    def test_cyclic1_trivial(self):
        tab = character_table(cyclic(1))
        assert len(tab) == 1 and tab[0].dim == 1

    def test_gl2f3_three_two_dims(self):
        twos = [c for c in character_table(gl2f3()) if c.dim == 2]
        assert len(twos) == 3
        # pairwise distinct as characters
        for i in range(3):
            for j in range(i + 1, 3):
                assert twos[i].values != twos[j].values


class TestInnerProduct:
    def test_irreducible_norm_one(self):
        for G in ALL_GROUPS():
            for chi in character_table(G):
                assert inner_product(chi, chi) == 1

    def test_s3_restriction_to_c2(self):
        G = dihedral(6)
        two = next(c for c in character_table(G) if c.dim == 2)
        H, embed = subgroup_group(G, G.subgroup([3]))  # a reflection
        res = restrict(two, H, embed)
        sign = next(c for c in character_table_on(H) if c.dim == 1 and not is_trivial(c))
        assert inner_product(res, sign) == 1

    def test_regular_character(self):
        G = dihedral(6)
        vals = tuple(Cyc.rational(1, G.n if cls[0] == G.identity else 0) for cls in G.classes)
        reg = CharacterRep(G, vals, G.n, "reg")
        triv = character_table(G)[0]
        assert inner_product(reg, triv) == 1


def character_table_on(H):
    """Brute table for tiny groups used in tests: build from scratch for C2."""
    if H.n == 2:
        return (
            CharacterRep(H, (Cyc.rational(1, 1), Cyc.rational(1, 1)), 1, "triv"),
            CharacterRep(H, (Cyc.rational(1, 1), Cyc.rational(1, -1)), 1, "sign"),
        )
    raise AssertionError


def is_trivial(chi):
    return all(v == Cyc.rational(1, 1) for v in chi.values)


class TestRestrict:
    def test_restrict_to_self(self):
        G = dihedral(10)
        chi = character_table(G)[0]
        assert restrict(chi, G) is chi

    def test_s3_two_dim_to_c3(self):
        G = dihedral(6)
        two = next(c for c in character_table(G) if c.dim == 2)
        H, embed = subgroup_group(G, G.subgroup([1]))
        res = restrict(two, H, embed)
        nontriv = [c for c in character_table(H) if not is_trivial_c(c, H)]
        assert len(nontriv) == 2
        for c in nontriv:
            assert inner_product(res, c) == 1

    def test_two_dim_to_trivial_subgroup(self):
        G = dihedral(10)
        two = next(c for c in character_table(G) if c.dim == 2)
        H, embed = subgroup_group(G, (G.identity,))
        res = restrict(two, H, embed)
        assert inner_product(res, character_table(H)[0]) == 2


def is_trivial_c(chi, H):
    return all(chi.value(g) == Cyc.rational(1, 1) for g in range(H.n))


class TestFrobeniusSchur:
    def test_dihedral_two_dims_orthogonal(self):
        for order in (6, 10, 12):
            for c in character_table(dihedral(order)):
                if c.dim == 2:
                    assert frobenius_schur(c) == 1

    def test_cyclic3_not_self_dual(self):
        tab = character_table(cyclic(3))
        nontriv = [c for c in tab if not is_trivial_c(c, cyclic(3))]
        for c in nontriv:
            assert frobenius_schur(c) == 0

    def test_sl2f3_real_two_dim_symplectic(self):
        tab = character_table(sl2f3())
        real_two = [c for c in tab if c.dim == 2
                    and all(v == v.conj() for v in c.values)]
        assert len(real_two) == 1
        assert frobenius_schur(real_two[0]) == -1


class TestDetCharacter:
    def test_s3_det_is_sign(self):
        G = dihedral(6)
        tab = character_table(G)
        two = next(c for c in tab if c.dim == 2)
        sign = next(c for c in tab if c.name == "sign")
        assert det_character(two).values == sign.values

    def test_det_of_linear(self):
        chi = character_table(cyclic(4))[1]
        assert det_character(chi) is chi

    def test_d10_det_is_sign(self):
        # rotations have det 1; reflections s: chi(s) = 0, chi(s^2) = 2, det = -1
        G = dihedral(10)
        tab = character_table(G)
        sign = next(c for c in tab if c.name == "sign")
        for two in (c for c in tab if c.dim == 2):
            assert det_character(two).values == sign.values

    def test_det_of_twist(self):
        G = dihedral(12)
        tab = character_table(G)
        two = next(c for c in tab if c.dim == 2)
        for lam in (c for c in tab if c.dim == 1):
            twisted = two * lam
            expect = det_character(two) * lam * lam
            assert det_character(twisted).values == tuple(
                a * Cyc.rational(1, 1) for a in expect.values
            )


class TestFrobeniusReciprocity:
    def test_dihedral_pairs(self):
        G = dihedral(10)
        H, embed = subgroup_group(G, G.subgroup([1]))  # C5
        for psi in character_table(H):
            ind = induced_character(G, H, embed, psi)
            for chi in character_table(G):
                lhs = inner_product(restrict(chi, H, embed), psi)
                rhs = inner_product(chi, ind)
                assert lhs == rhs
