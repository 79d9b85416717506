import random
from itertools import product

import pytest

from wildcc.algebra import Poly, RationalSection, prime_field
from wildcc.errors import UnsupportedClassError
from wildcc.witt import (
    WittVector,
    fil_member,
    frobenius,
    int_to_witt,
    universal_polynomials,
    verschiebung,
    witt_add,
    witt_mul,
    witt_neg,
    witt_ord,
    witt_sub,
)


def consts(field, nvars, values):
    return WittVector(field, nvars, tuple(RationalSection.const(field, nvars, v) for v in values))


def section(field, nvars, num_terms, den):
    return RationalSection(Poly(field, nvars, dict(num_terms)), den)


class TestUniversalPolynomials:
    def test_s1_shape(self):
        # S_1 = X_1 + Y_1 + (X_0^p + Y_0^p - (X_0+Y_0)^p)/p, reduced mod p
        plans = universal_polynomials(3, 2, "sum")
        assert sorted(plans[0]) == [(1, (0, 1)), (1, (1, 0))]
        # for p=3: -(3 choose 1)/3 X0^2 Y0 - (3 choose 2)/3 X0 Y0^2 = -X0^2Y0 - X0Y0^2
        d = dict((e, c) for c, e in plans[1])
        assert d[(0, 1, 0, 0)] == 1 and d[(0, 0, 0, 1)] == 1
        assert d[(2, 0, 1, 0)] == 2 and d[(1, 0, 2, 0)] == 2

    def test_cost_guard(self):
        with pytest.raises(UnsupportedClassError):
            universal_polynomials(5, 4, "sum")


class TestGroupLaw:
    @pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
    def test_exhaustive_cyclic_group(self, p, s):
        # W_s(F_p) is Z/p^s: build the table by repeatedly adding the unit
        F = prime_field(p)
        one = int_to_witt(F, 1, s, 1)
        table = [WittVector.zero(F, 1, s)]
        for _ in range(p**s - 1):
            table.append(witt_add(table[-1], one))
        index = {t.components: i for i, t in enumerate(table)}
        assert len(index) == p**s  # the orbit really is cyclic of order p^s
        assert witt_add(table[-1], one) == table[0]
        for i, j in product(range(p**s), repeat=2):
            assert witt_add(table[i], table[j]) == table[(i + j) % p**s]
        for i, j in product(range(0, p**s, max(1, p ** (s - 1) // 2)), repeat=2):
            assert witt_mul(table[i], table[j]) == table[(i * j) % p**s]
        for i in range(p**s):
            assert witt_sub(table[0], table[i]) == table[(-i) % p**s]

    def test_unit_plus_unit_is_v_of_one(self):
        # in W_2(F_2): (1,0) + (1,0) = (0,1)
        F = prime_field(2)
        one = consts(F, 1, (1, 0))
        assert witt_add(one, one) == consts(F, 1, (0, 1))

    def test_w3_f3_v_squared_elements(self):
        # V^2(1) + V^2(2) = 0, while the integers give 1 + 2 = 3 = (0,1,0)
        F = prime_field(3)
        a = consts(F, 1, (0, 0, 1))
        b = consts(F, 1, (0, 0, 2))
        assert witt_add(a, b) == consts(F, 1, (0, 0, 0))
        assert int_to_witt(F, 1, 3, 3) == consts(F, 1, (0, 1, 0))

    def test_additive_identity(self):
        F = prime_field(3)
        a = WittVector(
            F,
            2,
            (
                section(F, 2, [((0, 1), 1)], (1, 0)),  # t2/t1
                section(F, 2, [((2, 0), 2)], (0, 1)),  # 2 t1^2/t2
            ),
        )
        assert witt_add(a, WittVector.zero(F, 2, 2)) == a
        assert witt_add(witt_neg(a), a).is_zero()


class TestFrobeniusVerschiebung:
    def test_v_prepends_zero(self):
        F = prime_field(3)
        a = consts(F, 1, (1, 2))
        v = verschiebung(a)
        assert v.length == 3
        assert v.components[0].is_zero()
        assert v.components[1:] == a.components

    def test_fv_is_multiplication_by_p(self):
        # F(V(a)) = p*a, via the Z/p^s oracle and via repeated addition
        for p, s in [(2, 2), (2, 3), (3, 2)]:
            F = prime_field(p)
            for n in range(p**s):
                a = int_to_witt(F, 1, s, n)
                fv = frobenius(verschiebung(a, fixed_length=True))
                assert fv == int_to_witt(F, 1, s, p * n)

    def test_fv_on_monomial_sections(self):
        # F(V(a)) = a + a + ... (p times) for polynomial sections
        rng = random.Random(2)
        for p in (2, 3):
            F = prime_field(p)
            for _ in range(10):
                comps = tuple(
                    section(F, 2, [((rng.randint(0, 2), rng.randint(0, 2)), rng.randint(1, p - 1))], (0, 0))
                    for _ in range(2)
                )
                a = WittVector(F, 2, comps)
                fv = frobenius(verschiebung(a, fixed_length=True))
                acc = WittVector.zero(F, 2, 2)
                for _ in range(p):
                    acc = witt_add(acc, a)
                assert fv == acc

    def test_f_componentwise(self):
        F = prime_field(3)
        a = WittVector(F, 2, (section(F, 2, [((1, 0), 1)], (0, 0)),))
        assert frobenius(a).components[0] == section(F, 2, [((3, 0), 1)], (0, 0))


class TestValuationFiltration:
    def make_paper_example(self, p):
        # (t2/t1, t2, t2/t1^(p^2)) in W_3 over GF(p), boundary t1
        F = prime_field(p)
        return F, WittVector(
            F,
            2,
            (
                section(F, 2, [((0, 1), 1)], (1, 0)),
                section(F, 2, [((0, 1), 1)], (0, 0)),
                section(F, 2, [((0, 1), 1)], (p * p, 0)),
            ),
        )

    @pytest.mark.parametrize("p", [2, 3])
    def test_paper_valuation_example(self, p):
        F, a = self.make_paper_example(p)
        assert witt_ord(a, 0) == -p * p

    def test_zero_has_infinite_ord(self):
        F = prime_field(3)
        assert witt_ord(WittVector.zero(F, 2, 3), 0) is None
        assert fil_member(WittVector.zero(F, 2, 3), 0, 0, "log")

    def test_plain_valuation(self):
        F = prime_field(3)
        a = WittVector(F, 2, (section(F, 2, [((1, 0), 1)], (0, 0)),))
        assert witt_ord(a, 0) == 1

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_paper_filtration_levels(self, p):
        # smallest log level is p^2, smallest nonlog level is p^2 + 1
        F, a = self.make_paper_example(p)
        assert fil_member(a, 0, p * p, "log")
        assert not fil_member(a, 0, p * p - 1, "log")
        assert fil_member(a, 0, p * p + 1, "nonlog")
        assert not fil_member(a, 0, p * p, "nonlog")

    def test_fil_prime_one_equals_fil_zero(self):
        # fil'_1 = fil_0 on a sample of monomial data
        rng = random.Random(9)
        for p in (2, 3):
            F = prime_field(p)
            for _ in range(40):
                comps = []
                for _ in range(2):
                    den = (rng.randint(0, 3), 0)
                    comps.append(section(F, 2, [((rng.randint(0, 2), rng.randint(0, 1)), rng.randint(1, p - 1))], den))
                a = WittVector(F, 2, tuple(comps))
                assert fil_member(a, 0, 1, "nonlog") == fil_member(a, 0, 0, "log")

    def test_filtration_sandwich(self):
        # fil_{m-1} c fil'_m c fil_m on random monomial data
        rng = random.Random(17)
        for p in (2, 3, 5):
            F = prime_field(p)
            for _ in range(200):
                s = rng.randint(1, 3)
                comps = []
                for _ in range(s):
                    den = (rng.randint(0, 2 * p), rng.randint(0, 2))
                    num = [((rng.randint(0, 2), rng.randint(0, 2)), rng.randint(1, p - 1))]
                    comps.append(section(F, 2, num, den))
                a = WittVector(F, 2, tuple(comps))
                for m in range(1, 2 * p * p + 1):
                    in_prev = fil_member(a, 0, m - 1, "log")
                    in_mid = fil_member(a, 0, m, "nonlog")
                    in_next = fil_member(a, 0, m, "log")
                    assert not in_prev or in_mid
                    assert not in_mid or in_next
