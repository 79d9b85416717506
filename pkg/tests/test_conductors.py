import random

import pytest

from wildcc.algebra import Poly, RationalSection, prime_field
from wildcc.conductors import compute_invariants, phi_log, phi_nonlog, reduce_representative
from wildcc.errors import FiltrationViolation
from wildcc.forms import FormGerm, differential
from wildcc.witt import WittVector, frobenius, witt_add, witt_ord, witt_sub


def sec(field, nvars, terms, den=None):
    return RationalSection(Poly(field, nvars, dict(terms)), den or (0,) * nvars)


def wv(field, nvars, *components):
    return WittVector(field, nvars, components)


def conductor_example_datum(p):
    # (t2/t1, t2, t2/t1^(p^2)) in W_3 on the plane with boundary t1
    F = prime_field(p)
    return F, wv(
        F,
        2,
        sec(F, 2, {(0, 1): 1}, (1, 0)),
        sec(F, 2, {(0, 1): 1}),
        sec(F, 2, {(0, 1): 1}, (p * p, 0)),
    )


class TestWorkedExample:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_invariants_and_germs(self, p):
        F, a = conductor_example_datum(p)
        inv, rsw, cform, _ = compute_invariants(a, 0, in_iprime=True)
        assert inv.sw == p * p
        assert inv.dt == p * p + 1
        assert inv.kind == "I"
        q = p * p
        expected_rsw = FormGerm(
            0,
            q,
            "log",
            sec(F, 2, {(0, q): 1}),
            {1: sec(F, 2, {(0, q - 1): F.neg(1), (0, 0): F.neg(1)})},
        )
        assert rsw == expected_rsw
        expected_cform = FormGerm(
            0,
            q + 1,
            "nonlog",
            None,
            {0: sec(F, 2, {(0, q): 1}), 1: RationalSection.zero(F, 2)},
        )
        assert cform == expected_cform


class TestPhiMaps:
    def test_phi_log_w1_hand_differentiated(self):
        # a = (t2^2/t1) in W_1, p = 3: -d a = (t2^2 dlog t1 - 2 t2 dt2)/t1
        F = prime_field(3)
        a = wv(F, 2, sec(F, 2, {(0, 2): 1}, (1, 0)))
        g = phi_log(a, 1, 0)
        assert g.dlog == sec(F, 2, {(0, 2): 1})
        assert g.dt[1] == sec(F, 2, {(0, 1): F.neg(2)})

    def test_phi_log_ghost_cross_check(self):
        # cross-check the W_1 case against direct differentiation d(f/t^e)
        F = prime_field(3)
        a0 = sec(F, 2, {(0, 2): 1, (1, 1): 2}, (1, 0))
        omega = differential(wv(F, 2, a0))
        # d(a0) components via quotient rule by hand
        f = Poly(F, 2, {(0, 2): 1, (1, 1): 2})
        d1 = RationalSection(f.partial(0) * Poly.var(F, 2, 0) - f, (2, 0))
        d2 = RationalSection(f.partial(1), (1, 0))
        assert omega[0] == -d1 and omega[1] == -d2

    def test_phi_log_zero_vector(self):
        F = prime_field(3)
        with pytest.raises(FiltrationViolation):
            phi_log(WittVector.zero(F, 2, 2), 0, 0)
        g = phi_log(WittVector.zero(F, 2, 2), 1, 0)
        assert g.is_zero()

    def test_phi_nonlog_p2_sqrt_correction(self):
        # p = 2, a = (t2/t1^2) in W_1, m = 2: dt2/t1^2 + t2^(1/2) dt1/t1^2
        F = prime_field(2)
        a = wv(F, 2, sec(F, 2, {(0, 1): 1}, (2, 0)))
        g = phi_nonlog(a, 2, 0)
        assert g.dt[1] == sec(F, 2, {(0, 0): 1})
        root = g.dt[0]
        assert root.num.scale == 1
        assert root.num.terms == {(0, 1): 1}

    def test_phi_nonlog_additivity_shifted_representative(self):
        # the nonlog germ is unchanged by adding (F-1)(b) for integral b
        F = prime_field(2)
        a = wv(F, 2, sec(F, 2, {(0, 1): 1}, (2, 0)))
        b = wv(F, 2, sec(F, 2, {(1, 1): 1}))
        shifted = witt_add(a, witt_sub(frobenius(b), b))
        assert phi_nonlog(shifted, 2, 0) == phi_nonlog(a, 2, 0)

    def test_phi_additivity_on_graded_piece(self):
        rng = random.Random(23)
        for p in (2, 3):
            F = prime_field(p)
            for _ in range(20):
                n = rng.randint(1, 4)
                def monomial_vec():
                    comps = []
                    for l in range(2):
                        e1 = rng.randint(0, 1)
                        c = rng.randint(1, p - 1)
                        comps.append(sec(F, 2, {(0, rng.randint(0, 2)): c}, (e1, 0)))
                    return WittVector(F, 2, tuple(comps))

                a, b = monomial_vec(), monomial_vec()
                s = witt_add(a, b)
                ok = (
                    (witt_ord(a, 0) or 0) >= -n
                    and (witt_ord(b, 0) or 0) >= -n
                    and (witt_ord(s, 0) or 0) >= -n
                )
                if not ok:
                    continue
                ga, gb, gs = phi_log(a, n, 0), phi_log(b, n, 0), phi_log(s, n, 0)
                total = {
                    k: (ga.dt.get(k, RationalSection.zero(F, 2)) + gb.dt.get(k, RationalSection.zero(F, 2)))
                    for k in set(ga.dt) | set(gb.dt)
                }
                assert gs.dlog == ga.dlog + gb.dlog
                for k, v in total.items():
                    assert gs.dt.get(k, RationalSection.zero(F, 2)) == v


class TestReduction:
    def test_pth_power_pole_reduces(self):
        # a = (t1^-p) in W_1 is (F-1)-equivalent to (t1^-1): sw = 1
        for p in (2, 3):
            F = prime_field(p)
            a = wv(F, 2, sec(F, 2, {(0, 0): 1}, (p, 0)))
            inv, rsw, cform, reduced = compute_invariants(a, 0, in_iprime=True)
            assert inv.sw == 1 and inv.dt == 2 and inv.kind == "I"
            assert witt_ord(reduced, 0) == -1

    def test_constant_pth_power_is_unramified(self):
        # (c t1^-p) with c = u^p reduces all the way to an integral datum? no:
        # it reduces to (c^(1/p) t1^-1), still wildly ramified with sw = 1
        F = prime_field(3)
        a = wv(F, 2, sec(F, 2, {(0, 0): 2}, (3, 0)))
        inv, _, _, _ = compute_invariants(a, 0, in_iprime=True)
        assert inv.sw == 1

    def test_reduction_keeps_class(self):
        F = prime_field(2)
        a = wv(F, 2, sec(F, 2, {(0, 1): 1}, (4, 0)), sec(F, 2, {(0, 1): 1}, (1, 0)))
        reduced = reduce_representative(a, 0)
        diff = witt_sub(a, reduced)
        # the difference is (F-1)(b) for some b; verify by checking that the
        # graded forms of a and reduced agree at every certifiable level
        inv1, r1, c1, _ = compute_invariants(a, 0, True)
        inv2, r2, c2, _ = compute_invariants(reduced, 0, True)
        assert (inv1.sw, inv1.dt) == (inv2.sw, inv2.dt)
        assert r1 == r2 and c1 == c2


class TestInvariantContracts:
    def test_exapushdim_conductors(self):
        # (t1/t2, t2/t1, t3/(t1^p t2^(p^2))): sw = (p, p^2), dt = (p+1, p^2+1)
        for p in (2, 3):
            F = prime_field(p)
            a = wv(
                F,
                3,
                sec(F, 3, {(1, 0, 0): 1}, (0, 1, 0)),
                sec(F, 3, {(0, 1, 0): 1}, (1, 0, 0)),
                sec(F, 3, {(0, 0, 1): 1}, (p, p * p, 0)),
            )
            inv1, _, _, _ = compute_invariants(a, 0, in_iprime=True)
            inv2, _, _, _ = compute_invariants(a, 1, in_iprime=True)
            assert (inv1.sw, inv2.sw) == (p, p * p)
            assert (inv1.dt, inv2.dt) == (p + 1, p * p + 1)
            assert inv1.kind == inv2.kind == "I"

    def test_type_two_divisor(self):
        # (t2/t1^p) in W_1 has dt = sw = p along t1 (type II)
        for p in (2, 3):
            F = prime_field(p)
            a = wv(F, 2, sec(F, 2, {(0, 1): 1}, (p, 0)))
            inv, rsw, cform, _ = compute_invariants(a, 0, in_iprime=True)
            assert inv.sw == inv.dt == p
            assert inv.kind == "II"
            assert not rsw.is_zero() and not cform.is_zero()

    def test_no_pole_is_tame(self):
        F = prime_field(3)
        a = wv(F, 2, sec(F, 2, {(1, 1): 2}))
        inv, rsw, cform, _ = compute_invariants(a, 0, in_iprime=False)
        assert (inv.sw, inv.dt, inv.kind) == (0, 1, "tame")
        assert inv.sw_mixed == 1
        assert rsw is None and cform is None

    def test_representative_invariance(self):
        # conductors are class functions: a and a + (F-1)b agree for 100 b's
        rng = random.Random(41)
        F = prime_field(3)
        a = wv(
            F,
            2,
            sec(F, 2, {(0, 1): 1}, (1, 0)),
            sec(F, 2, {(0, 1): 1}, (9, 0)),
        )
        base = compute_invariants(a, 0, True)
        checked = 0
        for _ in range(100):
            comps = []
            for _ in range(2):
                terms = {}
                for _ in range(rng.randint(1, 2)):
                    terms[(rng.randint(0, 2), rng.randint(0, 2))] = rng.randint(0, 2)
                comps.append(sec(F, 2, terms))
            b = WittVector(F, 2, tuple(comps))
            shifted = witt_add(a, witt_sub(frobenius(b), b))
            inv, rsw, cform, _ = compute_invariants(shifted, 0, True)
            assert (inv.sw, inv.dt, inv.kind) == (base[0].sw, base[0].dt, base[0].kind)
            assert rsw == base[1] and cform == base[2]
            checked += 1
        assert checked == 100

    def test_dt_range_on_generated_instances(self):
        rng = random.Random(5)
        for p in (2, 3):
            F = prime_field(p)
            for _ in range(40):
                comps = []
                s = rng.randint(1, 3)
                for _ in range(s):
                    den = (rng.randint(0, 6), rng.randint(0, 1))
                    terms = {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(1, p - 1)}
                    comps.append(sec(F, 2, terms, den))
                a = WittVector(F, 2, tuple(comps))
                inv, rsw, cform, _ = compute_invariants(a, 0, in_iprime=True)
                assert inv.dt in (inv.sw, inv.sw + 1)
                if inv.sw > 0:
                    assert not rsw.is_zero() and not cform.is_zero()
