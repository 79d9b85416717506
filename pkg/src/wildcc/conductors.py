"""Per-divisor conductors of an Artin-Schreier-Witt datum.

The Swan conductor and total dimension are certified through the graded
phi-maps: a value is only reported together with a nonvanishing graded
form, so a wrong conductor can never be returned silently.  When the
leading part of the datum consists of p-th-power monomials the
representative is first rewritten by (F-1)-shifts; if certification
still fails the computation stops with an explicit diagnostic instead of
guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Poly, RationalSection
from .errors import FiltrationViolation, UnreducedRepresentative
from .forms import FormGerm, differential
from .witt import WittVector, fil_member, frobenius, witt_ord, witt_sub

REDUCTION_CAP = 500


@dataclass(frozen=True)
class DivisorInvariants:
    divisor: int
    sw: int
    dt: int
    kind: str  # 'tame' | 'I' | 'II'
    sw_mixed: int  # sw^{D'}: sw if the divisor is in the log set, else dt

    def __post_init__(self):
        assert self.dt in (self.sw, self.sw + 1)
        assert (self.sw == 0) == (self.dt == 1) == (self.kind == "tame")
        if self.kind == "I":
            assert self.dt == self.sw + 1 and self.sw > 0
        if self.kind == "II":
            assert self.dt == self.sw


def _pole_coefficient(c: RationalSection, divisor: int, level: int):
    """c * t_i^level restricted to t_i = 0, or None if not regular."""
    delta = [0] * c.nvars
    delta[divisor] = level
    r = c.times_monomial(delta)
    if r.den[divisor] > 0:
        return None
    return r.restrict_zero(divisor)


def phi_log(a: WittVector, n: int, divisor: int) -> FormGerm:
    """Image of the datum in gr_n Omega^1 at the divisor (the rsw shape)."""
    if n < 1:
        raise FiltrationViolation("log graded pieces start at level 1")
    if not fil_member(a, divisor, n, "log"):
        raise FiltrationViolation(f"datum is not in fil_{n} along divisor {divisor}")
    omega = differential(a)
    dlog = _pole_coefficient(omega[divisor], divisor, n + 1)
    if dlog is None:
        raise FiltrationViolation("dlog coefficient not regular at the stated level")
    dt = {}
    for k, c in omega.items():
        if k == divisor:
            continue
        r = _pole_coefficient(c, divisor, n)
        if r is None:
            raise FiltrationViolation("dt coefficient not regular at the stated level")
        dt[k] = r
    return FormGerm(divisor, n, "log", dlog, dt)


def phi_nonlog(a: WittVector, m: int, divisor: int) -> FormGerm:
    """Image in gr'_m Omega^1 tensor F^(1/p) (the characteristic-form shape)."""
    if m < 2:
        raise FiltrationViolation("nonlog graded pieces start at level 2")
    if not fil_member(a, divisor, m, "nonlog"):
        raise FiltrationViolation(f"datum is not in fil'_{m} along divisor {divisor}")
    omega = differential(a)
    dt = {}
    for k, c in omega.items():
        r = _pole_coefficient(c, divisor, m)
        if r is None:
            raise FiltrationViolation("coefficient not regular at the stated nonlog level")
        dt[k] = r
    p = a.field.p
    if p == 2 and m == 2 and a.length >= 1:
        a0 = a.components[-1]
        w = _pole_coefficient(a0, divisor, 2)
        if w is None:
            raise FiltrationViolation("a_0 has a pole of order > 2 at a nonlog-level-2 divisor")
        dt[divisor] = dt[divisor] + w.pth_root()
    return FormGerm(divisor, m, "nonlog", None, dt)


# ---------------------------------------------------------------------------
# representative reduction
# ---------------------------------------------------------------------------


def _reducible_term(a: WittVector, divisor: int):
    """A pole term c t^E at some component with E = 0 mod p, if any.

    Returns (list index, coefficient, actual exponent vector E) where E
    counts the denominator, so E[divisor] < 0.
    """
    p = a.field.p
    for l, comp in enumerate(a.components):
        if comp.is_zero():
            continue
        den = comp.den
        for e, c in comp.num.terms.items():
            E = tuple(e[k] - den[k] for k in range(len(e)))
            if E[divisor] >= 0:
                continue
            if all(x % p == 0 for x in E):
                return l, c, E
    return None


def reduce_representative(a: WittVector, divisor: int) -> WittVector:
    """Remove all p-th-power monomial pole terms along the divisor.

    Each hit c t^(pE') at component index l is traded for its root via
    a - (F-1)(b), b the vector with c^(1/p) t^(E') at index l; this moves
    within the class of the character.
    """
    F, nv = a.field, a.nvars
    for _ in range(REDUCTION_CAP):
        hit = _reducible_term(a, divisor)
        if hit is None:
            return a
        l, c, E = hit
        p = F.p
        root_exp = tuple(x // p for x in E)
        num = Poly.monomial(F, nv, tuple(max(x, 0) for x in root_exp), F.pth_root(c))
        sec = RationalSection(num, tuple(max(-x, 0) for x in root_exp))
        comps = [RationalSection.zero(F, nv)] * a.length
        comps[l] = sec
        b = WittVector(F, nv, comps)
        a = witt_sub(a, witt_sub(frobenius(b), b))
    raise UnreducedRepresentative(
        f"reduction along divisor {divisor} did not terminate within {REDUCTION_CAP} steps"
    )


def compute_invariants(a: WittVector, divisor: int, in_iprime: bool, declared_tame: bool = False):
    """Certified (invariants, rsw germ, cform germ, reduced representative).

    The conductor values come with Lemma-certified nonzero graded forms;
    inputs whose representative cannot be rewritten to a certifiable one
    raise UnreducedRepresentative rather than returning a guess.
    """
    a = reduce_representative(a, divisor)
    o = witt_ord(a, divisor)
    if declared_tame and o is not None and o < 0:
        raise FiltrationViolation(
            f"divisor {divisor} was declared tame but the datum has a pole there"
        )
    if o is None or o >= 0:
        inv = DivisorInvariants(divisor, 0, 1, "tame", 0 if in_iprime else 1)
        return inv, None, None, a
    n = -o
    rsw = phi_log(a, n, divisor)
    if rsw.is_zero():
        # post-reduction the graded leading part cannot cancel; if it
        # still does the input is outside the class we can rewrite
        raise UnreducedRepresentative(
            f"phi_log vanishes at level {n} along divisor {divisor} after reduction"
        )
    sw = n
    if fil_member(a, divisor, sw, "nonlog"):
        cform = phi_nonlog(a, sw, divisor)
        if cform.is_zero():
            raise UnreducedRepresentative(
                f"phi_nonlog vanishes at level {sw} along divisor {divisor} after reduction"
            )
        dt, kind = sw, "II"
    else:
        cform = phi_nonlog(a, sw + 1, divisor)
        if cform.is_zero():
            raise UnreducedRepresentative(
                f"phi_nonlog vanishes at level {sw + 1} along divisor {divisor} after reduction"
            )
        dt, kind = sw + 1, "I"
    inv = DivisorInvariants(divisor, sw, dt, kind, sw if in_iprime else dt)
    return inv, rsw, cform, a
