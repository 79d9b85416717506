"""Witt vectors of bounded length over rational-section rings.

Components are stored in display order (a_{s-1}, ..., a_0): the leftmost
entry is the standard Witt coordinate x_0 and the entry at list index l
carries weight p^(s-1-l) in the normalized valuation.  Ring operations
go through the universal addition/subtraction/multiplication polynomials,
generated once over Z by the ghost-component recursion and reduced mod p;
char-p division never happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import Field, Poly, RationalSection
from .errors import SemanticError, UnsupportedClassError

#: lengths above this are refused outright
LENGTH_CAP = 4

#: universal-polynomial sizes explode like p^level; this bounds p^(s-1)
GHOST_COST_CAP = 32


# ---------------------------------------------------------------------------
# integer polynomials for the ghost recursion
# ---------------------------------------------------------------------------


def _zmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _zadd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _zpow(a: dict, n: int) -> dict:
    r = {(0,) * len(next(iter(a), ())): 1} if a else {}
    if not a:
        return {}
    key0 = (0,) * len(next(iter(a)))
    r = {key0: 1}
    b = a
    while n:
        if n & 1:
            r = _zmul(r, b)
        b = _zmul(b, b)
        n >>= 1
    return r


def _zdiv_exact(a: dict, n: int) -> dict:
    out = {}
    for e, c in a.items():
        q, r = divmod(c, n)
        if r:
            raise ArithmeticError("ghost recursion produced a non-integral term")
        out[e] = q
    return out


def _guard(p: int, length: int):
    if length > LENGTH_CAP:
        raise UnsupportedClassError(f"Witt length {length} exceeds the cap {LENGTH_CAP}")
    if length >= 2 and p ** (length - 1) > GHOST_COST_CAP:
        raise UnsupportedClassError(
            f"universal Witt polynomials for p={p}, length {length} are out of reach"
        )


@lru_cache(maxsize=None)
def universal_polynomials(p: int, length: int, kind: str):
    """Mod-p coefficient lists of the universal polynomials.

    kind is one of 'sum', 'diff', 'prod'.  Entry m is a list of
    (coeff, exponents) over the 2(m+1) variables X_0..X_m, Y_0..Y_m,
    exponents interleaved as (ex_0..ex_m, ey_0..ey_m).
    """
    _guard(p, length)

    def var(which: int, i: int, m: int) -> dict:
        e = [0] * (2 * (m + 1))
        e[which * (m + 1) + i] = 1
        return {tuple(e): 1}

    def widen(f: dict, old_m: int, new_m: int) -> dict:
        out = {}
        for e, c in f.items():
            ex, ey = e[: old_m + 1], e[old_m + 1:]
            out[tuple(ex) + (0,) * (new_m - old_m) + tuple(ey) + (0,) * (new_m - old_m)] = c
        return out

    polys: list[dict] = []
    for m in range(length):
        X = [var(0, i, m) for i in range(m + 1)]
        Y = [var(1, i, m) for i in range(m + 1)]
        prev = [widen(f, i, m) for i, f in enumerate(polys)]
        if kind == "sum":
            acc = _zadd(X[m], Y[m])
            num: dict = {}
            for i in range(m):
                bracket = _zadd(
                    _zadd(_zpow(X[i], p ** (m - i)), _zpow(Y[i], p ** (m - i))),
                    _zpow(prev[i], p ** (m - i)),
                    -1,
                )
                num = _zadd(num, {e: p**i * c for e, c in bracket.items()})
            acc = _zadd(acc, _zdiv_exact(num, p**m))
        elif kind == "diff":
            acc = _zadd(X[m], Y[m], -1)
            num = {}
            for i in range(m):
                bracket = _zadd(
                    _zadd(_zpow(X[i], p ** (m - i)), _zpow(Y[i], p ** (m - i)), -1),
                    _zpow(prev[i], p ** (m - i)),
                    -1,
                )
                num = _zadd(num, {e: p**i * c for e, c in bracket.items()})
            acc = _zadd(acc, _zdiv_exact(num, p**m))
        elif kind == "prod":
            gx: dict = {}
            gy: dict = {}
            for i in range(m + 1):
                gx = _zadd(gx, {e: p**i * c for e, c in _zpow(X[i], p ** (m - i)).items()})
                gy = _zadd(gy, {e: p**i * c for e, c in _zpow(Y[i], p ** (m - i)).items()})
            acc = _zmul(gx, gy)
            for i in range(m):
                acc = _zadd(acc, {e: p**i * c for e, c in _zpow(prev[i], p ** (m - i)).items()}, -1)
            acc = _zdiv_exact(acc, p**m)
        else:
            raise ValueError(kind)
        polys.append(acc)

    reduced = []
    for f in polys:
        reduced.append([(c % p, e) for e, c in sorted(f.items()) if c % p])
    return reduced


# ---------------------------------------------------------------------------
# Witt vectors
# ---------------------------------------------------------------------------


class WittVector:
    """A length-s vector of rational sections, display order (a_{s-1},..,a_0)."""

    __slots__ = ("field", "nvars", "components")

    def __init__(self, field: Field, nvars: int, components: Sequence[RationalSection]):
        for c in components:
            if c.field != field or c.nvars != nvars:
                raise SemanticError("Witt component field or dimension mismatch")
            if c.num.scale != 0:
                raise SemanticError("Witt components must be integral-exponent sections")
        self.field = field
        self.nvars = nvars
        self.components = tuple(components)

    @property
    def length(self) -> int:
        return len(self.components)

    @classmethod
    def zero(cls, field: Field, nvars: int, length: int) -> "WittVector":
        z = RationalSection.zero(field, nvars)
        return cls(field, nvars, (z,) * length)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def render(self, names=None) -> str:
        return "(" + ", ".join(c.render(names) for c in self.components) + ")"

    def __repr__(self):
        return f"WittVector{self.render()}"


def _check_pair(a: WittVector, b: WittVector):
    if a.length != b.length:
        raise SemanticError("Witt length mismatch")
    if a.field != b.field or a.nvars != b.nvars:
        raise SemanticError("Witt field or dimension mismatch")


def _apply_universal(kind: str, a: WittVector, b: WittVector) -> WittVector:
    _check_pair(a, b)
    s = a.length
    if s == 0:
        return a
    plans = universal_polynomials(a.field.p, s, kind)
    F, nv = a.field, a.nvars
    power_cache: dict = {}

    def power(which: int, i: int, e: int) -> RationalSection:
        key = (which, i, e)
        if key not in power_cache:
            base = a.components[i] if which == 0 else b.components[i]
            power_cache[key] = base**e
        return power_cache[key]

    out = []
    for m in range(s):
        acc = RationalSection.zero(F, nv)
        for c, exps in plans[m]:
            ex, ey = exps[: m + 1], exps[m + 1:]
            term = RationalSection.const(F, nv, c)
            for i, e in enumerate(ex):
                if e:
                    term = term * power(0, i, e)
            for i, e in enumerate(ey):
                if e:
                    term = term * power(1, i, e)
            acc = acc + term
        out.append(acc)
    return WittVector(F, nv, out)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return _apply_universal("sum", a, b)


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    if b.is_zero():
        return a
    return _apply_universal("diff", a, b)


def witt_neg(a: WittVector) -> WittVector:
    return witt_sub(WittVector.zero(a.field, a.nvars, a.length), a)


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return _apply_universal("prod", a, b)


def frobenius(a: WittVector) -> WittVector:
    return WittVector(a.field, a.nvars, tuple(c.pth_power() for c in a.components))


def verschiebung(a: WittVector, fixed_length: bool = False) -> WittVector:
    """Prepend a zero; in fixed-length mode shift within length s instead."""
    z = RationalSection.zero(a.field, a.nvars)
    if fixed_length:
        if a.length == 0:
            return a
        return WittVector(a.field, a.nvars, (z,) + a.components[:-1])
    return WittVector(a.field, a.nvars, (z,) + a.components)


def int_to_witt(field: Field, nvars: int, length: int, n: int) -> WittVector:
    """The image of the integer n under Z -> W_s(F_p) c W_s(coefficients)."""
    p = field.p
    digits: list[int] = []
    for m in range(length):
        acc = 0
        for i, x in enumerate(digits):
            acc += p**i * x ** (p ** (m - i))
        x_m = ((n - acc) // p**m) % p
        digits.append(x_m)
    return WittVector(
        field, nvars, tuple(RationalSection.const(field, nvars, d) for d in digits)
    )


def teichmuller(field: Field, nvars: int, length: int, c: RationalSection) -> WittVector:
    comps = (c,) + tuple(RationalSection.zero(field, nvars) for _ in range(length - 1))
    return WittVector(field, nvars, comps)


# ---------------------------------------------------------------------------
# valuations and filtrations
# ---------------------------------------------------------------------------


def witt_ord(a: WittVector, divisor: int):
    """min over components of p^i ord(a_i) along the divisor; None is +infinity."""
    p, s = a.field.p, a.length
    best = None
    for l, c in enumerate(a.components):
        o = c.ord(divisor)
        if o is None:
            continue
        v = p ** (s - 1 - l) * o
        if best is None or v < best:
            best = v
    return best


def _vp(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class FiltrationLevel:
    """Per-divisor filtration levels with a log/nonlog flavor each."""

    levels: tuple  # tuple of (divisor, n, flavor)

    def __post_init__(self):
        for _, n, flavor in self.levels:
            if flavor not in ("log", "nonlog"):
                raise SemanticError(f"unknown filtration flavor {flavor!r}")
            if flavor == "nonlog" and n < 1:
                raise SemanticError("nonlog filtration levels start at 1")


def fil_member(a: WittVector, divisor: int, n: int, flavor: str = "log") -> bool:
    """Membership of a in fil_n (log) or fil'_n (nonlog) along the divisor."""
    p, s = a.field.p, a.length
    if flavor == "log":
        o = witt_ord(a, divisor)
        return o is None or o >= -n
    if flavor != "nonlog":
        raise SemanticError(f"unknown filtration flavor {flavor!r}")
    m = n
    if m < 1:
        raise SemanticError("nonlog filtration levels start at 1")
    sp = min(s, _vp(m, p))
    # the top s-s' components must already lie at level m-1; the bottom s'
    # components (the image of V^(s-s')) are allowed level m
    for l, c in enumerate(a.components):
        o = c.ord(divisor)
        if o is None:
            continue
        v = p ** (s - 1 - l) * o
        bound = -(m - 1) if l < s - sp else -m
        if v < bound:
            return False
    return True


def fil_member_level(a: WittVector, level: FiltrationLevel) -> bool:
    return all(fil_member(a, d, n, flavor) for d, n, flavor in level.levels)
