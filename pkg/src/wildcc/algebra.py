"""Exact arithmetic over GF(p^k).

Multivariate polynomials are immutable maps from exponent tuples to
nonzero field elements.  Every polynomial carries a scale flag m in
{0, 1}: a stored exponent u in variable i means t_i^(u/p^m).  Scale 1
appears only for sections pulled back to the radicial cover (adjoined
p-th roots of the coordinates) and is never iterated.

A RationalSection is a polynomial divided by a monomial in the
coordinates; pole exponents are kept integral and the numerator is kept
coprime to every coordinate that appears in the denominator.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .errors import SemanticError, UnsupportedClassError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """GF(p^k) presented as F_p[x]/(modulus); k = 1 is the prime field.

    Elements are ints in range(p**k) encoding the base-p digit vector of
    the residue polynomial, least significant digit first.
    """

    def __init__(self, p: int, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise SemanticError(f"p must be prime, got {p}")
        self.p = p
        if modulus is None:
            modulus = (0, 1)  # x, so the quotient is F_p itself
        mod = tuple(c % p for c in modulus)
        while len(mod) > 1 and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) < 2 or mod[-1] != 1:
            raise SemanticError("field modulus must be monic of degree >= 1")
        self.modulus = mod
        self.k = len(mod) - 1
        self.order = p ** self.k
        if self.k > 1 and not self._modulus_irreducible():
            raise SemanticError("field modulus is not irreducible over F_p")

    def _modulus_irreducible(self) -> bool:
        # brute force: no monic divisor of degree 1..k//2
        for deg in range(1, self.k // 2 + 1):
            for code in range(self.p ** deg):
                cand = tuple((code // self.p**i) % self.p for i in range(deg)) + (1,)
                if self._polydivmod(self.modulus, cand)[1] == (0,):
                    return False
        return True

    @staticmethod
    def _polytrim(a: tuple) -> tuple:
        i = len(a)
        while i > 1 and a[i - 1] == 0:
            i -= 1
        return a[:i]

    def _polydivmod(self, a: tuple, b: tuple) -> tuple:
        p = self.p
        a = list(a)
        db, lb = len(b) - 1, b[-1]
        inv = pow(lb, p - 2, p)
        q = [0] * max(len(a) - db, 1)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] % p
            if c:
                f = c * inv % p
                q[i - db] = f
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - f * b[j]) % p
        return self._polytrim(tuple(q)), self._polytrim(tuple(x % p for x in a))

    # -- element codecs -------------------------------------------------
    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def _encode(self, digits: Iterable[int]) -> int:
        return sum((d % self.p) * self.p**i for i, d in enumerate(digits))

    def element(self, n: int) -> int:
        """The image of the integer n (k = 1) or a raw encoded element."""
        if self.k == 1:
            return n % self.p
        return n % self.order

    def from_int(self, n: int) -> int:
        """The image of the rational integer n in the prime subfield."""
        return n % self.p

    @property
    def generator(self) -> int:
        """The class of x when k > 1."""
        return self.p if self.k > 1 else 1

    # -- arithmetic ------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode(x + y for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._encode(-x for x in self._digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        _, rem = self._polydivmod(tuple(prod), self.modulus)
        return self._encode(list(rem) + [0] * (self.k - len(rem)))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        r, b = 1 if self.k == 1 else self.element(1), a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of 0")
        return self.pow(a, self.order - 2)

    def pth_root(self, a: int) -> int:
        """Inverse Frobenius; unique since the field is perfect."""
        return self.pow(a, self.p ** (self.k - 1))

    def elements(self):
        return range(self.order)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def render(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        digits = self._digits(a)
        parts = []
        for i, d in enumerate(digits):
            if d == 0:
                continue
            if i == 0:
                parts.append(str(d))
            else:
                head = "" if d == 1 else f"{d}*"
                parts.append(f"{head}g" + (f"^{i}" if i > 1 else ""))
        return "(" + "+".join(parts) + ")" if len(parts) > 1 else (parts[0] if parts else "0")


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    return Field(p)


def grevlex_key(exp: tuple):
    """Sort key putting the grevlex-largest monomial last."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Poly:
    """Multivariate polynomial over a Field with 1/p^scale exponents."""

    __slots__ = ("field", "nvars", "scale", "terms")

    def __init__(self, field: Field, nvars: int, terms: dict, scale: int = 0):
        self.field = field
        self.nvars = nvars
        clean = {e: c for e, c in terms.items() if c != 0}
        if scale == 1 and clean:
            p = field.p
            if all(all(u % p == 0 for u in e) for e in clean):
                clean = {tuple(u // p for u in e): c for e, c in clean.items()}
                scale = 0
        if not clean:
            scale = 0
        self.scale = scale
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Poly":
        return cls(field, nvars, {})

    @classmethod
    def const(cls, field: Field, nvars: int, c: int) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: field.element(c)})

    @classmethod
    def var(cls, field: Field, nvars: int, i: int, exp: int = 1) -> "Poly":
        e = [0] * nvars
        e[i] = exp
        return cls(field, nvars, {tuple(e): field.element(1)})

    @classmethod
    def monomial(cls, field: Field, nvars: int, exp: Sequence[int], c: int = 1, scale: int = 0) -> "Poly":
        return cls(field, nvars, {tuple(exp): field.element(c)}, scale)

    # -- scale handling ---------------------------------------------------
    def at_scale(self, scale: int) -> "Poly":
        if scale == self.scale:
            return self
        if scale < self.scale:
            raise ValueError("cannot lower the scale")
        p = self.field.p
        f = p ** (scale - self.scale)
        return Poly(self.field, self.nvars, {tuple(u * f for u in e): c for e, c in self.terms.items()}, scale)

    @staticmethod
    def _common(a: "Poly", b: "Poly"):
        if a.field != b.field or a.nvars != b.nvars:
            raise SemanticError("polynomial dimension or field mismatch")
        s = max(a.scale, b.scale)
        return a.at_scale(s), b.at_scale(s), s

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(u == 0 for u in e) for e in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def is_unit_constant(self) -> bool:
        return self.is_constant() and not self.is_zero()

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        a, b, s = Poly._common(self, other)
        F = a.field
        terms = dict(a.terms)
        for e, c in b.terms.items():
            v = F.add(terms.get(e, 0), c)
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return Poly(F, a.nvars, terms, s)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()}, self.scale)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b, s = Poly._common(self, other)
        F = a.field
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = F.add(terms.get(e, 0), F.mul(c1, c2))
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return Poly(F, a.nvars, terms, s)

    def scalar_mul(self, c: int) -> "Poly":
        F = self.field
        c = F.element(c)
        return Poly(F, self.nvars, {e: F.mul(c, v) for e, v in self.terms.items()}, self.scale)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        r = Poly.const(self.field, self.nvars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b, _ = Poly._common(self, other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.scale, tuple(sorted(self.terms.items()))))

    # -- calculus and Frobenius ---------------------------------------------
    def partial(self, i: int) -> "Poly":
        """d/dt_i; only legal at scale 0."""
        if self.scale != 0:
            raise UnsupportedClassError("derivative of a radicial section")
        F = self.field
        terms: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            coeff = F.mul(c, F.from_int(e[i]))
            if coeff == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            key = tuple(e2)
            v = F.add(terms.get(key, 0), coeff)
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return Poly(F, self.nvars, terms)

    def pth_power(self) -> "Poly":
        F, p = self.field, self.field.p
        if self.scale == 1:
            return Poly(F, self.nvars, {e: F.pow(c, p) for e, c in self.terms.items()}, 0)
        return Poly(F, self.nvars, {tuple(u * p for u in e): F.pow(c, p) for e, c in self.terms.items()}, 0)

    def pth_root(self) -> "Poly":
        """The unique b with b^p = self; may move to scale 1."""
        F, p = self.field, self.field.p
        if all(all(u % p == 0 for u in e) for e in self.terms):
            return Poly(
                F, self.nvars,
                {tuple(u // p for u in e): F.pth_root(c) for e, c in self.terms.items()},
                self.scale,
            )
        if self.scale == 1:
            raise UnsupportedClassError("p-th root would need a second radicial level")
        return Poly(F, self.nvars, {e: F.pth_root(c) for e, c in self.terms.items()}, 1)

    # -- exponent bookkeeping -------------------------------------------------
    def min_exp(self, i: int) -> int:
        """t_i-adic valuation in stored units (multiples of 1/p^scale)."""
        if not self.terms:
            raise ValueError("valuation of the zero polynomial")
        return min(e[i] for e in self.terms)

    def shift_exp(self, delta: Sequence[int]) -> "Poly":
        """Multiply by the monomial t^delta (delta in stored units, may be negative)."""
        terms = {}
        for e, c in self.terms.items():
            e2 = tuple(x + d for x, d in zip(e, delta))
            if any(x < 0 for x in e2):
                raise ValueError("negative exponent after shift")
            terms[e2] = c
        return Poly(self.field, self.nvars, terms, self.scale)

    def restrict_zero(self, i: int) -> "Poly":
        """Set t_i = 0: drop monomials with a positive t_i exponent."""
        return Poly(self.field, self.nvars, {e: c for e, c in self.terms.items() if e[i] == 0}, self.scale)

    def reduce_mod_union(self, coords: Iterable[int]) -> "Poly":
        """Reduce mod the reduced union of the hyperplanes t_i = 0, i in coords.

        Kills monomials in which every listed coordinate appears with a
        positive exponent.  An empty union is the empty scheme, whose
        coordinate ring is 0.
        """
        coords = list(coords)
        if not coords:
            return Poly.zero(self.field, self.nvars)
        terms = {e: c for e, c in self.terms.items() if not all(e[i] > 0 for i in coords)}
        return Poly(self.field, self.nvars, terms, self.scale)

    def substitute_monomial(self, images: dict[int, Sequence[int]]) -> "Poly":
        """Substitute t_i -> t^images[i] (a monomial map on exponents)."""
        terms: dict = {}
        F = self.field
        for e, c in self.terms.items():
            acc = [0] * self.nvars
            for i, u in enumerate(e):
                if u == 0:
                    continue
                img = images.get(i)
                if img is None:
                    acc[i] += u
                else:
                    for j, w in enumerate(img):
                        acc[j] += u * w
            key = tuple(acc)
            v = F.add(terms.get(key, 0), c)
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return Poly(F, self.nvars, terms, self.scale)

    def translate(self, i: int, c: int) -> "Poly":
        """Substitute t_i -> t_i + c for a field constant c."""
        if self.scale != 0:
            raise UnsupportedClassError("translation of a radicial section")
        F = self.field
        c = F.element(c)
        if c == 0:
            return self
        out = Poly.zero(F, self.nvars)
        tvar = Poly.var(F, self.nvars, i) + Poly.const(F, self.nvars, c)
        powers = {0: Poly.const(F, self.nvars, 1)}
        for e, coeff in self.terms.items():
            u = e[i]
            if u not in powers:
                powers[u] = tvar**u
            rest = list(e)
            rest[i] = 0
            out = out + powers[u] * Poly.monomial(F, self.nvars, rest, coeff)
        return out

    # -- division ----------------------------------------------------------------
    def leading(self) -> tuple:
        """Grevlex-leading (exponent, coefficient)."""
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def try_divide(self, g: "Poly") -> "Poly | None":
        """Exact division self / g, or None if not divisible."""
        a, b, s = Poly._common(self, g)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = a.field
        rem = dict(a.terms)
        quot: dict = {}
        ge, gc = b.leading()
        ginv = F.inv(gc)
        while rem:
            e = max(rem, key=grevlex_key)
            diff = tuple(x - y for x, y in zip(e, ge))
            if any(x < 0 for x in diff):
                return None
            coeff = F.mul(rem[e], ginv)
            quot[diff] = coeff
            for e2, c2 in b.terms.items():
                key = tuple(x + y for x, y in zip(diff, e2))
                v = F.sub(rem.get(key, 0), F.mul(coeff, c2))
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return Poly(F, a.nvars, quot, s)

    def monomial_content(self) -> tuple:
        """Per-variable minimum exponent vector (stored units)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def strip_monomial_content(self) -> "Poly":
        cont = self.monomial_content()
        if all(c == 0 for c in cont):
            return self
        return self.shift_exp(tuple(-c for c in cont))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        _, c = self.leading()
        return self.scalar_mul(self.field.inv(c))

    # -- rendering ------------------------------------------------------------
    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"t{i+1}" for i in range(self.nvars)]
        F, p = self.field, self.field.p
        parts = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for i, u in enumerate(e):
                if u == 0:
                    continue
                if self.scale == 0 or u % p == 0:
                    v = u if self.scale == 0 else u // p
                    factors.append(names[i] if v == 1 else f"{names[i]}^{v}")
                else:
                    factors.append(f"{names[i]}^({u}/{p})")
            cs = F.render(c)
            if factors and cs == "1":
                parts.append("*".join(factors))
            elif factors:
                parts.append(cs + "*" + "*".join(factors))
            else:
                parts.append(cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.render()})"


class RationalSection:
    """numerator / prod t_i^den[i]; den has nonnegative integer entries.

    Canonical form: for each i with den[i] > 0 the numerator is not
    divisible by t_i (fractional leftovers below a full power stay in the
    numerator).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Sequence[int]):
        den = list(den)
        if not num.is_zero():
            p = num.field.p
            unit = p**num.scale
            for i in range(num.nvars):
                if den[i] <= 0:
                    den[i] = max(den[i], 0)
                    continue
                cancel = min(den[i], num.min_exp(i) // unit)
                if cancel > 0:
                    delta = [0] * num.nvars
                    delta[i] = -cancel * unit
                    num = num.shift_exp(delta)
                    den[i] -= cancel
        else:
            den = [0] * num.nvars
        self.num = num
        self.den = tuple(den)

    @classmethod
    def from_poly(cls, num: Poly) -> "RationalSection":
        return cls(num, (0,) * num.nvars)

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "RationalSection":
        return cls(Poly.zero(field, nvars), (0,) * nvars)

    @classmethod
    def const(cls, field: Field, nvars: int, c: int) -> "RationalSection":
        return cls(Poly.const(field, nvars, c), (0,) * nvars)

    @property
    def field(self) -> Field:
        return self.num.field

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return all(e == 0 for e in self.den)

    def __add__(self, other: "RationalSection") -> "RationalSection":
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        s = max(self.num.scale, other.num.scale)
        unit = self.field.p**s
        a = self.num.at_scale(s) if not self.num.is_zero() else self.num
        b = other.num.at_scale(s) if not other.num.is_zero() else other.num
        a = a.shift_exp(tuple((den[i] - self.den[i]) * (unit if a.scale == s else 1) for i in range(len(den))))
        b = b.shift_exp(tuple((den[i] - other.den[i]) * (unit if b.scale == s else 1) for i in range(len(den))))
        return RationalSection(a + b, den)

    def __neg__(self) -> "RationalSection":
        return RationalSection(-self.num, self.den)

    def __sub__(self, other: "RationalSection") -> "RationalSection":
        return self + (-other)

    def __mul__(self, other: "RationalSection") -> "RationalSection":
        return RationalSection(self.num * other.num, tuple(a + b for a, b in zip(self.den, other.den)))

    def __pow__(self, n: int) -> "RationalSection":
        if n < 0:
            raise ValueError("negative power of a section")
        r = RationalSection.const(self.field, self.nvars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, RationalSection):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.den, self.num))

    def ord(self, i: int):
        """Order of vanishing along t_i = 0 (negative for a pole)."""
        from fractions import Fraction

        if self.is_zero():
            return None  # +infinity
        v = Fraction(self.num.min_exp(i), self.field.p**self.num.scale) - self.den[i]
        return int(v) if v.denominator == 1 else v

    def pth_power(self) -> "RationalSection":
        return RationalSection(self.num.pth_power(), tuple(e * self.field.p for e in self.den))

    def pth_root(self) -> "RationalSection":
        p = self.field.p
        lift = tuple(-(-e // p) for e in self.den)  # ceil(e/p)
        pad = tuple(lift[i] * p - self.den[i] for i in range(self.nvars))
        unit = p**self.num.scale
        num = self.num.shift_exp(tuple(u * unit for u in pad))
        return RationalSection(num.pth_root(), lift)

    def restrict_zero(self, i: int) -> "RationalSection":
        """Restriction to t_i = 0; requires no pole along t_i."""
        if self.den[i] > 0:
            raise SemanticError("restriction of a section with a pole along the divisor")
        return RationalSection(self.num.restrict_zero(i), self.den)

    def times_monomial(self, delta: Sequence[int]) -> "RationalSection":
        """Multiply by prod t_i^delta[i] with integer (possibly negative) delta."""
        den = tuple(self.den[i] + max(-delta[i], 0) for i in range(self.nvars))
        unit = self.field.p**self.num.scale
        num = self.num.shift_exp(tuple(max(delta[i], 0) * unit for i in range(self.nvars)))
        return RationalSection(num, den)

    def substitute_monomial(self, images: dict[int, Sequence[int]]) -> "RationalSection":
        num = self.num.substitute_monomial(images)
        den = [0] * self.nvars
        for i, e in enumerate(self.den):
            if e == 0:
                continue
            img = images.get(i)
            if img is None:
                den[i] += e
            else:
                for j, w in enumerate(img):
                    den[j] += e * w
        return RationalSection(num, den)

    def translate(self, i: int, c: int) -> "RationalSection":
        if c == 0 or self.is_zero():
            return self
        if self.den[i] > 0:
            raise UnsupportedClassError(
                "translation in a coordinate carrying a pole is outside the supported class"
            )
        return RationalSection(self.num.translate(i, c), self.den)

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"t{i+1}" for i in range(self.nvars)]
        ns = self.num.render(names)
        if self.is_polynomial():
            return ns
        factors = [
            names[i] if e == 1 else f"{names[i]}^{e}"
            for i, e in enumerate(self.den)
            if e > 0
        ]
        ds = "*".join(factors)
        if len(self.num.terms) > 1:
            ns = "(" + ns + ")"
        if len(factors) > 1:
            ds = "(" + ds + ")"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RationalSection({self.render()})"


# ---------------------------------------------------------------------------
# gcd, square-free parts, coprime refinement
# ---------------------------------------------------------------------------


def _poly_gcd_univar(a: Poly, b: Poly, i: int) -> Poly:
    """Euclidean gcd of polynomials univariate in t_i over the field."""
    F = a.field

    def degree(f):
        return max(e[i] for e in f.terms) if f.terms else -1

    while not b.is_zero():
        # reduce a by b until deg(a) < deg(b)
        while not a.is_zero() and degree(a) >= degree(b):
            da, db = degree(a), degree(b)
            lead_a = Poly(F, a.nvars, {e: c for e, c in a.terms.items() if e[i] == da}, a.scale)
            lead_b = Poly(F, b.nvars, {e: c for e, c in b.terms.items() if e[i] == db}, b.scale)
            # this routine is only called with essentially univariate input
            ca = lead_a.constant_coeff_in(i)
            cb = lead_b.constant_coeff_in(i)
            shift = [0] * a.nvars
            shift[i] = da - db  # degrees are in stored units already
            a = a.scalar_mul(cb) - b.scalar_mul(ca).shift_exp(tuple(shift))
        a, b = b, a
    return a.monic()


def _coeff_in(f: Poly, i: int, d: int) -> Poly:
    terms = {}
    for e, c in f.terms.items():
        if e[i] == d:
            e2 = list(e)
            e2[i] = 0
            terms[tuple(e2)] = c
    return Poly(f.field, f.nvars, terms, f.scale)


def _constant_coeff_in(self: Poly, i: int) -> int:
    if not self.terms:
        return 0
    vals = set(self.terms.values())
    if len(vals) != 1 or any(any(e[j] for j in range(self.nvars) if j != i) for e in self.terms):
        raise ValueError("not a univariate leading form")
    return next(iter(vals))


Poly.constant_coeff_in = _constant_coeff_in  # helper used by the univariate gcd


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Exact multivariate gcd by recursive content / primitive parts."""
    a, b, _ = Poly._common(a, b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ca, cb = a.monomial_content(), b.monomial_content()
    common = tuple(min(x, y) for x, y in zip(ca, cb))
    a, b = a.strip_monomial_content(), b.strip_monomial_content()
    g = _gcd_primitive(a, b)
    return g.shift_exp(common).monic()


def _vars_of(f: Poly) -> list[int]:
    out = set()
    for e in f.terms:
        for i, u in enumerate(e):
            if u:
                out.add(i)
    return sorted(out)


def _gcd_primitive(a: Poly, b: Poly) -> Poly:
    vs = sorted(set(_vars_of(a)) | set(_vars_of(b)))
    if not vs:
        return Poly.const(a.field, a.nvars, 1)
    if len(vs) == 1:
        return _poly_gcd_univar(a, b, vs[0])
    x = vs[-1]

    def content(f: Poly) -> Poly:
        degs = sorted({e[x] for e in f.terms})
        g = _coeff_in(f, x, degs[0])
        for d in degs[1:]:
            g = _gcd_primitive_entry(g, _coeff_in(f, x, d))
            if g.is_unit_constant():
                return Poly.const(f.field, f.nvars, 1)
        return g

    conta, contb = content(a), content(b)
    contg = _gcd_primitive_entry(conta, contb)
    pa = a.try_divide(conta)
    pb = b.try_divide(contb)
    # primitive polynomial remainder sequence in t_x
    f, g = pa, pb

    def deg(f):
        return max(e[x] for e in f.terms) if f.terms else -1

    if deg(f) < deg(g):
        f, g = g, f
    while not g.is_zero():
        df, dg = deg(f), deg(g)
        if df < dg:
            f, g = g, f
            continue
        lf, lg = _coeff_in(f, x, df), _coeff_in(g, x, dg)
        shift = [0] * f.nvars
        shift[x] = df - dg  # stored units
        r = f * lg - g.shift_exp(tuple(shift)) * lf
        if not r.is_zero():
            r = r.try_divide(content(r))
        f, g = g, r
    prim = f.try_divide(content(f))
    return (contg * prim).monic()


def _gcd_primitive_entry(a: Poly, b: Poly) -> Poly:
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ca, cb = a.monomial_content(), b.monomial_content()
    common = tuple(min(x, y) for x, y in zip(ca, cb))
    g = _gcd_primitive(a.strip_monomial_content(), b.strip_monomial_content())
    return g.shift_exp(common).monic()


def squarefree_part(f: Poly) -> Poly:
    """The reduced polynomial cutting out the same hypersurface."""
    if f.is_zero():
        raise SemanticError("square-free part of 0")
    f = f.monic()
    if f.is_unit_constant():
        return f
    partials = [f.partial(i) for i in _vars_of(f)] if f.scale == 0 else []
    if f.scale == 1 or all(g.is_zero() for g in partials):
        if f.scale == 0 and all(g.is_zero() for g in partials):
            return squarefree_part(f.pth_root())
        # scale 1: work in the u = t^(1/p) variables, where f is a plain poly
        g = Poly(f.field, f.nvars, f.terms, 0)
        sf = squarefree_part(g)
        return Poly(f.field, f.nvars, sf.terms, 1)
    g = f
    for h in partials:
        if h.is_zero():
            continue
        g = poly_gcd(g, h)
        if g.is_unit_constant():
            return f.monic()
    out = f.try_divide(g)
    # g may still contain p-th power factors of f
    return refine_pair(out, squarefree_part(g))


def refine_pair(a: Poly, b: Poly) -> Poly:
    """Square-free generator of the union of the zero loci of a and b.

    Both inputs must individually be square-free.
    """
    g = poly_gcd(a, b)
    if g.is_unit_constant():
        return (a * b).monic()
    return refine_pair(a.try_divide(g), b)


def valuation(f: Poly, h: Poly) -> int:
    """Exact exponent of the irreducible-free factor h in f by trial division."""
    v = 0
    while True:
        q = f.try_divide(h)
        if q is None:
            return v
        f = q
        v += 1


def _refine_into(basis: list[Poly], piece: Poly) -> list[Poly]:
    """Insert a square-free piece into a pairwise-coprime square-free basis."""
    out: list[Poly] = []
    rem = piece
    for h in basis:
        if rem.is_unit_constant():
            out.append(h)
            continue
        g = poly_gcd(rem, h)
        if g.is_unit_constant():
            out.append(h)
            continue
        hq = h.try_divide(g)
        out.append(g)
        if not hq.is_unit_constant():
            out.append(hq)
        rem = rem.try_divide(g)
    if not rem.is_unit_constant():
        out.append(rem)
    return out


def gcd_and_refine(fs: Sequence[Poly]):
    """Pairwise-coprime square-free factor list with per-input exponents.

    Returns a list of (h, exponents) where exponents[j] = v_h(fs[j]).
    Monomial factors come out as individual coordinates.
    """
    if not fs:
        raise SemanticError("gcd_and_refine of an empty family")
    if any(f.is_zero() for f in fs):
        raise SemanticError("gcd_and_refine of the zero polynomial")
    field, nvars = fs[0].field, fs[0].nvars
    basis: list[Poly] = []
    for f in fs:
        cont = f.monomial_content()
        work = [Poly.var(field, nvars, i) for i, e in enumerate(cont) if e > 0]
        sf = squarefree_part(f.strip_monomial_content())
        if not sf.is_unit_constant():
            work.append(sf)
        for w in work:
            basis = _refine_into(basis, w.monic())
    basis = sorted(basis, key=lambda h: (max(sum(e) for e in h.terms), h.render()))
    return [(h, tuple(valuation(f, h) for f in fs)) for h in basis]


# ---------------------------------------------------------------------------
# Buchberger unit-ideal test
# ---------------------------------------------------------------------------


def _nf(f: Poly, basis: list[Poly]) -> Poly:
    """Full normal form of f modulo basis, grevlex."""
    F = f.field
    rem = dict(f.terms)
    out: dict = {}
    leads = [(g, *g.leading()) for g in basis]
    while rem:
        e = max(rem, key=grevlex_key)
        c = rem.pop(e)
        for g, ge, gc in leads:
            diff = tuple(x - y for x, y in zip(e, ge))
            if all(x >= 0 for x in diff):
                fac = F.mul(c, F.inv(gc))
                for e2, c2 in g.terms.items():
                    key = tuple(x + y for x, y in zip(diff, e2))
                    if key == e:
                        continue
                    v = F.sub(rem.get(key, 0), F.mul(fac, c2))
                    if v:
                        rem[key] = v
                    else:
                        rem.pop(key, None)
                break
        else:
            out[e] = c
    return Poly(F, f.nvars, out, f.scale)


def normal_form(f: Poly, basis: Sequence[Poly]) -> Poly:
    gs = [g for g in basis if not g.is_zero()]
    if not gs:
        return f
    scale = max([f.scale] + [g.scale for g in gs])
    return _nf(f.at_scale(scale), [g.at_scale(scale) for g in gs])


def groebner_basis(gens: Sequence[Poly]) -> list[Poly]:
    """A (non-reduced) Groebner basis for the ideal, grevlex order."""
    G = [g.monic() for g in gens if not g.is_zero()]
    if not G:
        return []
    scale = max(g.scale for g in G)
    G = [g.at_scale(scale) for g in G]
    F = G[0].field
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        i, j = pairs.pop()
        fi, fj = G[i], G[j]
        ei, ci = fi.leading()
        ej, cj = fj.leading()
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        if all(a + b == m for a, b, m in zip(ei, ej, lcm)):
            continue  # coprime leading terms (Buchberger's first criterion)
        si = fi.shift_exp(tuple(m - a for m, a in zip(lcm, ei))).scalar_mul(F.inv(ci))
        sj = fj.shift_exp(tuple(m - b for m, b in zip(lcm, ej))).scalar_mul(F.inv(cj))
        r = _nf(si - sj, G)
        if not r.is_zero():
            r = r.monic()
            if r.is_unit_constant():
                return [Poly.const(F, r.nvars, 1).at_scale(scale)]
            pairs.extend((len(G), k) for k in range(len(G)))
            G.append(r)
    return G


def unit_ideal_test(gens: Sequence[Poly], ambient_vanishing: Iterable[int] = ()) -> bool:
    """Whether the generators cut out the empty set over the algebraic closure.

    The listed coordinates are set to 0 first; scale-1 exponents are read
    as honest exponents in the rootstock variables u_i = t_i^(1/p), which
    changes no ideal membership question.
    """
    av = list(ambient_vanishing)
    work = []
    for g in gens:
        for i in av:
            g = g.restrict_zero(i)
        if not g.is_zero():
            if g.is_unit_constant():
                return True
            work.append(g)
    if not work:
        return False
    # Groebner bases are stable under field extension, so computing over
    # GF(p^k) answers the question over the algebraic closure.
    G = groebner_basis(work)
    return any(g.is_unit_constant() for g in G)
