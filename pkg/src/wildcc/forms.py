"""Logarithmic 1-forms on affine charts and their divisor germs.

A chart-level form is written in the basis dlog t_i (i in the log set)
and dt_j (all other directions), twisted by a divisor with multiplicity
vector R: the stored coefficients are the numerators of

    (sum_i A_i dlog t_i + sum_j B_j dt_j) / prod t^R.

Germs along one boundary divisor keep rational coefficients in the other
coordinates; global forms keep polynomial coefficients reduced on the
wild locus.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .algebra import Field, Poly, RationalSection
from .errors import FiltrationViolation, SemanticError
from .witt import WittVector


def differential(a: WittVector) -> dict[int, RationalSection]:
    """-F^(s-1) d a as a covector: coefficient of dt_j per coordinate j."""
    F, nv, p, s = a.field, a.nvars, a.field.p, a.length
    out = {j: RationalSection.zero(F, nv) for j in range(nv)}
    for l, comp in enumerate(a.components):
        if comp.is_zero():
            continue
        weight = p ** (s - 1 - l) - 1
        factor = comp**weight
        f, den = comp.num, comp.den
        for j in range(nv):
            dj = Poly.partial(f, j)
            dnum = RationalSection(dj, den)
            if den[j] % p:
                delta = [0] * nv
                delta[j] = -1
                pole = RationalSection(f.scalar_mul(-den[j]), den).times_monomial(delta)
                dnum = dnum + pole
            if not dnum.is_zero():
                out[j] = out[j] - factor * dnum
    return out


@dataclass(frozen=True)
class FormGerm:
    """Class of a form in a graded piece at one boundary divisor.

    flavor 'log': (dlog * dlog t_i + sum dt[k] dt_k) / t_i^level, the
    refined-Swan shape.  flavor 'nonlog': (sum dt[k] dt_k) / t_i^level,
    the characteristic-form shape; dt may include the divisor direction
    and radicial (scale 1) coefficients.
    """

    divisor: int
    level: int
    flavor: str
    dlog: RationalSection | None
    dt: Mapping[int, RationalSection]

    def is_zero(self) -> bool:
        if self.dlog is not None and not self.dlog.is_zero():
            return False
        return all(c.is_zero() for c in self.dt.values())

    def render(self, names: Sequence[str] | None = None) -> str:
        nv = len(next(iter(self.dt.values())).den) if self.dt else 0
        names = names or [f"t{i+1}" for i in range(nv)]
        parts = []
        if self.dlog is not None and not self.dlog.is_zero():
            parts.append(f"({self.dlog.render(names)})*dlog({names[self.divisor]})")
        for k in sorted(self.dt):
            c = self.dt[k]
            if not c.is_zero():
                parts.append(f"({c.render(names)})*d({names[k]})")
        if not parts:
            return "0"
        num = " + ".join(parts)
        if self.level == 0:
            return num
        return f"({num})/{names[self.divisor]}^{self.level}"

    def __eq__(self, other):
        if not isinstance(other, FormGerm):
            return NotImplemented
        if (self.divisor, self.level, self.flavor) != (other.divisor, other.level, other.flavor):
            return False
        a = self.dlog if self.dlog is not None else None
        b = other.dlog if other.dlog is not None else None
        if (a is None) != (b is None):
            za = a is None or a.is_zero()
            zb = b is None or b.is_zero()
            if not (za and zb):
                return False
        elif a is not None and a != b:
            return False
        keys = set(self.dt) | set(other.dt)
        for k in keys:
            x = self.dt.get(k)
            y = other.dt.get(k)
            if x is None:
                if not y.is_zero():
                    return False
            elif y is None:
                if not x.is_zero():
                    return False
            elif x != y:
                return False
        return True

    def __hash__(self):
        return hash((self.divisor, self.level, self.flavor))


class LogForm:
    """Global section of Omega^1(log D')(R) restricted to the wild locus.

    Coefficients are polynomials (scale 0, or scale 1 when a p = 2
    square-root correction is present), stored reduced modulo the ideal
    of the wild locus.
    """

    __slots__ = ("field", "nvars", "iprime", "twist", "wild", "dlog", "dt")

    def __init__(
        self,
        field: Field,
        nvars: int,
        iprime: frozenset,
        twist: Sequence[int],
        wild: frozenset,
        dlog: Mapping[int, Poly],
        dt: Mapping[int, Poly],
    ):
        self.field = field
        self.nvars = nvars
        self.iprime = frozenset(iprime)
        self.twist = tuple(twist)
        self.wild = frozenset(wild)
        if set(dlog) - self.iprime:
            raise SemanticError("dlog coefficients must sit in the log set")
        self.dlog = {i: c.reduce_mod_union(self.wild) for i, c in dlog.items()}
        self.dt = {j: c.reduce_mod_union(self.wild) for j, c in dt.items()}

    def coefficients(self) -> list:
        """All basis coefficients in a fixed order: dlog first, then dt."""
        out = []
        for i in sorted(self.dlog):
            out.append((("log", i), self.dlog[i]))
        for j in sorted(self.dt):
            out.append((("dt", j), self.dt[j]))
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for _, c in self.coefficients())

    def restrict_coefficients(self, i: int) -> list:
        """Basis coefficients restricted to the component t_i = 0."""
        return [(key, c.restrict_zero(i)) for key, c in self.coefficients()]

    def __eq__(self, other):
        if not isinstance(other, LogForm):
            return NotImplemented
        if (self.iprime, self.twist, self.wild) != (other.iprime, other.twist, other.wild):
            return False
        keys = set(self.dlog) | set(other.dlog)
        for k in keys:
            a = self.dlog.get(k, Poly.zero(self.field, self.nvars))
            b = other.dlog.get(k, Poly.zero(other.field, other.nvars))
            if a != b:
                return False
        keys = set(self.dt) | set(other.dt)
        for k in keys:
            a = self.dt.get(k, Poly.zero(self.field, self.nvars))
            b = other.dt.get(k, Poly.zero(other.field, other.nvars))
            if a != b:
                return False
        return True

    def __hash__(self):
        return hash((self.iprime, self.twist, self.wild))

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"t{i+1}" for i in range(self.nvars)]
        parts = []
        for i in sorted(self.dlog):
            c = self.dlog[i]
            if c.is_zero():
                continue
            cs = c.render(names)
            if len(c.terms) > 1:
                cs = "(" + cs + ")"
            parts.append(f"{cs}*dlog({names[i]})" if cs != "1" else f"dlog({names[i]})")
        for j in sorted(self.dt):
            c = self.dt[j]
            if c.is_zero():
                continue
            cs = c.render(names)
            if len(c.terms) > 1:
                cs = "(" + cs + ")"
            parts.append(f"{cs}*d({names[j]})" if cs != "1" else f"d({names[j]})")
        num = " + ".join(parts) if parts else "0"
        dens = [
            names[i] if e == 1 else f"{names[i]}^{e}"
            for i, e in enumerate(self.twist)
            if e > 0
        ]
        if not dens:
            return num
        den = "*".join(dens)
        if len(dens) > 1:
            den = "(" + den + ")"
        return f"({num})/{den}"

    def __repr__(self):
        return f"LogForm({self.render()})"


def clear_twist(
    omega: Mapping[int, RationalSection],
    iprime: frozenset,
    twist: Sequence[int],
    nvars: int,
) -> tuple[dict, dict]:
    """Express a covector in the (dlog, dt) basis and clear the twist.

    Returns (dlog coefficients, dt coefficients) as polynomials; raises
    FiltrationViolation when a coefficient is not regular.
    """
    dlog: dict = {}
    dt: dict = {}
    for j, c in omega.items():
        if j in iprime:
            delta = list(twist)
            delta[j] += 1
            r = c.times_monomial(delta)
            target = dlog
        else:
            r = c.times_monomial(twist)
            target = dt
        if not r.is_polynomial():
            raise FiltrationViolation(
                "form coefficient is not regular after clearing the conductor twist"
            )
        if not r.num.is_zero():
            target[j] = r.num
    return dlog, dt
