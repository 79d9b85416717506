"""Chart-level assembly: divisor configuration, the global characteristic
form, cleanliness certification, residue maps, vanishing orders and the
degeneracy loci.

A chart is affine d-space with boundary components cut out by coordinate
hyperplanes.  All "for every closed point of the radicial cover"
quantifiers are decided by a Groebner unit-ideal test over the algebraic
closure, never by point enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .algebra import (
    Field,
    Poly,
    RationalSection,
    gcd_and_refine,
    unit_ideal_test,
)
from .conductors import DivisorInvariants, compute_invariants, phi_log, phi_nonlog
from .errors import ConsistencyError, FiltrationViolation, SemanticError, UnsupportedClassError
from .forms import LogForm, clear_twist, differential
from .witt import WittVector, fil_member

AUTO = "auto"


@dataclass
class ChartConfig:
    """The ambient chart, its boundary bookkeeping and certified invariants."""

    field: Field
    dim: int
    boundary: frozenset            # indices of boundary coordinates
    iprime: frozenset              # the log subset I' of the boundary
    datum: WittVector              # reduced representative of the character
    tame_flags: frozenset = frozenset()  # boundary divisors declared tame
    labels: tuple = ()             # display label per coordinate
    invariants: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.labels:
            self.labels = tuple(f"t{i+1}" for i in range(self.dim))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def names(self) -> tuple:
        return tuple(f"t{i+1}" for i in range(self.dim))

    # -- derived index sets ------------------------------------------------
    def wild_set(self) -> frozenset:
        return frozenset(i for i, inv in self.invariants.items() if inv.sw > 0)

    def tame_set(self) -> frozenset:
        return frozenset(i for i, inv in self.invariants.items() if inv.sw == 0)

    def type_one_set(self) -> frozenset:
        return frozenset(i for i, inv in self.invariants.items() if inv.kind == "I")

    def type_two_set(self) -> frozenset:
        return frozenset(i for i, inv in self.invariants.items() if inv.kind == "II")

    def conductor_divisor(self) -> tuple:
        """The multiplicity vector of R^{D'} over all chart coordinates."""
        out = [0] * self.dim
        for i, inv in self.invariants.items():
            out[i] = inv.sw_mixed
        return tuple(out)


def analyze_chart(
    field: Field,
    dim: int,
    boundary: Sequence[int],
    datum: WittVector,
    log_set=AUTO,
    tame_flags: Sequence[int] = (),
    labels: Sequence[str] = (),
) -> ChartConfig:
    """Certify per-divisor invariants and fix the log subset.

    log_set may be an iterable of boundary indices or the AUTO marker,
    which picks the union of the type-I and tame divisors (the weakest
    log structure for which cleanliness can hold).
    """
    boundary = frozenset(boundary)
    tame_flags = frozenset(tame_flags)
    if not boundary >= tame_flags:
        raise SemanticError("declared tame divisors must be boundary components")
    for i in boundary:
        if not 0 <= i < dim:
            raise SemanticError("boundary index out of range")
    for comp in datum.components:
        for i, e in enumerate(comp.den):
            if e > 0 and i not in boundary:
                raise SemanticError(
                    f"datum has a pole along the non-boundary coordinate t{i+1}"
                )

    # invariants are independent of the log subset, so compute them first
    invariants = {}
    reduced = datum
    for i in sorted(boundary):
        inv, _, _, reduced = compute_invariants(
            reduced, i, in_iprime=True, declared_tame=(i in tame_flags)
        )
        invariants[i] = inv

    if log_set == AUTO:
        iprime = frozenset(i for i, inv in invariants.items() if inv.kind != "II")
    else:
        iprime = frozenset(log_set)
        if not iprime <= boundary:
            raise SemanticError("the log subset must consist of boundary components")

    # re-tag the mixed conductor with the chosen log subset
    for i, inv in list(invariants.items()):
        sw_mixed = inv.sw if i in iprime else inv.dt
        invariants[i] = DivisorInvariants(i, inv.sw, inv.dt, inv.kind, sw_mixed)

    cfg = ChartConfig(
        field=field,
        dim=dim,
        boundary=boundary,
        iprime=iprime,
        datum=reduced,
        tame_flags=tame_flags,
        labels=tuple(labels) if labels else (),
        invariants=invariants,
    )
    return cfg


def divisor_germs(cfg: ChartConfig, i: int):
    """Certified (rsw, cform) germs of the datum at a wild divisor."""
    inv = cfg.invariants[i]
    if inv.sw == 0:
        return None, None
    rsw = phi_log(cfg.datum, inv.sw, i)
    cform = phi_nonlog(cfg.datum, inv.dt, i)
    return rsw, cform


# ---------------------------------------------------------------------------
# the global characteristic form
# ---------------------------------------------------------------------------


def assemble_cform(cfg: ChartConfig) -> Optional[LogForm]:
    """The log-D'-characteristic form on the wild locus, or None if tame.

    The germ of the result at each wild divisor is the certified refined
    Swan conductor (log subset) or characteristic form (complement); this
    consistency is checked before returning.
    """
    wild = cfg.wild_set()
    if not wild:
        return None
    twist = cfg.conductor_divisor()
    # filtration membership with the mixed flavor per divisor
    for i in sorted(cfg.boundary):
        flavor = "log" if i in cfg.iprime else "nonlog"
        if not fil_member(cfg.datum, i, twist[i], flavor):
            raise FiltrationViolation(
                f"datum is not in the stated filtration along {cfg.names[i]}"
            )
    omega = differential(cfg.datum)
    dlog, dt = clear_twist(omega, cfg.iprime, twist, cfg.dim)
    if cfg.p == 2:
        a0 = cfg.datum.components[-1] if cfg.datum.length else None
        for i in sorted(cfg.boundary - cfg.iprime):
            if twist[i] != 2 or a0 is None:
                continue
            # sqrt(a_0 t_i^2 prod_{i' != i} t_{i'}^{2 n_{i'}}) in the dt_i slot
            delta = [2 * n for n in twist]
            delta[i] = 2
            w = a0.times_monomial(delta)
            if not w.is_polynomial():
                raise FiltrationViolation("p = 2 correction term is not regular")
            root = w.num.pth_root()
            dt[i] = dt.get(i, Poly.zero(cfg.field, cfg.dim)) + root
    form = LogForm(cfg.field, cfg.dim, cfg.iprime, twist, wild, dlog, dt)
    _check_germ_consistency(cfg, form)
    return form


def _check_germ_consistency(cfg: ChartConfig, form: LogForm):
    """The glued form must restrict to the certified germs (exactly)."""
    zero = RationalSection.zero(cfg.field, cfg.dim)
    for i in sorted(cfg.wild_set()):
        rsw, cform = divisor_germs(cfg, i)
        germ = rsw if i in cfg.iprime else cform
        residual = list(form.twist)
        residual[i] = 0  # the germ keeps t_i^level as its own twist

        def restricted(poly, extra_pole=None):
            r = RationalSection(poly.restrict_zero(i), residual)
            if extra_pole is not None:
                delta = [0] * cfg.dim
                delta[extra_pole] = -1
                r = r.times_monomial(delta)
            return r

        ok = True
        for k in sorted(cfg.iprime):
            a_k = form.dlog.get(k, Poly.zero(cfg.field, cfg.dim))
            if k == i:
                ok &= restricted(a_k) == (germ.dlog if germ.dlog is not None else zero)
            else:
                # alpha_k dlog t_k reads as (alpha_k / t_k) dt_k in the germ
                ok &= restricted(a_k, extra_pole=k) == germ.dt.get(k, zero)
        for j in range(cfg.dim):
            if j in cfg.iprime:
                continue
            b_j = form.dt.get(j, Poly.zero(cfg.field, cfg.dim))
            ok &= restricted(b_j) == germ.dt.get(j, zero)
        if not ok:
            raise ConsistencyError(
                f"global characteristic form disagrees with the certified germ at {cfg.names[i]}"
            )


# ---------------------------------------------------------------------------
# cleanliness, residues, orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CleanlinessReport:
    clean: bool
    witness_divisor: Optional[int] = None
    witness_ideal: tuple = ()

    def __bool__(self):
        return self.clean


def is_clean(cfg: ChartConfig, form: Optional[LogForm]) -> CleanlinessReport:
    """Nonvanishing of the characteristic form on each wild component."""
    if form is None:
        return CleanlinessReport(True)
    for i in sorted(cfg.wild_set()):
        gens = [c for _, c in form.restrict_coefficients(i) if not c.is_zero()]
        if not unit_ideal_test(gens, ambient_vanishing=[i]):
            return CleanlinessReport(False, i, tuple(g.render() for g in gens))
    return CleanlinessReport(True)


def xi_residue(cfg: ChartConfig, form: LogForm, i: int) -> Poly:
    """The residue map image along a wild log divisor, on D_i."""
    if i not in cfg.iprime or i not in cfg.wild_set():
        raise SemanticError("residues are defined for wild divisors in the log set")
    alpha = form.dlog.get(i, Poly.zero(cfg.field, cfg.dim))
    return alpha.restrict_zero(i)


def ord_at_point(cfg: ChartConfig, form: LogForm, x: Sequence[int], i: int) -> int:
    """The divided vanishing order of the form along D_i at a rational point."""
    if i not in cfg.wild_set():
        raise SemanticError("orders are computed along wild divisors")
    x = tuple(cfg.field.element(c) for c in x)
    if x[i] != 0:
        raise SemanticError("the point does not lie on the divisor")
    p = cfg.p
    best = None
    for _, coeff in form.restrict_coefficients(i):
        if coeff.is_zero():
            continue
        moved = coeff
        for j, c in enumerate(x):
            if j != i and c != 0:
                moved = (
                    moved.translate(j, cfg.field.neg(c))
                    if moved.scale == 0
                    else _translate_scaled(moved, j, cfg.field.neg(c), p)
                )
        if moved.is_zero():
            continue
        # degree in the rootstock variables u_j = t_j^(1/p): stored units
        # at scale 1 are u-degrees already, at scale 0 multiply by p
        deg = min(sum(e) for e in moved.terms) * (1 if moved.scale else p)
        best = deg if best is None else min(best, deg)
    if best is None:
        raise ConsistencyError("characteristic form vanishes identically on the component")
    return best // p


def _translate_scaled(f: Poly, j: int, c: int, p: int):
    """Translate a scale-1 coefficient: t_j -> t_j + c in u-coordinates.

    u_j^p = t_j picks up the unique p-th root of c, so u_j -> u_j + c^(1/p).
    """
    g = Poly(f.field, f.nvars, f.terms, 0)  # reinterpret in u-variables
    g = g.translate(j, f.field.pth_root(c))
    return Poly(f.field, f.nvars, g.terms, 1)


# ---------------------------------------------------------------------------
# degeneracy loci
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocusComponent:
    """One codimension <= 1 component of B_{I''} inside D_{I''}.

    coords lists the vanishing coordinates of the reduced base; hyper is
    an optional extra square-free equation; mult is the length of the
    ideal cut at the generic point (1 for the codimension-0 case).
    """

    coords: frozenset
    hyper: Optional[Poly]
    mult: int
    codim_in_stratum: int  # 0 or 1


@dataclass
class DegeneracyLoci:
    by_subset: dict  # frozenset I'' -> list[LocusComponent]
    e_flags: dict    # frozenset I'' -> bool

    def e_nonempty(self) -> list:
        return sorted((s for s, f in self.e_flags.items() if f), key=sorted)

    def has_e(self) -> bool:
        return any(self.e_flags.values())


def _subsets(base: Sequence[int]):
    base = sorted(base)
    n = len(base)
    for mask in range(1 << n):
        yield frozenset(base[j] for j in range(n) if mask >> j & 1)


def compute_loci(cfg: ChartConfig, form: Optional[LogForm]) -> DegeneracyLoci:
    """B/E loci per subset of the log set (Definition of the B and E sets).

    Requires the declared-tame divisors inside the log set; cleanliness
    is certified separately and is not re-checked here.
    """
    if not cfg.tame_set() <= cfg.iprime:
        raise SemanticError("the tame divisors must lie in the log set for loci")
    wild = cfg.wild_set()
    nonlog_wild = sorted(wild - cfg.iprime)
    by_subset: dict = {}
    e_flags: dict = {}
    for sub in _subsets(sorted(cfg.iprime)):
        wild_sub = sorted(sub & wild)
        comps: list[LocusComponent] = []
        e_flag = False
        if not wild_sub:
            # B = D_{I''} meet the union of the nonlog wild divisors
            for i in nonlog_wild:
                if i in sub:
                    continue
                comps.append(LocusComponent(sub | {i}, None, 1, 1))
        else:
            gens = []
            for i in wild_sub:
                g = xi_residue(cfg, form, i)
                for j in sorted(sub):
                    g = g.restrict_zero(j)
                gens.append(g)
            if all(g.is_zero() for g in gens):
                # every residue vanishes on the whole stratum: B = D_{I''}
                e_flag = True
                comps.append(LocusComponent(frozenset(sub), None, 1, 0))
            else:
                live = [g for g in gens if not g.is_zero()]
                refined = gcd_and_refine(live)
                for h, exps in refined:
                    v = min(exps)
                    if v < 1:
                        continue  # not a common component of all residues
                    coord = _as_coordinate(h, cfg.dim)
                    if coord is not None and coord in cfg.iprime - sub:
                        # saturation: components inside removed log divisors
                        # are dropped by the openness condition
                        continue
                    if coord is not None:
                        comps.append(LocusComponent(sub | {coord}, None, v, 1))
                    else:
                        comps.append(LocusComponent(frozenset(sub), h, v, 1))
        by_subset[frozenset(sub)] = comps
        e_flags[frozenset(sub)] = e_flag
    return DegeneracyLoci(by_subset, e_flags)


def _as_coordinate(h: Poly, dim: int) -> Optional[int]:
    if len(h.terms) != 1:
        return None
    (e, c), = h.terms.items()
    unit = h.field.p**h.scale
    live = [i for i in range(dim) if e[i]]
    if len(live) == 1 and e[live[0]] == unit and c == 1:
        return live[0]
    return None
