"""
Refining grid sequences and tilting limits.

A grid places well-ordered decision opportunities on the extended time
axis; a refining, convergent sequence of grids carries a sequence of
stop indicators whose limit, if any, lives in vertically extended time.
Everything here is deterministic: grids are constant in the scenario
argument and processes are plain value tables.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    GridAxiomViolation,
    InputError,
    TailWindowInconclusive,
    TargetOutOfRange,
)
from .vtime import (
    INFINITY,
    OMEGA,
    ZERO,
    Ordinal,
    VTime,
    format_ordinal,
    format_vtime,
    fundamental_sequence,
    is_limit,
    ord_add,
    ord_cmp,
    ord_left_sub,
    ord_succ,
    ordinal,
    vt,
)

OMEGA_SQ = Ordinal(((2, 1),))


@dataclass(frozen=True)
class Grid:
    """
    A deterministic classical grid: a strictly increasing enumeration of
    time points indexed by the ordinals up to and including ``bound``,
    starting at 0 and ending at infinity.
    """

    bound: Ordinal
    eval: object                       # Ordinal -> VTime (horizontal)
    classical: bool = True
    deterministic: bool = True
    name: str | None = None
    locate: object = None              # t -> least index with value >= t
    gap: Fraction | None = None        # exact mesh, registered families only

    def __call__(self, beta):
        # indices beyond the bound read as infinity
        if not isinstance(beta, Ordinal):
            raise InputError(f"grid index must be an ordinal: {beta!r}")
        if ord_cmp(beta, self.bound) > 0:
            return INFINITY
        return self.eval(beta)


@dataclass(frozen=True)
class GridFamily:
    """A refining, convergent sequence of grids with its embeddings."""

    member: object                     # n -> Grid
    embed: object                      # (n, index of member(n)) -> index of member(n+1)
    name: str | None = None


@dataclass(frozen=True)
class StopIndexFamily:
    """
    The processes "stop at the kappa(n)-th opportunity of the n-th grid":
    the n-th process is 1 strictly before the time of that opportunity
    and 0 from it onwards.

    An anchored family stops at a fixed vertically extended target
    instead: kappa(n) is the first index at or after the target's real
    time, shifted up by the target's vertical part.
    """

    kappa: object = None               # n -> Ordinal
    anchor: VTime | None = None
    label: str | None = None

    def index(self, n, grid):
        if self.anchor is not None:
            base = _locate(grid, vt(self.anchor.t))
            return ord_add(base, self.anchor.v)
        value = self.kappa(n)
        if not isinstance(value, Ordinal):
            raise InputError(f"stop index must be an ordinal: {value!r}")
        if ord_cmp(value, grid.bound) > 0:
            raise InputError("stop index exceeds the grid bound")
        return value


@dataclass(frozen=True)
class Window:
    """Grid depths inspected per probe, and the required constant tail."""

    start: int = 4
    stop: int = 24
    tail: int = 8

    def __post_init__(self):
        if not 0 <= self.start < self.stop or not 0 < self.tail:
            raise InputError(f"bad window: {self}")
        if self.stop - self.start + 1 < self.tail:
            raise InputError("window shorter than the required tail")

    def depths(self):
        return range(self.start, self.stop + 1)


@dataclass(frozen=True)
class TiltingResult:
    converged: bool
    stop: VTime | None                 # descriptor 1 on [0, stop), when known
    table: dict                        # probe -> limit value
    witness: tuple | None              # (probe, value sequence) when diverged
    window: Window

    def __repr__(self):
        if self.converged:
            inner = format_vtime(self.stop) if self.stop is not None else "table"
            return f"TiltingResult(limit, {inner})"
        return f"TiltingResult(diverged at {format_vtime(self.witness[0])})"


@dataclass(frozen=True)
class GridReport:
    valid: bool
    exact: bool
    checked: tuple


def dyadic_grid(n):
    """Uniform mesh 2^-n with one opportunity block of order type omega."""
    g = Fraction(1, 2 ** n) if n >= 0 else Fraction(2 ** -n)

    def evaluate(beta):
        if beta == OMEGA:
            return INFINITY
        return vt(beta.cnf[0][1] * g if beta.cnf else 0)

    def locate(t):
        if t.is_infinity:
            return OMEGA
        k = -((-t.t) // g)             # least k with k*g >= t
        return ordinal(int(k))

    return Grid(OMEGA, evaluate, name="dyadic", locate=locate, gap=g)


def nested_grid(n):
    """
    Mesh-2^-n blocks, each block containing a copy of the dyadic
    subdivision of its own cell: index k*w + m reads as (k+1-2^-m)*2^-n.
    """
    g = Fraction(1, 2 ** n) if n >= 0 else Fraction(2 ** -n)

    def split(beta):
        k = m = 0
        for e, c in beta.cnf:
            if e == 1:
                k = c
            elif e == 0:
                m = c
        return k, m

    def evaluate(beta):
        if beta == OMEGA_SQ:
            return INFINITY
        k, m = split(beta)
        return vt((k + 1 - Fraction(1, 2 ** m)) * g)

    def locate(t):
        if t.is_infinity:
            return OMEGA_SQ
        s = t.t / g
        k = s.numerator // s.denominator
        if k == s:
            return Ordinal(((1, k),)) if k else ZERO
        # within block k the values climb as k + 1 - 2^-m
        m, step = 0, Fraction(1)
        while k + 1 - step < s:
            m, step = m + 1, step / 2
        return ord_add(Ordinal(((1, k),)) if k else ZERO, ordinal(m))

    return Grid(OMEGA_SQ, evaluate, name="nested", locate=locate,
                gap=g / 2)


def _dyadic_embed(n, beta):
    if beta == OMEGA:
        return OMEGA
    k = beta.cnf[0][1] if beta.cnf else 0
    return ordinal(2 * k)


def _nested_embed(n, beta):
    if beta == OMEGA_SQ:
        return OMEGA_SQ
    k = m = 0
    for e, c in beta.cnf:
        k, m = (c, m) if e == 1 else (k, c)
    if m >= 1:
        return ord_add(Ordinal(((1, 2 * k + 1),)), ordinal(m - 1))
    return Ordinal(((1, 2 * k),)) if k else ZERO


def dyadic_family():
    return GridFamily(dyadic_grid, _dyadic_embed, name="dyadic")


def nested_family():
    return GridFamily(nested_grid, _nested_embed, name="nested")


REGISTERED = {"dyadic": dyadic_family, "nested": nested_family}


def _locate(grid, t):
    """The least index whose grid time is at least t."""
    if grid.locate is not None:
        return grid.locate(t)
    index, cap = ZERO, 2 ** 12
    for _ in range(cap):
        if grid(index) >= t:
            return index
        index = ord_succ(index)
    raise InputError("cannot locate a time on an unregistered infinite grid")


def _sample_indices(bound, extra=()):
    samples = {ZERO, bound}
    for k in range(6):
        samples.add(ordinal(k))
    for piece in range(len(bound.cnf)):
        prefix = Ordinal(bound.cnf[: piece + 1])
        samples.add(prefix)
        if is_limit(prefix):
            samples.update(itertools.islice(fundamental_sequence(prefix), 1, 5))
    samples.update(extra)
    return sorted((s for s in samples if ord_cmp(s, bound) <= 0),
                  key=lambda s: (len(s.cnf), s.cnf))


def validate_grid(grid, stages=8):
    """
    Check the grid axioms: starts at zero, ends at infinity, strictly
    increasing where finite, continuous at limit indices.  Sampled for
    unregistered grids, exact by construction for registered families.
    """
    if grid(ZERO) != vt(0):
        raise GridAxiomViolation(f"grid starts at {format_vtime(grid(ZERO))}, not 0")
    if not grid(grid.bound).is_infinity:
        raise GridAxiomViolation("grid does not end at infinity")
    samples = _sample_indices(grid.bound)
    values = [grid(s) for s in samples]
    indexed = list(zip(samples, values))
    for (a, va), (b, vb) in zip(indexed, indexed[1:]):
        if ord_cmp(a, b) < 0 and not va.is_infinity and not va < vb:
            raise GridAxiomViolation(
                f"not strictly increasing at {format_ordinal(a)}")
    for sample, value in zip(samples, values):
        if not is_limit(sample):
            continue
        below = list(itertools.islice(fundamental_sequence(sample), stages))
        climb = [grid(s) for s in below]
        if any(not u < value for u in climb if not value.is_infinity):
            raise GridAxiomViolation(
                f"discontinuous at limit index {format_ordinal(sample)}")
        if not value.is_infinity and len(climb) >= 2:
            first = value.t - climb[0].t
            last = value.t - climb[-1].t
            if not last * 4 <= first:
                raise GridAxiomViolation(
                    f"stages do not approach {format_ordinal(sample)}")
        if value.is_infinity and len(climb) >= 3:
            # an infinite limit needs unbounded stages, not a finite sup
            steps = [b.t - a.t for a, b in zip(climb, climb[1:])
                     if not b.is_infinity]
            if len(steps) >= 4 and steps[-1] * 4 < steps[-4]:
                raise GridAxiomViolation(
                    f"stages stay bounded below {format_ordinal(sample)}")
    exact = grid.name in REGISTERED
    return GridReport(True, exact, tuple(samples))


def check_refines(coarse, fine, probes=()):
    """True iff every sampled opportunity of the coarse grid reappears in
    the fine one at the same time."""
    for index in _sample_indices(coarse.bound, probes):
        t = coarse(index)
        if t.is_infinity:
            continue
        if fine(_locate(fine, t)) != t:
            return False
    return True


def grid_size(grid, samples=64):
    """
    The supremum of consecutive horizontal gaps; infinite when the grid
    never reaches past a finite horizon.  Exact for registered families,
    a sampled lower estimate otherwise.
    """
    if grid.gap is not None:
        return grid.gap, True
    if not grid.bound.cnf or grid.bound.cnf[0][0] == 0:
        # finite bound: every strictly smaller index has a finite time,
        # so the image below the bound is bounded
        return INFINITY, True
    # infinite bound: continuity at the bound forces an unbounded image,
    # so the size is the supremum of the sampled consecutive gaps
    indices = _sample_indices(grid.bound,
                              [ordinal(k) for k in range(samples)])
    best = Fraction(0)
    for s in indices:
        here, after = grid(s), grid(ord_succ(s))
        if not here.is_infinity and not after.is_infinity:
            best = max(best, after.t - here.t)
    return best, False


def psi_delta(grid, t):
    """
    The re-indexing at a real time: the first grid index not before t,
    and the order type of everything from there to the bound.
    """
    if not isinstance(t, VTime):
        t = vt(t)
    base = _locate(grid, t)
    return base, ord_left_sub(base, grid.bound)


def gamma(family, t):
    """
    The vertical extent that the grids fill in at a real time: the first
    offset whose grid times stay strictly above t in the limit.
    Symbolic for the registered families, sampled otherwise.
    """
    if not isinstance(t, VTime):
        t = vt(t)
    if family.name == "dyadic" and not t.is_infinity:
        return OMEGA, True
    if family.name == "nested" and not t.is_infinity:
        return OMEGA_SQ, True
    # empirical: offsets whose times exceed t at the deepest sampled grid
    deep = family.member(16)
    base = _locate(deep, t)
    for k in range(2 ** 10):
        offset = ordinal(k)
        if deep(ord_add(base, offset)) > t:
            return offset, False
    return deep.bound, False


def _value(process, family, n, index):
    grid = family.member(n)
    time = grid(index)
    if isinstance(process, StopIndexFamily):
        return 1 if time < grid(process.index(n, grid)) else 0
    return process(n, time)


def _probe_values(process, family, t, beta, window):
    values = []
    for n in window.depths():
        base = _locate(family.member(n), t)
        values.append(_value(process, family, n, ord_add(base, beta)))
    return values


def _settle(values, window, probe):
    tail = values[-window.tail:]
    if all(x == tail[0] for x in tail):
        return tail[0]
    switches = sum(1 for a, b in zip(tail, tail[1:]) if a != b)
    if switches >= 2:
        return None                    # proven oscillation
    raise TailWindowInconclusive(
        f"tail neither constant nor oscillating at {format_vtime(probe)}")


def default_probes(process, family, window):
    anchors = [vt(0)]
    if isinstance(process, StopIndexFamily):
        if process.anchor is not None:
            anchors = [vt(process.anchor.t)]
            tops = [process.anchor.v]
        else:
            tops = sorted({process.kappa(n) for n in window.depths()},
                          key=ord_cmp_key)
    else:
        tops = [ordinal(2)]
    probes = []
    for t in anchors:
        verticals = {ZERO, ordinal(1)}
        for top in tops:
            verticals.add(top)
            verticals.add(ord_succ(top))
            if is_limit(top):
                verticals.update(
                    itertools.islice(fundamental_sequence(top), 1, 3))
        probes.extend(VTime(t.t, v) for v in verticals)
    return sorted(probes)


class ord_cmp_key:
    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return ord_cmp(self.value, other.value) < 0


def tilting_limit(process, family, probes=None, window=Window()):
    """
    Evaluate the stop indicators through the grids at each probe point
    and declare the limit if every tail settles.  Probes at or above the
    filled-in vertical extent are read off by left extension: constant
    continuation of the values just below it.
    """
    if probes is None:
        probes = default_probes(process, family, window)
    table = {}
    for probe in sorted(set(probes)):
        if probe.is_infinity:
            t, beta = INFINITY, ZERO
        else:
            t, beta = vt(probe.t), probe.v
        extent, _ = gamma(family, t)
        if beta is not None and not isinstance(beta, Ordinal):
            # vertical part above every ordinal: left extension applies
            beta = extent
        if isinstance(beta, Ordinal) and ord_cmp(beta, extent) < 0:
            values = _probe_values(process, family, t, beta, window)
            limit = _settle(values, window, probe)
            if limit is None:
                return TiltingResult(False, None, table, (probe, tuple(values)),
                                     window)
            table[probe] = limit
        else:
            stages = list(itertools.islice(fundamental_sequence(extent), 12))
            settled = []
            for stage in stages:
                values = _probe_values(process, family, t, stage, window)
                limit = _settle(values, window, probe)
                if limit is None:
                    return TiltingResult(False, None, table,
                                         (probe, tuple(values)), window)
                settled.append(limit)
            tail = settled[-4:]
            if any(x != tail[0] for x in tail):
                raise TailWindowInconclusive(
                    f"no eventual constancy below the vertical extent "
                    f"at {format_vtime(probe)}")
            table[probe] = tail[0]
    stop = _stop_descriptor(process, family, window, table)
    return TiltingResult(True, stop, table, None, window)


def _stop_descriptor(process, family, window, table):
    """The limit stop time, when the family stops at a stable index."""
    if not isinstance(process, StopIndexFamily):
        return None
    if process.anchor is not None:
        stop = process.anchor
    else:
        tops = {process.kappa(n) for n in window.depths()}
        if len(tops) != 1:
            return None
        top = tops.pop()
        grid = family.member(window.stop)
        if ord_cmp(top, grid.bound) >= 0:
            stop = INFINITY
        else:
            stop = vt(0, top)
    for probe, value in table.items():
        if value != (1 if probe < stop else 0):
            raise TailWindowInconclusive(
                f"probe {format_vtime(probe)} disagrees with the stop "
                f"descriptor {format_vtime(stop)}")
    return stop


def approximate_stop_indicator(target):
    """
    A registered family and stop-index family whose tilting limit is the
    indicator of the half-open prefix below the target.
    """
    if not isinstance(target, VTime):
        raise InputError(f"target must be a vertically extended time: {target!r}")
    if target.is_infinity or not isinstance(target.v, Ordinal):
        raise TargetOutOfRange("target must be deterministic with an "
                               "ordinal vertical part")
    if ord_cmp(target.v, OMEGA_SQ) >= 0:
        raise TargetOutOfRange(
            f"vertical part {format_ordinal(target.v)} not below w^2")
    family = dyadic_family() if ord_cmp(target.v, OMEGA) < 0 else nested_family()
    process = StopIndexFamily(anchor=target, label=format_vtime(target))
    return family, process
