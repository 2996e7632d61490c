"""
Equilibrium verification.

An expected-utility layer places local beliefs and tastes on every
information set of an extensive form.  A profile is verified in two
halves: dynamic consistency (assessments agree along realized play and
every pair of belief systems admits a common prior, decided by exact
linear feasibility) and dynamic rationality (no agent can improve the
conditional payoff at any of its information sets by deviating).  All
arithmetic is exact over the rationals.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ._util import budget
from .errors import (
    BudgetExceeded,
    EnumerationBudgetExceeded,
    FeasibilitySolverBudget,
    InputError,
    UnknownExample,
    ZeroProbabilityBlockRequested,
)
from .play import StrategyProfile, outcome_from, profile_tables
from .sef import Strategy, info_sets, strategies
from . import instances


@dataclass
class Belief:
    """A local probability on an info set's domain, plus an assessment of
    the member move each scenario has reached."""
    prob: dict        # scenario -> Fraction, summing to one over the support
    assessment: dict  # scenario -> member random move, total on the domain


@dataclass
class EUStructure:
    """Per-unit beliefs and tastes; a unit is an (agent, info set) pair."""
    beliefs: dict   # (agent, InfoSet) -> Belief
    tastes: dict    # (agent, InfoSet) -> {outcome: Fraction}


def units(sef):
    """All (agent, info set) pairs of the form, in a deterministic order."""
    result = []
    for i in sef.agents:
        sets, _ = info_sets(sef, i)
        result.extend((i, p) for p in sorted(
            sets, key=lambda p: sorted(map(repr, p.random_moves))))
    return result


def unit_domain(unit):
    _, p = unit
    return frozenset(w for m in p.random_moves for w in m.domain)


def information_blocks(sef, agent, infoset):
    """The exogenous-information partition the agent conditions on at the
    info set: the union of the members' information partitions."""
    blocks = set()
    for m in infoset.random_moves:
        blocks.update(sef.info[agent][m])
    return frozenset(blocks)


def validate_eu(sef, eu):
    """Check coverage and the local probability/assessment invariants."""
    outcomes = sef.sdf.forest.outcomes
    for unit in units(sef):
        if unit not in eu.beliefs:
            raise InputError(f"no belief at {unit!r}")
        if unit not in eu.tastes:
            raise InputError(f"no taste at {unit!r}")
        domain = unit_domain(unit)
        belief = eu.beliefs[unit]
        if not set(belief.prob) <= domain:
            raise InputError(f"belief support leaves the domain at {unit!r}")
        mass = sum(map(Fraction, belief.prob.values()), Fraction(0))
        if mass != 1 or any(Fraction(v) < 0 for v in belief.prob.values()):
            raise InputError(f"belief at {unit!r} is not a probability")
        _, p = unit
        for w in domain:
            m = belief.assessment.get(w)
            if m not in p.random_moves or w not in m.domain:
                raise InputError(f"assessment at {unit!r} fails at {w!r}")
        if not outcomes <= set(eu.tastes[unit]):
            raise InputError(f"taste at {unit!r} misses outcomes")


def _psi(infoset, sdf, w):
    """The unique member move whose image contains the outcome, if any."""
    sw = sdf.scenario_of_outcome(w)
    hits = [m for m in infoset.random_moves if sw in m.domain and w in m(sw)]
    if len(hits) == 1:
        return hits[0]
    return None


def _block_values(sef, belief, taste, tables, blocks):
    """Conditional expected payoff per positive-probability block."""
    values = {}
    zero = set()
    for b in sorted(blocks, key=sorted):
        mass = sum((Fraction(belief.prob.get(w, 0)) for w in b), Fraction(0))
        if mass == 0:
            zero.add(b)
            continue
        total = Fraction(0)
        for w in sorted(b):
            pw = Fraction(belief.prob.get(w, 0))
            if pw == 0:
                continue
            out = outcome_from(sef, tables, belief.assessment[w](w))
            total += pw * Fraction(taste[out])
        values[b] = total / mass
    return values, zero


def expected_payoff(sef, eu, profile, agent, infoset, block=None):
    """
    The agent's conditional expected payoff at the info set under the
    profile, one exact value per positive-probability information block.
    Requesting a specific zero-probability block is an error.
    """
    unit = (agent, infoset)
    belief = eu.beliefs[unit]
    taste = eu.tastes[unit]
    tables = profile_tables(sef, profile)
    blocks = information_blocks(sef, agent, infoset)
    if block is not None:
        block = frozenset(block)
        if block not in blocks:
            raise InputError(f"not an information block: {sorted(block)}")
        blocks = {block}
    values, zero = _block_values(sef, belief, taste, tables, blocks)
    if block is not None and block in zero:
        raise ZeroProbabilityBlockRequested(
            f"block {sorted(block)} has probability zero at {unit!r}")
    return values


@dataclass
class RationalityReport:
    rational: bool
    payoffs: dict                     # unit -> {block: Fraction}
    witnesses: list = field(default_factory=list)
    zero_blocks: dict = field(default_factory=dict)

    def __bool__(self):
        return self.rational


def check_dynamic_rationality(sef, eu, profile, cap=None):
    """
    Exhaustive one-agent deviation check: at every info set of every
    agent, the profile's conditional payoff must weakly dominate every
    unilateral deviation on every positive-probability block.
    """
    cap = budget(cap if cap is not None else 10 ** 6)
    if isinstance(profile, dict):
        profile = StrategyProfile(profile)
    validate_eu(sef, eu)
    report = RationalityReport(True, {})
    base_tables = profile_tables(sef, profile)
    my_units = units(sef)
    for unit in my_units:
        agent, p = unit
        blocks = information_blocks(sef, agent, p)
        values, zero = _block_values(
            sef, eu.beliefs[unit], eu.tastes[unit], base_tables, blocks)
        report.payoffs[unit] = values
        report.zero_blocks[unit] = zero
    for i in sef.agents:
        try:
            deviations = strategies(sef, i, cap=cap)
        except BudgetExceeded as err:
            raise EnumerationBudgetExceeded(str(err)) from err
        own_units = [u for u in my_units if u[0] == i]
        for t in deviations:
            swapped = dict(profile.strategies)
            swapped[i] = t
            tables = profile_tables(sef, StrategyProfile(swapped))
            for unit in own_units:
                _, p = unit
                blocks = information_blocks(sef, i, p)
                values, _ = _block_values(
                    sef, eu.beliefs[unit], eu.tastes[unit], tables, blocks)
                for b, v in values.items():
                    if v > report.payoffs[unit][b]:
                        report.rational = False
                        report.witnesses.append(
                            (i, p, t, b, report.payoffs[unit][b], v))
                        break
    return report


# --- common-prior feasibility ------------------------------------------------

def _fm_feasible(ineqs, nvars, cap):
    """
    Decide feasibility of a system of rational linear inequalities
    (coeffs, const) meaning coeffs . y + const >= 0, by eliminating the
    variables from the last to the first; on success a witness point is
    recovered by back substitution.
    """
    stack = []
    current = list(ineqs)
    for k in range(nvars - 1, -1, -1):
        lowers, uppers, rest = [], [], []
        for coeffs, const in current:
            c = coeffs[k]
            head = coeffs[:k]
            if c > 0:
                lowers.append((head, const, c))
            elif c < 0:
                uppers.append((head, const, c))
            else:
                rest.append((head, const))
        stack.append((lowers, uppers))
        for hl, cl, al in lowers:
            for hu, cu, au in uppers:
                combo = tuple(al * hu[t] - au * hl[t] for t in range(k))
                rest.append((combo, al * cu - au * cl))
        if len(rest) > cap:
            raise FeasibilitySolverBudget(
                f"{len(rest)} inequalities after an elimination step")
        current = rest
    if any(const < 0 for _, const in current):
        return False, None
    values = []
    for lowers, uppers in reversed(stack):
        lb = [-(sum(h[t] * values[t] for t in range(len(h))) + c) / a
              for h, c, a in lowers]
        ub = [-(sum(h[t] * values[t] for t in range(len(h))) + c) / a
              for h, c, a in uppers]
        if lb and ub:
            values.append((max(lb) + min(ub)) / 2)
        elif lb:
            values.append(max(lb))
        elif ub:
            values.append(min(ub))
        else:
            values.append(Fraction(0))
    return True, values


def _solve_linear_system(universe, equations, cap):
    """
    Exact feasibility of equations sum(coeffs . q) = const together with
    q >= 0, over variables indexed by the universe.  Returns a witness
    assignment or None.
    """
    n = len(universe)
    pivots = {}
    for coeffs, const in equations:
        coeffs = list(coeffs)
        const = Fraction(const)
        for col in list(pivots):
            f = coeffs[col]
            if f:
                pc, pconst = pivots[col]
                coeffs = [a - f * b for a, b in zip(coeffs, pc)]
                const -= f * pconst
        lead = next((k for k, a in enumerate(coeffs) if a), None)
        if lead is None:
            if const != 0:
                return None
            continue
        inv = coeffs[lead]
        coeffs = [a / inv for a in coeffs]
        const /= inv
        for col in list(pivots):
            pc, pconst = pivots[col]
            f = pc[lead]
            if f:
                pivots[col] = ([a - f * b for a, b in zip(pc, coeffs)],
                               pconst - f * const)
        pivots[lead] = (coeffs, const)
    free = [k for k in range(n) if k not in pivots]
    index = {k: t for t, k in enumerate(free)}
    ineqs = []
    for k in range(n):
        if k in pivots:
            pc, pconst = pivots[k]
            ineqs.append((tuple(-pc[f] for f in free), pconst))
        else:
            unit = tuple(Fraction(int(f == k)) for f in free)
            ineqs.append((unit, Fraction(0)))
    feasible, values = _fm_feasible(ineqs, len(free), cap)
    if not feasible:
        return None
    q = {}
    for k, w in enumerate(universe):
        if k in pivots:
            pc, pconst = pivots[k]
            q[w] = pconst - sum(pc[f] * values[index[f]] for f in free)
        else:
            q[w] = values[index[k]]
    return q


@dataclass
class ConsistencyReport:
    consistent: bool
    tastes_consistent: bool
    events: dict = field(default_factory=dict)       # (unit, unit) -> event
    pair_status: dict = field(default_factory=dict)  # frozenset of units -> str
    witnesses: dict = field(default_factory=dict)
    priors: dict = field(default_factory=dict)       # frozenset of units -> prior

    def __bool__(self):
        return self.consistent


def _ordered_directions(group):
    if len(group) == 1:
        (u,) = group
        return [(u, u)]
    a, b = group
    return [(a, b), (b, a)]


def check_dynamic_consistency(sef, eu, profile, priors=None, cap=None):
    """
    Consistency of the belief systems under the profile, checked on every
    group of at most two (agent, info set) units: assessments must follow
    realized play into later info sets, the agreement events are recorded,
    and each group needs a common prior reproducing both local beliefs by
    conditioning on the scenarios that reach the respective info set.  The
    prior is found by exact linear feasibility unless one is supplied.
    """
    cap = budget(cap if cap is not None else 10 ** 4)
    if isinstance(profile, dict):
        profile = StrategyProfile(profile)
    validate_eu(sef, eu)
    sdf = sef.sdf
    tastes_ok = True
    by_agent = {}
    for (i, p), taste in eu.tastes.items():
        seen = by_agent.setdefault(i, taste)
        if any(Fraction(seen[w]) != Fraction(taste[w])
               for w in sdf.forest.outcomes):
            tastes_ok = False
    report = ConsistencyReport(True, tastes_ok)
    tables = profile_tables(sef, profile)
    my_units = units(sef)
    outs = {}
    for unit in my_units:
        belief = eu.beliefs[unit]
        outs[unit] = {w: outcome_from(sef, tables, belief.assessment[w](w))
                      for w in unit_domain(unit)}
    groups = [frozenset({u}) for u in my_units]
    groups += [frozenset(pair) for pair in itertools.combinations(my_units, 2)]
    for group in groups:
        members = sorted(group, key=repr)
        status = "consistent"
        witness = None
        domains = {u: unit_domain(u) for u in members}
        events = {}
        reached = {}
        for ua, ub in _ordered_directions(members):
            belief_a = eu.beliefs[ua]
            belief_b = eu.beliefs[ub]
            for w in sorted(domains[ua]):
                out = outs[ua][w]
                m = _psi(ub[1], sdf, out)
                if m is None:
                    continue
                if belief_a.assessment[w](w) >= m(w) and \
                        belief_b.assessment[w] != m:
                    status = "inconsistent"
                    witness = ("assessment", ub, w, m)
                    break
            if witness:
                break
            event = frozenset(
                w for w in domains[ua] & domains[ub]
                if belief_a.assessment[w](w) >= belief_b.assessment[w](w))
            events[(ua, ub)] = event
            reached[(ua, ub)] = (domains[ub] - event) | frozenset(
                w for w in event if _psi(ub[1], sdf, outs[ua][w]) is not None)
        report.events.update(events)
        if status != "inconsistent":
            universe = sorted(frozenset().union(*domains.values()))
            pos = {w: k for k, w in enumerate(universe)}
            # a supplied prior is a candidate for genuine pairs only: a
            # one-unit group admits exactly the local belief as its prior
            if priors is not None and len(members) == 2:
                q = {w: Fraction(priors.get(w, 0)) for w in universe}
                mass = sum(q.values(), Fraction(0))
                if mass == 0:
                    status = "inconsistent"
                    witness = ("prior", "no mass on the group domain")
                    q = None
                else:
                    q = {w: v / mass for w, v in q.items()}
            else:
                equations = [(tuple(Fraction(1) for _ in universe),
                              Fraction(1))]
                for ua, ub in _ordered_directions(members):
                    a_set = reached[(ua, ub)]
                    prob_b = eu.beliefs[ub].prob
                    for w0 in sorted(domains[ub]):
                        coeffs = [Fraction(0)] * len(universe)
                        pb = Fraction(prob_b.get(w0, 0))
                        for w in a_set:
                            coeffs[pos[w]] += pb
                        if w0 in a_set:
                            coeffs[pos[w0]] -= 1
                        equations.append((tuple(coeffs), Fraction(0)))
                q = _solve_linear_system(universe, equations, cap)
                if q is None:
                    status = "inconsistent"
                    witness = ("prior", "no common prior exists")
            if q is not None:
                vacuous = False
                for ua, ub in _ordered_directions(members):
                    a_set = reached[(ua, ub)]
                    a_mass = sum((q[w] for w in a_set), Fraction(0))
                    if a_mass == 0:
                        vacuous = True
                        continue
                    prob_b = eu.beliefs[ub].prob
                    for w0 in sorted(domains[ub]):
                        lhs = Fraction(prob_b.get(w0, 0)) * a_mass
                        rhs = q[w0] if w0 in a_set else Fraction(0)
                        if lhs != rhs:
                            status = "inconsistent"
                            witness = ("prior", ub, w0)
                            break
                    if status == "inconsistent":
                        break
                if status == "consistent":
                    report.priors[group] = q
                    if vacuous:
                        status = "vacuously consistent"
                elif status == "vacuously consistent":
                    report.priors[group] = q
        report.pair_status[group] = status
        if witness is not None:
            report.witnesses[group] = witness
        if status == "inconsistent":
            report.consistent = False
    report.consistent = report.consistent and tastes_ok
    return report


@dataclass
class EquilibriumReport:
    consistency: ConsistencyReport
    rationality: RationalityReport
    in_equilibrium: bool

    def __bool__(self):
        return self.in_equilibrium


def verify_equilibrium(sef, eu, profile, priors=None, cap=None):
    """Consistency and rationality, conjoined."""
    consistency = check_dynamic_consistency(sef, eu, profile, priors=priors,
                                            cap=cap)
    rationality = check_dynamic_rationality(sef, eu, profile, cap=cap)
    return EquilibriumReport(consistency, rationality,
                             bool(consistency) and rationality.rational)


# --- canonical expected-utility layers ---------------------------------------

def bayes_beliefs(sef, prior, profile):
    """
    The belief system a prior induces under a profile: at each info set,
    condition the prior on the scenarios whose realized play passes
    through a member move; at unreached info sets fall back to the prior
    restricted to the domain.  Assessments point at the member reached,
    else at the first member defined on the scenario.
    """
    tables = profile_tables(sef, profile)
    prior = {w: Fraction(v) for w, v in prior.items()}
    played = {w: outcome_from(sef, tables, sef.sdf.root_of(w))
              for w in sef.sdf.scenarios}
    beliefs = {}
    for unit in units(sef):
        _, p = unit
        domain = sorted(unit_domain(unit))
        members = sorted(p.random_moves, key=repr)
        hit = {}
        for w in domain:
            for m in members:
                if w in m.domain and played[w] in m(w):
                    hit[w] = m
                    break
        mass = sum((prior.get(w, 0) for w in hit), Fraction(0))
        if mass > 0:
            prob = {w: prior[w] / mass for w in hit if prior.get(w, 0) > 0}
        else:
            total = sum((prior.get(w, 0) for w in domain), Fraction(0))
            if total == 0:
                raise InputError(f"the prior misses the domain of {unit!r}")
            prob = {w: prior[w] / total for w in domain
                    if prior.get(w, 0) > 0}
        assessment = {}
        for w in domain:
            assessment[w] = hit.get(w) or next(
                m for m in members if w in m.domain)
        beliefs[unit] = Belief(prob, assessment)
    return beliefs


def uniform_tastes(sef, per_agent):
    """The same taste at every info set of each agent."""
    return {(i, p): {w: Fraction(v) for w, v in per_agent[i].items()}
            for (i, p) in units(sef)}


def _assign(sef, agent, picks):
    """The strategy selecting, at each info set, the unique pick that is
    available there."""
    sets, _ = info_sets(sef, agent)
    assignment = {}
    for p in sets:
        menu = sef.available_at(agent, next(iter(p.random_moves)))
        match = [c for c in picks if c in menu]
        if len(match) != 1:
            raise InputError(f"{len(match)} picks available at {p!r}")
        assignment[p] = match[0]
    return Strategy(agent, assignment)


def amd_instance(p=Fraction(2, 3), atoms=3):
    """
    The exit/continue form with a symmetric threshold profile: each agent
    exits exactly on the signal atoms of total probability 1 - p.  The
    exit probability must be a multiple of 1/atoms.
    """
    p = Fraction(p)
    exit_count = (1 - p) * atoms
    if not 0 <= p <= 1 or exit_count.denominator != 1:
        raise InputError(f"exit probability {1 - p} is not a multiple "
                         f"of 1/{atoms}")
    sef, _ = instances.amd_sef(atoms)
    scenarios = sorted(sef.sdf.scenarios)
    prior = {w: Fraction(1, 2 * atoms * atoms) for w in scenarios}
    exit_sigs = {str(k) for k in range(int(exit_count))}
    profile = {}
    for agent in (1, 2):
        event = frozenset(w for w in scenarios
                          if instances.amd_signal(w, agent) in exit_sigs)
        choice = instances.amd_event_choice(atoms, agent, event)
        profile[agent] = _assign(sef, agent, [choice])
    s = StrategyProfile(profile)
    taste = {}
    for w in scenarios:
        taste[f"{w}:D"] = Fraction(0)
        taste[f"{w}:H"] = Fraction(4)
        taste[f"{w}:M"] = Fraction(1)
    eu = EUStructure(bayes_beliefs(sef, prior, s),
                     uniform_tastes(sef, {1: taste, 2: taste}))
    return sef, eu, s, prior


def mp_instance(case=1, p=Fraction(2, 3)):
    """
    A coin-matching form with its case-specific candidate profile: the
    first mover leans on the side variable having probability p.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InputError(f"not a probability: {p}")
    sef, (x0, x1, x2) = instances.mp_sef(case)
    prior = {w: (p if w[1] == "1" else 1 - p) / 8
             for w in instances.MP_SCENARIOS}
    everywhere = instances.MP_SCENARIOS
    if case in (2, 3):
        first = {w: "1" if w[3] == "0" else "2" for w in everywhere}
        picks_j = [instances.mp_choice_second(
            ".", {w: "1" if w[4] == "0" else "2" for w in everywhere})]
    elif case == 1:
        first = {w: "1" for w in everywhere}
        picks_j = [instances.mp_choice_second("1", {w: "2" for w in everywhere}),
                   instances.mp_choice_second("2", {w: "1" for w in everywhere})]
    elif case == 4:
        first = {w: "2" for w in everywhere}
        picks_j = [instances.mp_choice_second(
            "1", {w: "2" if w[1] == "1" else "1" for w in everywhere}),
            instances.mp_choice_second("2", {w: "1" for w in everywhere})]
    else:
        raise InputError(f"unknown case: {case!r}")
    s = StrategyProfile({
        "i": _assign(sef, "i", [instances.mp_choice_first(first)]),
        "j": _assign(sef, "j", picks_j),
    })
    taste_j = {}
    for w in everywhere:
        for a in "12":
            for b in "12":
                taste_j[f"{w}:{a}{b}"] = Fraction(
                    (-1) ** (int(w[1]) + int(a) + int(b)))
    taste_i = {k: -v for k, v in taste_j.items()}
    eu = EUStructure(bayes_beliefs(sef, prior, s),
                     uniform_tastes(sef, {"i": taste_i, "j": taste_j}))
    return sef, eu, s, prior


def _simple_instance():
    sef = instances.simple_sef(1)
    prior = {w: Fraction(1, 2) for w in instances.SIMPLE_SCENARIOS}
    taste = {}
    for w in instances.SIMPLE_SCENARIOS:
        taste[f"{w}:11"] = Fraction(2)
        taste[f"{w}:12"] = Fraction(1)
        taste[f"{w}:21"] = Fraction(0)
        taste[f"{w}:22"] = Fraction(0)
    const = {w: "1" for w in instances.SIMPLE_SCENARIOS}
    picks = [instances.simple_choice_first(const),
             instances.simple_choice_second("1", const),
             instances.simple_choice_second("2", const)]
    s = StrategyProfile({"i": _assign(sef, "i", picks)})
    eu = EUStructure(bayes_beliefs(sef, prior, s),
                     uniform_tastes(sef, {"i": taste}))
    return sef, eu, s, prior


def _variant_instance():
    sef = instances.variant_sef(1)
    prior = {w: Fraction(1, 2) for w in instances.SIMPLE_SCENARIOS}
    taste = {"o1:11": Fraction(2), "o1:12": Fraction(1), "o1:2": Fraction(3),
             "o2:11": Fraction(2), "o2:12": Fraction(1),
             "o2:21": Fraction(0), "o2:22": Fraction(0)}
    const = {w: "1" for w in instances.SIMPLE_SCENARIOS}
    picks = [instances.variant_choice_first(const),
             instances.variant_choice_second("1", const),
             instances.variant_choice_second("2", const)]
    s = StrategyProfile({"i": _assign(sef, "i", picks)})
    eu = EUStructure(bayes_beliefs(sef, prior, s),
                     uniform_tastes(sef, {"i": taste}))
    return sef, eu, s, prior


def _ultimatum_instance():
    sef, _ = instances.ultimatum_sef()
    prior = {"u": Fraction(1)}
    taste_p = {"u:ga": Fraction(3), "u:gr": Fraction(0),
               "u:fa": Fraction(2), "u:fr": Fraction(0)}
    taste_r = {"u:ga": Fraction(1), "u:gr": Fraction(0),
               "u:fa": Fraction(2), "u:fr": Fraction(0)}
    greedy = frozenset({"u:ga", "u:gr"})
    s = StrategyProfile({
        "p": _assign(sef, "p", [greedy]),
        "r": _assign(sef, "r", [frozenset({"u:ga"}), frozenset({"u:fa"})]),
    })
    eu = EUStructure(bayes_beliefs(sef, prior, s),
                     uniform_tastes(sef, {"p": taste_p, "r": taste_r}))
    return sef, eu, s, prior


def load_example(name):
    """
    A bundled verification instance: the form, its expected-utility
    layer, the candidate profile, and the expected verdict.  The expected
    payoffs state, per agent, the conditional value on every positive
    block of every info set reached with positive probability.
    """
    if name == "simple":
        sef, eu, s, prior = _simple_instance()
        expected = {"equilibrium": True, "payoffs": {"i": Fraction(2)}}
    elif name == "simple-variant":
        sef, eu, s, prior = _variant_instance()
        expected = {"equilibrium": True, "payoffs": {"i": Fraction(2)}}
    elif name == "amd":
        sef, eu, s, prior = amd_instance()
        expected = {"equilibrium": True,
                    "payoffs": {1: Fraction(8, 5), 2: Fraction(8, 5)}}
    elif name.startswith("mp-case") and name[7:] in "1234" and len(name) == 8:
        case = int(name[7])
        sef, eu, s, prior = mp_instance(case)
        if case in (2, 3):
            payoffs = {"i": Fraction(0), "j": Fraction(0)}
        else:
            payoffs = {"i": Fraction(-1, 3), "j": Fraction(1, 3)}
        expected = {"equilibrium": True, "payoffs": payoffs}
    elif name == "ultimatum":
        sef, eu, s, prior = _ultimatum_instance()
        expected = {"equilibrium": True,
                    "payoffs": {"p": Fraction(3), "r": Fraction(1)}}
    else:
        raise UnknownExample(f"unknown example: {name!r}")
    expected["prior"] = prior
    return sef, eu, s, expected
