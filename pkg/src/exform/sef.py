"""
Stochastic extensive forms.

An extensive form places agents on top of a stochastic decision forest:
each agent owns a set of random moves, an information structure, reference
choices, and a set of adapted choices subject to six consistency axioms
plus an optional strong separation axiom.  The second half of the module
builds extensive forms from explicit action-path data and history
structures.
"""

import itertools
from dataclasses import dataclass, field

from ._util import budget, powerset
from .errors import (
    APSEFAxiomViolation,
    BudgetExceeded,
    ChoiceError,
    InputError,
    StructureError,
)
from .sdf import (
    ActionPathData,
    RandomMove,
    StochasticDecisionForest,
    build_action_path_sdf,
    check_adapted,
    check_recall,
    is_available_at,
    predecessors,
    preimage,
    validate_reference_choices,
    xgeq,
)


@dataclass(frozen=True)
class InfoSet:
    """A maximal set of an agent's random moves sharing available choices."""
    agent: object
    random_moves: frozenset

    @property
    def domain(self):
        return next(iter(self.random_moves)).domain

    def moves(self):
        return frozenset(m(w) for m in self.random_moves for w in m.domain)


@dataclass
class SEFReport:
    valid: bool
    strict: bool
    violations: tuple = ()
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.valid


@dataclass
class Strategy:
    """A complete contingent plan: one available choice per info set."""
    agent: object
    assignment: dict   # InfoSet -> choice

    def __call__(self, info_set):
        return self.assignment[info_set]


def validate_sef(sdf, agents, agent_moves, info, refchoices, choices,
                 axiom6_cap=None, axiom2_cap=None):
    """
    Check the extensive-form axioms exhaustively.  The report records one
    entry per axiom: True, False, or None when the completeness search
    would exceed its budget.  The strong separation axiom is checked as
    well and reported via the ``strict`` flag without affecting validity.
    """
    axiom6_cap = budget(axiom6_cap if axiom6_cap is not None else 10 ** 4)
    axiom2_cap = budget(axiom2_cap if axiom2_cap is not None else 10 ** 6)
    violations = []
    checked = {}
    pred = {}

    def P(c):
        if c not in pred:
            pred[c] = predecessors(sdf, c)
        return pred[c]

    for i in agents:
        if not frozenset(agent_moves[i]) <= sdf.random_moves:
            violations.append(("agent_moves", (i, "not random moves")))
            return SEFReport(False, False, tuple(violations), checked)
        values = [m(w) for m in agent_moves[i] for w in m.domain]
        if len(set(values)) != len(values):
            violations.append(("evaluation", (i, "not injective")))
        try:
            validate_reference_choices(sdf, refchoices[i], agent_moves[i])
        except ChoiceError as err:
            violations.append(("reference", (i, str(err))))
        for c in choices[i]:
            try:
                if not check_adapted(sdf, c, info[i], refchoices[i],
                                     agent_moves[i]):
                    violations.append(("adapted", (i, c)))
            except ChoiceError as err:
                violations.append(("choice", (i, str(err))))
    if violations:
        return SEFReport(False, False, tuple(violations), checked)

    moves_of = {i: frozenset(m(w) for m in agent_moves[i] for w in m.domain)
                for i in agents}

    def J(x):
        return [i for i in agents if x in moves_of[i]]

    def available_at_move(i, x):
        return [c for c in choices[i] if x in P(c)]

    # Axiom 1: predecessor sets of an agent's choices must not properly
    # overlap, and overlapping choices agree or are disjoint per scenario
    checked["axiom1"] = True
    slice_cache = {}

    def slices(c):
        if c not in slice_cache:
            slice_cache[c] = {w: c & sdf.root_of(w) for w in sdf.scenarios}
        return slice_cache[c]

    for i in agents:
        for c, c2 in itertools.combinations(sorted(choices[i], key=sorted), 2):
            if not P(c) & P(c2):
                continue
            if P(c) != P(c2):
                violations.append(("axiom1", (i, c, c2, "predecessors differ")))
                checked["axiom1"] = False
                continue
            for w in sdf.scenarios:
                cw = slices(c)[w]
                c2w = slices(c2)[w]
                if cw != c2w and cw & c2w:
                    violations.append(("axiom1", (i, c, c2, w)))
                    checked["axiom1"] = False

    # Axiom 2: profiles of available choices of active agents are jointly
    # compatible with the move
    checked["axiom2"] = True
    count = 0
    for x in sdf.forest.moves():
        active = J(x)
        menus = [available_at_move(i, x) for i in active]
        for profile in itertools.product(*menus):
            count += 1
            if count > axiom2_cap:
                raise BudgetExceeded("too many available-choice profiles")
            meet = frozenset(x)
            for c in profile:
                meet &= c
            if not meet:
                violations.append(("axiom2", (x, profile)))
                checked["axiom2"] = False

    # Axioms 3 and 3': disjoint nodes of a shared scenario are separated
    # by disjoint choices of one agent; 3' requires a common predecessor
    checked["axiom3"] = True
    strict = True
    containing = {}

    def choices_over(i, y):
        if (i, y) not in containing:
            containing[(i, y)] = [c for c in choices[i] if y <= c]
        return containing[(i, y)]

    for w in sdf.scenarios:
        tree = sorted(sdf.tree_of(w), key=sorted)
        for y, y2 in itertools.combinations(tree, 2):
            if y & y2:
                continue
            weak = False
            strong = False
            for i in agents:
                for c in choices_over(i, y):
                    for c2 in choices_over(i, y2):
                        if c & c2 & sdf.root_of(w):
                            continue
                        weak = True
                        for x in P(c) & P(c2) & sdf.tree_of(w):
                            if y <= (x & c) and y2 <= (x & c2):
                                strong = True
                                break
                        if strong:
                            break
                    if strong:
                        break
                if strong:
                    break
            if not weak:
                violations.append(("axiom3", (w, y, y2)))
                checked["axiom3"] = False
            if not strong:
                strict = False

    # Axiom 4: active agents can preserve any strictly future node
    checked["axiom4"] = True
    for x in sdf.forest.moves():
        for i in J(x):
            menu = available_at_move(i, x)
            for y in sdf.forest.down(x) - {x}:
                if not any(y <= c for c in menu):
                    violations.append(("axiom4", (i, x, y)))
                    checked["axiom4"] = False

    # Axiom 5: random moves sharing an available choice share exogenous
    # information and reference choices
    checked["axiom5"] = True
    for i in agents:
        for m in agent_moves[i]:
            for m2 in agent_moves[i]:
                if m == m2:
                    continue
                shared = any(is_available_at(sdf, c, m)
                             and is_available_at(sdf, c, m2)
                             for c in choices[i])
                if not shared:
                    continue
                same_info = info[i][m] == info[i][m2]
                same_refs = frozenset(map(frozenset, refchoices[i][m])) \
                    == frozenset(map(frozenset, refchoices[i][m2]))
                if not (same_info and same_refs):
                    violations.append(("axiom5", (i, m, m2)))
                    checked["axiom5"] = False

    # Axiom 6: completeness, via the slice representation of candidate
    # adapted choices class by class
    checked["axiom6"] = True
    for i in agents:
        classes = _availability_classes(sdf, agent_moves[i], choices[i], P)
        for members, menu in classes:
            if not menu:
                continue
            active = sorted({w for m in members for w in m.domain}, key=repr)
            slices = [sorted({frozenset(c & sdf.root_of(w)) for c in menu},
                             key=sorted)
                      for w in active]
            total = 1
            for s in slices:
                total *= len(s)
            if total > axiom6_cap:
                checked["axiom6"] = None
                continue
            for combo in itertools.product(*slices):
                candidate = frozenset().union(*combo)
                if candidate in choices[i]:
                    continue
                if check_adapted(sdf, candidate, info[i], refchoices[i],
                                 agent_moves[i]):
                    violations.append(("axiom6", (i, candidate)))
                    checked["axiom6"] = False

    valid = not violations and all(v is not False for v in checked.values())
    return SEFReport(valid, strict and valid, tuple(violations), checked)


def _availability_classes(sdf, moves, menu, P):
    """Group an agent's random moves by their sets of available choices."""
    by_menu = {}
    for m in moves:
        key = frozenset(c for c in menu if preimage(m, P(c)) == m.domain)
        by_menu.setdefault(key, []).append(m)
    return [(members, sorted(key, key=sorted))
            for key, members in by_menu.items()]


class StochasticExtensiveForm:
    """A validated extensive form; ``strict`` records strong separation."""

    def __init__(self, sdf, agents, agent_moves, info, refchoices, choices,
                 require_strict=False, axiom6_cap=None, allow_incomplete=False):
        report = validate_sef(sdf, agents, agent_moves, info, refchoices,
                              choices, axiom6_cap=axiom6_cap)
        if not report.valid:
            blocking = [v for v in report.violations
                        if not (allow_incomplete and v[0] == "axiom6")]
            hard_fail = any(v is False for k, v in report.checked.items()
                            if not (allow_incomplete and k == "axiom6"))
            if blocking or hard_fail:
                raise StructureError(
                    f"invalid extensive form: {report.violations[:1]}")
        if require_strict and not report.strict:
            raise StructureError("strong separation fails")
        self.sdf = sdf
        self.agents = tuple(agents)
        self.agent_moves = {i: frozenset(agent_moves[i]) for i in self.agents}
        self.info = {i: dict(info[i]) for i in self.agents}
        self.refchoices = {i: {m: tuple(cs) for m, cs in refchoices[i].items()}
                           for i in self.agents}
        self.choices = {i: frozenset(frozenset(c) for c in choices[i])
                        for i in self.agents}
        self.strict = report.strict
        self.report = report
        self._pred = {}

    def predecessors_of(self, c):
        c = frozenset(c)
        if c not in self._pred:
            self._pred[c] = predecessors(self.sdf, c)
        return self._pred[c]

    def moves_of(self, i):
        cache = self.__dict__.setdefault("_moves_of_cache", {})
        if i not in cache:
            cache[i] = frozenset(m(w) for m in self.agent_moves[i]
                                 for w in m.domain)
        return cache[i]

    def active_agents(self, x):
        cache = self.__dict__.setdefault("_active_cache", {})
        if x not in cache:
            cache[x] = tuple(i for i in self.agents if x in self.moves_of(i))
        return cache[x]

    def available_at(self, i, m):
        return frozenset(c for c in self.choices[i]
                         if is_available_at(self.sdf, c, m))

    def available_at_move(self, i, x):
        return frozenset(c for c in self.choices[i]
                         if x in self.predecessors_of(c))

    def __repr__(self):
        return (f"StochasticExtensiveForm({len(self.agents)} agents, "
                f"{len(self.sdf.scenarios)} scenarios)")


def info_sets(sef, i):
    """
    The partition of the agent's random moves by equality of available
    choices, together with the bijection onto predecessor sets.
    """
    by_menu = {}
    for m in sorted(sef.agent_moves[i], key=lambda m: repr(m.graph)):
        by_menu.setdefault(sef.available_at(i, m), []).append(m)
    sets = []
    preds = {}
    for menu, members in by_menu.items():
        p = InfoSet(i, frozenset(members))
        sets.append(p)
        preds[p] = frozenset(m(w) for m in members for w in m.domain)
    return sets, preds


def check_recall_and_info(sef, i):
    """The four perfection flags of an agent, each checked exhaustively."""
    endo_recall = True
    for c in sef.choices[i]:
        for c2 in sef.choices[i]:
            for w in sef.sdf.scenarios:
                cw = c & sef.sdf.root_of(w)
                c2w = c2 & sef.sdf.root_of(w)
                if cw & c2w and not (cw <= c2w or c2w <= cw):
                    endo_recall = False
    exo_recall = check_recall(sef.sdf, sef.info[i], sef.agent_moves[i])
    sets, _ = info_sets(sef, i)
    endo_info = all(len(p.random_moves) == 1 for p in sets)
    if endo_info:
        mine = sef.moves_of(i)
        for j in sef.agents:
            if j != i and mine & sef.moves_of(j):
                endo_info = False
    exo_info = all(
        sef.info[i][m] == frozenset(frozenset({w}) for w in m.domain)
        for m in sef.agent_moves[i])
    return {
        "endogenous_recall": endo_recall,
        "exogenous_recall": exo_recall,
        "perfect_endogenous_info": endo_info,
        "perfect_exogenous_info": exo_info,
    }


def check_heraclitus(sef):
    """No strictly ordered pair of moves may share available choices."""
    witnesses = []
    for i in sef.agents:
        mine = sef.moves_of(i)
        for x in mine:
            for x2 in mine:
                if x > x2 and \
                        sef.available_at_move(i, x) & sef.available_at_move(i, x2):
                    witnesses.append((i, x, x2))
        for m in sef.agent_moves[i]:
            for m2 in sef.agent_moves[i]:
                if m != m2 and xgeq(m, m2) and \
                        sef.available_at(i, m) & sef.available_at(i, m2):
                    witnesses.append((i, m, m2))
    return not witnesses, witnesses


def complete_choices(sef, cap=None):
    """
    The closure adding every adapted choice that agrees scenario-wise with
    existing choices and is offered at a subset of an existing predecessor
    set.  Scenario-wise slices and predecessor sets are asserted to stay
    unchanged, and the result is a valid extensive form.
    """
    cap = budget(cap if cap is not None else 10 ** 5)
    new_choices = {}
    for i in sef.agents:
        closure = set(sef.choices[i])
        classes = _availability_classes(
            sef.sdf, sef.agent_moves[i], sef.choices[i], sef.predecessors_of)
        for members, menu in classes:
            if not menu:
                continue
            active = sorted({w for m in members for w in m.domain}, key=repr)
            options = [
                sorted({frozenset(c & sef.sdf.root_of(w)) for c in menu}
                       | {frozenset()}, key=sorted)
                for w in active
            ]
            total = 1
            for s in options:
                total *= len(s)
            if total > cap:
                raise BudgetExceeded(f"{total} closure candidates at one class")
            for combo in itertools.product(*options):
                candidate = frozenset().union(*combo)
                if not candidate or candidate in closure:
                    continue
                if check_adapted(sef.sdf, candidate, sef.info[i],
                                 sef.refchoices[i], sef.agent_moves[i]):
                    closure.add(candidate)
        new_choices[i] = frozenset(closure)
    completed = StochasticExtensiveForm(
        sef.sdf, sef.agents, sef.agent_moves, sef.info, sef.refchoices,
        new_choices)
    for i in sef.agents:
        for w in sef.sdf.scenarios:
            old = {c & sef.sdf.root_of(w) for c in sef.choices[i]} - {frozenset()}
            new = {c & sef.sdf.root_of(w) for c in new_choices[i]} - {frozenset()}
            assert old == new
        old_p = {completed.predecessors_of(c) for c in sef.choices[i]}
        new_p = {completed.predecessors_of(c) for c in new_choices[i]}
        assert old_p == new_p
    return completed


def strategies(sef, i, cap=None):
    """All strategies of the agent, as assignments of available choices."""
    cap = budget(cap if cap is not None else 10 ** 6)
    sets, _ = info_sets(sef, i)
    sets = sorted(sets, key=lambda p: sorted(map(repr, p.random_moves)))
    menus = [sorted(sef.available_at(i, next(iter(p.random_moves))),
                    key=sorted) for p in sets]
    total = 1
    for menu in menus:
        total *= max(len(menu), 1)
    if total > cap:
        raise BudgetExceeded(f"{total} strategies exceed the budget")
    result = []
    for combo in itertools.product(*menus):
        result.append(Strategy(i, dict(zip(sets, combo))))
    return result


def convert_strategy(sef, strategy, form):
    """
    A strategy as a map on info sets, random moves, or moves.  The three
    representations are in bijection via the natural surjections.
    """
    if form == "infoset":
        return dict(strategy.assignment)
    if form == "randommove":
        return {m: c for p, c in strategy.assignment.items()
                for m in p.random_moves}
    if form == "move":
        return {m(w): c for p, c in strategy.assignment.items()
                for m in p.random_moves for w in m.domain}
    raise InputError(f"unknown form: {form!r}")


def strategy_from_moves(sef, i, move_map):
    """Rebuild the info-set representation, checking constancy per set."""
    sets, _ = info_sets(sef, i)
    assignment = {}
    for p in sets:
        values = {frozenset(move_map[m(w)])
                  for m in p.random_moves for w in m.domain}
        if len(values) != 1:
            raise InputError(f"assignment not constant on {p!r}")
        (c,) = values
        if c not in sef.available_at(i, next(iter(p.random_moves))):
            raise InputError(f"choice unavailable at {p!r}")
        assignment[p] = c
    return Strategy(i, assignment)


def split_selves(sef, eu=None):
    """
    One agent per endogenous information set.  A bundle of per-agent data
    keyed by (agent, info set) passes through keyed by the new agents.
    """
    agents = []
    agent_moves = {}
    info = {}
    refchoices = {}
    choices = {}
    eu2 = {}
    for i in sef.agents:
        sets, _ = info_sets(sef, i)
        for k, p in enumerate(sorted(
                sets, key=lambda p: sorted(map(repr, p.random_moves)))):
            self_id = (i, k)
            agents.append(self_id)
            agent_moves[self_id] = p.random_moves
            info[self_id] = {m: sef.info[i][m] for m in p.random_moves}
            refchoices[self_id] = {m: sef.refchoices[i][m]
                                   for m in p.random_moves}
            choices[self_id] = sef.available_at(
                i, next(iter(p.random_moves)))
            if eu is not None:
                eu2[self_id] = eu[i]
    split = StochasticExtensiveForm(sef.sdf, agents, agent_moves, info,
                                    refchoices, choices)
    return (split, eu2) if eu is not None else (split, None)


# --- action-path extensive forms --------------------------------------------

def agent_choice_domain(data, agent, prefix, t):
    """
    Scenarios in which the agent has a real decision at the given time
    after the given strict prefix: two continuations must differ in the
    agent's action component.
    """
    idx = data.agents.index(agent)
    k = data.times.index(t)
    domain = set()
    for w in data.scenarios:
        seen = {f[k][idx] for (v, f) in data.paths
                if v == w and f[:k] == prefix}
        if len(seen) >= 2:
            domain.add(w)
    return frozenset(domain)


def _prefixes_at(data, t):
    k = data.times.index(t)
    return {f[:k] for (_, f) in data.paths}


def _node_of(data, w, prefix):
    k = len(prefix)
    return frozenset((v, f) for (v, f) in data.paths
                     if v == w and f[:k] == prefix)


def _in_ct(data, c, t):
    """Membership in the time-t choice family: nonempty, a real
    alternative everywhere, and all-or-nothing on undecided scenarios."""
    if not c:
        return False
    k = data.times.index(t)
    for (w, f) in c:
        node = _node_of(data, w, f[:k])
        if node <= c:
            return False
    prefixes = {f[:k] for (_, f) in c}
    for prefix in prefixes:
        hit = set()
        miss = set()
        for (w, f) in data.paths:
            if f[:k] != prefix:
                continue
            node = _node_of(data, w, prefix)
            if len(node) < 2:
                continue
            (hit if node & c else miss).add(w)
        if hit and miss:
            return False
    return True


def _ap_choice(data, blocks, t, agent, g):
    """The set c(A_{<t}, i, g) for a block of prefixes and a partial map g."""
    k = data.times.index(t)
    idx = data.agents.index(agent)
    return frozenset(
        (w, f) for (w, f) in data.paths
        if f[:k] in blocks and w in g and f[k][idx] == g[w])


def _rich_enough(data, c, blocks, t, domain):
    """Every (scenario, prefix) pair from the data must be realized in c."""
    k = data.times.index(t)
    for w in domain:
        for prefix in blocks:
            if not any(v == w and f[:k] == prefix for (v, f) in c):
                return False
    return True


def check_history_structures(data, info, hist):
    """The blocks must partition the decidable prefixes per agent and
    time, and blockmates must reveal identical exogenous information."""
    for i in data.agents:
        for t in data.times:
            decidable = {p for p in _prefixes_at(data, t)
                         if agent_choice_domain(data, i, p, t)}
            blocks = [frozenset(b) for b in hist[i].get(t, ())]
            union = frozenset().union(*blocks) if blocks else frozenset()
            if union != decidable or \
                    sum(len(b) for b in blocks) != len(union):
                raise APSEFAxiomViolation("history", (i, t))
            for block in blocks:
                keys = {frozenset(info[i][(t, p)]) for p in block}
                if len(keys) > 1:
                    raise APSEFAxiomViolation("history-info", (i, t, block))


def _check_ap_sef_axioms(data, info, hist, strict, cap):
    check_history_structures(data, info, hist)

    # joint realizability of simultaneous action profiles
    count = 0
    for t in data.times:
        k = data.times.index(t)
        for w in data.scenarios:
            for prefix in _prefixes_at(data, t):
                node = _node_of(data, w, prefix)
                if not node:
                    continue
                per_agent = [sorted({f[k][j] for (_, f) in node})
                             for j in range(len(data.agents))]
                for combo in itertools.product(*per_agent):
                    count += 1
                    if count > cap:
                        raise BudgetExceeded("joint profile search too large")
                    if not any(f[k] == combo for (_, f) in node):
                        raise APSEFAxiomViolation(0, (t, w, prefix, combo))

    # single-action reference choices must be admissible
    for i in data.agents:
        for t in data.times:
            for block in hist[i].get(t, ()):
                block = frozenset(block)
                for prefix in block:
                    domain = agent_choice_domain(data, i, prefix, t)
                    for action in data.actions[i]:
                        c = _ap_choice(data, {prefix}, t, i,
                                       {w: action for w in domain})
                        if c and not _in_ct(data, c, t):
                            raise APSEFAxiomViolation(1, (i, t, prefix, action))

    # every realized action must extend to an admissible adapted choice
    for i in data.agents:
        idx = data.agents.index(i)
        for (w, f) in data.paths:
            for t in data.times:
                k = data.times.index(t)
                prefix = f[:k]
                domain = agent_choice_domain(data, i, prefix, t)
                if w not in domain:
                    continue
                block = next(frozenset(b) for b in hist[i][t] if prefix in b)
                found = False
                for g_vals in itertools.product(data.actions[i],
                                                repeat=len(domain)):
                    g = dict(zip(sorted(domain, key=repr), g_vals))
                    if g[w] != f[k][idx]:
                        continue
                    c = _ap_choice(data, block, t, i, g)
                    if _in_ct(data, c, t) and \
                            _rich_enough(data, c, block, t, domain):
                        found = True
                        break
                if not found:
                    raise APSEFAxiomViolation(2, (i, w, t))

    # separation: a first within-window disagreement decidable by an agent
    for (w, f) in data.paths:
        for (v, f2) in data.paths:
            if v != w or f == f2:
                continue
            for k0, t0 in enumerate(data.times):
                if f[k0] == f2[k0]:
                    continue
                ok = False
                for k in range(k0 + 1):
                    t = data.times[k]
                    for i in data.agents:
                        idx = data.agents.index(i)
                        if f[k][idx] == f2[k][idx]:
                            continue
                        if w in agent_choice_domain(data, i, f[:k], t) and \
                                w in agent_choice_domain(data, i, f2[:k], t):
                            ok = True
                if not ok:
                    raise APSEFAxiomViolation(3, (w, f, f2, t0))
            if strict:
                # a first time of disagreement exists; automatic on a
                # finite grid, checked literally
                if not min(k for k in range(len(data.times))
                           if f[k] != f2[k]) >= 0:
                    raise APSEFAxiomViolation("3-strong", (w, f, f2))


def build_action_path_sef(data, info, hist, strict=True, cap=None):
    """
    The extensive form induced by action-path data, exogenous information
    keyed by (time, prefix), and history structures.  Returns the form,
    the timing map, and the index (time, prefix) -> random move.
    """
    cap = budget(cap if cap is not None else 10 ** 6)
    _check_ap_sef_axioms(data, info, hist, strict, cap)
    sdf, timing = build_action_path_sdf(data, require_maximal=False, cap=cap)

    index = {}
    for m, t in timing.items():
        w = next(iter(m.domain))
        (_, f) = next(iter(m(w)))
        index[(t, f[:data.times.index(t)])] = m

    agents = tuple(data.agents)
    agent_moves = {}
    move_info = {}
    refchoices = {}
    choices = {}
    for i in agents:
        mine = set()
        my_info = {}
        my_refs = {}
        for (t, prefix), m in index.items():
            domain = agent_choice_domain(data, i, prefix, t)
            if not domain:
                continue
            mine.add(m)
            my_info[m] = frozenset(frozenset(b) for b in info[i][(t, prefix)])
            # reference choices range over the whole history block, so
            # blockmate moves end up with identical reference menus
            block = next(frozenset(b) for b in hist[i][t] if prefix in b)
            refs = []
            for subset in powerset(sorted(data.actions[i])):
                if not subset:
                    continue
                c = frozenset(
                    (w, f) for (w, f) in data.paths
                    if f[:data.times.index(t)] in block
                    and f[data.times.index(t)][data.agents.index(i)] in subset)
                if not _in_ct(data, c, t):
                    continue
                if any(not (m(w) & c) for w in m.domain):
                    continue
                refs.append(c)
            my_refs[m] = tuple(refs)
        agent_moves[i] = frozenset(mine)
        move_info[i] = my_info
        refchoices[i] = my_refs

        mine_choices = set()
        for t in data.times:
            for block in hist[i].get(t, ()):
                block = frozenset(block)
                sample = next(iter(block))
                domain = agent_choice_domain(data, i, sample, t)
                options = sorted(data.actions[i]) + [None]
                for combo in itertools.product(options,
                                               repeat=len(sdf.scenarios)):
                    g = {w: a for w, a in zip(sdf.scenarios, combo)
                         if a is not None}
                    if not g:
                        continue
                    c = _ap_choice(data, block, t, i, g)
                    if not _in_ct(data, c, t):
                        continue
                    if not _rich_enough(data, c, block, t, g):
                        continue
                    if not check_adapted(sdf, c, my_info, my_refs, mine):
                        continue
                    mine_choices.add(c)
        choices[i] = frozenset(mine_choices)

    sef = StochasticExtensiveForm(sdf, agents, agent_moves, move_info,
                                  refchoices, choices,
                                  require_strict=strict)
    return sef, timing, index


def classify_endogenous(data, hist, i):
    """Perfection flags of a history structure, by the refinement and
    disjointness criteria on truncated paths."""
    recall = True
    for t in data.times:
        kt = data.times.index(t)
        idx = data.agents.index(i)
        for u in data.times:
            if not t < u:
                continue
            for block_u in hist[i].get(u, ()):
                cut = {f[:kt] for f in block_u}
                for block_t in hist[i].get(t, ()):
                    block_t = frozenset(block_t)
                    if not cut & block_t:
                        continue
                    if not cut <= block_t:
                        recall = False
                    actions = {f[kt][idx] for f in block_u}
                    if len(actions) > 1:
                        recall = False
    perfect = True
    for t in data.times:
        for block in hist[i].get(t, ()):
            if len(frozenset(block)) != 1:
                perfect = False
            for j in data.agents:
                if j == i:
                    continue
                for other in hist[j].get(t, ()):
                    if frozenset(block) & frozenset(other):
                        perfect = False
    return {"perfect_endogenous_recall": recall,
            "perfect_endogenous_info": perfect}
