"""
Stochastic decision forests over finite scenario spaces.

A stochastic decision forest couples a decision forest with a scenario
space: connected components are indexed by scenarios and random moves are
sections of moves over events.  Sigma-algebras on the finite scenario
space are represented as partitions throughout; "measurable" means
"a union of blocks".
"""

import itertools
from dataclasses import dataclass, field

from ._util import budget, partitions_of, powerset
from .errors import (
    APAxiomViolation,
    BudgetExceeded,
    ChoiceError,
    InputError,
    StructureError,
)
from .forest import DecisionForest, is_union_of_nodes
from .order import Poset, roots_and_components


class RandomMove:
    """A section of moves: one move per scenario of a nonempty event."""

    def __init__(self, assignment):
        items = dict(assignment)
        if not items:
            raise InputError("random move with empty domain")
        self._graph = tuple(sorted(((w, frozenset(x)) for w, x in items.items()),
                                   key=repr))
        self._domain = frozenset(items)

    @property
    def domain(self):
        return self._domain

    @property
    def graph(self):
        return self._graph

    def __call__(self, scenario):
        for w, x in self._graph:
            if w == scenario:
                return x
        raise InputError(f"scenario {scenario!r} outside the domain")

    @property
    def image(self):
        return frozenset(x for _, x in self._graph)

    def restricted(self, event):
        return RandomMove({w: x for w, x in self._graph if w in event})

    def __eq__(self, other):
        return isinstance(other, RandomMove) and self._graph == other._graph

    def __hash__(self):
        return hash(self._graph)

    def __repr__(self):
        return f"RandomMove({len(self._domain)} scenarios)"


def merge_random_moves(moves):
    """
    The union of a family of random moves, defined when the members agree
    wherever their domains overlap.  Returns None otherwise.
    """
    combined = {}
    for m in moves:
        for w, x in m.graph:
            if combined.get(w, x) != x:
                return None
            combined[w] = x
    return RandomMove(combined)


@dataclass(frozen=True)
class SDFReport:
    valid: bool
    violations: tuple = ()

    def __bool__(self):
        return self.valid


class StochasticDecisionForest:
    """A decision forest with scenario projection and random moves."""

    def __init__(self, forest, scenarios, projection, random_moves):
        report = validate_sdf(forest, scenarios, projection, random_moves)
        if not report:
            raise StructureError(f"invalid SDF: {report.violations[0]}")
        self.forest = forest
        self.scenarios = tuple(scenarios)
        self.projection = dict(projection)
        self.random_moves = frozenset(random_moves)

    def tree_of(self, scenario):
        """All nodes of the component indexed by the scenario."""
        return frozenset(x for x in self.forest.nodes
                         if self.projection[x] == scenario)

    def root_of(self, scenario):
        return max(self.tree_of(scenario), key=len)

    def outcomes_of(self, event):
        return frozenset().union(*[self.root_of(w) for w in event]) \
            if event else frozenset()

    def nodes_of(self, event):
        return frozenset(x for x in self.forest.nodes
                         if self.projection[x] in event)

    def scenario_of_outcome(self, w):
        for scenario in self.scenarios:
            if w in self.root_of(scenario):
                return scenario
        raise InputError(f"unknown outcome: {w!r}")

    def __repr__(self):
        return (f"StochasticDecisionForest({len(self.scenarios)} scenarios, "
                f"{len(self.random_moves)} random moves)")


def validate_sdf(forest, scenarios, projection, random_moves):
    """
    Check the SDF axioms: the projection's fibres are exactly the connected
    components, and the random moves are sections of moves covering the
    move set.
    """
    scenarios = tuple(scenarios)
    violations = []
    if not isinstance(forest, DecisionForest):
        return SDFReport(False, (("forest", "not a valid decision forest"),))
    if len(set(scenarios)) != len(scenarios) or not scenarios:
        violations.append(("scenarios", "labels empty or not unique"))

    component_of = {}
    for x in forest.nodes:
        root = max(forest.up(x), key=len)
        component_of[x] = root
    fibre_ok = True
    for x in forest.nodes:
        if x not in projection or projection[x] not in scenarios:
            violations.append(("projection", ("not total / out of range", x)))
            fibre_ok = False
            break
        if projection[x] != projection.get(component_of[x]):
            violations.append(("projection", ("fibre splits a component", x)))
            fibre_ok = False
    if fibre_ok:
        roots = {component_of[x] for x in forest.nodes}
        images = {projection[r] for r in roots}
        if len(images) != len(roots):
            violations.append(("projection", "two components share a scenario"))
        if images != set(scenarios):
            violations.append(("projection", "fibres do not exhaust the scenarios"))

    moves = forest.moves()
    covered = set()
    for m in random_moves:
        if not isinstance(m, RandomMove):
            violations.append(("random_moves", ("not a random move", m)))
            continue
        for w, x in m.graph:
            if w not in scenarios:
                violations.append(("random_moves", ("domain outside scenarios", w)))
            elif x not in moves:
                violations.append(("random_moves", ("value is not a move", w, x)))
            elif projection.get(x) != w:
                violations.append(("random_moves", ("not a section", w, x)))
            else:
                covered.add(x)
    uncovered = moves - covered
    for x in uncovered:
        violations.append(("covering", ("uncovered move", x)))
    return SDFReport(not violations, tuple(violations))


def xgeq(m1, m2):
    """The partial order on random moves: wider domain, node-wise above."""
    return m1.domain >= m2.domain and all(m1(w) >= m2(w) for w in m2.domain)


def is_order_consistent(random_moves):
    """One-point comparability must already imply the full order."""
    for m1 in random_moves:
        for m2 in random_moves:
            for w in m1.domain & m2.domain:
                if m1(w) >= m2(w) and not xgeq(m1, m2):
                    return False, (m1, m2, w)
    return True, None


@dataclass(frozen=True)
class SDFFlags:
    order_consistent: bool
    surely_nontrivial: bool
    maximal: bool | None   # None when not order consistent or out of budget
    witnesses: dict = field(default_factory=dict)


def check_flags(sdf, merge_cap=None):
    """
    Order consistency, sure non-triviality, and maximality of the random
    move cover.  Maximality is decided by exhaustive search over mergings
    of compatible random moves into coarser order-consistent covers, and
    over proper sub-covers; beyond the budget it is reported as None.
    """
    merge_cap = budget(merge_cap if merge_cap is not None else 10 ** 5)
    consistent, witness = is_order_consistent(sdf.random_moves)
    witnesses = {}
    if not consistent:
        witnesses["order_consistent"] = witness

    moves = sdf.forest.moves()
    nontrivial = all(r in moves for r in sdf.forest.roots())
    if not nontrivial:
        witnesses["surely_nontrivial"] = next(
            r for r in sdf.forest.roots() if r not in moves)

    maximal = None
    if consistent:
        try:
            maximal, merge_witness = _check_maximal(sdf, merge_cap)
            if merge_witness is not None:
                witnesses["maximal"] = merge_witness
        except BudgetExceeded:
            maximal = None
            witnesses["maximal"] = "budget exceeded"
    return SDFFlags(consistent, nontrivial, maximal, witnesses)


def _check_maximal(sdf, cap):
    members = sorted(sdf.random_moves, key=lambda m: repr(m.graph))
    moves = sdf.forest.moves()

    # a proper sub-cover is itself a coarser valid cover
    for drop in members:
        remaining = [m for m in members if m != drop]
        covered = {x for m in remaining for x in m.image}
        if covered == moves:
            return False, ("redundant member", drop)

    count = 0
    for partition in partitions_of(members):
        count += 1
        if count > cap:
            raise BudgetExceeded(f"more than {cap} candidate mergings")
        if all(len(group) == 1 for group in partition):
            continue
        merged = []
        for group in partition:
            candidate = merge_random_moves(group)
            if candidate is None:
                break
            merged.append(candidate)
        else:
            if is_order_consistent(merged)[0]:
                return False, ("mergeable groups", tuple(partition))
    return True, None


def random_terminal_nodes(sdf):
    """One singleton-domain section per terminal node."""
    return frozenset(
        RandomMove({sdf.projection[x]: x}) for x in sdf.forest.terminals())


def induced_tree(sdf):
    """
    The rooted decision tree of random moves and random terminal nodes,
    for order-consistent SDFs possessing the root random move.

    Returns the tree as a Poset whose elements are the sections.  The
    evaluation map onto the forest is asserted to be an order isomorphism.
    """
    consistent, witness = is_order_consistent(sdf.random_moves)
    if not consistent:
        from .errors import NotOrderConsistent
        raise NotOrderConsistent(f"witness pair: {witness!r}")
    root_section = RandomMove({w: sdf.root_of(w) for w in sdf.scenarios})
    if root_section not in sdf.random_moves:
        raise StructureError("the root section is not a random move")

    terminals = random_terminal_nodes(sdf)
    elements = sdf.random_moves | terminals

    def tgeq(a, b):
        if a in sdf.random_moves and b in sdf.random_moves:
            return xgeq(a, b)
        if a in sdf.random_moves and b in terminals:
            ((w, x),) = b.graph
            return w in a.domain and x <= a(w)
        if a in terminals and b in terminals:
            return a == b
        return False

    leq = [(b, a) for a in elements for b in elements if tgeq(a, b)]
    tree = Poset(elements, leq)

    roots, components = roots_and_components(tree)
    if len(components) != 1:
        raise StructureError("induced structure is not a single tree")

    # evaluation map bijectivity and order reflection
    pairs = [(y, w) for y in elements for w in y.domain]
    values = [y(w) for (y, w) in pairs]
    assert len(set(values)) == len(values) == len(sdf.forest.nodes)
    for (y1, w1) in pairs:
        for (y2, w2) in pairs:
            lhs = tgeq(y1, y2) and w1 == w2
            assert lhs == (y1(w1) >= y2(w2))
    return tree


def check_recall(sdf, info, agent_moves):
    """
    True iff the per-move partitions never lose information along the
    random-move order: any event measurable earlier stays measurable,
    restricted to the later domain.
    """
    agent_moves = list(agent_moves)
    for m in agent_moves:
        _require_partition(info.get(m), m)
    for m1 in agent_moves:
        for m2 in agent_moves:
            if m1 == m2 or not xgeq(m1, m2):
                continue
            for block in info[m1]:
                cut = block & m2.domain
                if cut and not _is_block_union(cut, info[m2]):
                    return False
    return True


def _require_partition(partition, m):
    if partition is None:
        raise InputError(f"no partition supplied for {m!r}")
    blocks = [frozenset(b) for b in partition]
    if any(not b for b in blocks):
        raise InputError("empty partition block")
    union = frozenset().union(*blocks) if blocks else frozenset()
    if union != m.domain or sum(len(b) for b in blocks) != len(union):
        raise InputError(f"blocks do not partition the domain of {m!r}")


def _is_block_union(event, partition):
    rest = set(event)
    for block in partition:
        if block <= rest:
            rest -= block
    return not rest


def enumerate_recall_structures(sdf, agent_moves, cap=None):
    """All families of per-move partitions admitting recall, exhaustively."""
    cap = budget(cap if cap is not None else 10 ** 5)
    agent_moves = sorted(agent_moves, key=lambda m: repr(m.graph))
    per_move = [
        [tuple(p) for p in partitions_of(sorted(m.domain, key=repr))]
        for m in agent_moves
    ]
    total = 1
    for options in per_move:
        total *= len(options)
    if total > cap:
        raise BudgetExceeded(f"{total} candidate structures exceed the budget")
    result = []
    for combo in itertools.product(*per_move):
        info = {m: frozenset(frozenset(b) for b in p)
                for m, p in zip(agent_moves, combo)}
        if check_recall(sdf, info, agent_moves):
            result.append(info)
    return result


def predecessors(sdf, c):
    """Immediate predecessors of an arbitrary outcome subset."""
    c = frozenset(c)
    cache = sdf.__dict__.setdefault("_pred_cache", {})
    if c in cache:
        return cache[c]
    down_c = frozenset(y for y in sdf.forest.nodes if y <= c)
    result = set()
    # a predecessor is the minimum of some covered node's strict upper
    # chain outside the choice, provided that chain is exactly its up-set
    for y in down_c:
        above = sdf.forest.up(y) - down_c
        if not above:
            continue
        x = min(above, key=len)
        if sdf.forest.up(x) == above:
            result.add(x)
    cache[c] = frozenset(result)
    return cache[c]


def preimage(m, node_set):
    """The event on which the section takes a value in the node set."""
    return frozenset(w for w in m.domain if m(w) in node_set)


def is_non_redundant(sdf, c):
    """The choice must be void in every scenario where it is never on offer."""
    p = predecessors(sdf, c)
    for w in sdf.scenarios:
        if not p & sdf.tree_of(w) and frozenset(c) & sdf.root_of(w):
            return False
    return True


def is_complete(sdf, c, agent_moves=None):
    """Availability of the choice is all-or-nothing on each random move."""
    agent_moves = sdf.random_moves if agent_moves is None else agent_moves
    p = predecessors(sdf, c)
    for m in agent_moves:
        hit = preimage(m, p)
        if hit and hit != m.domain:
            return False
    return True


def is_available_at(sdf, c, m):
    return preimage(m, predecessors(sdf, c)) == m.domain


def validate_reference_choices(sdf, refchoices, agent_moves):
    """Each reference choice must be non-redundant, complete, available."""
    for m in agent_moves:
        for c in refchoices.get(m, ()):
            if not is_union_of_nodes(sdf.forest, c):
                raise ChoiceError(f"reference choice not a union of nodes: {c!r}")
            if not is_non_redundant(sdf, c):
                raise ChoiceError(f"redundant reference choice at {m!r}")
            if not is_complete(sdf, c, agent_moves):
                raise ChoiceError(f"incomplete reference choice at {m!r}")
            if not is_available_at(sdf, c, m):
                raise ChoiceError(f"reference choice unavailable at {m!r}")


def check_adapted(sdf, c, info, refchoices, agent_moves):
    """
    Adaptedness of a choice: non-redundant, complete on the agent's moves,
    and the joint availability with every reference choice is measurable
    at every move the choice is available at.
    """
    if not is_union_of_nodes(sdf.forest, c):
        raise ChoiceError(f"not a nonempty union of nodes: {c!r}")
    c = frozenset(c)
    if not is_non_redundant(sdf, c):
        return False
    if not is_complete(sdf, c, agent_moves):
        return False
    for m in agent_moves:
        if not is_available_at(sdf, c, m):
            continue
        for ref in refchoices.get(m, ()):
            joint = preimage(m, predecessors(sdf, c & frozenset(ref)))
            if joint and not _is_block_union(joint, info[m]):
                return False
    return True


# --- action paths -----------------------------------------------------------

@dataclass(frozen=True)
class ActionPathData:
    """
    Explicit finite action-path data: agents, per-agent action sets, a
    totally ordered time grid with minimum 0, and the outcome set given as
    pairs (scenario, path).  A path is a tuple of action profiles, one per
    grid time, each profile a tuple aligned with the agent order.
    """
    agents: tuple
    actions: dict
    times: tuple
    scenarios: tuple
    paths: frozenset

    def __post_init__(self):
        if not self.agents:
            raise InputError("no agents")
        if not self.times or self.times[0] != 0 or list(self.times) != sorted(self.times):
            raise InputError("times must be sorted with minimum 0")
        for (w, f) in self.paths:
            if w not in self.scenarios or len(f) != len(self.times):
                raise InputError(f"malformed outcome {(w, f)!r}")
            for profile in f:
                if len(profile) != len(self.agents):
                    raise InputError(f"malformed action profile in {f!r}")
                for agent, action in zip(self.agents, profile):
                    if action not in self.actions[agent]:
                        raise InputError(f"unknown action {action!r} of {agent!r}")
        for w in self.scenarios:
            if not any(v == w for (v, _) in self.paths):
                raise InputError(f"scenario {w!r} admits no path")

    def prefix(self, f, t):
        """The strict prefix of a path: actions at times before t."""
        k = self.times.index(t)
        return f[:k]

    def all_paths(self):
        """The full ambient path space, one tuple per element of A^T."""
        profiles = list(itertools.product(
            *[self.actions[i] for i in self.agents]))
        return itertools.product(*[profiles for _ in self.times])


def _ap_node(data, w, f, t):
    return frozenset((v, g) for (v, g) in data.paths
                     if v == w and data.prefix(g, t) == data.prefix(f, t))


def _check_ap_axioms(data, require_maximal, cap):
    for (w, f) in data.paths:
        for t in data.times:
            for u in data.times:
                if t < u and _ap_node(data, w, f, t) == _ap_node(data, w, f, u):
                    if len(_ap_node(data, w, f, t)) != 1:
                        raise APAxiomViolation(1, (w, f, t, u))

    # boundedness: vacuous on a finite grid with explicit outcomes, but
    # checked literally over every subset of times
    count = 0
    for w in data.scenarios:
        for f_tilde in data.all_paths():
            count += 1
            if count > cap:
                raise BudgetExceeded("ambient path space exceeds the budget")
            live = [t for t in data.times if _ap_node(data, w, f_tilde, t)]
            for times_subset in powerset(live):
                if not times_subset:
                    continue
                top = max(times_subset)
                node = _ap_node(data, w, f_tilde, top)
                if not node:
                    raise APAxiomViolation(2, (w, f_tilde, times_subset))

    if require_maximal:
        prefixes = {}
        for t in data.times:
            prefixes[t] = {data.prefix(f, t) for (_, f) in data.paths}
        for t in data.times:
            for pf in prefixes[t]:
                for pg in prefixes[t]:
                    if pf == pg:
                        continue
                    df = _ap_domain_of_prefix(data, pf, t)
                    dg = _ap_domain_of_prefix(data, pg, t)
                    if not df or not dg or df & dg:
                        continue
                    ok = False
                    for u in data.times:
                        if u > t:
                            continue
                        ku = data.times.index(u)
                        if pf[:ku] != pg[:ku] and \
                           _ap_domain_of_prefix(data, pf[:ku], u) & \
                           _ap_domain_of_prefix(data, pg[:ku], u):
                            ok = True
                            break
                    if not ok:
                        raise APAxiomViolation(3, (t, pf, pg))


def _ap_domain_of_prefix(data, prefix, t):
    domain = set()
    for (w, f) in data.paths:
        if data.prefix(f, t) == prefix:
            node = _ap_node(data, w, f, t)
            if len(node) >= 2:
                domain.add(w)
    return domain


def build_action_path_sdf(data, require_maximal=True, cap=None):
    """
    Build the induced stochastic decision forest from action-path data,
    verifying its axioms first.  Returns the SDF and the timing map from
    random moves to grid times.
    """
    cap = budget(cap if cap is not None else 10 ** 6)
    _check_ap_axioms(data, require_maximal, cap)

    nodes = set()
    for (w, f) in data.paths:
        nodes.add(frozenset({(w, f)}))
        for t in data.times:
            nodes.add(_ap_node(data, w, f, t))
    outcomes = frozenset(data.paths)
    forest = DecisionForest(outcomes, nodes)
    projection = {x: next(iter(x))[0] for x in nodes}

    random_moves = {}
    timing = {}
    moves = forest.moves()
    for t in data.times:
        seen = {}
        for (w, f) in data.paths:
            node = _ap_node(data, w, f, t)
            if node not in moves:
                continue
            seen.setdefault(data.prefix(f, t), {})[w] = node
        for assignment in seen.values():
            m = RandomMove(assignment)
            random_moves[m] = t
            timing[m] = t
    sdf = StochasticDecisionForest(forest, data.scenarios, projection,
                                  random_moves)
    return sdf, timing


def timing_map(sdf, timing):
    """Node-level timing: the unique grid time of each move."""
    result = {}
    for m, t in timing.items():
        for w in m.domain:
            x = m(w)
            if x in result and result[x] != t:
                raise StructureError(f"ambiguous time at {x!r}")
            result[x] = t
    return result


def action_path_choice(data, prefixes, agent, g):
    """
    The choice "take the contingent action g at time t after one of the
    given strict prefixes": all outcomes whose path extends a listed
    prefix with the agent's component of the next profile equal to g of
    the scenario, for scenarios in the domain of g.

    prefixes is a set of path prefixes of equal length; g maps scenarios
    to actions of the agent.
    """
    lengths = {len(p) for p in prefixes}
    if len(lengths) != 1:
        raise InputError("prefixes of unequal length")
    (k,) = lengths
    idx = data.agents.index(agent)
    return frozenset(
        (w, f) for (w, f) in data.paths
        if f[:k] in prefixes and w in g and f[k][idx] == g[w])


def eis_from_filtration(sdf, timing, observations, filtration):
    """
    Exogenous information from observation variables plus a filtration:
    at each random move, the agent measures every observation made at
    earlier-or-equal random moves together with the filtration at the
    move's time, restricted to the current domain.  Recall of the result
    is asserted.
    """
    info = {}
    for m in sdf.random_moves:
        parts = [filtration[timing[m]]]
        for m2 in sdf.random_moves:
            if xgeq(m2, m) and m2 in observations:
                values = observations[m2]
                blocks = {}
                for w in sdf.scenarios:
                    blocks.setdefault(values.get(w, "__undefined__"), set()).add(w)
                parts.append([frozenset(b) for b in blocks.values()])
        info[m] = _meet_partitions(parts, m.domain)
    if not check_recall(sdf, info, sdf.random_moves):
        raise StructureError("constructed structure unexpectedly lacks recall")
    return info


def _meet_partitions(partitions, domain):
    result = {}
    for w in domain:
        key = tuple(frozenset(b) & domain
                    for part in partitions for b in sorted(map(frozenset, part), key=repr)
                    if w in b)
        result.setdefault(key, set()).add(w)
    return frozenset(frozenset(b) for b in result.values())
