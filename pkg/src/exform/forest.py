"""
Decision forests in the refined-partitions representation.

A forest is a family of nonempty outcome subsets ordered by reverse
inclusion; the graph view (parents, children, paths) is derived from the
set representation, never stored.
"""

from dataclasses import dataclass

from ._util import budget
from .errors import ChoiceError, InputError, NotAHistory, StructureError
from .order import Poset


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failure: str | None = None   # "rooted_forest" | "duality" | None
    witness: object = None

    def __bool__(self):
        return self.valid


class DecisionForest:
    """A finite outcome set together with a valid family of nodes."""

    def __init__(self, outcomes, nodes):
        report = validate_decision_forest(outcomes, nodes)
        if not report:
            raise StructureError(f"{report.failure}: {report.witness!r}")
        self._outcomes = frozenset(outcomes)
        self._nodes = frozenset(frozenset(x) for x in nodes)

    @property
    def outcomes(self):
        return self._outcomes

    @property
    def nodes(self):
        return self._nodes

    def up(self, x):
        """All nodes weakly preceding x in play, i.e. supersets of x."""
        cache = self.__dict__.setdefault("_up_cache", {})
        if x not in cache:
            cache[x] = frozenset(y for y in self._nodes if y >= x)
        return cache[x]

    def down(self, x):
        """All nodes weakly following x in play, i.e. subsets of x."""
        cache = self.__dict__.setdefault("_down_cache", {})
        if x not in cache:
            cache[x] = frozenset(y for y in self._nodes if y <= x)
        return cache[x]

    def chain_of(self, w):
        """The decision path of an outcome: all nodes containing it."""
        if w not in self._outcomes:
            raise InputError(f"unknown outcome: {w!r}")
        return frozenset(x for x in self._nodes if w in x)

    def maximal_chains(self):
        if "_chains_cache" not in self.__dict__:
            self._chains_cache = _maximal_chains(self._outcomes, self._nodes)
        return self._chains_cache

    def moves(self):
        if "_moves_cache" not in self.__dict__:
            self._moves_cache = frozenset(
                x for x in self._nodes if self.down(x) != {x})
        return self._moves_cache

    def terminals(self):
        return self._nodes - self.moves()

    def roots(self):
        return frozenset(x for x in self._nodes if self.up(x) == {x})

    def parent(self, x):
        """The immediate predecessor of a non-root node."""
        strictly_above = self.up(x) - {x}
        if not strictly_above:
            return None
        return min(strictly_above, key=len)

    def children(self, x):
        cache = self.__dict__.setdefault("_children_cache", {})
        if x not in cache:
            cache[x] = frozenset(y for y in self._nodes
                                 if y < x and self.parent(y) == x)
        return cache[x]

    def as_poset(self):
        """The node family as a Poset; roots are the maximal elements."""
        return Poset(self._nodes,
                     [(a, b) for a in self._nodes for b in self._nodes if a <= b])

    def __eq__(self, other):
        return (isinstance(other, DecisionForest)
                and self._outcomes == other._outcomes
                and self._nodes == other._nodes)

    def __hash__(self):
        return hash((self._outcomes, self._nodes))

    def __repr__(self):
        return f"DecisionForest({len(self._outcomes)} outcomes, {len(self._nodes)} nodes)"


def _maximal_chains(outcomes, nodes):
    """All maximal chains, as root-to-leaf paths of the cover relation."""
    result = set()
    roots = [x for x in nodes if not any(y > x for y in nodes)]

    def descend(path, current):
        children = [y for y in nodes
                    if y < current and not any(y < z < current for z in nodes)]
        if not children:
            result.add(frozenset(path))
            return
        for child in children:
            descend(path + [child], child)

    for root in roots:
        descend([root], root)
    return result


def validate_decision_forest(outcomes, nodes):
    """
    Check the two structural invariants: the nodes form a rooted forest
    under reverse inclusion, and outcomes correspond dually to maximal
    chains (w maps to the set of nodes containing w).
    """
    outcomes = frozenset(outcomes)
    nodes = frozenset(frozenset(x) for x in nodes)
    if not outcomes:
        return ValidationReport(False, "duality", "empty outcome set")
    for x in nodes:
        if not x:
            return ValidationReport(False, "rooted_forest", "empty node")
        if not x <= outcomes:
            return ValidationReport(False, "rooted_forest", ("alien outcomes", x))
    for x in nodes:
        above = [y for y in nodes if y >= x]
        for i, a in enumerate(above):
            for b in above[i + 1:]:
                if not (a <= b or b <= a):
                    return ValidationReport(False, "rooted_forest",
                                            ("incomparable ancestors", x, a, b))
        # finite chains always carry a maximum, so rootedness follows
    chains = {}
    for w in outcomes:
        chain = frozenset(x for x in nodes if w in x)
        if not chain:
            return ValidationReport(False, "duality", ("outcome in no node", w))
        chains[w] = chain
    maximal = _maximal_chains(outcomes, nodes)
    if set(chains.values()) != maximal:
        missing = maximal - set(chains.values())
        extra = [w for w, c in chains.items() if c not in maximal]
        return ValidationReport(False, "duality",
                                ("chain mismatch", sorted(map(sorted, missing)), extra))
    if len(set(chains.values())) != len(outcomes):
        collide = [w for w in outcomes
                   if sum(1 for v in outcomes if chains[v] == chains[w]) > 1]
        return ValidationReport(False, "duality", ("chains collide", collide))
    return ValidationReport(True)


def is_union_of_nodes(forest, c):
    """True iff c is a (nonempty) union of members of the forest."""
    c = frozenset(c)
    if not c or not c <= forest.outcomes:
        return False
    covered = frozenset().union(*[x for x in forest.nodes if x <= c]) \
        if any(x <= c for x in forest.nodes) else frozenset()
    return covered == c


def immediate_predecessors(forest, c):
    """
    The moves at which c is on offer: all x whose strict up-set equals the
    strict up-set of some node inside c with the nodes below c removed.
    """
    c = frozenset(c)
    if not is_union_of_nodes(forest, c):
        raise ChoiceError(f"not a nonempty union of nodes: {sorted(map(repr, c))}")
    down_c = frozenset(y for y in forest.nodes if y <= c)
    result = set()
    for x in forest.nodes:
        up_x = forest.up(x)
        for y in down_c:
            if forest.up(y) - down_c == up_x:
                result.add(x)
                break
    return frozenset(result)


def histories(forest, cap=None):
    """
    All histories: nonempty, non-maximal, upward closed chains.  In a
    finite forest these are exactly the principal up-sets of the moves.
    """
    cap = budget(cap if cap is not None else 2 ** 16)
    result = set()
    for x in forest.moves():
        result.add(forest.up(x))
        if len(result) > cap:
            raise StructureError(f"more than {cap} histories")
    return result


def is_history(forest, h):
    h = frozenset(frozenset(x) for x in h)
    if not h or not h <= forest.nodes:
        return False
    for a in h:
        for b in h:
            if not (a <= b or b <= a):
                return False
        if not forest.up(a) <= h:  # upward closed
            return False
    maximal = h in forest.maximal_chains()
    return not maximal


def closure(forest, h):
    """The history together with its infimum, when that infimum exists."""
    h = frozenset(frozenset(x) for x in h)
    if not is_history(forest, h):
        raise NotAHistory(f"not a history: {sorted(map(sorted, h))}")
    core = frozenset.intersection(*h)
    below = [x for x in forest.nodes if x <= core
             and all(x <= y for y in h)]
    if not below:
        return h
    inf = max(below, key=len)
    if all(x <= inf for x in below):
        return h | {inf}
    return h
