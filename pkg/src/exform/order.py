"""
Finite partially ordered sets.

Elements are opaque hashable labels; the only ordering is the declared
relation.  The module provides the bound calculus, the forest predicates
used to classify well-posedness, and the Dedekind-MacNeille completion.

Convention: in a forest the roots are the MAXIMAL elements, so a chain of
play runs downward from a root to a minimal (terminal) element.
"""

from dataclasses import dataclass

from ._util import budget, powerset
from .errors import BudgetExceeded, InputError, StructureError


class Poset:
    """An explicit finite poset: a label set plus its full order relation."""

    def __init__(self, elements, leq):
        self._elements = frozenset(elements)
        pairs = frozenset((a, b) for (a, b) in leq)
        for (a, b) in pairs:
            if a not in self._elements or b not in self._elements:
                raise InputError(f"relation mentions unknown label: {(a, b)!r}")
        # No silent reflexive-transitive closure: a malformed relation is an error.
        for x in self._elements:
            if (x, x) not in pairs:
                raise InputError(f"relation not reflexive at {x!r}")
        for (a, b) in pairs:
            if a != b and (b, a) in pairs:
                raise InputError(f"relation not antisymmetric on {(a, b)!r}")
        for (a, b) in pairs:
            for c in self._elements:
                if (b, c) in pairs and (a, c) not in pairs:
                    raise InputError(f"relation not transitive via {(a, b, c)!r}")
        self._leq = pairs
        self._up = {x: frozenset(y for y in self._elements if (x, y) in pairs)
                    for x in self._elements}
        self._down = {x: frozenset(y for y in self._elements if (y, x) in pairs)
                      for x in self._elements}

    @property
    def elements(self):
        return self._elements

    @property
    def relation(self):
        return self._leq

    def leq(self, a, b):
        if a not in self._elements or b not in self._elements:
            raise InputError(f"unknown label in comparison: {(a, b)!r}")
        return (a, b) in self._leq

    def up(self, x):
        """The principal up-set of x (including x)."""
        if x not in self._elements:
            raise InputError(f"unknown label: {x!r}")
        return self._up[x]

    def down(self, x):
        """The principal down-set of x (including x)."""
        if x not in self._elements:
            raise InputError(f"unknown label: {x!r}")
        return self._down[x]

    def maximal(self):
        return frozenset(x for x in self._elements if self._up[x] == {x})

    def minimal(self):
        return frozenset(x for x in self._elements if self._down[x] == {x})

    def is_chain(self, subset):
        subset = list(subset)
        return all(self.leq(a, b) or self.leq(b, a)
                   for i, a in enumerate(subset) for b in subset[i + 1:])

    def maximum_of(self, subset):
        """The maximum of a subset, or None if it has no greatest member."""
        for x in subset:
            if all((y, x) in self._leq for y in subset):
                return x
        return None

    def minimum_of(self, subset):
        for x in subset:
            if all((x, y) in self._leq for y in subset):
                return x
        return None

    def supremum_of(self, subset):
        """The least upper bound within the poset, or None."""
        upper, _ = bounds(self, subset)
        return self.minimum_of(upper)

    def infimum_of(self, subset):
        lower = bounds(self, subset)[1]
        return self.maximum_of(lower)

    def __eq__(self, other):
        return (isinstance(other, Poset)
                and self._elements == other._elements
                and self._leq == other._leq)

    def __hash__(self):
        return hash((self._elements, self._leq))

    def __repr__(self):
        return f"Poset({len(self._elements)} elements)"


def bounds(poset, subset):
    """Upper and lower bound sets of a subset; everything for the empty set."""
    subset = frozenset(subset)
    unknown = subset - poset.elements
    if unknown:
        raise InputError(f"unknown labels: {sorted(map(repr, unknown))}")
    upper = frozenset(x for x in poset.elements
                      if all(poset.leq(a, x) for a in subset))
    lower = frozenset(x for x in poset.elements
                      if all(poset.leq(x, a) for a in subset))
    return upper, lower


def is_forest(poset):
    """True iff every principal up-set is totally ordered."""
    return all(poset.is_chain(poset.up(x)) for x in poset.elements)


def _require_rooted_forest(poset):
    if not is_forest(poset):
        raise StructureError("not a forest: some principal up-set is not a chain")
    for x in poset.elements:
        if poset.maximum_of(poset.up(x)) is None:
            raise StructureError(f"not rooted: up-set of {x!r} has no maximum")


def roots_and_components(poset):
    """
    The roots and the unique partition of a rooted forest into trees.

    Each component is the down-set of its root; the roots are exactly the
    maximal elements.
    """
    _require_rooted_forest(poset)
    root_of = {x: poset.maximum_of(poset.up(x)) for x in poset.elements}
    roots = frozenset(root_of.values())
    components = frozenset(
        frozenset(x for x in poset.elements if root_of[x] == r) for r in roots)
    return roots, components


def _maximal_chains(poset):
    # In a rooted forest every maximal chain is the up-set of a minimal element.
    return frozenset(poset.up(m) for m in poset.minimal())


def all_chains(poset, cap=None):
    """Every nonempty chain of a rooted forest, enumerated exhaustively."""
    cap = budget(cap if cap is not None else 2 ** 16)
    seen = set()
    for mc in _maximal_chains(poset):
        for subset in powerset(sorted(mc, key=repr)):
            if subset:
                seen.add(frozenset(subset))
                if len(seen) > cap:
                    raise BudgetExceeded(f"more than {cap} chains")
    return seen


def histories(poset):
    """
    Nonempty, non-maximal, upward closed chains of a rooted forest.

    In a finite forest these are exactly the principal up-sets of the
    non-minimal elements.
    """
    _require_rooted_forest(poset)
    maximal_chains = _maximal_chains(poset)
    result = set()
    for x in poset.elements:
        h = poset.up(x)
        if h not in maximal_chains:
            result.add(h)
    return result


def order_predicates(poset):
    """
    The four order-theoretic forest predicates, evaluated exhaustively.

    weakly_up_discrete: for every non-terminal x, every maximal chain of the
        strict down-set of x has a maximum.
    up_discrete: every nonempty chain has a maximum.
    coherent: every history without a minimum admits a continuation chain
        with a maximum (vacuous when all histories have minima).
    regular: for every non-maximal x, the strict up-set of x has an infimum.
    """
    _require_rooted_forest(poset)

    up_discrete = all(poset.maximum_of(c) is not None for c in all_chains(poset))

    weakly = True
    for x in poset.elements:
        strict_down = poset.down(x) - {x}
        if not strict_down:
            continue  # terminal: nothing to check
        for m in strict_down:
            if poset.down(m) & strict_down == {m}:  # minimal within the strict down-set
                chain = poset.up(m) & strict_down
                if poset.maximum_of(chain) is None:
                    weakly = False

    coherent = True
    for h in histories(poset):
        if poset.minimum_of(h) is not None:
            continue
        continuations = [c for c in all_chains(poset)
                         if not (c & h) and poset.is_chain(c | h)
                         and all(poset.leq(y, x) for y in c for x in h)]
        if not any(poset.maximum_of(c) is not None for c in continuations):
            coherent = False

    regular = True
    for x in poset.elements:
        strict_up = poset.up(x) - {x}
        if strict_up and poset.infimum_of(strict_up) is None:
            regular = False

    return {
        "weakly_up_discrete": weakly,
        "up_discrete": up_discrete,
        "coherent": coherent,
        "regular": regular,
    }


def _upper_closure(poset, subset):
    return bounds(poset, subset)[0]


def _lower_closure(poset, subset):
    return bounds(poset, subset)[1]


def dm_completion(poset, cap=None):
    """
    The Dedekind-MacNeille completion: all subsets A with A^{ul} = A,
    ordered by inclusion, together with the embedding x -> down-set of x.
    """
    cap = budget(cap if cap is not None else 2 ** 22)
    if 2 ** len(poset.elements) > cap:
        raise BudgetExceeded(
            f"2^{len(poset.elements)} subsets exceed the budget {cap}")
    closed = set()
    for subset in powerset(sorted(poset.elements, key=repr)):
        a = frozenset(subset)
        if _lower_closure(poset, _upper_closure(poset, a)) == a:
            closed.add(a)
    leq = [(a, b) for a in closed for b in closed if a <= b]
    lattice = Poset(closed, leq)
    embedding = {x: poset.down(x) for x in poset.elements}
    return lattice, embedding


def is_complete_lattice(poset):
    """
    True iff the finite poset is a complete lattice.

    For finite posets it suffices that all pairwise joins and meets exist
    along with a top and a bottom.
    """
    if not poset.elements:
        return False
    if poset.maximum_of(poset.elements) is None:
        return False
    if poset.minimum_of(poset.elements) is None:
        return False
    for a in poset.elements:
        for b in poset.elements:
            if poset.supremum_of({a, b}) is None:
                return False
            if poset.infimum_of({a, b}) is None:
                return False
    return True


@dataclass(frozen=True)
class CompletionReport:
    dense: bool
    is_lattice_complete: bool
    embedding: dict
    detail: str = ""


def check_dense_completion(poset, lattice, phi):
    """
    Decide whether phi: poset -> lattice is a dense completion: an order
    embedding into a complete lattice whose image is join- and meet-dense.
    """
    for x in poset.elements:
        if x not in phi or phi[x] not in lattice.elements:
            raise InputError(f"map not total / out of range at {x!r}")

    def fail(reason):
        return CompletionReport(False, complete, dict(phi), reason)

    complete = is_complete_lattice(lattice)

    for a in poset.elements:
        for b in poset.elements:
            if poset.leq(a, b) != lattice.leq(phi[a], phi[b]):
                return fail(f"not an order embedding at {(a, b)!r}")
    if not complete:
        return fail("codomain is not a complete lattice")
    image = [phi[x] for x in poset.elements]
    for a in lattice.elements:
        below = [v for v in image if lattice.leq(v, a)]
        if lattice.supremum_of(below) != a:
            return fail(f"image not join-dense at {a!r}")
        above = [v for v in image if lattice.leq(a, v)]
        if lattice.infimum_of(above) != a:
            return fail(f"image not meet-dense at {a!r}")
    return CompletionReport(True, True, dict(phi))


def completion_extension(poset, lattice, phi, other, psi):
    """
    Canonical candidate embedding of one completion into another: each
    lattice point maps to the supremum of the psi-images lying below it.

    Returns the map, or None if some required supremum is missing.
    """
    result = {}
    for a in lattice.elements:
        below = [psi[x] for x in poset.elements if lattice.leq(phi[x], a)]
        sup = other.supremum_of(below)
        if sup is None:
            return None
        result[a] = sup
    return result
