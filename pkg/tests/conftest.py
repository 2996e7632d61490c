"""Shared generators for property tests."""

import random

from hypothesis import strategies as st

from exform.order import Poset

LABELS = "abcdefghijkl"


def poset_from_dag(n, edges):
    """Poset on n labels from an acyclic edge set (edges go label-index up)."""
    elements = list(LABELS[:n])
    reach = {x: {x} for x in elements}
    # edges only point from lower to higher index, so one backward sweep closes them
    for i in reversed(range(n)):
        for (a, b) in edges:
            if a == elements[i]:
                reach[a] |= reach[b]
    leq = [(a, b) for a in elements for b in reach[a]]
    return Poset(elements, leq)


@st.composite
def posets(draw, max_size=6):
    n = draw(st.integers(min_value=1, max_value=max_size))
    elements = list(LABELS[:n])
    candidates = [(elements[i], elements[j]) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(candidates) if candidates else st.nothing()))
    return poset_from_dag(n, edges)


@st.composite
def forest_posets(draw, max_size=8):
    """Random rooted forests: each non-root gets one parent of lower index."""
    n = draw(st.integers(min_value=1, max_value=max_size))
    elements = list(LABELS[:n])
    parents = {}
    for i in range(1, n):
        choice = draw(st.integers(min_value=-1, max_value=i - 1))
        if choice >= 0:
            parents[elements[i]] = elements[choice]
    leq = []
    for x in elements:
        y = x
        chain = [y]
        while y in parents:
            y = parents[y]
            chain.append(y)
        leq.extend((x, z) for z in chain)
    return Poset(elements, leq)


def random_poset(rng, n):
    """Plain-random poset for seeded bulk sweeps outside hypothesis."""
    elements = list(LABELS[:n])
    edges = [(elements[i], elements[j])
             for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
    return poset_from_dag(n, edges)


def make_rng(seed):
    return random.Random(seed)


def _random_partition(rng, block):
    parts = rng.randint(2, min(3, len(block)))
    pool = list(block)
    rng.shuffle(pool)
    cuts = sorted(rng.sample(range(1, len(pool)), parts - 1))
    return [pool[i:j] for i, j in zip([0] + cuts, cuts + [len(pool)])]


def random_strict_sef(rng, max_outcomes=12, max_scenarios=3):
    """
    A random single-agent perfect-information extensive form: one
    independent decision tree per scenario, one singleton-domain random
    move per internal node, and one choice per child node.
    """
    from exform.forest import DecisionForest
    from exform.sdf import RandomMove, StochasticDecisionForest
    from exform.sef import StochasticExtensiveForm

    n_scen = rng.randint(1, max_scenarios)
    sizes = []
    for k in range(n_scen):
        room = max_outcomes - sum(sizes) - (n_scen - k - 1)
        sizes.append(rng.randint(1, min(6, room)))
    if all(size == 1 for size in sizes):
        sizes[0] = 2

    outcomes = []
    nodes = []
    moves = []
    info = {}
    refchoices = {}
    choices = set()
    for k, size in enumerate(sizes):
        w = f"w{k}"
        labels = [f"{w}:{j}" for j in range(size)]
        outcomes.extend(labels)
        stack = [labels]
        while stack:
            block = stack.pop()
            node = frozenset(block)
            nodes.append(node)
            if len(block) == 1:
                continue
            move = RandomMove({w: node})
            moves.append(move)
            info[move] = frozenset({frozenset({w})})
            kids = [frozenset(part) for part in _random_partition(rng, block)]
            refchoices[move] = kids
            choices.update(kids)
            stack.extend(map(sorted, kids))

    forest = DecisionForest(outcomes, nodes)
    projection = {x: next(iter(x)).split(":")[0] for x in forest.nodes}
    scenarios = tuple(f"w{k}" for k in range(n_scen))
    sdf = StochasticDecisionForest(forest, scenarios, projection, moves)
    agent = "i"
    return StochasticExtensiveForm(
        sdf, (agent,), {agent: frozenset(moves)}, {agent: info},
        {agent: refchoices}, {agent: frozenset(choices)})
