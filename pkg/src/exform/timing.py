"""
A two-player preemption race over a released dollar.

Both players wait for an exogenous whistle, then race down a vertical
axis of stopping opportunities attached to the whistle time.  At every
level each player independently stops with a probability calibrated to
the opponent's currency value of the dollar, which makes every pure
post-whistle stopping level worth exactly zero and supports the mixing.
"""

import hashlib
import math
import struct
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import tilt
from .errors import InconsistentOutcome, InputError
from .vtime import OMEGA, Ordinal, VTime, ord_succ, ordinal, vt

OMEGA_PLUS_ONE = ord_succ(OMEGA)

# vertical levels sampled before the forced boundary stop; the chance of
# ever getting here is below (3/4)**200 for any positive eta
BOUNDARY = 200


class _Never:
    def __repr__(self):
        return "NEVER"


NEVER = _Never()


class StopperClass(Enum):
    SOLE_1 = "sole-1"
    SOLE_2 = "sole-2"
    SIMULTANEOUS = "simultaneous"
    PRE_WHISTLE = "pre-whistle"
    NEVER = "never"


@dataclass(frozen=True)
class PureLevel:
    level: int


@dataclass(frozen=True)
class NeverBelowOmega:
    pass


@dataclass(frozen=True)
class PreWhistleStop:
    pass


@dataclass(frozen=True)
class TimingConfig:
    eta: Fraction = Fraction(1)
    whistle: object = Fraction(0)      # rational time or {time: probability}
    vertical_cap: Ordinal = OMEGA_PLUS_ONE
    trials: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.eta <= 0:
            raise InputError(f"currency value must be positive: {self.eta}")
        whistle = self.whistle
        if isinstance(whistle, dict):
            whistle = {Fraction(t): Fraction(q) for t, q in whistle.items()}
            if not whistle or sum(whistle.values()) != 1 \
                    or any(q < 0 for q in whistle.values()) \
                    or any(t < 0 for t in whistle):
                raise InputError(f"bad whistle distribution: {whistle}")
        else:
            whistle = Fraction(whistle)
            if whistle < 0:
                raise InputError(f"whistle time must be nonnegative: {whistle}")
        object.__setattr__(self, "whistle", whistle)
        if self.vertical_cap != OMEGA_PLUS_ONE:
            raise InputError("only the vertical cap w + 1 is supported")
        if not 0 <= self.trials:
            raise InputError(f"negative trial count: {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"seed must fit in 64 bits: {self.seed}")


@dataclass(frozen=True)
class RaceOutcome:
    stop_level_1: object               # natural or NEVER
    stop_level_2: object
    stopper_class: StopperClass
    payoffs: tuple


@dataclass(frozen=True)
class SimStats:
    trials: int
    counts: dict
    probabilities: dict
    mean_payoffs: tuple | None
    radii: dict

    def __post_init__(self):
        if sum(self.counts.values()) != self.trials:
            raise InconsistentOutcome("class counts do not sum to trials")


def stop_prob(player, eta):
    """A player's per-level stopping probability, set by the opponent's
    currency value of the dollar."""
    eta = Fraction(eta)
    if eta <= 0:
        raise InputError(f"currency value must be positive: {eta}")
    if player not in (1, 2):
        raise InputError(f"unknown player: {player}")
    opponent_value = eta if player == 1 else Fraction(1)
    return opponent_value / (1 + opponent_value)


def outcome_distribution(eta):
    """
    The exact conditional-on-stopping distribution of the three stopping
    classes.  Per level the classes weigh q1(1-q2), q2(1-q1) and q1*q2;
    the level index integrates out by the shared geometric factor.
    """
    q1, q2 = stop_prob(1, eta), stop_prob(2, eta)
    weights = {
        StopperClass.SOLE_1: q1 * (1 - q2),
        StopperClass.SOLE_2: q2 * (1 - q1),
        StopperClass.SIMULTANEOUS: q1 * q2,
    }
    total = 1 - (1 - q1) * (1 - q2)
    return {cls: w / total for cls, w in weights.items()}


def payoff(outcome, eta, whistle_relation="post"):
    """The four-case payoff table, in each player's local currency."""
    eta = Fraction(eta)
    cls = outcome.stopper_class
    a, b = outcome.stop_level_1, outcome.stop_level_2
    if whistle_relation not in ("pre", "post"):
        raise InputError(f"unknown whistle relation: {whistle_relation}")
    if (whistle_relation == "pre") != (cls is StopperClass.PRE_WHISTLE):
        raise InconsistentOutcome(f"{cls} under a {whistle_relation}-whistle stop")
    if cls is StopperClass.PRE_WHISTLE:
        return (Fraction(-1), Fraction(-1))
    if cls is StopperClass.NEVER:
        if a is not NEVER or b is not NEVER:
            raise InconsistentOutcome("never-class outcome with a stop level")
        return (Fraction(0), Fraction(0))
    if cls is StopperClass.SOLE_1:
        if a is NEVER or (b is not NEVER and b <= a):
            raise InconsistentOutcome("sole stop by 1 requires 1 strictly first")
        return (Fraction(1), Fraction(0))
    if cls is StopperClass.SOLE_2:
        if b is NEVER or (a is not NEVER and a <= b):
            raise InconsistentOutcome("sole stop by 2 requires 2 strictly first")
        return (Fraction(0), eta)
    if a is NEVER and b is NEVER:
        # forced joint stop at the vertical boundary: nothing is grabbed
        return (Fraction(0), Fraction(0))
    if a is NEVER or b is NEVER or a != b:
        raise InconsistentOutcome("simultaneous stop at distinct levels")
    return (Fraction(-1), Fraction(-1))


def _uniform(seed, trial, level, player):
    key = struct.pack(">QQQQ", seed, trial, level, player)
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return Fraction(int.from_bytes(digest, "big"), 2 ** 64)


def sample_whistle(config, trial):
    if not isinstance(config.whistle, dict):
        return config.whistle
    u = _uniform(config.seed, trial, 0, 0)
    running = Fraction(0)
    for t in sorted(config.whistle):
        running += config.whistle[t]
        if u < running:
            return t
    return max(config.whistle)


def sample_race(config, trial):
    """
    One post-whistle race: independent per-level coins, keyed by
    (seed, trial, level, player) so that the draw is reproducible and
    independent of evaluation order.
    """
    q1, q2 = stop_prob(1, config.eta), stop_prob(2, config.eta)
    for level in range(BOUNDARY):
        one = _uniform(config.seed, trial, level + 1, 1) < q1
        two = _uniform(config.seed, trial, level + 1, 2) < q2
        if one or two:
            cls = (StopperClass.SIMULTANEOUS if one and two
                   else StopperClass.SOLE_1 if one else StopperClass.SOLE_2)
            outcome = RaceOutcome(level if one else NEVER,
                                  level if two else NEVER, cls, ())
            return RaceOutcome(outcome.stop_level_1, outcome.stop_level_2,
                               cls, payoff(outcome, config.eta))
    outcome = RaceOutcome(NEVER, NEVER, StopperClass.SIMULTANEOUS, ())
    return RaceOutcome(NEVER, NEVER, StopperClass.SIMULTANEOUS,
                       payoff(outcome, config.eta))


def monte_carlo(config):
    """Exact-count statistics over independent trials; identical output
    for identical (seed, trials) however the trials are scheduled."""
    counts = {cls: 0 for cls in StopperClass}
    sums = [Fraction(0), Fraction(0)]
    for trial in range(config.trials):
        outcome = sample_race(config, trial)
        counts[outcome.stopper_class] += 1
        sums[0] += outcome.payoffs[0]
        sums[1] += outcome.payoffs[1]
    if config.trials == 0:
        return SimStats(0, counts, {}, None, {})
    probabilities = {cls: Fraction(k, config.trials)
                     for cls, k in counts.items()}
    radii = {cls: 3 * math.sqrt(float(p * (1 - p)) / config.trials)
             for cls, p in probabilities.items()}
    means = (sums[0] / config.trials, sums[1] / config.trials)
    return SimStats(config.trials, counts, probabilities, means, radii)


def equilibrium_identity(eta):
    """
    The per-level cancellation making every stopping level worth zero:
    each player's sole-stop gain weighs exactly as much as the
    simultaneous fine, both in that player's local currency.
    """
    eta = Fraction(eta)
    q1, q2 = stop_prob(1, eta), stop_prob(2, eta)
    return (
        (q1 * (1 - q2) * 1, q1 * q2 * 1),
        (q2 * (1 - q1) * eta, q1 * q2 * 1),
    )


def deviation_payoff(config, deviation, player=1):
    """
    Exact expected payoff of a unilateral deviation, conditional on the
    whistle having been reached, against the equilibrium opponent.
    """
    eta = config.eta
    if player not in (1, 2):
        raise InputError(f"unknown player: {player}")
    opponent = 3 - player
    own_value = Fraction(1) if player == 1 else eta
    q_opp = stop_prob(opponent, eta)
    if isinstance(deviation, PreWhistleStop):
        return Fraction(-1)
    if isinstance(deviation, NeverBelowOmega):
        # the opponent stops almost surely below the boundary, leaving 0;
        # the null boundary event also pays 0
        return Fraction(0)
    if isinstance(deviation, PureLevel):
        if deviation.level < 0:
            raise InputError(f"negative level: {deviation.level}")
        survive = (1 - q_opp) ** deviation.level
        return survive * (-q_opp + (1 - q_opp) * own_value)
    raise InputError(f"unknown deviation: {deviation!r}")


@dataclass(frozen=True)
class GridApproximant:
    grid: tilt.Grid
    mesh: Fraction
    stats: SimStats


def race_grid(config, n):
    """The dyadic grid of mesh 2^-n anchored at the whistle."""
    if isinstance(config.whistle, dict):
        raise InputError("grid approximants need a deterministic whistle")
    mesh = Fraction(1, 2 ** n)
    whistle = config.whistle

    def evaluate(beta):
        if beta == OMEGA:
            from .vtime import INFINITY
            return INFINITY
        k = beta.cnf[0][1] if beta.cnf else 0
        if whistle == 0:
            return vt(k * mesh)
        return vt(0) if k == 0 else vt(whistle + (k - 1) * mesh)

    def locate(t):
        if t.is_infinity:
            return OMEGA
        if t.t <= 0:
            return ordinal(0)
        if whistle == 0:
            return ordinal(int(-((-t.t) // mesh)))
        if t.t <= whistle:
            return ordinal(1)
        return ordinal(1 + int(-((-(t.t - whistle)) // mesh)))

    return tilt.Grid(OMEGA, evaluate, name=None, locate=locate, gap=None)


def grid_approximant(config, n):
    """
    The discrete-time symmetric race on the anchored grid.  Step k of
    the grid game uses the same coin as vertical level k of the race, so
    the two simulations agree trial by trial; the grid frequencies
    therefore estimate the same closed-form distribution.
    """
    grid = race_grid(config, n)
    tilt.validate_grid(grid)
    stats = monte_carlo(config)
    return GridApproximant(grid, Fraction(1, 2 ** n), stats)


def path_tilt(config, level):
    """
    The vertically extended stop time that a stop-at-step-``level`` path
    converges to as the anchored grids refine, computed through the
    tilting machinery.
    """
    if isinstance(config.whistle, dict):
        raise InputError("path tilting needs a deterministic whistle")
    target = VTime(config.whistle, ordinal(level))
    family, process = tilt.approximate_stop_indicator(target)
    result = tilt.tilting_limit(process, family)
    if not result.converged:
        raise InconsistentOutcome("stop path failed to tilt")
    return result.stop
