import math
from fractions import Fraction

import pytest

from exform.errors import InconsistentOutcome, InputError
from exform.timing import (
    NEVER,
    GridApproximant,
    NeverBelowOmega,
    PreWhistleStop,
    PureLevel,
    RaceOutcome,
    SimStats,
    StopperClass,
    TimingConfig,
    deviation_payoff,
    equilibrium_identity,
    grid_approximant,
    monte_carlo,
    outcome_distribution,
    path_tilt,
    payoff,
    race_grid,
    sample_race,
    sample_whistle,
    stop_prob,
)
from exform.tilt import validate_grid
from exform.vtime import OMEGA, VTime, ordinal, ord_succ, vt

ETAS = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5)]


def brute_distribution(eta, levels=64):
    """Sum the per-level event probabilities level by level."""
    q1, q2 = stop_prob(1, eta), stop_prob(2, eta)
    survive = (1 - q1) * (1 - q2)
    sums = {cls: Fraction(0) for cls in (
        StopperClass.SOLE_1, StopperClass.SOLE_2, StopperClass.SIMULTANEOUS)}
    for k in range(levels):
        factor = survive ** k
        sums[StopperClass.SOLE_1] += factor * q1 * (1 - q2)
        sums[StopperClass.SOLE_2] += factor * q2 * (1 - q1)
        sums[StopperClass.SIMULTANEOUS] += factor * q1 * q2
    total = sum(sums.values())
    return sums, total


class TestClosedForms:
    def test_stop_probabilities(self):
        assert stop_prob(1, 1) == stop_prob(2, 1) == Fraction(1, 2)
        assert stop_prob(1, 2) == Fraction(2, 3)
        assert stop_prob(2, 2) == Fraction(1, 2)
        assert stop_prob(1, Fraction(3, 7)) == Fraction(3, 10)

    def test_invalid_inputs(self):
        with pytest.raises(InputError):
            stop_prob(1, 0)
        with pytest.raises(InputError):
            stop_prob(3, 1)
        with pytest.raises(InputError):
            outcome_distribution(Fraction(-1))

    def test_symmetric_dollar(self):
        dist = outcome_distribution(1)
        assert set(dist.values()) == {Fraction(1, 3)}

    def test_doubled_currency(self):
        dist = outcome_distribution(2)
        assert dist[StopperClass.SOLE_1] == Fraction(2, 5)
        assert dist[StopperClass.SOLE_2] == Fraction(1, 5)
        assert dist[StopperClass.SIMULTANEOUS] == Fraction(2, 5)

    @pytest.mark.parametrize("eta", ETAS)
    def test_against_levelwise_summation(self, eta):
        dist = outcome_distribution(eta)
        sums, total = brute_distribution(eta)
        q1, q2 = stop_prob(1, eta), stop_prob(2, eta)
        remainder = ((1 - q1) * (1 - q2)) ** 64
        assert 1 - total <= remainder
        for cls, value in dist.items():
            assert abs(sums[cls] / total - value) <= remainder

    @pytest.mark.parametrize("eta", ETAS)
    def test_zero_value_identity(self, eta):
        for gain, fine in equilibrium_identity(eta):
            assert gain == fine


class TestPayoffTable:
    def test_pre_whistle_fine(self):
        outcome = RaceOutcome(0, NEVER, StopperClass.PRE_WHISTLE, ())
        assert payoff(outcome, 1, "pre") == (Fraction(-1), Fraction(-1))

    def test_sole_second_player_in_local_currency(self):
        outcome = RaceOutcome(NEVER, 3, StopperClass.SOLE_2, ())
        assert payoff(outcome, 2) == (Fraction(0), Fraction(2))

    def test_sole_first_player(self):
        outcome = RaceOutcome(1, 4, StopperClass.SOLE_1, ())
        assert payoff(outcome, 7) == (Fraction(1), Fraction(0))

    def test_simultaneous_fine(self):
        outcome = RaceOutcome(2, 2, StopperClass.SIMULTANEOUS, ())
        assert payoff(outcome, 5) == (Fraction(-1), Fraction(-1))

    def test_boundary_stop_is_free(self):
        outcome = RaceOutcome(NEVER, NEVER, StopperClass.SIMULTANEOUS, ())
        assert payoff(outcome, 5) == (Fraction(0), Fraction(0))

    def test_never(self):
        outcome = RaceOutcome(NEVER, NEVER, StopperClass.NEVER, ())
        assert payoff(outcome, 1) == (Fraction(0), Fraction(0))

    def test_inconsistencies_rejected(self):
        bad = [
            (RaceOutcome(2, 1, StopperClass.SOLE_1, ()), "post"),
            (RaceOutcome(NEVER, 1, StopperClass.SOLE_1, ()), "post"),
            (RaceOutcome(1, 2, StopperClass.SIMULTANEOUS, ()), "post"),
            (RaceOutcome(1, NEVER, StopperClass.NEVER, ()), "post"),
            (RaceOutcome(1, 1, StopperClass.SIMULTANEOUS, ()), "pre"),
        ]
        for outcome, relation in bad:
            with pytest.raises(InconsistentOutcome):
                payoff(outcome, 1, relation)
        with pytest.raises(InputError):
            payoff(RaceOutcome(1, 1, StopperClass.SIMULTANEOUS, ()), 1, "during")


class TestConfig:
    def test_defaults(self):
        config = TimingConfig()
        assert config.eta == 1 and config.whistle == 0

    def test_rejections(self):
        with pytest.raises(InputError):
            TimingConfig(eta=0)
        with pytest.raises(InputError):
            TimingConfig(whistle=Fraction(-1))
        with pytest.raises(InputError):
            TimingConfig(vertical_cap=OMEGA)
        with pytest.raises(InputError):
            TimingConfig(seed=2 ** 64)
        with pytest.raises(InputError):
            TimingConfig(whistle={Fraction(0): Fraction(1, 2)})

    def test_whistle_distribution(self):
        config = TimingConfig(
            whistle={Fraction(0): Fraction(1, 2), Fraction(1): Fraction(1, 2)},
            trials=4000, seed=11)
        draws = [sample_whistle(config, k) for k in range(4000)]
        share = sum(1 for t in draws if t == 0) / 4000
        assert abs(share - 0.5) < 0.05


class TestSampling:
    def test_seed_determinism(self):
        config = TimingConfig(eta=2, trials=0, seed=99)
        for trial in range(50):
            assert sample_race(config, trial) == sample_race(config, trial)

    def test_reach_level_probability(self):
        config = TimingConfig(eta=1, trials=20000, seed=5)
        outcomes = [sample_race(config, k) for k in range(config.trials)]

        def level(outcome):
            stops = [x for x in (outcome.stop_level_1, outcome.stop_level_2)
                     if x is not NEVER]
            return min(stops)

        for k in (1, 2, 3):
            reached = sum(1 for o in outcomes if level(o) >= k)
            expect = Fraction(1, 4) ** k
            assert abs(reached / config.trials - expect) < 0.01

    def test_no_pre_whistle_stops(self):
        stats = monte_carlo(TimingConfig(eta=2, trials=5000, seed=3))
        assert stats.counts[StopperClass.PRE_WHISTLE] == 0
        assert stats.counts[StopperClass.NEVER] == 0

    def test_empty_run(self):
        stats = monte_carlo(TimingConfig(trials=0))
        assert stats.trials == 0 and stats.mean_payoffs is None
        assert sum(stats.counts.values()) == 0

    def test_reproducible_stats(self):
        config = TimingConfig(eta=Fraction(1, 2), trials=3000, seed=17)
        assert monte_carlo(config) == monte_carlo(config)

    def test_counts_must_sum(self):
        with pytest.raises(InconsistentOutcome):
            SimStats(5, {StopperClass.SOLE_1: 4}, {}, None, {})


class TestEmpiricalAgreement:
    @pytest.mark.parametrize("trials", [10 ** 4, 10 ** 5])
    def test_three_sigma_bands(self, trials):
        config = TimingConfig(eta=1, trials=trials, seed=42)
        stats = monte_carlo(config)
        exact = outcome_distribution(1)
        for cls, p in exact.items():
            band = 3 * math.sqrt(float(p * (1 - p)) / trials)
            assert abs(float(stats.probabilities[cls] - p)) <= band
        for mean in stats.mean_payoffs:
            assert abs(float(mean)) < 0.01


class TestDeviations:
    @pytest.mark.parametrize("eta", ETAS)
    @pytest.mark.parametrize("player", [1, 2])
    def test_all_enumerated_deviations_nonpositive(self, eta, player):
        config = TimingConfig(eta=eta)
        for m in range(8):
            assert deviation_payoff(config, PureLevel(m), player) == 0
        assert deviation_payoff(config, NeverBelowOmega(), player) == 0
        assert deviation_payoff(config, PreWhistleStop(), player) == Fraction(-1)

    def test_unknown_deviation(self):
        with pytest.raises(InputError):
            deviation_payoff(TimingConfig(), "tomorrow")
        with pytest.raises(InputError):
            deviation_payoff(TimingConfig(), PureLevel(-1))


class TestGridApproximant:
    def test_degenerate_grid_is_valid(self):
        assert validate_grid(race_grid(TimingConfig(), 0)).valid

    def test_anchored_grid_is_valid(self):
        grid = race_grid(TimingConfig(whistle=Fraction(1, 3)), 4)
        assert validate_grid(grid).valid
        assert grid(ordinal(0)) == vt(0)
        assert grid(ordinal(1)) == vt(Fraction(1, 3))
        assert grid(ordinal(2)) == vt(Fraction(1, 3) + Fraction(1, 16))

    def test_frequencies_match_closed_form(self):
        config = TimingConfig(eta=1, trials=10 ** 4, seed=42)
        approx = grid_approximant(config, 10)
        assert approx.mesh == Fraction(1, 1024)
        for cls, p in outcome_distribution(1).items():
            assert abs(float(approx.stats.probabilities[cls] - p)) < 0.015

    def test_random_whistle_rejected(self):
        config = TimingConfig(
            whistle={Fraction(0): Fraction(1, 2), Fraction(1): Fraction(1, 2)})
        with pytest.raises(InputError):
            grid_approximant(config, 3)

    def test_sampled_path_tilts_to_the_race_level(self):
        assert path_tilt(TimingConfig(), 3) == vt(0, ordinal(3))
        assert path_tilt(TimingConfig(whistle=Fraction(5, 8)), 1) \
            == VTime(Fraction(5, 8), ordinal(1))
        assert path_tilt(TimingConfig(whistle=Fraction(3, 7)), 0) \
            == VTime(Fraction(3, 7), ordinal(0))
