from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exform.errors import (
    GridAxiomViolation,
    InputError,
    TailWindowInconclusive,
    TargetOutOfRange,
)
from exform.tilt import (
    OMEGA_SQ,
    Grid,
    StopIndexFamily,
    Window,
    approximate_stop_indicator,
    check_refines,
    default_probes,
    dyadic_family,
    dyadic_grid,
    gamma,
    grid_size,
    nested_family,
    nested_grid,
    psi_delta,
    tilting_limit,
    validate_grid,
)
from exform.vtime import (
    INFINITY,
    OMEGA,
    OMEGA1,
    ZERO,
    Ordinal,
    VTime,
    ord_add,
    ord_cmp,
    ordinal,
    parse_ordinal,
    parse_vtime,
    vt,
)

ALICE = StopIndexFamily(kappa=lambda n: ordinal(1), label="alice")
BOB = StopIndexFamily(kappa=lambda n: ordinal(2), label="bob")
CAROL = StopIndexFamily(
    kappa=lambda n: ordinal(4) if n % 2 == 0 else ordinal(1), label="carol")


def table_grid(times):
    """A finite grid from an explicit list of times ending at infinity."""
    values = [vt(x) if x is not None else INFINITY for x in times]

    def evaluate(beta):
        k = beta.cnf[0][1] if beta.cnf else 0
        return values[k]

    return Grid(ordinal(len(values) - 1), evaluate)


class TestGridAxioms:
    def test_registered_families_valid(self):
        for n in range(5):
            assert validate_grid(dyadic_grid(n)).exact
            assert validate_grid(nested_grid(n)).exact

    def test_nonzero_start_rejected(self):
        with pytest.raises(GridAxiomViolation):
            validate_grid(table_grid([1, 2, None]))

    def test_finite_end_rejected(self):
        with pytest.raises(GridAxiomViolation):
            validate_grid(table_grid([0, 1, 2]))

    def test_non_monotone_rejected(self):
        with pytest.raises(GridAxiomViolation):
            validate_grid(table_grid([0, 2, 1, None]))

    def test_table_grid_valid_but_inexact(self):
        report = validate_grid(table_grid([0, 1, 2, None]))
        assert report.valid and not report.exact

    def test_discontinuous_limit_rejected(self):
        bounded = Grid(OMEGA, lambda b: INFINITY if b == OMEGA
                       else vt(1 - Fraction(1, 2 ** (b.cnf[0][1] if b.cnf else 0))))
        with pytest.raises(GridAxiomViolation):
            validate_grid(bounded)


class TestRefinement:
    def test_dyadic_chain(self):
        for n in range(4):
            assert check_refines(dyadic_grid(n), dyadic_grid(n + 1))

    def test_nested_chain(self):
        for n in range(4):
            assert check_refines(nested_grid(n), nested_grid(n + 1))

    def test_coarsening_is_not_refinement(self):
        assert not check_refines(dyadic_grid(3), dyadic_grid(2))

    def test_embedding_witnesses(self):
        fam = nested_family()
        for index in [ZERO, ordinal(3), parse_ordinal("w*2 + 1"),
                      parse_ordinal("w"), OMEGA_SQ]:
            image = fam.embed(2, index)
            assert fam.member(2)(index) == fam.member(3)(image)


class TestGridSize:
    def test_dyadic(self):
        for n in range(5):
            assert grid_size(dyadic_grid(n)) == (Fraction(1, 2 ** n), True)

    def test_nested_half_mesh(self):
        for n in range(5):
            assert grid_size(nested_grid(n)) == (Fraction(1, 2 ** (n + 1)), True)

    def test_bounded_image_is_infinite(self):
        value, exact = grid_size(table_grid([0, 1, 2, None]))
        assert value is INFINITY and exact

    def test_sizes_vanish_along_both_families(self):
        for family in (dyadic_family(), nested_family()):
            sizes = [grid_size(family.member(n))[0] for n in range(8)]
            assert sizes == sorted(sizes, reverse=True)
            assert sizes[-1] <= Fraction(1, 128)


class TestReindexing:
    def test_time_zero_is_identity(self):
        base, delta = psi_delta(dyadic_grid(6), vt(0))
        assert base == ZERO and delta == OMEGA

    def test_first_mesh_point(self):
        base, delta = psi_delta(dyadic_grid(6), vt(Fraction(1, 64)))
        assert base == ordinal(1) and delta == OMEGA

    def test_infinity_probes_the_bound(self):
        base, delta = psi_delta(dyadic_grid(6), INFINITY)
        assert base == OMEGA and delta == ZERO
        base, delta = psi_delta(nested_grid(6), INFINITY)
        assert base == OMEGA_SQ and delta == ZERO

    def test_nested_locator(self):
        grid = nested_grid(2)
        for t in [Fraction(0), Fraction(1, 4), Fraction(3, 8), Fraction(5, 7),
                  Fraction(9, 8), Fraction(31, 32)]:
            base = grid.locate(vt(t))
            assert grid(base) >= vt(t)
            below = _predecessor_times(grid, base)
            assert all(x < vt(t) for x in below)

    @given(st.builds(Fraction, st.integers(0, 64), st.integers(1, 16)),
           st.integers(0, 6))
    @settings(max_examples=60)
    def test_delta_monotone_along_refinements(self, t, n):
        for family in (dyadic_family(), nested_family()):
            here = psi_delta(family.member(n), vt(t))[1]
            deeper = psi_delta(family.member(n + 1), vt(t))[1]
            assert ord_cmp(here, deeper) <= 0


def _predecessor_times(grid, base):
    times = []
    for k in range(1, 4):
        step = ordinal(k)
        if ord_cmp(step, base) <= 0:
            # sample a few immediate predecessors where they exist
            cnf = list(base.cnf)
            if cnf and cnf[-1][0] == 0:
                down = cnf[-1][1] - k
                if down >= 0:
                    tail = ((0, down),) if down else ()
                    times.append(grid(Ordinal(tuple(cnf[:-1]) + tail)))
    return times


class TestVerticalExtent:
    def test_symbolic_values(self):
        assert gamma(dyadic_family(), vt(0)) == (OMEGA, True)
        assert gamma(nested_family(), vt(0)) == (OMEGA_SQ, True)
        assert gamma(dyadic_family(), vt(Fraction(7, 3)))[0] == OMEGA

    def test_extent_is_a_limit_ordinal(self):
        from exform.vtime import is_limit
        for family in (dyadic_family(), nested_family()):
            for t in [vt(0), vt(1), vt(Fraction(5, 16))]:
                assert is_limit(gamma(family, t)[0])


class TestTiltingLimits:
    def test_stop_at_first_opportunity(self):
        result = tilting_limit(ALICE, dyadic_family())
        assert result.converged and result.stop == vt(0, ordinal(1))

    def test_stop_at_second_opportunity(self):
        result = tilting_limit(BOB, dyadic_family())
        assert result.converged and result.stop == vt(0, ordinal(2))

    def test_alternation_diverges(self):
        result = tilting_limit(CAROL, dyadic_family())
        assert not result.converged
        probe, values = result.witness
        assert probe == vt(0, ordinal(1))
        assert set(values) == {0, 1}
        assert values[0] != values[1]

    def test_nested_family_tilts_the_same_processes_higher(self):
        alice = StopIndexFamily(kappa=lambda n: OMEGA)
        bob = StopIndexFamily(kappa=lambda n: parse_ordinal("w*2"))
        assert tilting_limit(alice, nested_family()).stop == vt(0, OMEGA)
        assert tilting_limit(bob, nested_family()).stop \
            == vt(0, parse_ordinal("w*2"))

    def test_left_extension_above_the_extent(self):
        probes = [vt(0, ordinal(1)), vt(0, OMEGA), VTime(0, OMEGA1)]
        result = tilting_limit(ALICE, dyadic_family(), probes=probes)
        assert result.table[vt(0, ordinal(1))] == 0
        assert result.table[vt(0, OMEGA)] == 0
        assert result.table[VTime(0, OMEGA1)] == 0

    def test_uniqueness_across_runs(self):
        probes = default_probes(BOB, dyadic_family(), Window())
        first = tilting_limit(BOB, dyadic_family(), probes=probes)
        second = tilting_limit(BOB, dyadic_family(), probes=probes)
        assert first.table == second.table and first.stop == second.stop

    def test_linearity_of_real_valued_tables(self):
        def stopper(threshold):
            return lambda n, time: 1 if time < vt(threshold * Fraction(1, 2 ** n)) else 0

        probes = [vt(0, ordinal(k)) for k in range(6)]
        one = tilting_limit(stopper(1), dyadic_family(), probes=probes)
        three = tilting_limit(stopper(3), dyadic_family(), probes=probes)
        mixed = tilting_limit(
            lambda n, time: 5 * stopper(1)(n, time) + stopper(3)(n, time),
            dyadic_family(), probes=probes)
        for probe in probes:
            assert mixed.table[probe] == 5 * one.table[probe] + three.table[probe]

    def test_single_late_switch_is_inconclusive(self):
        late = StopIndexFamily(
            kappa=lambda n: ordinal(1) if n < 23 else ordinal(2))
        with pytest.raises(TailWindowInconclusive):
            tilting_limit(late, dyadic_family(),
                          probes=[vt(0, ordinal(1))])

    def test_window_reported_and_validated(self):
        window = Window(2, 12, 4)
        result = tilting_limit(ALICE, dyadic_family(), window=window)
        assert result.window == window
        with pytest.raises(InputError):
            Window(8, 4, 2)
        with pytest.raises(InputError):
            Window(0, 4, 8)

    def test_excessive_stop_index_rejected(self):
        runaway = StopIndexFamily(kappa=lambda n: OMEGA_SQ)
        with pytest.raises(InputError):
            tilting_limit(runaway, dyadic_family())


class TestStopIndicatorSynthesis:
    def test_examples(self):
        for text, name in [("(0, 1)", "dyadic"), ("(0, w*2)", "nested"),
                           ("(0, 0)", "dyadic")]:
            family, process = approximate_stop_indicator(parse_vtime(text))
            assert family.name == name
            assert tilting_limit(process, family).stop == parse_vtime(text)

    def test_out_of_range(self):
        with pytest.raises(TargetOutOfRange):
            approximate_stop_indicator(vt(0, OMEGA_SQ))
        with pytest.raises(TargetOutOfRange):
            approximate_stop_indicator(INFINITY)
        with pytest.raises(TargetOutOfRange):
            approximate_stop_indicator(VTime(1, OMEGA1))

    @given(st.builds(Fraction, st.integers(0, 12), st.sampled_from([1, 2, 4, 8])),
           st.integers(0, 3), st.integers(0, 5))
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, t, blocks, steps):
        vertical = ord_add(Ordinal(((1, blocks),)) if blocks else ZERO,
                           ordinal(steps))
        target = VTime(t, vertical)
        family, process = approximate_stop_indicator(target)
        result = tilting_limit(process, family)
        assert result.converged and result.stop == target
        for probe, value in result.table.items():
            assert value == (1 if probe < target else 0)
