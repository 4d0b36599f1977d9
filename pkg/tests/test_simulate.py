import math
from fractions import Fraction as F

import pytest

from previsions.bounds import extension_interval
from previsions.coherence import Assessment
from previsions.crq import conditional_event, conjunction
from previsions.events import Universe
from previsions.simulate import (
    JointDistribution,
    conjunction_prevision,
    finite_n_fixed_point,
    simulate_conditional,
    simulate_conjunction,
)


def two_coin_universe():
    u = Universe()
    return u, u.atom("A"), u.atom("C")


def four_coin_universe():
    u = Universe()
    atoms = tuple(u.atom(n) for n in "ABCD")
    dist = JointDistribution.independent(u, {n: F(1, 2) for n in "ABCD"})
    return dist, atoms


class TestJointDistribution:
    def test_masses_must_sum_to_one(self):
        u, a, c = two_coin_universe()
        with pytest.raises(ValueError):
            JointDistribution(u, {(True, True): F(1, 2)})

    def test_negative_mass_rejected(self):
        u, a, c = two_coin_universe()
        with pytest.raises(ValueError):
            JointDistribution(
                u,
                {
                    (True, True): F(3, 2),
                    (False, False): F(-1, 2),
                },
            )

    def test_independent_product(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 3)})
        assert dist.probability(a) == F(1, 2)
        assert dist.probability(a & c) == F(1, 6)
        assert dist.conditional_probability(c, a) == F(1, 3)

    def test_conditional_on_null_event(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": 0, "C": F(1, 2)})
        with pytest.raises(ValueError):
            dist.conditional_probability(c, a)


class TestSimulateConditional:
    def test_seed_reproducibility(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        one = simulate_conditional(dist, a, c, trials=5_000, max_len=20, seed=42)
        two = simulate_conditional(dist, a, c, trials=5_000, max_len=20, seed=42)
        assert one == two
        other = simulate_conditional(dist, a, c, trials=5_000, max_len=20, seed=43)
        assert other != one

    def test_estimates_conditional_probability(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        estimate = simulate_conditional(dist, a, c, trials=20_000, max_len=40, seed=7)
        assert abs(estimate.mean - 0.5) <= 3 * estimate.std_error

    def test_sure_antecedent_never_indeterminate(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 3)})
        estimate = simulate_conditional(
            dist, u.true(), c, trials=5_000, max_len=1, seed=5
        )
        assert estimate.indeterminate_count == 0
        assert abs(estimate.mean - 1 / 3) <= 3 * estimate.std_error

    def test_entailed_consequent_is_exactly_one(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        estimate = simulate_conditional(dist, a & c, a | c, trials=2_000, max_len=30, seed=1)
        assert estimate.mean == 1.0
        assert estimate.std_error == 0.0

    def test_zero_probability_antecedent_rejected(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": 0, "C": F(1, 2)})
        with pytest.raises(ValueError):
            simulate_conditional(dist, a, c, trials=100, max_len=10, seed=0)

    def test_run_parameter_validation(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        with pytest.raises(ValueError):
            simulate_conditional(dist, a, c, trials=0, max_len=10, seed=0)
        with pytest.raises(ValueError):
            simulate_conditional(dist, a, c, trials=10, max_len=0, seed=0)

    def test_indeterminacy_matches_truncation_probability(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        trials = 50_000
        estimate = simulate_conditional(dist, a, c, trials=trials, max_len=3, seed=3)
        expected = 0.5**3
        slack = 3 * math.sqrt(expected * (1 - expected) / trials)
        assert abs(estimate.indeterminate_fraction - expected) <= slack


class TestSimulateConjunction:
    def test_reduces_to_conditional_when_operands_coincide(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": F(1, 2), "C": F(1, 2)})
        conj = simulate_conjunction(dist, a, c, a, c, trials=5_000, max_len=20, seed=9)
        single = simulate_conditional(dist, a, c, trials=5_000, max_len=20, seed=9)
        assert conj == single

    def test_sure_consequents_give_one(self):
        dist, (a, b, c, d) = four_coin_universe()
        sure = dist.universe.true()
        estimate = simulate_conjunction(
            dist, a, sure, c, sure, trials=2_000, max_len=30, seed=2
        )
        assert estimate.mean == 1.0

    def test_four_fair_coins(self):
        dist, (a, b, c, d) = four_coin_universe()
        assert conjunction_prevision(dist, a, b, c, d) == F(1, 4)
        estimate = simulate_conjunction(dist, a, b, c, d, trials=20_000, max_len=40, seed=11)
        assert abs(estimate.mean - 0.25) <= 3 * estimate.std_error

    def test_estimate_lands_in_extension_interval(self):
        dist, (a, b, c, d) = four_coin_universe()
        x = dist.conditional_probability(b, a)
        y = dist.conditional_probability(d, c)
        first = conditional_event(b, a, x)
        second = conditional_event(d, c, y)
        interval = extension_interval(
            Assessment([first, second]), conjunction(first, second)
        )
        exact = conjunction_prevision(dist, a, b, c, d)
        assert interval.lower <= exact <= interval.upper
        estimate = simulate_conjunction(dist, a, b, c, d, trials=20_000, max_len=40, seed=13)
        assert abs(estimate.mean - float(exact)) <= 3 * estimate.std_error

    def test_zero_probability_antecedents_rejected(self):
        u, a, c = two_coin_universe()
        dist = JointDistribution.independent(u, {"A": 0, "C": 0})
        with pytest.raises(ValueError):
            simulate_conjunction(dist, a, c, a, c, trials=100, max_len=10, seed=0)


class TestFixedPoint:
    def test_basic_value(self):
        assert finite_n_fixed_point(F(1, 2), F(1, 4), 1) == F(1, 2)

    def test_independent_of_truncation_length(self):
        for n in (1, 2, 10, 50):
            assert finite_n_fixed_point(F(1, 2), F(1, 4), n) == F(1, 2)

    def test_sure_antecedent(self):
        assert finite_n_fixed_point(1, F(1, 3), 7) == F(1, 3)

    def test_validation(self):
        with pytest.raises(ValueError):
            finite_n_fixed_point(0, 0, 1)
        with pytest.raises(ValueError):
            finite_n_fixed_point(F(1, 2), F(3, 4), 1)
        with pytest.raises(ValueError):
            finite_n_fixed_point(F(1, 2), F(1, 4), 0)
