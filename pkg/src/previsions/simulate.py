"""Monte Carlo cross-checks built on repeated-trial semantics.

A conditional "if A then C" can be scored by drawing independent copies
of the world until the antecedent first comes true and reading off the
consequent there.  These simulators implement that scheme with a hard
truncation length (trials that never see the antecedent are counted as
indeterminate and excluded from the mean), both for a single
conditional and for the conjunction of two conditionals, where the
voided branches are filled with the exact conditional probabilities of
the underlying distribution.  A fixed-point identity shows the
truncation length does not bias the single-conditional target.

Sampling uses Python's ``random.Random`` (Mersenne Twister), so a seed
pins down every estimate bit for bit.  Only the world sequence is
stochastic; all probabilities entering the values are exact rationals.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .crq import Rational
from .events import Event, Universe, assignments

_ZERO = Fraction(0)
_ONE = Fraction(1)


class JointDistribution:
    """An exact probability for every total truth assignment."""

    __slots__ = ("_universe", "_atoms", "_table")

    def __init__(
        self,
        universe: Universe,
        probabilities: Mapping[tuple[bool, ...], Rational],
    ):
        atoms = universe.atoms
        table: dict[tuple[bool, ...], Fraction] = {}
        total = _ZERO
        for bits in assignments(atoms):
            key = tuple(bits[a] for a in atoms)
            mass = Fraction(probabilities.get(key, 0))
            if mass < 0:
                raise ValueError("probabilities must be nonnegative")
            table[key] = mass
            total += mass
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self._universe = universe
        self._atoms = atoms
        self._table = table

    @classmethod
    def independent(
        cls, universe: Universe, marginals: Mapping[str, Rational]
    ) -> "JointDistribution":
        """Product measure with the given per-atom probabilities."""
        atoms = universe.atoms
        probs = {name: Fraction(marginals[name]) for name in atoms}
        for name, p in probs.items():
            if not _ZERO <= p <= _ONE:
                raise ValueError(f"marginal for {name} is outside [0, 1]")
        table = {}
        for bits in assignments(atoms):
            mass = _ONE
            for name in atoms:
                mass *= probs[name] if bits[name] else _ONE - probs[name]
            table[tuple(bits[a] for a in atoms)] = mass
        return cls(universe, table)

    @property
    def universe(self) -> Universe:
        return self._universe

    @property
    def atoms(self) -> tuple[str, ...]:
        return self._atoms

    def probability(self, event: Event) -> Fraction:
        """Exact probability of an event."""
        total = _ZERO
        for key, mass in self._table.items():
            if mass and event.evaluate(dict(zip(self._atoms, key))):
                total += mass
        return total

    def conditional_probability(self, event: Event, given: Event) -> Fraction:
        """Exact conditional probability; the condition must have positive mass."""
        denom = self.probability(given)
        if denom == 0:
            raise ValueError("conditioning event has probability zero")
        return self.probability(event & given) / denom

    def _sampler(self) -> tuple[list[float], list[dict[str, bool]]]:
        """Cumulative thresholds and outcomes, in fixed assignment order."""
        outcomes = []
        thresholds = []
        running = _ZERO
        for key, mass in self._table.items():
            outcomes.append(dict(zip(self._atoms, key)))
            running += mass
            thresholds.append(float(running))
        return thresholds[:-1], outcomes


@dataclass(frozen=True)
class SimEstimate:
    """Mean and spread of one simulation run."""

    mean: float
    trials: int
    indeterminate_count: int
    std_error: float

    @property
    def indeterminate_fraction(self) -> float:
        return self.indeterminate_count / self.trials


def simulate_conditional(
    dist: JointDistribution,
    antecedent: Event,
    consequent: Event,
    trials: int,
    max_len: int,
    seed: int,
) -> SimEstimate:
    """Estimate the conditional probability by first-success sampling.

    Each trial draws worlds independently until the antecedent holds and
    records whether the consequent holds there; trials truncated after
    ``max_len`` worlds are indeterminate and excluded from the mean.
    """
    _check_run_params(trials, max_len)
    if dist.probability(antecedent) == 0:
        raise ValueError("antecedent has probability zero")
    thresholds, outcomes = dist._sampler()
    ant = [antecedent.evaluate(w) for w in outcomes]
    values = [
        1.0 if consequent.evaluate(w) else 0.0 for w in outcomes
    ]
    rng = random.Random(seed)
    return _run(rng, thresholds, ant, values, trials, max_len)


def simulate_conjunction(
    dist: JointDistribution,
    first_antecedent: Event,
    first_consequent: Event,
    second_antecedent: Event,
    second_consequent: Event,
    trials: int,
    max_len: int,
    seed: int,
) -> SimEstimate:
    """Estimate the conjoined conditionals' prevision by sampling.

    Each trial draws worlds until either antecedent holds, then scores
    the usual case table there: 1 when both conditionals come true, 0
    when either is falsified, and the exact conditional probability of
    the voided conditional when only one is decided.
    """
    _check_run_params(trials, max_len)
    stop_event = first_antecedent | second_antecedent
    if dist.probability(stop_event) == 0:
        raise ValueError("the disjunction of the antecedents has probability zero")
    first_given = float(dist.conditional_probability(first_consequent, first_antecedent))
    second_given = float(dist.conditional_probability(second_consequent, second_antecedent))

    thresholds, outcomes = dist._sampler()
    stop = [stop_event.evaluate(w) for w in outcomes]
    values = []
    for w in outcomes:
        a, b = first_antecedent.evaluate(w), first_consequent.evaluate(w)
        c, d = second_antecedent.evaluate(w), second_consequent.evaluate(w)
        if (a and not b) or (c and not d):
            values.append(0.0)
        elif a and c:
            values.append(1.0)
        elif a:
            values.append(second_given)
        else:
            values.append(first_given)
    rng = random.Random(seed)
    return _run(rng, thresholds, stop, values, trials, max_len)


def conjunction_prevision(
    dist: JointDistribution,
    first_antecedent: Event,
    first_consequent: Event,
    second_antecedent: Event,
    second_consequent: Event,
) -> Fraction:
    """Exact prevision of the conjoined conditionals under ``dist``.

    Averages the case table over the worlds where either antecedent
    holds, with exact conditional probabilities filling the voided
    branches; the simulation estimates this number.
    """
    a, b = first_antecedent, first_consequent
    c, d = second_antecedent, second_consequent
    denom = dist.probability(a | c)
    if denom == 0:
        raise ValueError("the disjunction of the antecedents has probability zero")
    x = dist.conditional_probability(b, a)
    y = dist.conditional_probability(d, c)
    both = dist.probability(a & b & c & d)
    only_second = dist.probability(~a & c & d)
    only_first = dist.probability(a & b & ~c)
    return (both + x * only_second + y * only_first) / denom


def finite_n_fixed_point(p_antecedent: Rational, p_joint: Rational, n: int) -> Fraction:
    """Solve the truncated self-consistency equation for the conditional.

    Scoring the conditional over at most ``n`` repetitions pays its own
    price ``z`` on the still-undecided branch, so ``z`` satisfies
    ``z * (1 - q**n) = (p_joint / p_antecedent) * (1 - q**n)`` with ``q``
    the antecedent's failure probability.  The solution is independent of
    ``n``.
    """
    pa = Fraction(p_antecedent)
    pj = Fraction(p_joint)
    if not 0 < pa <= 1:
        raise ValueError("antecedent probability must lie in (0, 1]")
    if not _ZERO <= pj <= pa:
        raise ValueError("joint probability must lie in [0, p_antecedent]")
    if n < 1:
        raise ValueError("n must be at least 1")
    decided = _ONE - (_ONE - pa) ** n
    return (pj / pa) * decided / decided


def _check_run_params(trials: int, max_len: int) -> None:
    if trials < 1:
        raise ValueError("trials must be positive")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")


def _run(
    rng: random.Random,
    thresholds: list[float],
    stop: list[bool],
    values: list[float],
    trials: int,
    max_len: int,
) -> SimEstimate:
    recorded = []
    indeterminate = 0
    for _ in range(trials):
        for _ in range(max_len):
            i = bisect_right(thresholds, rng.random())
            if stop[i]:
                recorded.append(values[i])
                break
        else:
            indeterminate += 1
    if not recorded:
        raise ValueError("every trial was indeterminate; raise max_len")
    k = len(recorded)
    mean = math.fsum(recorded) / k
    if k > 1:
        variance = math.fsum((v - mean) ** 2 for v in recorded) / (k - 1)
        std_error = math.sqrt(variance / k)
    else:
        std_error = 0.0
    return SimEstimate(mean, trials, indeterminate, std_error)
