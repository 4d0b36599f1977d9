"""Conditional random quantities and compounds of two conditional events.

A conditional random quantity is the amount received in a conditional
bet: a finite quantity restricted to a conditioning event, together
with an optional agreed price (the prevision).  Once the prevision
``mu`` is attached, the bet pays the quantity when the conditioning
event is true and gives ``mu`` back when it is false, so the whole
object behaves like the unconditional amount ``quantity*H + mu*(1-H)``.
Conditional events are the {0,1}-valued special case, with the assessed
probability playing the role of the third value.

The compound constructions (conjunction, its negation, disjunction,
quasi conjunction, iterated conditioning) are built as exact value maps
over the joint constituents.  Apart from the quasi conjunction they are
generally *random quantities* rather than events: their values include
the operand previsions themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .events import Assignment, Event, assignments, constituents

_ZERO = Fraction(0)
_ONE = Fraction(1)

Rational = Fraction | int | str

CONJUNCTION = "conjunction"
NEGATED_CONJUNCTION = "negation-of-conjunction"
DISJUNCTION = "disjunction"
QUASI_CONJUNCTION = "quasi-conjunction"


class ImpossibleConditioningError(ValueError):
    """Conditioning on the impossible event is meaningless."""


class ConditionalRandomQuantity:
    """A finite quantity restricted to a conditioning event.

    ``cells`` is a sequence of ``(event, value)`` pairs whose events
    partition the conditioning event; cells that are empty inside the
    conditioning event are dropped.  ``prevision`` is the optional agreed
    price, which also serves as the value taken when the conditioning
    event is false.  Instances are immutable.
    """

    __slots__ = ("_conditioning", "_cells", "_prevision")

    def __init__(
        self,
        conditioning: Event,
        cells: Iterable[tuple[Event, Rational]],
        prevision: Rational | None = None,
    ):
        if conditioning.is_impossible():
            raise ImpossibleConditioningError("conditioning event is impossible")
        staged = [(event, Fraction(value)) for event, value in cells]
        universe = conditioning.universe
        names: set[str] = set(conditioning.atoms)
        for event, _ in staged:
            if event.universe is not universe:
                raise ValueError("cells and conditioning use different universes")
            names |= event.atoms
        ordered = tuple(a for a in universe.atoms if a in names)

        seen = [False] * len(staged)
        for assignment in assignments(ordered):
            if not conditioning.evaluate(assignment):
                continue
            hits = [j for j, (event, _) in enumerate(staged) if event.evaluate(assignment)]
            if len(hits) != 1:
                raise ValueError("cells must partition the conditioning event")
            seen[hits[0]] = True

        self._conditioning = conditioning
        self._cells = tuple(cell for cell, used in zip(staged, seen) if used)
        self._prevision = None if prevision is None else Fraction(prevision)

    @property
    def conditioning(self) -> Event:
        return self._conditioning

    @property
    def cells(self) -> tuple[tuple[Event, Fraction], ...]:
        return self._cells

    @property
    def prevision(self) -> Fraction | None:
        return self._prevision

    @property
    def universe(self):
        return self._conditioning.universe

    @property
    def restricted_values(self) -> tuple[Fraction, ...]:
        """Values attainable while the conditioning event is true."""
        return tuple(value for _, value in self._cells)

    @property
    def is_event(self) -> bool:
        """True when the quantity is (the indicator of) a conditional event."""
        return all(value in (_ZERO, _ONE) for value in self.restricted_values)

    def with_prevision(self, prevision: Rational) -> "ConditionalRandomQuantity":
        """A copy with the prevision slot (re)filled."""
        return ConditionalRandomQuantity(self._conditioning, self._cells, prevision)

    def value_at(self, assignment: Assignment) -> Fraction:
        """The amount received at a total truth assignment.

        Outside the conditioning event this is the prevision, which must
        have been set.
        """
        if self._conditioning.evaluate(assignment):
            for event, value in self._cells:
                if event.evaluate(assignment):
                    return value
            raise AssertionError("cells do not cover the conditioning event")
        if self._prevision is None:
            raise ValueError("prevision is not set")
        return self._prevision

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        parts = ", ".join(f"{e.to_text()}: {v}" for e, v in self._cells)
        return (
            f"ConditionalRandomQuantity({{{parts}}} | {self._conditioning.to_text()},"
            f" prevision={self._prevision})"
        )


@dataclass(frozen=True)
class CompoundConditional:
    """A compound of two conditional events, realized as a value map.

    ``operands`` keeps the two conditional events with their assessed
    previsions (needed to fill the voided branches of the realized map);
    ``realized`` is the resulting quantity, conditioned on the disjunction
    of the operand conditioning events.
    """

    kind: str
    operands: tuple[ConditionalRandomQuantity, ConditionalRandomQuantity]
    realized: ConditionalRandomQuantity

    @property
    def x(self) -> Fraction:
        """Prevision assessed on the first operand."""
        return self.operands[0].prevision

    @property
    def y(self) -> Fraction:
        """Prevision assessed on the second operand."""
        return self.operands[1].prevision

    @property
    def prevision(self) -> Fraction | None:
        return self.realized.prevision

    def with_prevision(self, prevision: Rational) -> "CompoundConditional":
        return CompoundConditional(self.kind, self.operands, self.realized.with_prevision(prevision))


def conditional_event(
    event: Event, conditioning: Event, prevision: Rational | None = None
) -> ConditionalRandomQuantity:
    """The indicator of ``event`` given ``conditioning``: 1 where both hold,
    0 where the conditioning holds without the event."""
    cells = [(event & conditioning, _ONE), (~event & conditioning, _ZERO)]
    return ConditionalRandomQuantity(conditioning, cells, prevision)


def scale(factor: Rational, quantity: ConditionalRandomQuantity) -> ConditionalRandomQuantity:
    """Multiply values (and the prevision, when set) by a constant."""
    factor = Fraction(factor)
    cells = [(event, factor * value) for event, value in quantity.cells]
    prevision = None if quantity.prevision is None else factor * quantity.prevision
    return ConditionalRandomQuantity(quantity.conditioning, cells, prevision)


def add(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> ConditionalRandomQuantity:
    """Pointwise sum, conditioned on the disjunction of the conditionings.

    Each operand contributes its prevision where its own conditioning
    event fails, so both previsions must be set.  The result's prevision
    is the sum of the previsions, as coherence demands.
    """
    if first.prevision is None or second.prevision is None:
        raise ValueError("both previsions must be set to add conditional quantities")
    partition = constituents(
        [
            ([e for e, _ in first.cells], first.conditioning),
            ([e for e, _ in second.cells], second.conditioning),
        ]
    )
    cells = []
    for block in partition.inside:
        a_label, b_label = block.labels
        a_value = first.prevision if a_label is None else first.cells[a_label][1]
        b_value = second.prevision if b_label is None else second.cells[b_label][1]
        cells.append((partition.region(block), a_value + b_value))
    return ConditionalRandomQuantity(
        first.conditioning | second.conditioning, cells, first.prevision + second.prevision
    )


def iterated(
    quantity: ConditionalRandomQuantity, new_condition: Event
) -> ConditionalRandomQuantity:
    """Condition the filled-in quantity on a new event.

    The operand's prevision must be set; the result takes the operand's
    values where the old conditioning holds and the operand's prevision
    elsewhere inside the new conditioning event.  When the old
    conditioning implies the new one, the result coincides with the
    operand as a value map.
    """
    if quantity.prevision is None:
        raise ValueError("prevision must be set before iterating the conditioning")
    if new_condition.is_impossible():
        raise ImpossibleConditioningError("conditioning event is impossible")
    old = quantity.conditioning
    cells = [(event & old & new_condition, value) for event, value in quantity.cells]
    cells.append((~old & new_condition, quantity.prevision))
    return ConditionalRandomQuantity(new_condition, cells)


def values_agree_on_union(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> bool:
    """True when both quantities pay the same amount at every assignment
    where at least one conditioning event holds (previsions fill in where
    one quantity's own conditioning fails)."""
    union = first.conditioning | second.conditioning
    universe = union.universe
    names: set[str] = set(union.atoms)
    for source in (first, second):
        for event, _ in source.cells:
            names |= event.atoms
    ordered = tuple(a for a in universe.atoms if a in names)
    for assignment in assignments(ordered):
        if union.evaluate(assignment):
            if first.value_at(assignment) != second.value_at(assignment):
                return False
    return True


def gn_inclusion(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> bool:
    """Goodman-Nguyen inclusion order on conditional events.

    The first conditional event is included in the second when the first
    being true forces the second true, and the second being false forces
    the first false.
    """
    first_true, first_cond = _event_parts(first)
    second_true, second_cond = _event_parts(second)
    first_false = first_cond & ~first_true
    second_false = second_cond & ~second_true
    return first_true.implies(second_true) and second_false.implies(first_false)


def conjunction(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> CompoundConditional:
    """Conjunction of two conditional events as a conditional random quantity.

    Realized on the disjunction of the conditioning events with value 1
    where both events hold, 0 where either fails inside its conditioning,
    and the operand previsions where exactly one bet is void.  Equals the
    pointwise minimum (and the pointwise product) of the filled-in
    operands, restricted to the disjunction.  The operand assessment must
    be coherent.
    """
    (a_true, a_cond), (b_true, b_cond), (x, y) = _compound_operands(first, second)
    cells = [
        (a_true & b_true, _ONE),
        ((a_cond & ~a_true) | (b_cond & ~b_true), _ZERO),
        (~a_cond & b_true, x),
        (a_true & ~b_cond, y),
    ]
    realized = ConditionalRandomQuantity(a_cond | b_cond, cells)
    return CompoundConditional(CONJUNCTION, (first, second), realized)


def negate_conjunction(compound: CompoundConditional) -> CompoundConditional:
    """One minus the compound, pointwise; an involution."""
    if compound.kind not in (CONJUNCTION, NEGATED_CONJUNCTION):
        raise ValueError(f"cannot negate a compound of kind {compound.kind!r}")
    flipped = [(event, _ONE - value) for event, value in compound.realized.cells]
    prevision = compound.realized.prevision
    realized = ConditionalRandomQuantity(
        compound.realized.conditioning,
        flipped,
        None if prevision is None else _ONE - prevision,
    )
    kind = NEGATED_CONJUNCTION if compound.kind == CONJUNCTION else CONJUNCTION
    return CompoundConditional(kind, compound.operands, realized)


def disjunction(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> CompoundConditional:
    """Disjunction of two conditional events, via De Morgan duality.

    Realized on the disjunction of the conditioning events with value 1
    where either event holds inside its conditioning, 0 where both fail,
    and the operand previsions where exactly one bet is void.  The
    operand assessment must be coherent.
    """
    (a_true, a_cond), (b_true, b_cond), (x, y) = _compound_operands(first, second)
    a_false = a_cond & ~a_true
    b_false = b_cond & ~b_true
    cells = [
        (a_true | b_true, _ONE),
        (a_false & b_false, _ZERO),
        (~a_cond & b_false, x),
        (a_false & ~b_cond, y),
    ]
    realized = ConditionalRandomQuantity(a_cond | b_cond, cells)
    return CompoundConditional(DISJUNCTION, (first, second), realized)


def quasi_conjunction(
    first: ConditionalRandomQuantity, second: ConditionalRandomQuantity
) -> ConditionalRandomQuantity:
    """The three-valued conjunction: a genuine conditional event which is
    true when neither operand fails and at least one conditioning holds."""
    a_true, a_cond = _event_parts(first)
    b_true, b_cond = _event_parts(second)
    body = (a_true | ~a_cond) & (b_true | ~b_cond)
    return conditional_event(body, a_cond | b_cond)


def _event_parts(quantity: ConditionalRandomQuantity) -> tuple[Event, Event]:
    """Split a conditional event into (where it holds, its conditioning)."""
    if not quantity.is_event:
        raise ValueError("operand must be a conditional event (values in {0, 1})")
    conditioning = quantity.conditioning
    ones = None
    for event, value in quantity.cells:
        if value == _ONE:
            ones = event if ones is None else ones | event
    if ones is None:
        return conditioning.universe.false(), conditioning
    if not ones.implies(conditioning):
        ones = ones & conditioning
    return ones, conditioning


def _compound_operands(first, second):
    if first.prevision is None or second.prevision is None:
        raise ValueError("both operand previsions must be set")
    a = _event_parts(first)
    b = _event_parts(second)
    _require_coherent_operands(first, second)
    return a, b, (first.prevision, second.prevision)


def _require_coherent_operands(first, second) -> None:
    from . import coherence

    report = coherence.check_coherence(coherence.Assessment((first, second)))
    if not report.coherent:
        raise coherence.IncoherentAssessmentError(
            "operand previsions "
            f"({first.prevision}, {second.prevision}) are not coherent"
        )
