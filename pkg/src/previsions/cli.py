"""Command-line front end and the on-disk document formats.

Assessment documents are JSON: a list of atom names, a list of members
(an event expression or a cell-to-value map, the conditioning event,
and a prevision), and optionally compounds built from member pairs.
All rationals travel as strings, either "p/q" or a finite decimal, so
no binary floating point ever enters the persistence layer.  Reports
are JSON too, printed with sorted keys so identical inputs produce byte
identical output.

Exit codes: 0 coherent / success, 1 incoherent, 2 parse or validation
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from . import bounds, crq, simulate
from .coherence import (
    Assessment,
    CoherenceReport,
    IncoherentAssessmentError,
    check_coherence,
)
from .crq import CompoundConditional, ConditionalRandomQuantity
from .events import (
    DEFAULT_ATOM_LIMIT,
    AtomLimitError,
    EventSyntaxError,
    Universe,
    constituents,
)

ATOM_CAP_ENV = "PREVISIONS_ATOM_CAP"

_COMPOUND_BUILDERS = {
    "conjunction": crq.conjunction,
    "disjunction": crq.disjunction,
    "quasi-conjunction": lambda a, b: CompoundConditional(
        crq.QUASI_CONJUNCTION, (a, b), crq.quasi_conjunction(a, b)
    ),
}


class DocumentError(ValueError):
    """Anything wrong with an input document or command arguments."""


def parse_rational(text: Any) -> Fraction:
    """Parse "p/q" or a finite decimal string into an exact rational."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"malformed rational {text!r}") from None


def format_rational(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class MemberSpec:
    """One family member as written in a document."""

    quantity: str | dict[str, str]
    given: str
    prevision: Fraction


@dataclass(frozen=True)
class CompoundSpec:
    kind: str
    operands: tuple[int, int]
    prevision: Fraction | None


@dataclass(frozen=True)
class AssessmentDocument:
    """Parsed form of an input file, still textual on the event side."""

    atoms: tuple[str, ...]
    members: tuple[MemberSpec, ...]
    compounds: tuple[CompoundSpec, ...]

    @classmethod
    def from_payload(cls, payload: Any) -> "AssessmentDocument":
        if not isinstance(payload, Mapping):
            raise DocumentError("document must be a JSON object")
        atoms = payload.get("atoms", [])
        if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
            raise DocumentError("'atoms' must be a list of names")
        raw_members = payload.get("members")
        if not isinstance(raw_members, list) or not raw_members:
            raise DocumentError("'members' must be a nonempty list")
        members = []
        for i, entry in enumerate(raw_members):
            if not isinstance(entry, Mapping):
                raise DocumentError(f"member {i} must be an object")
            try:
                quantity = entry["quantity"]
                given = entry["given"]
                prevision = parse_rational(entry["prevision"])
            except KeyError as missing:
                raise DocumentError(f"member {i} is missing {missing}") from None
            if isinstance(quantity, Mapping):
                quantity = {
                    str(cell): format_rational(parse_rational(value))
                    for cell, value in quantity.items()
                }
                if not quantity:
                    raise DocumentError(f"member {i} has an empty value map")
            elif not isinstance(quantity, str):
                raise DocumentError(f"member {i} 'quantity' must be text or a map")
            if not isinstance(given, str):
                raise DocumentError(f"member {i} 'given' must be an expression")
            members.append(MemberSpec(quantity, given, prevision))
        compounds = []
        for i, entry in enumerate(payload.get("compounds", []) or []):
            if not isinstance(entry, Mapping):
                raise DocumentError(f"compound {i} must be an object")
            kind = entry.get("kind")
            if kind not in _COMPOUND_BUILDERS:
                raise DocumentError(
                    f"compound {i} kind must be one of {sorted(_COMPOUND_BUILDERS)}"
                )
            operands = entry.get("operands")
            if (
                not isinstance(operands, list)
                or len(operands) != 2
                or not all(isinstance(j, int) and not isinstance(j, bool) for j in operands)
            ):
                raise DocumentError(f"compound {i} 'operands' must be two member indices")
            lo, hi = operands
            if not (0 <= lo < len(members) and 0 <= hi < len(members)):
                raise DocumentError(f"compound {i} operand index out of range")
            prevision = entry.get("prevision")
            compounds.append(
                CompoundSpec(
                    kind,
                    (lo, hi),
                    None if prevision is None else parse_rational(prevision),
                )
            )
        return cls(tuple(atoms), tuple(members), tuple(compounds))

    @classmethod
    def load(cls, path: str) -> "AssessmentDocument":
        try:
            with open(path, encoding="utf-8") as handle:
                payload = json.load(handle)
        except OSError as exc:
            raise DocumentError(f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON in {path}: {exc}") from None
        return cls.from_payload(payload)


def _atom_cap() -> int:
    raw = os.environ.get(ATOM_CAP_ENV)
    if raw is None:
        return DEFAULT_ATOM_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise DocumentError(f"{ATOM_CAP_ENV} must be an integer, got {raw!r}") from None


def realize(document: AssessmentDocument) -> tuple[Universe, list[ConditionalRandomQuantity]]:
    """Build the universe and the member quantities of a document."""
    universe = Universe(atom_limit=_atom_cap())
    try:
        for name in document.atoms:
            universe.atom(name)
        members = []
        for i, spec in enumerate(document.members):
            try:
                given = universe.parse(spec.given)
                if isinstance(spec.quantity, str):
                    member = crq.conditional_event(
                        universe.parse(spec.quantity), given, spec.prevision
                    )
                else:
                    cells = [
                        (universe.parse(cell), parse_rational(value))
                        for cell, value in spec.quantity.items()
                    ]
                    member = ConditionalRandomQuantity(given, cells, spec.prevision)
            except (EventSyntaxError, ValueError) as exc:
                raise DocumentError(f"member {i}: {exc}") from None
            members.append(member)
    except AtomLimitError as exc:
        raise DocumentError(str(exc)) from None
    return universe, members


def build_compound(
    members: Sequence[ConditionalRandomQuantity], spec: CompoundSpec
) -> CompoundConditional:
    i, j = spec.operands
    compound = _COMPOUND_BUILDERS[spec.kind](members[i], members[j])
    if spec.prevision is not None:
        compound = compound.with_prevision(spec.prevision)
    return compound


@dataclass(frozen=True)
class TraceLevelDocument:
    members: tuple[int, ...]
    solvable: bool
    zero_mass: tuple[int, ...]
    witness: tuple[Fraction, ...] | None
    masses: tuple[Fraction, ...] | None


@dataclass(frozen=True)
class IntervalDocument:
    lower: Fraction
    upper: Fraction
    endpoints_verified: bool


@dataclass(frozen=True)
class DutchBookDocument:
    members: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    gains: tuple[Fraction, ...]


@dataclass(frozen=True)
class ReportDocument:
    """Serializable mirror of a coherence report plus optional interval."""

    verdict: str
    trace: tuple[TraceLevelDocument, ...] = ()
    dutch_book: DutchBookDocument | None = None
    interval: IntervalDocument | None = None
    diagnostics: tuple[str, ...] = ()

    @classmethod
    def from_report(
        cls,
        report: CoherenceReport,
        interval: IntervalDocument | None = None,
        diagnostics: Sequence[str] = (),
    ) -> "ReportDocument":
        trace = tuple(
            TraceLevelDocument(
                level.members, level.solvable, level.zero_mass, level.witness, level.masses
            )
            for level in report.levels
        )
        book = None
        if report.dutch_book is not None:
            book = DutchBookDocument(
                report.dutch_book.members,
                report.dutch_book.coefficients,
                report.dutch_book.gains,
            )
        verdict = "coherent" if report.coherent else "incoherent"
        return cls(verdict, trace, book, interval, tuple(diagnostics))

    def to_payload(self) -> dict[str, Any]:
        def rationals(values):
            return None if values is None else [format_rational(v) for v in values]

        payload: dict[str, Any] = {
            "verdict": self.verdict,
            "trace": [
                {
                    "members": list(level.members),
                    "solvable": level.solvable,
                    "zero_mass": list(level.zero_mass),
                    "witness": rationals(level.witness),
                    "masses": rationals(level.masses),
                }
                for level in self.trace
            ],
            "dutch_book": None,
            "interval": None,
            "diagnostics": list(self.diagnostics),
        }
        if self.dutch_book is not None:
            payload["dutch_book"] = {
                "members": list(self.dutch_book.members),
                "coefficients": rationals(self.dutch_book.coefficients),
                "gains": rationals(self.dutch_book.gains),
            }
        if self.interval is not None:
            payload["interval"] = {
                "lower": format_rational(self.interval.lower),
                "upper": format_rational(self.interval.upper),
                "endpoints_verified": self.interval.endpoints_verified,
            }
        return payload

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any]) -> "ReportDocument":
        def rationals(values):
            return None if values is None else tuple(parse_rational(v) for v in values)

        trace = tuple(
            TraceLevelDocument(
                tuple(level["members"]),
                bool(level["solvable"]),
                tuple(level["zero_mass"]),
                rationals(level["witness"]),
                rationals(level["masses"]),
            )
            for level in payload.get("trace", [])
        )
        book = None
        raw_book = payload.get("dutch_book")
        if raw_book is not None:
            book = DutchBookDocument(
                tuple(raw_book["members"]),
                rationals(raw_book["coefficients"]),
                rationals(raw_book["gains"]),
            )
        interval = None
        raw_interval = payload.get("interval")
        if raw_interval is not None:
            interval = IntervalDocument(
                parse_rational(raw_interval["lower"]),
                parse_rational(raw_interval["upper"]),
                bool(raw_interval["endpoints_verified"]),
            )
        return cls(
            payload["verdict"],
            trace,
            book,
            interval,
            tuple(payload.get("diagnostics", [])),
        )


def _emit(payload: Mapping[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_check(args: argparse.Namespace) -> int:
    document = AssessmentDocument.load(args.file)
    _, members = realize(document)
    base = Assessment(members)
    report = check_coherence(base)
    if report.coherent and document.compounds:
        # Any member pair of a coherent assessment is coherent, so the
        # compound constructors cannot be refused previsions here.
        family = list(members)
        for spec in document.compounds:
            if spec.prevision is None:
                raise DocumentError("compounds need previsions for checking")
            family.append(build_compound(members, spec))
        report = check_coherence(Assessment(family))
    _emit(ReportDocument.from_report(report).to_payload())
    return 0 if report.coherent else 1


def cmd_extend(args: argparse.Namespace) -> int:
    document = AssessmentDocument.load(args.file)
    _, members = realize(document)
    base = Assessment(members)
    report = check_coherence(base)
    if not report.coherent:
        _emit(
            ReportDocument.from_report(
                report, diagnostics=("base assessment is incoherent",)
            ).to_payload()
        )
        return 1
    spec = _parse_target(args.target, len(members))
    target = build_compound(members, spec)
    interval = bounds.extension_interval(base, target)
    _emit(
        ReportDocument.from_report(
            report,
            interval=IntervalDocument(interval.lower, interval.upper, interval.attained),
        ).to_payload()
    )
    return 0


def cmd_conjoin(args: argparse.Namespace) -> int:
    document = AssessmentDocument.load(args.file)
    _, members = realize(document)
    for index in (args.i, args.j):
        if not 0 <= index < len(members):
            raise DocumentError(f"member index {index} out of range")
    try:
        compound = crq.conjunction(members[args.i], members[args.j])
    except IncoherentAssessmentError:
        _emit({"verdict": "incoherent", "detail": "operand previsions are incoherent"})
        return 1
    payload = {
        "kind": compound.kind,
        "operands": [args.i, args.j],
        "given": compound.realized.conditioning.to_text(),
        "cases": [
            {"on": event.to_text(), "value": format_rational(value)}
            for event, value in compound.realized.cells
        ],
    }
    _emit(payload)
    return 0


def cmd_constituents(args: argparse.Namespace) -> int:
    document = AssessmentDocument.load(args.file)
    _, members = realize(document)
    partition = constituents(
        [([e for e, _ in m.cells], m.conditioning) for m in members]
    )

    def block_payload(block):
        return {
            "labels": list(block.labels),
            "assignments": [
                dict(zip(partition.atoms, bits)) for bits in block.assignments
            ],
        }

    payload = {
        "atoms": list(partition.atoms),
        "outside": None if partition.outside is None else block_payload(partition.outside),
        "inside": [block_payload(b) for b in partition.inside],
    }
    _emit(payload)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    pa = parse_rational(args.pa)
    pac = parse_rational(args.pac)
    if not 0 < pa <= 1:
        raise DocumentError("--pa must lie in (0, 1]")
    if not 0 <= pac <= pa:
        raise DocumentError("--pac must lie in [0, --pa]")
    if args.trials < 1:
        raise DocumentError("--trials must be positive")
    if args.max_len < 1:
        raise DocumentError("--max-len must be at least 1")
    universe = Universe(atom_limit=_atom_cap())
    antecedent = universe.atom("A")
    consequent = universe.atom("C")
    # Complete the joint by making the consequent independent of the
    # antecedent; the target P(C|A) = pac/pa does not depend on the choice.
    dist = simulate.JointDistribution.independent(
        universe, {"A": pa, "C": pac / pa}
    )
    estimate = simulate.simulate_conditional(
        dist, antecedent, consequent, args.trials, args.max_len, args.seed
    )
    _emit(
        {
            "mean": estimate.mean,
            "std_error": estimate.std_error,
            "indeterminate_fraction": estimate.indeterminate_fraction,
            "trials": estimate.trials,
            "exact": format_rational(pac / pa),
            "seed": args.seed,
        }
    )
    return 0


def _parse_target(text: str, member_count: int) -> CompoundSpec:
    kind, sep, rest = text.partition(":")
    if not sep or kind not in _COMPOUND_BUILDERS:
        raise DocumentError(
            "--target must look like 'conjunction:0,1' with kind one of "
            f"{sorted(_COMPOUND_BUILDERS)}"
        )
    parts = rest.split(",")
    if len(parts) != 2:
        raise DocumentError("--target needs exactly two member indices")
    try:
        i, j = (int(p) for p in parts)
    except ValueError:
        raise DocumentError("--target indices must be integers") from None
    if not (0 <= i < member_count and 0 <= j < member_count):
        raise DocumentError("--target member index out of range")
    return CompoundSpec(kind, (i, j), None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="previsions",
        description="Coherence checking and extension bounds for conditional "
        "prevision assessments.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    check = subparsers.add_parser("check", help="check a document for coherence")
    check.add_argument("file")
    check.set_defaults(func=cmd_check)

    extend = subparsers.add_parser(
        "extend", help="coherent prevision interval for a compound target"
    )
    extend.add_argument("file")
    extend.add_argument("--target", required=True, metavar="KIND:I,J")
    extend.set_defaults(func=cmd_extend)

    conjoin = subparsers.add_parser(
        "conjoin", help="realize the conjunction of two members"
    )
    conjoin.add_argument("file")
    conjoin.add_argument("--i", type=int, required=True)
    conjoin.add_argument("--j", type=int, required=True)
    conjoin.set_defaults(func=cmd_conjoin)

    consts = subparsers.add_parser(
        "constituents", help="list the constituents generated by the members"
    )
    consts.add_argument("file")
    consts.set_defaults(func=cmd_constituents)

    sim = subparsers.add_parser(
        "simulate", help="first-success estimate of a conditional probability"
    )
    sim.add_argument("--pa", required=True, help="antecedent probability")
    sim.add_argument("--pac", required=True, help="joint probability")
    sim.add_argument("--trials", type=int, default=100_000)
    sim.add_argument("--max-len", type=int, default=40, dest="max_len")
    sim.add_argument("--seed", type=int, required=True)
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, ValueError) as exc:
        # Validation failures, wherever they surface, are exit code 2;
        # only 0 (coherent), 1 (incoherent) and 2 (error) ever escape.
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
