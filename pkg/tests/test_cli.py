import json
from fractions import Fraction as F

import pytest

from previsions.cli import (
    ATOM_CAP_ENV,
    AssessmentDocument,
    DocumentError,
    IntervalDocument,
    ReportDocument,
    TraceLevelDocument,
    main,
    parse_rational,
)


def write_doc(tmp_path, payload, name="assessment.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def coherent_pair_payload():
    return {
        "atoms": ["A", "H", "B", "K"],
        "members": [
            {"quantity": "A", "given": "H", "prevision": "7/10"},
            {"quantity": "B", "given": "K", "prevision": "0.6"},
        ],
    }


def incoherent_compound_payload():
    return {
        "atoms": ["A", "H", "B", "K"],
        "members": [
            {"quantity": "A", "given": "H", "prevision": "1/2"},
            {"quantity": "B", "given": "K", "prevision": "1/2"},
        ],
        "compounds": [
            {"kind": "conjunction", "operands": [0, 1], "prevision": "3/5"}
        ],
    }


class TestRationals:
    def test_fraction_and_decimal_forms(self):
        assert parse_rational("7/10") == F(7, 10)
        assert parse_rational("0.7") == F(7, 10)
        assert parse_rational("2") == F(2)

    def test_malformed(self):
        for bad in ("0.1.2", "1/0", "one half", None, 1.5):
            with pytest.raises(DocumentError):
                parse_rational(bad)


class TestCheckCommand:
    def test_coherent_document(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["check", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "coherent"
        assert payload["trace"][0]["solvable"] is True

    def test_incoherent_compound(self, tmp_path, capsys):
        path = write_doc(tmp_path, incoherent_compound_payload())
        assert main(["check", path]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "incoherent"
        gains = [F(g) for g in payload["dutch_book"]["gains"]]
        assert all(g < 0 for g in gains) or all(g > 0 for g in gains)

    def test_malformed_rational_is_validation_error(self, tmp_path, capsys):
        payload = coherent_pair_payload()
        payload["members"][0]["prevision"] = "0.1.2"
        path = write_doc(tmp_path, payload)
        assert main(["check", path]) == 2
        assert "malformed rational" in capsys.readouterr().err

    def test_event_syntax_error_carries_position(self, tmp_path, capsys):
        payload = coherent_pair_payload()
        payload["members"][0]["quantity"] = "A & ("
        path = write_doc(tmp_path, payload)
        assert main(["check", path]) == 2
        err = capsys.readouterr().err
        assert "member 0" in err and "position 5" in err

    def test_impossible_given_rejected(self, tmp_path, capsys):
        payload = coherent_pair_payload()
        payload["members"][0]["given"] = "H & ~H"
        path = write_doc(tmp_path, payload)
        assert main(["check", path]) == 2

    def test_missing_file(self, capsys):
        assert main(["check", "/nonexistent/file.json"]) == 2

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 2

    def test_value_map_member(self, tmp_path, capsys):
        payload = {
            "atoms": ["V", "H"],
            "members": [
                {
                    "quantity": {"V": "2", "~V": "0"},
                    "given": "H",
                    "prevision": "1/2",
                }
            ],
        }
        path = write_doc(tmp_path, payload)
        assert main(["check", path]) == 0

    def test_atom_cap_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(ATOM_CAP_ENV, "2")
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["check", path]) == 2
        assert "capped" in capsys.readouterr().err

    def test_determinism(self, tmp_path, capsys):
        path = write_doc(tmp_path, incoherent_compound_payload())
        main(["check", path])
        first = capsys.readouterr().out
        main(["check", path])
        second = capsys.readouterr().out
        assert first == second


class TestExtendCommand:
    def test_conjunction_target(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["extend", path, "--target", "conjunction:0,1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["interval"] == {
            "endpoints_verified": True,
            "lower": "3/10",
            "upper": "3/5",
        }

    def test_disjunction_target(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["extend", path, "--target", "disjunction:0,1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert (payload["interval"]["lower"], payload["interval"]["upper"]) == ("7/10", "1")

    def test_quasi_conjunction_target(self, tmp_path, capsys):
        payload = coherent_pair_payload()
        payload["members"][0]["prevision"] = "1/2"
        payload["members"][1]["prevision"] = "1/2"
        path = write_doc(tmp_path, payload)
        assert main(["extend", path, "--target", "quasi-conjunction:0,1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert (out["interval"]["lower"], out["interval"]["upper"]) == ("0", "2/3")

    def test_incoherent_base(self, tmp_path, capsys):
        payload = {
            "atoms": ["A"],
            "members": [
                {"quantity": "A", "given": "1", "prevision": "1/2"},
                {"quantity": "~A", "given": "1", "prevision": "3/5"},
            ],
        }
        path = write_doc(tmp_path, payload)
        assert main(["extend", path, "--target", "conjunction:0,1"]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "incoherent"

    def test_bad_target_spec(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["extend", path, "--target", "xor:0,1"]) == 2
        assert main(["extend", path, "--target", "conjunction:0"]) == 2
        assert main(["extend", path, "--target", "conjunction:0,9"]) == 2


class TestConjoinCommand:
    def test_case_table(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["conjoin", path, "--i", "0", "--j", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kind"] == "conjunction"
        values = sorted(case["value"] for case in payload["cases"])
        assert values == sorted(["1", "0", "7/10", "3/5"])

    def test_index_out_of_range(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["conjoin", path, "--i", "0", "--j", "7"]) == 2

    def test_incoherent_pair(self, tmp_path, capsys):
        payload = {
            "atoms": ["A"],
            "members": [
                {"quantity": "A", "given": "1", "prevision": "1/4"},
                {"quantity": "A", "given": "1", "prevision": "3/4"},
            ],
        }
        path = write_doc(tmp_path, payload)
        assert main(["conjoin", path, "--i", "0", "--j", "1"]) == 1


class TestConstituentsCommand:
    def test_two_member_family(self, tmp_path, capsys):
        path = write_doc(tmp_path, coherent_pair_payload())
        assert main(["constituents", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["atoms"] == ["A", "H", "B", "K"]
        assert len(payload["inside"]) == 8
        assert payload["outside"]["labels"] == [None, None]


class TestSimulateCommand:
    def test_reproducible_output(self, tmp_path, capsys):
        argv = ["simulate", "--pa", "1/2", "--pac", "1/4", "--trials", "2000", "--seed", "7"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        payload = json.loads(first)
        assert payload["exact"] == "1/2"
        assert abs(payload["mean"] - 0.5) <= 3 * payload["std_error"]

    def test_sure_antecedent(self, capsys):
        argv = ["simulate", "--pa", "1", "--pac", "1/3", "--trials", "2000", "--seed", "3"]
        assert main(argv) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["indeterminate_fraction"] == 0.0
        assert payload["exact"] == "1/3"

    def test_zero_antecedent_rejected(self, capsys):
        argv = ["simulate", "--pa", "0", "--pac", "0", "--trials", "10", "--seed", "1"]
        assert main(argv) == 2

    def test_joint_above_antecedent_rejected(self, capsys):
        argv = ["simulate", "--pa", "1/4", "--pac", "1/2", "--trials", "10", "--seed", "1"]
        assert main(argv) == 2


class TestReportRoundTrip:
    def test_lossless(self):
        doc = ReportDocument(
            verdict="coherent",
            trace=(
                TraceLevelDocument(
                    members=(0, 1),
                    solvable=True,
                    zero_mass=(1,),
                    witness=(F(1, 3), F(2, 3)),
                    masses=(F(1), F(0)),
                ),
                TraceLevelDocument(
                    members=(1,),
                    solvable=True,
                    zero_mass=(),
                    witness=(F(1),),
                    masses=(F(1),),
                ),
            ),
            interval=IntervalDocument(F(3, 10), F(3, 5), True),
        )
        payload = json.loads(json.dumps(doc.to_payload()))
        assert ReportDocument.from_payload(payload) == doc

    def test_document_parsing_round_trip(self, tmp_path):
        payload = incoherent_compound_payload()
        path = write_doc(tmp_path, payload)
        doc = AssessmentDocument.load(path)
        assert doc.atoms == ("A", "H", "B", "K")
        assert doc.members[1].prevision == F(1, 2)
        assert doc.compounds[0].kind == "conjunction"
        assert doc.compounds[0].operands == (0, 1)

    def test_schema_validation(self, tmp_path):
        for broken in (
            {"members": []},
            {"members": "nope"},
            {"members": [{"quantity": "A"}]},
            {"members": [{"quantity": "A", "given": "H", "prevision": "1/2"}],
             "compounds": [{"kind": "conjunction", "operands": [0]}]},
            {"members": [{"quantity": "A", "given": "H", "prevision": "1/2"}],
             "compounds": [{"kind": "nand", "operands": [0, 0]}]},
        ):
            with pytest.raises(DocumentError):
                AssessmentDocument.from_payload(broken)
