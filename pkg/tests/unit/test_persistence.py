"""
Unit Tests - Persistence
SystemFile codec, JsonSystemRepository, the report writer and the report
schemas the CLI validates against.
"""
import json

import pytest
from pydantic import ValidationError as SchemaError

from application.services.bellman_verifier import verify_bellman
from cli.schemas.report_schemas import BellmanReportDocument, ResultDocument, validate_document
from domain.exceptions import ValidationError
from infrastructure.persistence import (
    SystemFileError,
    bellman_report_document,
    decode_system,
    encode_system,
    provenance,
    render_json,
    result_document,
    write_document,
)
from infrastructure.persistence.repositories import digest_bytes
from tests.conftest import FIXTURES


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def minimal_document(**overrides) -> dict:
    document = {
        "format": "bellman-system",
        "schema_version": 1,
        "outcomes": ["w0", "w1"],
        "controls": [
            {
                "id": "c",
                "measure": ["1/2", "1/2"],
                "filtration": [[[0, 1]], [[0], [1]]],
                "payoff": ["1", "0"],
            }
        ],
        "control_times": [{"id": "1", "uniform": [1, 1]}],
        "classes": {"c": {"1": ["c"]}},
    }
    document.update(overrides)
    return document


def decode_dict(document: dict):
    return decode_system(json.dumps(document))


# ===========================================================================
# Decoding
# ===========================================================================

class TestDecode:
    def test_minimal_document_extends_times(self):
        decoded = decode_dict(minimal_document())
        assert decoded.system.time_ids == ("0", "1", "inf")
        assert decoded.system.class_of("c", "0") == frozenset({"c"})
        assert not decoded.derive_prefix

    def test_gamble_fixture_asks_for_prefix_classes(self):
        decoded = decode_system((FIXTURES / "gamble.sys.json").read_text())
        assert decoded.derive_prefix
        assert decoded.system.control_ids == ("safe", "risky")
        assert decoded.system.control("risky").path.rows == ((0, 1), (0, 1))

    def test_syntax_error_carries_line(self):
        with pytest.raises(SystemFileError) as exc:
            decode_system((FIXTURES / "malformed.sys.json").read_text())
        assert exc.value.line == 7
        assert exc.value.column is not None

    def test_float_fraction_is_schema_error(self):
        document = minimal_document()
        document["controls"][0]["measure"] = [0.5, 0.5]
        with pytest.raises(SystemFileError) as exc:
            decode_dict(document)
        assert exc.value.location == "controls.0.measure.0"

    def test_unparseable_fraction(self):
        document = minimal_document()
        document["controls"][0]["payoff"] = ["1/0", "0"]
        with pytest.raises(SystemFileError):
            decode_dict(document)

    def test_unknown_field_rejected(self):
        with pytest.raises(SystemFileError):
            decode_dict(minimal_document(colour="blue"))

    def test_classes_and_derive_are_exclusive(self):
        with pytest.raises(SystemFileError):
            decode_dict(minimal_document(derive="prefix"))

    def test_control_time_needs_one_form(self):
        times = [{"id": "1", "uniform": [1, 1], "times": {"c": [1, 1]}}]
        with pytest.raises(SystemFileError):
            decode_dict(minimal_document(control_times=times))

    def test_per_control_times(self):
        times = [{"id": "s", "times": {"c": [1, "inf"]}}]
        decoded = decode_dict(minimal_document(control_times=times, classes={"c": {"s": ["c"]}}))
        assert decoded.system.time_of("s", "c").values[1] == float("inf")

    def test_domain_errors_pass_through(self):
        document = minimal_document()
        document["controls"][0]["measure"] = ["1/2", "1/3"]
        with pytest.raises(ValidationError) as exc:
            decode_dict(document)
        assert exc.value.field == "weights"


# ===========================================================================
# Encoding and the repository
# ===========================================================================

class TestRepository:
    def test_saved_system_loads_back_equal(self, tmp_path, repository, box_picking):
        target = tmp_path / "box.sys.json"
        digest = repository.save(box_picking, target)
        snapshot = repository.load(str(target))
        assert snapshot.system == box_picking
        assert snapshot.digest == digest
        assert snapshot.source == str(target)

    def test_encoding_is_deterministic(self, box_picking):
        text = encode_system(box_picking)
        assert text == encode_system(box_picking)
        document = json.loads(text)
        assert document["extend"] is False
        assert document["controls"][0]["measure"] == ["1/6", "1/3", "1/3", "1/6"]

    def test_digest_format(self):
        digest = digest_bytes(b"{}")
        assert digest.startswith("sha256:")
        assert len(digest) == len("sha256:") + 64

    def test_missing_file(self, repository, tmp_path):
        with pytest.raises(SystemFileError):
            repository.load(str(tmp_path / "absent.sys.json"))

    def test_non_utf8_file(self, repository, tmp_path):
        target = tmp_path / "latin.sys.json"
        target.write_bytes(b"\xff\xfe{}")
        with pytest.raises(SystemFileError):
            repository.load(str(target))


# ===========================================================================
# Report writer and schemas
# ===========================================================================

class TestReportWriter:
    def test_bellman_document_matches_schema(self, gamble_system):
        origin = provenance(digest=digest_bytes(b"gamble"))
        document = bellman_report_document(verify_bellman(gamble_system), origin)
        model = validate_document(document)
        assert isinstance(model, BellmanReportDocument)
        assert document["solution"] == {"solved": True, "value": "1", "optimal_ids": ["risky"]}
        assert "generated_at" not in document["provenance"]

    def test_identical_inputs_render_identically(self, gamble_system):
        origin = provenance(digest=digest_bytes(b"gamble"))
        first = render_json(bellman_report_document(verify_bellman(gamble_system), origin))
        second = render_json(bellman_report_document(verify_bellman(gamble_system), origin))
        assert first == second
        assert first.endswith("\n")

    def test_failed_witness_is_serialized_exactly(self, box_picking_classical):
        document = bellman_report_document(verify_bellman(box_picking_classical), provenance())
        b1 = next(v for v in document["verdicts"] if v["name"] == "B1")
        assert b1["passed"] is False
        assert isinstance(b1["witness"]["lhs"], str)
        validate_document(document)

    def test_result_document_is_timestamped_on_request(self):
        document = result_document("mc-poisson", provenance(seed=7, timestamped=True), True, {"rows": []})
        model = validate_document(document)
        assert isinstance(model, ResultDocument)
        assert document["provenance"]["generated_at"]

    def test_write_document_to_file(self, tmp_path):
        target = tmp_path / "out.json"
        write_document(result_document("galmarino", provenance(seed=0), True, {}), target)
        assert json.loads(target.read_text())["kind"] == "galmarino"

    def test_schema_rejects_bad_digest(self):
        document = result_document("galmarino", {"tool": "bellman", "version": "1", "input_digest": "md5:x"},
                                   True, {})
        with pytest.raises(SchemaError):
            validate_document(document)

    def test_schema_rejects_float_value(self, gamble_system):
        document = bellman_report_document(verify_bellman(gamble_system), provenance())
        document["solution"]["value"] = 1.0
        with pytest.raises(SchemaError):
            validate_document(document)
