"""
Unit Tests - CLI Support
Settings, the exception → exit code mapping, parameter types and presenters.
Commands themselves are exercised end to end in tests/e2e/test_cli.py.
"""
import json
import logging
from fractions import Fraction

import click
import pytest

from cli.commands.options import FLOATS, FRACTION
from cli.dependencies.settings import Settings, get_settings
from cli.dependencies.use_case_factory import get_verify_system_use_case
from cli.middleware.error_handler import EXIT_USAGE, handle_exception
from cli.presenters import emit, tsv_text
from domain.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    EntityNotFoundError,
    NotAStoppingTimeError,
    ValidationError,
)
from infrastructure.persistence import SystemFileError, provenance, result_document


# ===========================================================================
# Helpers / Factories
# ===========================================================================

def error_body(capsys) -> dict:
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


# ===========================================================================
# Settings
# ===========================================================================

class TestSettings:
    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("BELLMAN_THREADS", "3")
        monkeypatch.setenv("BELLMAN_LOG_LEVEL", "info")
        settings = Settings.from_env()
        assert settings.threads == 3
        assert settings.level == logging.INFO

    def test_zero_threads_means_cpu_count(self, monkeypatch):
        monkeypatch.setenv("BELLMAN_THREADS", "0")
        monkeypatch.delenv("BELLMAN_LOG_LEVEL", raising=False)
        settings = Settings.from_env()
        assert settings.threads >= 1
        assert settings.log_level == "WARNING"

    @pytest.mark.parametrize("raw", ["many", "-2"])
    def test_bad_thread_count(self, monkeypatch, raw):
        monkeypatch.setenv("BELLMAN_THREADS", raw)
        with pytest.raises(ConfigurationError) as exc:
            Settings.from_env()
        assert exc.value.field == "BELLMAN_THREADS"

    def test_bad_log_level(self, monkeypatch):
        monkeypatch.setenv("BELLMAN_THREADS", "1")
        monkeypatch.setenv("BELLMAN_LOG_LEVEL", "chatty")
        with pytest.raises(ConfigurationError):
            Settings.from_env()

    def test_flags_override_environment(self):
        settings = Settings(threads=4).override(threads=2, log_level="debug")
        assert settings.threads == 2
        assert settings.log_level == "DEBUG"
        assert Settings(threads=4).override().threads == 4

    def test_override_validates(self):
        with pytest.raises(ConfigurationError):
            Settings(threads=4).override(threads=0)

    def test_get_settings_is_cached(self, monkeypatch):
        monkeypatch.setenv("BELLMAN_THREADS", "2")
        get_settings.cache_clear()
        try:
            assert get_settings() is get_settings()
            assert get_settings().threads == 2
        finally:
            get_settings.cache_clear()

    def test_factory_wires_use_case(self):
        use_case = get_verify_system_use_case(Settings(threads=1))
        assert use_case is not None


# ===========================================================================
# Error handler
# ===========================================================================

class TestHandleException:
    def test_system_file_error_carries_position(self, capsys):
        code = handle_exception(SystemFileError("Expecting value", line=3, column=4))
        body = error_body(capsys)
        assert code == EXIT_USAGE
        assert body["error_code"] == "SYSTEM_FILE_ERROR"
        assert (body["line"], body["column"]) == (3, 4)

    def test_configuration_error(self, capsys):
        assert handle_exception(ConfigurationError("dt", "too coarse")) == 1
        body = error_body(capsys)
        assert body["error_code"] == "CONFIGURATION_ERROR"
        assert body["validation_errors"][0]["field"] == "dt"

    def test_validation_error(self, capsys):
        handle_exception(ValidationError("weights", "must sum to 1"))
        assert error_body(capsys)["error_code"] == "VALIDATION_ERROR"

    def test_stopping_time_precondition(self, capsys):
        assert handle_exception(NotAStoppingTimeError("sigma_at", "S", 1)) == 1
        body = error_body(capsys)
        assert body["error_code"] == "PRECONDITION_VIOLATION"
        assert body["rule"] == "stopping-time"

    def test_entity_not_found(self, capsys):
        handle_exception(EntityNotFoundError("Control", "c*"))
        body = error_body(capsys)
        assert body["identifier"] == "c*"

    def test_dimension_mismatch(self, capsys):
        handle_exception(DimensionMismatchError("measure", 4, 3))
        assert error_body(capsys)["expected"] == 4

    def test_click_usage_error(self, capsys):
        assert handle_exception(click.UsageError("no such option")) == 1
        assert error_body(capsys)["error_code"] == "USAGE_ERROR"

    def test_unexpected_exception(self, capsys):
        assert handle_exception(RuntimeError("boom")) == 1
        body = error_body(capsys)
        assert body["error_code"] == "INTERNAL_ERROR"
        assert "RuntimeError" in body["details"]
        assert body["correlation_id"]


# ===========================================================================
# Parameter types and presenters
# ===========================================================================

class TestParamTypes:
    @pytest.mark.parametrize("raw, expected", [("1/6", Fraction(1, 6)), ("2", Fraction(2)), ("0.25", Fraction(1, 4))])
    def test_fraction(self, raw, expected):
        assert FRACTION.convert(raw, None, None) == expected

    @pytest.mark.parametrize("raw", ["x", "1/0"])
    def test_fraction_rejects(self, raw):
        with pytest.raises(click.BadParameter):
            FRACTION.convert(raw, None, None)

    def test_floats(self):
        assert FLOATS.convert("0.2, 0.1,0.05", None, None) == [0.2, 0.1, 0.05]
        with pytest.raises(click.BadParameter):
            FLOATS.convert("0.2,a", None, None)


class TestPresenters:
    def test_tsv_formats_cells(self):
        text = tsv_text(["eps", "mean", "passed"], [(0.1, 1 / 3, True), (0.05, float("nan"), False)])
        lines = text.splitlines()
        assert lines[0] == "eps\tmean\tpassed"
        assert lines[1] == "0.1\t0.333333\tpass"
        assert lines[2] == "0.05\tnan\tFAIL"

    def test_emit_tsv_to_file(self, tmp_path):
        target = tmp_path / "table.tsv"
        document = result_document("mc-poisson", provenance(seed=1), True, {"rows": []})
        emit(document, fmt="tsv", out=str(target), columns=["a", "b"], rows=[(1, None)])
        assert target.read_text() == "a\tb\n1\t\n"

    def test_emit_json_to_file(self, tmp_path):
        target = tmp_path / "report.json"
        emit(result_document("galmarino", provenance(seed=0), False, {"violations": 0}), out=str(target))
        assert json.loads(target.read_text())["passed"] is False
