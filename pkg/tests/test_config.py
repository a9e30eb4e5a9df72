import logging
from fractions import Fraction

import pytest

from dualcx.core import logging_setup
from dualcx.core.config import Config
from dualcx.core.exceptions import CertificationError
from dualcx.core.logging_setup import CellNoiseFilter, setup_logging
from dualcx.utils import format_cell, format_fraction, parse_fraction, parse_label_list


def test_default_config_is_valid():
    assert Config.validate() == []


def test_invalid_config_is_reported(monkeypatch):
    monkeypatch.setattr(Config, "SAMPLE_SIZE", 0)
    monkeypatch.setattr(Config, "LOG_LEVEL", "LOUD")
    errors = Config.validate()
    assert len(errors) == 2
    assert any("DUALCX_SAMPLE_SIZE" in e for e in errors)


def test_debug_modules_must_be_dualcx_loggers(monkeypatch):
    monkeypatch.setattr(Config, "DEBUG_MODULES", ["sympy"])
    assert Config.validate() == ["DUALCX_DEBUG_MODULES names a logger outside dualcx: 'sympy'"]


class _Collect(logging.Handler):
    def __init__(self):
        super().__init__()
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def _emit_through(name, root_level):
    root = logging.getLogger()
    saved = root.level
    collect = _Collect()
    collect.addFilter(CellNoiseFilter())
    module_logger = logging.getLogger(name)
    module_logger.setLevel(logging.DEBUG)
    module_logger.propagate = False
    module_logger.addHandler(collect)
    root.setLevel(root_level)
    try:
        module_logger.debug("Cell {a,b} has a disconnected link")
        module_logger.debug("Subdivision round 1")
        module_logger.warning("Cell {a} is odd")
    finally:
        root.setLevel(saved)
        module_logger.removeHandler(collect)
        module_logger.setLevel(logging.NOTSET)
        module_logger.propagate = True
    return collect.messages


def test_cell_noise_filter_on_debug_module():
    assert _emit_through("dualcx.cells_quiet", logging.INFO) == ["Subdivision round 1", "Cell {a} is odd"]


def test_cell_noise_filter_passes_everything_at_debug():
    assert len(_emit_through("dualcx.cells_loud", logging.DEBUG)) == 3


def test_cell_noise_filter_ignores_other_loggers():
    assert len(_emit_through("elsewhere.cells", logging.INFO)) == 3


def test_debug_modules_are_enabled(monkeypatch):
    monkeypatch.setattr(Config, "DEBUG_MODULES", ["dualcx.surgery"])
    saved = logging.getLogger().level
    try:
        setup_logging("WARNING")
        assert logging.getLogger("dualcx.surgery").level == logging.DEBUG
    finally:
        logging.getLogger("dualcx.surgery").setLevel(logging.NOTSET)
        logging.getLogger().setLevel(saved)


def test_file_handler_is_opened_once(monkeypatch, tmp_path):
    target = tmp_path / "dualcx.log"
    monkeypatch.setattr(Config, "LOG_FILE", str(target))
    monkeypatch.setattr(logging_setup, "_configured", True)
    handlers = list(logging.getLogger().handlers)
    saved = logging.getLogger().level
    try:
        setup_logging("WARNING")
    finally:
        logging.getLogger().setLevel(saved)
    assert logging.getLogger().handlers == handlers
    assert not target.exists()


def test_certification_error_carries_witness():
    error = CertificationError("stratum is wrong", witness=["a", "b"])
    assert error.witness == ["a", "b"]
    assert str(error) == "stratum is wrong (witness: ['a', 'b'])"


def test_format_helpers():
    assert format_cell(("b", "a")) == "{a,b}"
    assert format_fraction(Fraction(3, 6)) == "1/2"
    assert format_fraction(Fraction(4)) == "4"
    assert parse_fraction(" -2/4 ") == Fraction(-1, 2)
    assert parse_label_list("a, b,,c ") == ["a", "b", "c"]
    with pytest.raises(ValueError):
        parse_fraction("1/0")
