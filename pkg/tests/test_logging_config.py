"""
Tests for structured logging setup

Tests cover:
- Application context on every event
- One stderr handler on the root logger, level from the argument
- The processor chain handed to structlog
"""
import logging
import sys

import pytest
import structlog

from src.config import settings
from src.logging_config import add_app_context, configure_logging, get_logger


@pytest.fixture
def restore_logging():
    yield
    configure_logging("WARNING")


# ============================================================
# Test: Processors
# ============================================================

class TestProcessors:

    @pytest.mark.unit
    def test_app_context(self):
        event = add_app_context(None, "info", {"event": "mc_layer_solved"})
        assert event["app"] == "ainf-nerve"
        assert event["version"] == settings.app_version
        assert event["environment"] == settings.environment
        assert event["event"] == "mc_layer_solved"

    @pytest.mark.unit
    def test_chain_ends_in_formatter_wrapper(self, restore_logging):
        configure_logging("INFO", json_logs=True)
        processors = structlog.get_config()["processors"]
        assert structlog.contextvars.merge_contextvars in processors
        assert add_app_context in processors
        assert processors[-1] is structlog.stdlib.ProcessorFormatter.wrap_for_formatter


# ============================================================
# Test: Handlers
# ============================================================

class TestHandlers:

    @pytest.mark.unit
    def test_single_stderr_handler(self, restore_logging):
        configure_logging("debug")
        root = logging.getLogger()
        assert len(root.handlers) == 1
        assert root.handlers[0].stream is sys.stderr
        assert root.level == logging.DEBUG
        assert isinstance(root.handlers[0].formatter, structlog.stdlib.ProcessorFormatter)

    @pytest.mark.unit
    def test_named_logger(self):
        assert get_logger("src.nerve") is not None
        assert get_logger() is not None
