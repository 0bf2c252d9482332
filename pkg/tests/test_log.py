import logging

import pytest

from advbench.core.log import (
    PACKAGE_LOGGER,
    TRACE_LOG_LEVEL,
    configure_worker_logging,
    get_module_logger,
    level_from_flags,
    package_level,
    tracing,
)


@pytest.fixture(autouse=True)
def restore_level():
    logger = logging.getLogger(PACKAGE_LOGGER)
    level = logger.level
    yield
    logger.setLevel(level)


class TestLevels:
    """Command line flags to log levels."""

    def test_most_detailed_flag_wins(self):
        assert level_from_flags(warning=True, verbose=True) == logging.INFO
        assert level_from_flags(debug=True, trace=True) == TRACE_LOG_LEVEL
        assert level_from_flags() == logging.WARNING
        assert level_from_flags(warning=False) == logging.ERROR

    def test_worker_logging(self):
        configure_worker_logging(logging.DEBUG)
        assert package_level() == logging.DEBUG
        assert len(get_module_logger().handlers) == 1


class TestTracing:
    """Entry and exit logging."""

    def test_passes_through(self):
        @tracing
        def double(x):
            return 2 * x

        assert double(4) == 8
        assert double.__name__ == "double"

    def test_logs_and_reraises(self, caplog, monkeypatch):
        monkeypatch.setattr(logging.getLogger(PACKAGE_LOGGER), "propagate", True)

        @tracing
        def broken():
            raise KeyError("lost")

        with caplog.at_level(logging.ERROR, logger="advbench.core.log"):
            with pytest.raises(KeyError):
                broken()
        assert "Exception raised in broken" in caplog.text
