import logging

import witbench


def test_witbenchlogger_name():
    """Test that the witbench logger can compute a correct name for itself"""
    assert witbench.getLogger().name == "witbench"
    assert witbench.getLogger("").name == "witbench"
    assert witbench.getLogger("witbench.bounds").name == "witbench.bounds"
    assert witbench.getLogger("witbench.bounds.bounds").name == "witbench.bounds"
    assert witbench.getLogger("witbench.cli.cli.cli").name == "witbench.cli"
    assert (
        witbench.getLogger("witbench.bounds.bounds.minimize").name
        == "witbench.bounds.minimize"
    )
    assert witbench.getLogger("witbench.sim.adversarial").name == (
        "witbench.sim.adversarial"
    )


def test_default_logger_levels(capsys):
    """Verify that the intended usage of this logger have expected results"""

    # Modules should start with this:
    logger = witbench.getLogger("test_levels")

    logger.debug("This DEBUG is not to be seen")
    captured = capsys.readouterr()
    assert "DEBUG" not in captured.out
    assert "DEBUG" not in captured.err

    logger.info("This INFO is not to be seen by default")
    captured = capsys.readouterr()
    assert "INFO" not in captured.out
    assert "INFO" not in captured.err

    logger.warning("This WARNING is to be seen")
    captured = capsys.readouterr()
    assert "WARNING" in captured.out
    assert "WARNING" not in captured.err

    logger.error("This ERROR should only be in stderr")
    captured = capsys.readouterr()
    assert "ERROR" not in captured.out
    assert "ERROR" in captured.err


def test_handlers_added_once():
    logger = witbench.getLogger("test_handlers")
    assert witbench.getLogger("test_handlers") is logger
    assert len(logger.handlers) == 2


def test_verbose_mode(capsys):
    """--verbose means logging at INFO level"""
    logger = witbench.getLogger("test_verbose")
    logger.setLevel(logging.INFO)

    logger.info("This INFO is to be seen")
    captured = capsys.readouterr()
    assert "INFO" in captured.out


def test_debug_mode(capsys):
    """--debug means logging at DEBUG level"""
    logger = witbench.getLogger("test_debug")
    logger.setLevel(logging.DEBUG)

    logger.debug("This DEBUG is to be seen")
    captured = capsys.readouterr()
    assert "DEBUG" in captured.out
