"""Advbench CLI definitions."""

import logging
import sys
from dataclasses import dataclass

import click
import numpy as np
import typer
from dataclasses_json import dataclass_json

from advbench.commands import bench, capacity, compare, configure, evaluate, report, train
from advbench.commands.utils.options import ConfigOption, OutOption, SeedOption, ignore_options
from advbench.core.errors import AdvbenchError
from advbench.core.log import get_module_logger, level_from_flags
from advbench.core.normalizer import AdvbenchResult

log = logging.getLogger(__name__)


@dataclass_json
@dataclass
class AdvbenchVersion:
    python: str
    numpy: str
    advbench: str


CONTEXT_SETTINGS = dict(help_option_names=["--help", "-h"])

app = typer.Typer(context_settings=CONTEXT_SETTINGS)
app.add_typer(configure.app, name="configure")
app.command("bench")(bench.bench)
app.command("train")(train.train)
app.command("eval")(evaluate.evaluate)
app.command("capacity")(capacity.capacity)
app.command("compare")(compare.compare)
app.command("report")(report.report)


CONFIG = configure.set_defaults()


@app.callback()
def main(
    warning: bool = CONFIG[configure.LOGGING_SECTION].getboolean("warning", fallback=True),
    verbose: bool = CONFIG[configure.LOGGING_SECTION].getboolean("verbose", fallback=False),
    debug: bool = CONFIG[configure.LOGGING_SECTION].getboolean("debug", fallback=False),
    trace: bool = CONFIG[configure.LOGGING_SECTION].getboolean("trace", fallback=False),
):
    """Adversarial benchmark for collision avoidance policies."""
    get_module_logger().setLevel(level_from_flags(warning, verbose, debug, trace))


@app.command()
def version(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """Advbench version information."""
    ignore_options("version", config=config, seed=seed, out=out)
    from advbench._version import __version__ as advbench_version

    return AdvbenchResult(
        raw_results=AdvbenchVersion(
            python=sys.version,
            numpy=np.__version__,
            advbench=advbench_version,
        ),
        service="version",
    )


def cli():
    """
    Run app as a cli command.
    """
    try:
        result = app(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except AdvbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
    except SystemExit as exc:
        sys.exit(exc.code)

    if isinstance(result, int):
        sys.exit(result)

    text = result.render()
    print(text, end="" if text.endswith("\n") else "\n")


if __name__ == "__main__":
    app()
