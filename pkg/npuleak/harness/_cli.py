# coding=utf-8
"""Command-line entry point: npuleak <command> [--config FILE] [--out DIR] [--seed N] [--models a,b]."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import argparse
import logging
import sys

# Local imports
from .._version import __version__
from ..exceptions import ExperimentError, NpuLeakError
from ._attack import cmd_attack, cmd_defend
from ._commands import cmd_report, cmd_simulate, cmd_tune
from ._config import load_config, write_resolved

COMMANDS = {
    "simulate": cmd_simulate,
    "tune": cmd_tune,
    "defend": cmd_defend,
    "attack": cmd_attack,
    "report": cmd_report,
}
LOG_NAME = "npuleak.log"
_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _get_logger():
    return logging.getLogger("npuleak.harness")


def build_parser():
    parser = argparse.ArgumentParser(prog="npuleak",
                                     description="Memory-bandwidth side channel experiments on a simulated NPU.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("command", choices=sorted(COMMANDS), help="Experiment stage to run.")
    parser.add_argument("--config", help="YAML experiment configuration; defaults apply to missing keys.")
    parser.add_argument("--out", help="Output directory (overrides the configuration).")
    parser.add_argument("--seed", type=int, help="Random seed (overrides the configuration).")
    parser.add_argument("--models", help="Comma-separated model names (overrides the configuration).")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug detail.")
    return parser


def configure_logging(out_dir, verbose=False):
    """Log to stderr and to npuleak.log in the output directory."""
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger("npuleak")
    root.setLevel(level)
    for handler in list(root.handlers):
        if not isinstance(handler, logging.NullHandler):
            root.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(_LOG_FORMAT)
    out_dir.mkdir(parents=True, exist_ok=True)
    for handler in (logging.StreamHandler(sys.stderr),
                    logging.FileHandler(str(out_dir.joinpath(LOG_NAME)), encoding="utf-8")):
        handler.setFormatter(formatter)
        handler.setLevel(level)
        root.addHandler(handler)


def main(argv=None):
    """Run one command; returns the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, seed=args.seed, models=args.models, out=args.out)
    except NpuLeakError as e:
        sys.stderr.write("npuleak: {0}\n".format(e))
        return 1
    except ValueError as e:
        sys.stderr.write("npuleak: invalid configuration: {0}\n".format(e))
        return 2

    configure_logging(cfg.out_dir, args.verbose)
    logger = _get_logger()
    write_resolved(cfg)
    logger.info("npuleak %s: %s into %s", __version__, args.command, cfg.out_dir)
    try:
        COMMANDS[args.command](cfg)
    except ExperimentError as e:
        logger.error("%s", e)
        for error in e.errors:
            logger.error("  %s", error)
        return 1
    except NpuLeakError as e:
        logger.error("%s", e)
        return 1
    except ValueError as e:
        logger.error("Invalid setting: %s", e)
        return 2
    logger.info("%s finished", args.command)
    return 0
