# coding=utf-8
"""Experiment commands and the command-line entry point."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

from ._config import DEFAULTS, RESOLVED_CONFIG_NAME, ExperimentConfig, load_config, write_resolved
from ._context import (Attacker, GroundTruth, build_attacker, ground_truth, read_spans, spans_path, trace_path,
                       victim_schedule, write_spans)
from ._commands import cmd_report, cmd_simulate, cmd_tune
from ._attack import cmd_attack, cmd_defend
from ._cli import COMMANDS, build_parser, main
