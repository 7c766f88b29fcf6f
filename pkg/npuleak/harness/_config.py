# coding=utf-8
"""
Experiment configuration: a YAML mapping of the settings below. Missing keys take their defaults, unknown keys are
rejected, and the resolved settings are written next to every command's outputs.
"""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Standard library imports
import collections
import io

# Third-party imports
import yaml

from pathlib2 import Path

# Local imports
from .._atomic import atomic_open
from ..catalog import MODEL_NAMES
from ..detection import DetectorParams
from ..exceptions import CatalogError
from ..sim import NpuConfig

RESOLVED_CONFIG_NAME = "config.resolved.yaml"

#yapf: disable
DEFAULTS = collections.OrderedDict([
    ("models", list(MODEL_NAMES)),
    ("out", "npuleak-out"),
    ("seed", 0),
    ("workers", 1),
    ("npu", {"preset": "default"}),
    ("window_us", 4.0),
    ("noise", 0.0),
    ("victim_schedule", "reference"),
    # attacker
    ("win_len", 64),
    ("stride", 16),
    ("levels", 3),
    ("k", 16),
    ("context", 8),
    ("threshold_c", 3.0),
    ("mad_floor", 0.25),
    ("cap_quantile", 0.9),
    ("duration_tolerance", 16),
    ("bw_tolerance", 0.15),
    ("match_tolerance", 64),
    ("profile_configs_per_layer", 4),
    ("profile_db", None),
    # classification benchmark
    ("repeats", 20),
    ("class_noise", 0.05),
    ("test_size", 0.2),
    ("learners", ["svm", "mlp", "cnn"]),
    # defence
    ("shaper_targets", [1.0, 0.75, 0.5, 0.25, "mean"]),
    ("attack_target_fraction", 0.5),
    ("quantum_bytes", None),
    ("max_cycle_factor", 50),
    ("staging_bytes", None),
    # tile exploration
    ("explore_samples", 200),
])
#yapf: enable

_VICTIM_SCHEDULES = ("reference", "tuned")
_LEARNERS = ("svm", "mlp", "cnn")


class ExperimentConfig(collections.namedtuple("ExperimentConfig", list(DEFAULTS))):
    """Every setting of an experiment run; build with load_config or from_dict."""
    __slots__ = ()

    @classmethod
    def from_dict(cls, values):
        values = dict(values or {})
        unknown = sorted(set(values) - set(DEFAULTS))
        if unknown:
            raise ValueError("Unknown configuration keys: {0}".format(", ".join(unknown)))
        merged = collections.OrderedDict((key, values.get(key, default)) for key, default in DEFAULTS.items())
        cfg = cls(**merged)
        cfg.validate()
        return cfg

    def validate(self):
        unknown = [name for name in self.models if name not in MODEL_NAMES]
        if unknown:
            raise CatalogError("Unknown model(s): {0}; shipped models are {1}".format(
                ", ".join(unknown), ", ".join(MODEL_NAMES)))
        if not self.models:
            raise ValueError("At least one model is required")
        if self.victim_schedule not in _VICTIM_SCHEDULES:
            raise ValueError("victim_schedule must be one of {0}, got {1!r}".format(_VICTIM_SCHEDULES,
                                                                                   self.victim_schedule))
        bad = [name for name in self.learners if name not in _LEARNERS]
        if bad:
            raise ValueError("Unknown learner(s): {0}".format(", ".join(bad)))
        for target in self.shaper_targets:
            if target != "mean" and not (isinstance(target, (int, float)) and target > 0):
                raise ValueError("Shaper targets are positive fractions of the peak or 'mean', got {0!r}".format(
                    target))
        if not 0 < self.attack_target_fraction:
            raise ValueError("attack_target_fraction must be positive")
        if int(self.seed) != self.seed:
            raise ValueError("seed must be an integer, got {0!r}".format(self.seed))
        if self.explore_samples < 1 or self.repeats < 1 or self.workers < 1:
            raise ValueError("explore_samples, repeats and workers must be at least 1")
        self.npu_config()
        self.detector_params()

    def npu_config(self):
        return NpuConfig.from_dict(self.npu)

    def detector_params(self):
        return DetectorParams(self.win_len, self.stride, self.levels, self.context, self.threshold_c, self.mad_floor,
                              self.duration_tolerance, self.bw_tolerance, self.cap_quantile)

    @property
    def out_dir(self):
        return Path(str(self.out))

    def _replace(self, **kwargs):
        cfg = super(ExperimentConfig, self)._replace(**kwargs)
        cfg.validate()
        return cfg


def load_config(path=None, seed=None, models=None, out=None):
    """
    Load a configuration file (or the defaults when path is None) and apply the command-line overrides.

    :param models: list of model names, or a comma-separated string.
    """
    values = {}
    if path is not None:
        path = Path(str(path))
        if not path.exists():
            raise ValueError("Configuration file does not exist: {0}".format(path))
        with io.open(str(path), "r", encoding="utf-8") as fin:
            try:
                values = yaml.safe_load(fin) or {}
            except yaml.YAMLError as e:
                raise ValueError("Malformed configuration file {0}: {1}".format(path, e))
        if not isinstance(values, dict):
            raise ValueError("Configuration file {0} must hold a mapping".format(path))

    if seed is not None:
        values["seed"] = seed
    if models is not None:
        if not isinstance(models, (list, tuple)):
            models = [m.strip() for m in models.split(",") if m.strip()]
        values["models"] = list(models)
    if out is not None:
        values["out"] = str(out)
    return ExperimentConfig.from_dict(values)


def write_resolved(cfg, out_dir=None):
    """Write every setting, defaults included, to config.resolved.yaml in the output directory."""
    out_dir = Path(str(out_dir or cfg.out_dir))
    path = out_dir.joinpath(RESOLVED_CONFIG_NAME)
    with atomic_open(path) as fout:
        yaml.safe_dump(dict(cfg._asdict()), fout, default_flow_style=False, sort_keys=True)
    return path
