"""Two-player GAN optimizer laboratory.

Thin wrappers over the C++ core. Configs are plain dicts with the same
layout as the JSON config files.
"""

import json

from . import _core
from ._core import ConfigError, gradcheck, loss, sample_gradient, sigma, sigma_prime

__all__ = [
    "ConfigError",
    "base_config",
    "gradcheck",
    "loss",
    "oracle",
    "preset",
    "preset_names",
    "sample_gradient",
    "sigma",
    "sigma_prime",
    "sweep",
    "train",
]


def preset_names():
    return list(_core.preset_names())


def preset(name):
    return json.loads(_core.preset(name))


def base_config(d=100):
    return json.loads(_core.base_config(d))


def _config_text(config):
    if isinstance(config, str):
        return json.dumps(preset(config))
    return json.dumps(config)


def train(config):
    """Runs one experiment; returns (verdict dict, run CSV text)."""
    verdict, csv_text = _core.train(_config_text(config))
    return json.loads(verdict), csv_text


def sweep(spec, threads=1):
    """Returns (sweep CSV text, summary CSV text)."""
    return _core.sweep(json.dumps(spec), threads)


def oracle(config, snapshots=10, draws=100000):
    return _core.oracle(_config_text(config), snapshots, draws)
