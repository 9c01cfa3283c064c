"""
Layered run configuration.

Defaults, then a TOML file (or the config header of an earlier output),
then RINGFLUX_* environment variables, then command-line flags. The
result is validated section by section with the forms in forms.py.
"""
import copy
import logging
import os
import tomllib
from pathlib import Path

from flask import Config
from scipy import constants

from errors import ConfigError
from export import read_header
from forms import SECTION_FORMS, validate_section
from revival import Thresholds

ENV_PREFIX = "RINGFLUX"
SECTIONS = tuple(name.upper() for name in SECTION_FORMS)

DEFAULTS = {
    "LOG_LEVEL": "INFO",
    "TIMEZONE": "UTC",
    "PACKET": {
        "delta_n": 10.0,
        "n0": 0,
        "phi0": 0.0,
        "cutoff": None,
    },
    "RING": {
        "mass": constants.m_e,
        "radius": 1e-6,
        "alpha": 0.0,
        "flux": None,
        "rel_enabled": False,
    },
    "RUN": {
        "seed": 0,
        "trials": 10000,
        "grid_size": 1024,
        "workers": 1,
        "shots": 1,
        "tau_grid": "0,1/4,1/3,1/2,1",
        "dtau": 1e-5,
        "oracle_grid_size": 2048,
        "oracle_tau_grid": "0.01",
        "stencil": "spectral",
    },
    "ANALYSIS": {
        "resultant_min": Thresholds.resultant_min,
        "variance_max": Thresholds.variance_max,
        "secondary_max": Thresholds.secondary_max,
        "lobe_weight_min": Thresholds.lobe_weight_min,
    },
}

# settings that change how a run executes but not what it produces
EXECUTION_KEYS = {"run": {"workers"}}


def _load_toml(handle):
    return {key.upper(): value for key, value in tomllib.load(handle).items()}


def _merge(config, mapping):
    """Merge mapping into config section by section, normalizing key case"""
    for key, value in (mapping or {}).items():
        key = key.upper()
        if key in SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError({key.lower(): "Must be a section of settings."})
            section = config.setdefault(key, {})
            for name, item in value.items():
                if item is not None:
                    section[name.lower()] = item
        elif value is not None:
            config[key] = value


def load_config(path=None, overrides=None):
    """Build the layered configuration (unvalidated)"""
    config = Config(os.getcwd(), defaults=copy.deepcopy(DEFAULTS))

    if path:
        path = Path(path)
        loaded = Config(os.getcwd())
        try:
            if path.suffix == ".toml":
                loaded.from_file(str(path.resolve()), load=_load_toml, text=False)
            else:
                loaded.from_mapping({k.upper(): v for k, v in read_header(path).items()})
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError({"config": f"cannot read {path}: {exc}"}) from exc
        _merge(config, loaded)
        logging.debug("configuration loaded from %s", path)

    env = Config(os.getcwd())
    env.from_prefixed_env(ENV_PREFIX)
    _merge(config, env)
    _merge(config, overrides)
    return config


def validate_config(config):
    """Validated sections keyed by lower-case section name"""
    resolved = {}
    errors = {}
    for name in SECTION_FORMS:
        try:
            resolved[name] = validate_section(name, config.get(name.upper(), {}))
        except ConfigError as exc:
            errors.update(exc.field_errors)
    if errors:
        raise ConfigError(errors)
    return resolved


def embedded_config(resolved):
    """The part of a resolved configuration written into output headers"""
    header = {}
    for name, section in resolved.items():
        skip = EXECUTION_KEYS.get(name, set())
        header[name] = {key: value for key, value in section.items() if key not in skip}
    return header


def thresholds_from(resolved):
    return Thresholds(**resolved["analysis"])

