"""
config_loader.py
----------------

Configuration for the ``qentry40`` command line.  A JSON file at
``~/.qentry40rc`` (or an explicit path) supplies defaults that the
command line flags can override.

Example ``~/.qentry40rc``::

    {
      "precision_bits": 320,
      "seed": 7,
      "trials": 10,
      "suite": "watson",
      "format": "json"
    }

The environment variable ``QENTRY40_PRECISION`` overrides the file's
``precision_bits``.  Unknown keys are preserved by
``load_qentry40_config`` and ignored by ``resolve_defaults``.
"""

from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict, Mapping, Optional

from .qcore import DEFAULT_PRECISION, MIN_PRECISION
from .verify import ALL, SUITES

logger = logging.getLogger("qentry40.config")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("%(asctime)s %(levelname)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)

RC_PATH = "~/.qentry40rc"
PRECISION_ENV = "QENTRY40_PRECISION"
FORMATS = ("text", "json")

DEFAULTS: Dict[str, Any] = {
    "precision_bits": DEFAULT_PRECISION,
    "seed": 1,
    "trials": 20,
    "suite": ALL,
    "format": "text",
}


def load_qentry40_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load the configuration from a JSON file.

    :param path: Optional path to a configuration file.  If not provided
        the function attempts to read ``~/.qentry40rc``.  If the file
        does not exist or cannot be parsed, an empty dictionary is
        returned.
    :returns: A dictionary of configuration options.
    """
    config_path = path or os.path.expanduser(RC_PATH)
    if not os.path.exists(config_path):
        return {}
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            logger.info(f"Loaded qentry40 config from {config_path}: {data}")
            return data
        else:
            logger.warning(f"qentry40 config {config_path} must contain a JSON object")
    except Exception as exc:
        logger.warning(f"Failed to load qentry40 config {config_path}: {exc}")
    return {}


def _valid(key: str, value: Any) -> bool:
    if key == "precision_bits":
        return isinstance(value, int) and not isinstance(value, bool) and value >= MIN_PRECISION
    if key == "trials":
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0
    if key == "seed":
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0
    if key == "suite":
        return value == ALL or value in SUITES
    if key == "format":
        return value in FORMATS
    return False


def resolve_defaults(
    config: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Dict[str, Any]:
    """Built-in defaults, then rc-file values, then ``QENTRY40_PRECISION``.

    Invalid values are skipped with a warning.
    """
    resolved = dict(DEFAULTS)
    for key, value in (config or {}).items():
        if key not in DEFAULTS:
            continue
        if _valid(key, value):
            resolved[key] = value
        else:
            logger.warning(f"Ignoring invalid config value {key}={value!r}")
    env = os.environ if environ is None else environ
    raw = env.get(PRECISION_ENV)
    if raw is not None:
        try:
            bits = int(raw)
        except ValueError:
            bits = None
        if bits is not None and _valid("precision_bits", bits):
            resolved["precision_bits"] = bits
        else:
            logger.warning(f"Ignoring {PRECISION_ENV}={raw!r}: expected an integer >= {MIN_PRECISION}")
    return resolved


__all__ = ["DEFAULTS", "PRECISION_ENV", "load_qentry40_config", "resolve_defaults"]
