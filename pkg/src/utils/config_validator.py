#!/usr/bin/env python3
"""
Checks for .env settings and CLI run configurations.

Every problem is collected before anything runs, so a bad invocation
reports all of its errors at once and exits with status 2.
"""

import os
from typing import Any, Dict, List, Tuple

from src.topology.butterfly import MIN_DIMENSION
from src.utils.config import ALLOWED_FLOW_ALGORITHMS
from src.utils.exceptions import ConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)

ALLOWED_FORMATS = {"dot", "json"}
ALLOWED_VARIANTS = {"butterfly", "kary", "ring"}
INPUT_PATH_FIELDS = ("perm", "schedule", "circuit", "program")
INPUT_ERROR_EXIT_CODE = 2


def validate_routing_config_dict(config: Dict[str, Any]) -> bool:
    """
    Validate routing configuration dictionary.

    Args:
        config: Configuration dictionary from load_routing_config()

    Returns:
        True if valid, raises ConfigError (a ValueError) if invalid
    """
    required_fields = ["validate", "flow_algorithm", "seed", "workers", "output_dir"]
    for field in required_fields:
        if field not in config:
            raise ConfigError(f"Missing required configuration field: {field}")

    if config["flow_algorithm"] not in ALLOWED_FLOW_ALGORITHMS:
        raise ConfigError(
            f"Flow algorithm '{config['flow_algorithm']}' is not supported. "
            f"Allowed algorithms: {', '.join(sorted(ALLOWED_FLOW_ALGORITHMS))}"
        )
    if int(config["workers"]) < 1:
        raise ConfigError(f"BUTTERFLY_WORKERS must be >= 1, got {config['workers']}")
    if int(config["seed"]) < 0:
        raise ConfigError(f"BUTTERFLY_SEED must be non-negative, got {config['seed']}")
    if not str(config["output_dir"]).strip():
        raise ConfigError("BUTTERFLY_OUTPUT_DIR must not be empty")
    return True


def validate_run_config(config: Any) -> Tuple[bool, List[str]]:
    """
    Validate a command-line run configuration.

    Args:
        config: A RunConfig (any object with the RunConfig attributes).

    Returns:
        Tuple of (is_valid, error_messages)
        - is_valid: True if the configuration can be executed
        - error_messages: List of error messages (empty if valid)
    """
    errors: List[str] = []

    for r in config.dimensions():
        if r < MIN_DIMENSION:
            errors.append(f"❌ Butterfly dimension must be >= {MIN_DIMENSION}, got {r}")

    for name in INPUT_PATH_FIELDS:
        path = getattr(config, name, None)
        if path is not None and not os.path.isfile(path):
            errors.append(f"❌ Input file for --{name} not found: {path}")

    if config.format not in ALLOWED_FORMATS:
        errors.append(f"❌ Output format must be one of {', '.join(sorted(ALLOWED_FORMATS))}, got {config.format}")
    if config.variant not in ALLOWED_VARIANTS:
        errors.append(f"❌ Topology variant must be one of {', '.join(sorted(ALLOWED_VARIANTS))}, got {config.variant}")
    if config.variant == "kary" and (config.k is None or config.k < 2):
        errors.append(f"❌ The k-ary variant needs --k >= 2, got {config.k}")
    if config.count < 1:
        errors.append(f"❌ --count must be >= 1, got {config.count}")
    if config.workers < 1:
        errors.append(f"❌ --workers must be >= 1, got {config.workers}")
    if config.qubits is not None and config.qubits < 0:
        errors.append(f"❌ --qubits must be non-negative, got {config.qubits}")
    if config.flow_algorithm not in ALLOWED_FLOW_ALGORITHMS:
        errors.append(
            f"❌ Flow algorithm '{config.flow_algorithm}' is not supported. "
            f"Allowed algorithms: {', '.join(sorted(ALLOWED_FLOW_ALGORITHMS))}"
        )

    return len(errors) == 0, errors


def format_validation_errors(errors: List[str]) -> str:
    """Frame a list of validation errors for the log."""
    errors_block = "\n".join(errors)
    return f"""
============================================================
⚠️ Configuration Validation Failed
============================================================
{errors_block}
============================================================
Please fix the configuration errors above and try again.
See README.md for the command reference.
============================================================
"""

