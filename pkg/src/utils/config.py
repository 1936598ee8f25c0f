#!/usr/bin/env python3
"""
Application Configuration Module

Loads routing configuration from .env file or environment variables:
phase validation, the max-flow algorithm used for edge coloring, the
benchmark seed and worker count, and the output directory.
"""

import os
from typing import Any, Callable, Dict

from dotenv import load_dotenv
from networkx.algorithms import flow

from src.utils.exceptions import ConfigError

# Load .env file if it exists, otherwise try .env.example
if os.path.exists(".env"):
    load_dotenv(".env")
elif os.path.exists(".env.example"):
    load_dotenv(".env.example")

# Max-flow algorithms usable for perfect-matching extraction
FLOW_FUNCTIONS: Dict[str, Callable[..., Any]] = {
    "edmonds_karp": flow.edmonds_karp,
    "shortest_augmenting_path": flow.shortest_augmenting_path,
    "preflow_push": flow.preflow_push,
    "dinitz": flow.dinitz,
    "boykov_kolmogorov": flow.boykov_kolmogorov,
}
ALLOWED_FLOW_ALGORITHMS = set(FLOW_FUNCTIONS)

DEFAULT_FLOW_ALGORITHM = "edmonds_karp"
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_OUTPUT_DIR = "output"


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    return value.strip().strip('"').strip("'").lower() in ("1", "true", "yes", "on")


def get_flow_function(name: str) -> Callable[..., Any]:
    """
    Resolve a networkx max-flow function by name.

    Args:
        name: One of ALLOWED_FLOW_ALGORITHMS.

    Returns:
        The networkx flow function.

    Raises:
        ConfigError: If the name is not supported.
    """
    try:
        return FLOW_FUNCTIONS[name]
    except KeyError:
        raise ConfigError(
            f"Flow algorithm '{name}' is not supported. "
            f"Allowed algorithms: {', '.join(sorted(ALLOWED_FLOW_ALGORITHMS))}"
        ) from None


def load_routing_config() -> Dict[str, Any]:
    """
    Load routing configuration from .env file or environment variables.

    Returns:
        Dictionary with routing configuration:
        {
            "validate": bool,
            "flow_algorithm": str,
            "seed": int,
            "workers": int,
            "output_dir": str
        }

    Raises:
        ConfigError: If a numeric variable cannot be parsed.
    """
    flow_algorithm = os.getenv("BUTTERFLY_FLOW_ALGORITHM", DEFAULT_FLOW_ALGORITHM).strip().lower()

    try:
        seed = int(os.getenv("BUTTERFLY_SEED", str(DEFAULT_SEED)))
        workers = int(os.getenv("BUTTERFLY_WORKERS", str(DEFAULT_WORKERS)))
    except ValueError as e:
        raise ConfigError(f"BUTTERFLY_SEED and BUTTERFLY_WORKERS must be integers: {e}", cause=e) from e

    return {
        "validate": _env_flag("BUTTERFLY_VALIDATE", True),
        "flow_algorithm": flow_algorithm,
        "seed": seed,
        "workers": workers,
        "output_dir": os.getenv("BUTTERFLY_OUTPUT_DIR", DEFAULT_OUTPUT_DIR),
    }
