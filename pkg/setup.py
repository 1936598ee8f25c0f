#!/usr/bin/env python3
"""
Butterfly Router installer.

Installs requirements.txt (into ./venv when it exists), checks .env when
present and prints a few commands to start with.

Usage: python setup.py
"""

import importlib.util
import os
import subprocess
import sys
from pathlib import Path
from typing import List

PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.utils.logger import get_logger, setup_logging  # noqa: E402

setup_logging()
logger = get_logger(__name__)

if sys.version_info < (3, 9):
    logger.error("Python 3.9+ is required.")
    sys.exit(1)

# import names of everything requirements.txt pins
REQUIRED_MODULES = ("dotenv", "yaml", "networkx", "numpy", "rich", "pytest", "hypothesis")

NEXT_STEPS = (
    ("python src/cli.py topology --r 3 --stats", "inspect the graph"),
    ("python src/cli.py route --r 3 --perm perm.json", "route a permutation"),
    ("python src/cli.py bench --r 3..8 --count 100", "depth table"),
    ('pytest -m "not slow"', "quick test suite"),
)


def missing_modules() -> List[str]:
    """Return the required modules that cannot be found."""
    return [name for name in REQUIRED_MODULES if importlib.util.find_spec(name) is None]


def pip_command() -> List[str]:
    venv = PROJECT_ROOT / "venv"
    if not venv.exists():
        logger.info("Installing to current Python environment...")
        return [sys.executable, "-m", "pip"]
    logger.info("Using virtual environment...")
    if os.name == "nt":
        return [str(venv / "Scripts" / "pip.exe")]
    return [str(venv / "bin" / "pip")]


def install_requirements() -> None:
    missing = missing_modules()
    if not missing:
        logger.info("✅ All dependencies are already installed! Skipping installation.")
        return
    logger.info("📦 Installing Python dependencies (%s missing)... ⏳", ", ".join(missing))
    try:
        subprocess.run(pip_command() + ["install", "-q", "-r", str(PROJECT_ROOT / "requirements.txt")], check=True)
    except subprocess.CalledProcessError:
        logger.error("❌ pip failed. Fix the error above and run setup.py again.")
        sys.exit(1)
    logger.info("✅ Python dependencies installed successfully!")


def check_env_file() -> None:
    if not (PROJECT_ROOT / ".env").exists():
        logger.info("No .env file; every setting uses its default (see .env.example).")
        return
    logger.info("🔍 Checking .env settings...")
    from src.utils.config import load_routing_config
    from src.utils.config_validator import validate_routing_config_dict
    try:
        validate_routing_config_dict(load_routing_config())
    except ValueError as e:
        logger.warning("⚠️  %s", e)
        logger.warning("   Fix this before running the router.")
        return
    logger.info("✅ Configuration is valid.")


def main() -> None:
    """Install requirements and check the configuration."""
    logger.info("Butterfly Router Setup")
    logger.info("=" * 50)
    install_requirements()
    check_env_file()
    logger.info("🎉 Setup completed! Try:")
    for command, what in NEXT_STEPS:
        logger.info("   • %-50s # %s", command, what)


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a build frontend (pip passes egg_info, dist_info, ...):
        # defer to setuptools; package metadata lives in pyproject.toml.
        from setuptools import setup

        setup()
    else:
        main()
