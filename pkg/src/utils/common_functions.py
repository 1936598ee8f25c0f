"""
Common utility functions for Butterfly Router.

Reusable helpers for reading and writing the JSON (or YAML) interchange
files used by the command-line front end: permutations, schedules,
circuits and compiled programs.
"""

import json
import numbers
from pathlib import Path
from typing import Any, Union

import yaml

PathLike = Union[str, Path]

# everything read_structured can raise for a missing, unreadable or unparsable file
DOCUMENT_ERRORS = (OSError, ValueError, yaml.YAMLError)


def read_file(file_name: PathLike) -> str:
    """
    Read text from a file (UTF-8).

    Args:
        file_name: The path to the file to be read.

    Returns:
        str: The contents of the file, decoded as UTF-8.
    """
    with open(file_name, "r", encoding="utf-8") as f:
        return f.read()


def write_file_text(file_name: PathLike, data: str) -> None:
    """
    Write text data to a file (UTF-8), creating parent directories.

    Args:
        file_name: The path to the file to be written.
        data (str): The string data to write to the file.
    """
    path = Path(file_name)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(data)


def read_structured(file_path: PathLike) -> Any:
    """
    Read and parse a JSON file, or a YAML file for .yml/.yaml suffixes.

    Args:
        file_path: The path to the file.

    Returns:
        Any: The parsed document.
    """
    path = Path(file_path)
    if path.suffix.lower() in (".yml", ".yaml"):
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)
    return json.loads(read_file(path))


def dumps_json(data: Any) -> str:
    """Serialize deterministically: fixed indentation and a trailing newline."""
    return json.dumps(data, indent=2) + "\n"


def write_json(file_path: PathLike, data: Any) -> None:
    """
    Write a JSON document.

    Args:
        file_path: Destination path; parent directories are created.
        data: JSON-serializable data.
    """
    write_file_text(file_path, dumps_json(data))


def as_index(value: Any) -> int:
    """
    Return an integer read from a document as a plain int.

    numpy integers are accepted; bools, floats and strings are not, so
    ``0.7`` is never silently truncated to node 0.

    Raises:
        ValueError: If value is not an integer.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValueError(f"expected an integer, got {value!r}")
    return int(value)
