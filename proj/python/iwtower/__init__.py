"""Iwasawa invariants of branched Z_p-covers of links.

Thin wrapper over the C++ core: file-based entry points return the same
reports as the ``iwtower`` command line tool, as dicts.
"""

import json

from . import _iwtower
from ._iwtower import (
    DomainError,
    Error,
    InputError,
    LimitError,
    PrecisionError,
    hensel_root,
    schema_version,
    weierstrass,
)

__all__ = [
    "DomainError",
    "Error",
    "InputError",
    "LimitError",
    "PrecisionError",
    "hensel_root",
    "inspect",
    "kida",
    "link_report",
    "schema_version",
    "tate",
    "tate_report",
    "tower",
    "weierstrass",
]


def inspect(path, p=None):
    return json.loads(_iwtower.inspect(str(path), p))


def link_report(link, p=None):
    """Report for a link given as a dict in the link file format."""
    return json.loads(_iwtower.link_report(json.dumps(link), p))


def tower(path, oracle=True, **overrides):
    """Tower report; overrides are p, precision, truncation, levels, oracle_max."""
    return json.loads(_iwtower.tower(str(path), oracle, **overrides))


def kida(path):
    return json.loads(_iwtower.kida(str(path)))


def tate(path, i=0):
    return json.loads(_iwtower.tate(str(path), i))


def tate_report(module, i=0):
    """Report for a module given as a dict in the module file format."""
    return json.loads(_iwtower.tate_report(json.dumps(module), i))
