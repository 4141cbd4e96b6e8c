"""
Published table values and comparisons against computed results.

Each file reference_tables/<table>.json holds {table: entries}. An entry is either the published value
or, where the published value does not follow from the published torus data, an object
{"published": value, "erratum": {"reproduced": value, "note": text}}; comparisons then use the
reproduced value and the erratum is reported.
"""
from dataclasses import dataclass
from typing import Any
from collections.abc import Callable

import json
import logging
import os

logger = logging.getLogger(__name__)

REFERENCE_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference_tables")
TABLES = ("classification", "sp1_homomorphisms", "sp1xsp1_homomorphisms", "sp1_pairs", "differentials", "h8_orders",
          "pontryagin")


@dataclass(frozen=True)
class Erratum:
    table: str
    key: str
    published: Any
    reproduced: Any
    note: str

    def __str__(self) -> str:
        return f"{self.table}/{self.key}: published {self.published}, reproduced {self.reproduced} ({self.note})"


@dataclass(frozen=True)
class Mismatch:
    table: str
    key: str
    expected: Any
    actual: Any

    def __str__(self) -> str:
        return f"{self.table}/{self.key}:\n  - expected {self.expected}\n  + computed {self.actual}"


def load_table(table: str, directory: str | None = None) -> Any:
    """Reads one reference table from the package data, or from a golden directory when given."""
    path = os.path.join(directory or REFERENCE_PATH, f"{table}.json")
    try:
        with open(path) as file:
            return json.load(file)[table]
    except FileNotFoundError:
        raise KeyError(f"Missing reference table {table!r} in {directory or REFERENCE_PATH}.")
    except KeyError:
        raise KeyError(f"Missing key {table!r} in {path}.")


def split_entry(table: str, key: str, entry: Any) -> tuple[Any, Erratum | None]:
    """Expected value of an entry, plus its erratum if it carries one."""
    if isinstance(entry, dict) and "erratum" in entry:
        erratum = entry["erratum"]
        return erratum["reproduced"], Erratum(table, key, entry["published"], erratum["reproduced"], erratum["note"])
    return entry, None


def expected_values(table: str, directory: str | None = None) -> tuple[dict[str, Any], list[Erratum]]:
    expected, errata = {}, []
    for key, entry in load_table(table, directory).items():
        expected[key], erratum = split_entry(table, key, entry)
        if erratum is not None:
            errata.append(erratum)
    return expected, errata


def compare(table: str, actual: dict[str, Any], directory: str | None = None,
            normalize: Callable[[Any], Any] | None = None) -> tuple[list[Mismatch], list[Erratum]]:
    """
    Compares computed values with a keyed reference table.

    Keys missing on either side are mismatches. normalize, when given, is applied to both values
    before comparing.
    """
    expected, errata = expected_values(table, directory)
    normalize = normalize or (lambda value: value)
    mismatches = []
    for key in list(expected) + [k for k in actual if k not in expected]:
        want = normalize(expected[key]) if key in expected else None
        have = normalize(actual[key]) if key in actual else None
        if want != have:
            mismatches.append(Mismatch(table, key, want, have))
    for mismatch in mismatches:
        logger.warning(f"golden mismatch {mismatch.table}/{mismatch.key}")
    return mismatches, errata


def compare_pairs(table: str, actual: list[tuple[str, str]], directory: str | None = None) -> list[Mismatch]:
    """Compares unordered pairs of labels (the order inside a pair and of the list is irrelevant)."""
    expected = {frozenset(pair) for pair in load_table(table, directory)}
    found = {frozenset(pair) for pair in actual}
    missing = sorted(tuple(sorted(pair)) for pair in expected - found)
    extra = sorted(tuple(sorted(pair)) for pair in found - expected)
    return [Mismatch(table, " / ".join(pair), pair, None) for pair in missing] + \
        [Mismatch(table, " / ".join(pair), None, pair) for pair in extra]
