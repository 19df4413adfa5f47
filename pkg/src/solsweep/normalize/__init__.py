"""Normalization of raw tool output into the uniform finding format."""

from solsweep.normalize.taxonomy_map import DEFAULT_TAXONOMY, TaxonomyMap, map_to_dasp
from solsweep.normalize.report import (
    NormalizedReport,
    parse_tool_output,
    read_report,
    write_report,
)

__all__ = [
    "TaxonomyMap",
    "DEFAULT_TAXONOMY",
    "map_to_dasp",
    "NormalizedReport",
    "parse_tool_output",
    "read_report",
    "write_report",
]
