"""Mapping of per-tool rule names onto the DASP10 categories."""

from __future__ import annotations

from dataclasses import dataclass, field

from solsweep.taxonomy import DaspCategory


@dataclass(frozen=True)
class TaxonomyMap:
    """(tool id, tool rule name) -> category; unmapped names fall through to Other."""

    entries: dict[tuple[str, str], DaspCategory] = field(default_factory=dict)


def map_to_dasp(taxonomy: TaxonomyMap, tool_id: str, rule_name: str) -> DaspCategory:
    return taxonomy.entries.get((tool_id, rule_name), DaspCategory.OTHER)


_BUILTIN_RULES = {
    "SOLIDITY_TX_ORIGIN": DaspCategory.ACCESS_CONTROL,
    "SOLIDITY_EXACT_TIME": DaspCategory.TIME_MANIPULATION,
    "SOLIDITY_BAD_RANDOMNESS": DaspCategory.BAD_RANDOMNESS,
    "SOLIDITY_UNPROTECTED": DaspCategory.ACCESS_CONTROL,
}

DEFAULT_TAXONOMY = TaxonomyMap(
    entries={
        **{("builtin-smartcheck", rule): cat for rule, cat in _BUILTIN_RULES.items()},
        **{("builtin-smartcheck-ext", rule): cat for rule, cat in _BUILTIN_RULES.items()},
        ("mock-lines", "reentrant_call"): DaspCategory.REENTRANCY,
        ("mock-lines", "unchecked_send"): DaspCategory.UNCHECKED_LOW_LEVEL_CALLS,
        ("mock-lines", "deprecated_throw"): DaspCategory.OTHER,
        ("mock-files", "destructible"): DaspCategory.ACCESS_CONTROL,
        ("mock-files", "origin_auth"): DaspCategory.ACCESS_CONTROL,
    }
)
