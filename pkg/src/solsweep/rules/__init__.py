"""Built-in vulnerability detection rules over the Solidity IR."""

from solsweep.rules.findings import Finding, Severity
from solsweep.rules.builtin import (
    BASE_RULESET,
    EXTENDED_RULESET,
    Rule,
    RuleConfig,
    detect_bad_randomness,
    detect_exact_time,
    detect_tx_origin,
    detect_unprotected,
    rules_manifest,
    run_rules,
)

__all__ = [
    "Finding",
    "Severity",
    "Rule",
    "RuleConfig",
    "BASE_RULESET",
    "EXTENDED_RULESET",
    "detect_bad_randomness",
    "detect_exact_time",
    "detect_tx_origin",
    "detect_unprotected",
    "rules_manifest",
    "run_rules",
]
