"""The built-in detection rules and the two rulesets that bundle them.

The base ruleset carries the tx.origin check and a time rule limited to
comparison expressions. The extended ruleset replaces the time rule with a
variant that flags any expression use, and adds entropy-source and
unprotected-function checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from solsweep.ir.nodes import IRNode, NodeKind
from solsweep.ir.query import QueryPattern, query
from solsweep.ir.source import SourceFile
from solsweep.rules.findings import Finding, Severity
from solsweep.taxonomy import DaspCategory

#: Miner-influenceable chain-state values usable as weak entropy sources.
RANDOMNESS_MEMBERS = ("number", "coinbase", "difficulty", "gaslimit", "blockhash")

_COMPARISON_OPS = {"<", ">", "<=", ">=", "==", "!="}
_EQUALITY_OPS = {"==", "!="}


@dataclass(frozen=True)
class RuleConfig:
    """Knobs for the access-control heuristics."""

    owner_names: tuple[str, ...] = ("owner", "_owner", "admin")
    protective_modifiers: tuple[str, ...] = ("onlyOwner", "onlyAdmin", "isOwner")

    def is_owner_name(self, name: str) -> bool:
        return name.lower() in {n.lower() for n in self.owner_names}

    def is_protective_modifier(self, name: str) -> bool:
        return name.lower() in {n.lower() for n in self.protective_modifiers}


DEFAULT_CONFIG = RuleConfig()

Detector = Callable[[IRNode, SourceFile, RuleConfig], list[Finding]]


@dataclass(frozen=True)
class Rule:
    id: str
    dasp_category: DaspCategory
    severity: Severity
    patterns: tuple[QueryPattern, ...]
    description: str
    detector: Detector = field(compare=False)


def _finding(rule: Rule, file: SourceFile, line: int, message: str) -> Finding:
    return Finding(
        rule_id=rule.id,
        dasp_category=rule.dasp_category,
        contract_path=file.path,
        lines=(line, line),
        message=message,
        snippet=file.line_text(line).strip(),
        severity=rule.severity,
    )


# -- bad randomness -----------------------------------------------------------

_RANDOMNESS_PATTERNS = tuple(
    QueryPattern.parse(f"Descendant::MemberAccess[object=block][member={m}]")
    for m in RANDOMNESS_MEMBERS
) + (QueryPattern.parse("Descendant::FunctionCall[callee=blockhash]"),)


def detect_bad_randomness(
    root: IRNode, file: SourceFile, config: RuleConfig = DEFAULT_CONFIG
) -> list[Finding]:
    """One warning per use of a miner-influenceable value in an expression."""
    findings = []
    for node in _query_all(root, RULE_BAD_RANDOMNESS.patterns):
        token = node.attr("path") or node.attr("callee")
        findings.append(
            _finding(
                RULE_BAD_RANDOMNESS,
                file,
                node.span[0],
                f"miner-influenceable value {token} used as entropy source",
            )
        )
    return findings


# -- exact time ---------------------------------------------------------------

_TIME_PATTERNS = (
    QueryPattern.parse("Descendant::MemberAccess[object=block][member=timestamp]"),
    QueryPattern.parse("Descendant::Identifier[name=now]"),
)


def _time_token(node: IRNode) -> str:
    return "block.timestamp" if node.kind is NodeKind.MEMBER_ACCESS else "now"


def detect_exact_time(
    root: IRNode, file: SourceFile, config: RuleConfig = DEFAULT_CONFIG
) -> list[Finding]:
    """One finding per time-value use in any expression, comparison or not."""
    findings = []
    for node in _query_all(root, RULE_EXACT_TIME.patterns):
        token = _time_token(node)
        findings.append(
            _finding(RULE_EXACT_TIME, file, node.span[0], f"time value {token} used in contract logic")
        )
    return findings


def detect_exact_time_comparisons(
    root: IRNode, file: SourceFile, config: RuleConfig = DEFAULT_CONFIG
) -> list[Finding]:
    """Comparison-only variant: flags time values only inside comparison operators."""
    ancestors = _ancestor_map(root)
    findings = []
    for node in _query_all(root, RULE_EXACT_TIME_COMPARISON.patterns):
        enclosing = ancestors.get(id(node), ())
        if not any(
            a.kind is NodeKind.BINARY_OP and a.attr("operator") in _COMPARISON_OPS
            for a in enclosing
        ):
            continue
        token = _time_token(node)
        findings.append(
            _finding(
                RULE_EXACT_TIME_COMPARISON,
                file,
                node.span[0],
                f"time value {token} used in comparison",
            )
        )
    return findings


# -- tx.origin ----------------------------------------------------------------

_TX_ORIGIN_PATTERNS = (QueryPattern.parse("Descendant::MemberAccess[object=tx][member=origin]"),)


def detect_tx_origin(
    root: IRNode, file: SourceFile, config: RuleConfig = DEFAULT_CONFIG
) -> list[Finding]:
    findings = []
    for node in _query_all(root, RULE_TX_ORIGIN.patterns):
        findings.append(
            _finding(RULE_TX_ORIGIN, file, node.span[0], "tx.origin used for authorization")
        )
    return findings


# -- unprotected functions ------------------------------------------------------

_UNPROTECTED_PATTERNS = (
    QueryPattern.parse("Descendant::FunctionDef[is_constructor=false]"),
    QueryPattern.parse("Descendant::FunctionCall[callee=selfdestruct]"),
    QueryPattern.parse("Descendant::FunctionCall[callee=suicide]"),
)


def detect_unprotected(
    root: IRNode, file: SourceFile, config: RuleConfig = DEFAULT_CONFIG
) -> list[Finding]:
    """Flag selfdestruct calls and owner assignments in unguarded functions.

    A function counts as guarded when it carries a protective modifier.
    Inside unguarded functions, a dangerous statement is reported unless a
    require comparing msg.sender against an owner-like name appears earlier
    in the body (document order).
    """
    findings = []
    for fn in query(root, _UNPROTECTED_PATTERNS[0]):
        if any(
            child.kind is NodeKind.MODIFIER_INVOCATION
            and config.is_protective_modifier(child.attr("name"))
            for child in fn.children
        ):
            continue
        body = next((c for c in fn.children if c.kind is NodeKind.BLOCK), None)
        if body is None:
            continue
        protected = False
        for node in body.walk():
            if node.kind is NodeKind.REQUIRE_CALL and _is_protective_require(node, config):
                protected = True
            elif protected:
                continue
            elif node.kind is NodeKind.FUNCTION_CALL and node.attr("callee") in (
                "selfdestruct",
                "suicide",
            ):
                findings.append(
                    _finding(
                        RULE_UNPROTECTED,
                        file,
                        node.span[0],
                        f"unprotected {node.attr('callee')} call",
                    )
                )
            elif node.kind is NodeKind.ASSIGNMENT:
                target = node.attr("target")
                if target and config.is_owner_name(target.split(".")[-1]):
                    findings.append(
                        _finding(
                            RULE_UNPROTECTED,
                            file,
                            node.span[0],
                            f"unprotected assignment to {target}",
                        )
                    )
    return findings


def _is_protective_require(node: IRNode, config: RuleConfig) -> bool:
    for cmp_node in node.walk():
        if cmp_node.kind is not NodeKind.BINARY_OP:
            continue
        if cmp_node.attr("operator") not in _EQUALITY_OPS:
            continue
        left, right = cmp_node.children[0], cmp_node.children[1]
        if (_contains_msg_sender(left) and _contains_owner_name(right, config)) or (
            _contains_msg_sender(right) and _contains_owner_name(left, config)
        ):
            return True
    return False


def _contains_msg_sender(node: IRNode) -> bool:
    return any(
        n.kind is NodeKind.MEMBER_ACCESS
        and n.attr("object") == "msg"
        and n.attr("member") == "sender"
        for n in node.walk()
    )


def _contains_owner_name(node: IRNode, config: RuleConfig) -> bool:
    for n in node.walk():
        if n.kind is NodeKind.IDENTIFIER and config.is_owner_name(n.attr("name")):
            return True
        if n.kind is NodeKind.MEMBER_ACCESS and config.is_owner_name(n.attr("member")):
            return True
    return False


# -- rule objects and rulesets --------------------------------------------------

RULE_TX_ORIGIN = Rule(
    id="SOLIDITY_TX_ORIGIN",
    dasp_category=DaspCategory.ACCESS_CONTROL,
    severity=Severity.WARNING,
    patterns=_TX_ORIGIN_PATTERNS,
    description="tx.origin used where msg.sender authorization is expected",
    detector=detect_tx_origin,
)

RULE_EXACT_TIME_COMPARISON = Rule(
    id="SOLIDITY_EXACT_TIME",
    dasp_category=DaspCategory.TIME_MANIPULATION,
    severity=Severity.WARNING,
    patterns=_TIME_PATTERNS,
    description="block.timestamp or now compared against another value",
    detector=detect_exact_time_comparisons,
)

RULE_EXACT_TIME = Rule(
    id="SOLIDITY_EXACT_TIME",
    dasp_category=DaspCategory.TIME_MANIPULATION,
    severity=Severity.WARNING,
    patterns=_TIME_PATTERNS,
    description="block.timestamp or now used in any expression",
    detector=detect_exact_time,
)

RULE_BAD_RANDOMNESS = Rule(
    id="SOLIDITY_BAD_RANDOMNESS",
    dasp_category=DaspCategory.BAD_RANDOMNESS,
    severity=Severity.WARNING,
    patterns=_RANDOMNESS_PATTERNS,
    description="miner-influenceable chain state used as an entropy source",
    detector=detect_bad_randomness,
)

RULE_UNPROTECTED = Rule(
    id="SOLIDITY_UNPROTECTED",
    dasp_category=DaspCategory.ACCESS_CONTROL,
    severity=Severity.ERROR,
    patterns=_UNPROTECTED_PATTERNS,
    description="selfdestruct or owner assignment reachable without access control",
    detector=detect_unprotected,
)

BASE_RULESET: tuple[Rule, ...] = (RULE_TX_ORIGIN, RULE_EXACT_TIME_COMPARISON)


def extend_ruleset(base: Sequence[Rule], additions: Sequence[Rule]) -> tuple[Rule, ...]:
    """Union of two rulesets, keyed by rule id; additions supersede."""
    merged = {rule.id: rule for rule in base}
    for rule in additions:
        merged[rule.id] = rule
    return tuple(merged.values())


#: Base rules extended with entropy and unprotected-function checks; the
#: general time rule supersedes the comparison-only variant under the same id.
EXTENDED_RULESET: tuple[Rule, ...] = extend_ruleset(
    BASE_RULESET, (RULE_EXACT_TIME, RULE_BAD_RANDOMNESS, RULE_UNPROTECTED)
)


def run_rules(
    root: IRNode,
    file: SourceFile,
    ruleset: Sequence[Rule],
    config: RuleConfig = DEFAULT_CONFIG,
) -> list[Finding]:
    """Run every rule and return the findings sorted by (start line, rule id)."""
    if not ruleset:
        raise ValueError("ruleset must not be empty")
    seen = set()
    for rule in ruleset:
        if rule.id in seen:
            raise ValueError(f"duplicate rule id in ruleset: {rule.id}")
        seen.add(rule.id)
    findings: list[Finding] = []
    for rule in ruleset:
        findings.extend(rule.detector(root, file, config))
    findings.sort(key=lambda f: (f.lines[0], f.rule_id, f.message))
    return findings


def rules_manifest(ruleset: Sequence[Rule]) -> str:
    """Human-readable manifest of a ruleset (id, category, patterns)."""
    lines: list[str] = []
    for rule in sorted(ruleset, key=lambda r: r.id):
        lines.append(f"- id: {rule.id}")
        lines.append(f"  category: {rule.dasp_category.label}")
        lines.append(f"  severity: {rule.severity.value}")
        lines.append(f"  description: {rule.description}")
        lines.append("  patterns:")
        for pattern in rule.patterns:
            lines.append(f"    - {pattern}")
    return "\n".join(lines) + "\n"


# -- helpers --------------------------------------------------------------------


def _query_all(root: IRNode, patterns: Sequence[QueryPattern]) -> list[IRNode]:
    """Union of pattern matches in document order, deduplicated by identity."""
    order: dict[int, int] = {i: n for n, i in enumerate(id(node) for node in root.walk())}
    seen: set[int] = set()
    matched: list[IRNode] = []
    for pattern in patterns:
        for node in query(root, pattern):
            if id(node) not in seen:
                seen.add(id(node))
                matched.append(node)
    matched.sort(key=lambda n: order[id(n)])
    return matched


def _ancestor_map(root: IRNode) -> dict[int, tuple[IRNode, ...]]:
    out: dict[int, tuple[IRNode, ...]] = {}

    def walk(node: IRNode, trail: tuple[IRNode, ...]) -> None:
        out[id(node)] = trail
        for child in node.children:
            walk(child, trail + (node,))

    walk(root, ())
    return out
