"""XPath-flavored pattern queries over the IR.

Pattern strings look like::

    Descendant::MemberAccess[object=block][member=timestamp]
    Child::ContractDef/Descendant::FunctionDef[is_constructor=false][not(Descendant::ModifierInvocation[name=onlyOwner])]

Steps are separated by ``/``. Each step selects children or descendants of
the current context nodes by kind, filtered by attribute equality (``=``),
attribute containment (``~=``) and negated sub-patterns (``not(...)``),
which exclude a candidate when the sub-pattern matches anywhere beneath it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from solsweep.ir.nodes import IRNode, NodeKind, kind_from_name


class PatternError(Exception):
    """Raised for a malformed pattern, unknown node-kind, or undeclared attribute key."""


class Axis(enum.Enum):
    DESCENDANT = "Descendant"
    CHILD = "Child"


#: Attribute vocabulary the parser emits, per node kind; predicates may only
#: reference these keys.
DECLARED_ATTRIBUTES: dict[NodeKind, frozenset[str]] = {
    NodeKind.SOURCE_UNIT: frozenset(),
    NodeKind.PRAGMA_DIRECTIVE: frozenset({"text"}),
    NodeKind.CONTRACT_DEF: frozenset({"name", "contract_kind", "inheritance"}),
    NodeKind.FUNCTION_DEF: frozenset({"name", "visibility", "mutability", "is_constructor"}),
    NodeKind.MODIFIER_DEF: frozenset({"name"}),
    NodeKind.MODIFIER_INVOCATION: frozenset({"name"}),
    NodeKind.PARAMETER_LIST: frozenset({"role"}),
    NodeKind.BLOCK: frozenset(),
    NodeKind.EXPRESSION_STATEMENT: frozenset(),
    NodeKind.IF_STATEMENT: frozenset(),
    NodeKind.REQUIRE_CALL: frozenset(),
    NodeKind.ASSIGNMENT: frozenset({"operator", "target", "declared_type"}),
    NodeKind.FUNCTION_CALL: frozenset({"callee"}),
    NodeKind.MEMBER_ACCESS: frozenset({"object", "member", "path"}),
    NodeKind.IDENTIFIER: frozenset({"name", "type"}),
    NodeKind.LITERAL: frozenset({"value", "literal_kind"}),
    NodeKind.BINARY_OP: frozenset({"operator"}),
    NodeKind.UNARY_OP: frozenset({"operator", "postfix"}),
    NodeKind.UNPARSED: frozenset({"raw"}),
}


@dataclass(frozen=True)
class AttrTest:
    key: str
    value: str
    contains: bool = False

    def holds(self, node: IRNode) -> bool:
        actual = node.attributes.get(self.key)
        if actual is None:
            return False
        return (self.value in actual) if self.contains else (actual == self.value)

    def __str__(self) -> str:
        op = "~=" if self.contains else "="
        return f"[{self.key}{op}{_quote(self.value)}]"


@dataclass(frozen=True)
class Step:
    axis: Axis
    kind: NodeKind
    predicates: tuple[AttrTest, ...] = ()
    negated: tuple["QueryPattern", ...] = ()

    def __str__(self) -> str:
        parts = [f"{self.axis.value}::{self.kind.value}"]
        parts.extend(str(p) for p in self.predicates)
        parts.extend(f"[not({p})]" for p in self.negated)
        return "".join(parts)


@dataclass(frozen=True)
class QueryPattern:
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise PatternError("a pattern needs at least one step")
        for step in self.steps:
            declared = DECLARED_ATTRIBUTES.get(step.kind)
            if declared is None:
                continue  # unknown kinds are reported when the pattern runs
            for predicate in step.predicates:
                if predicate.key not in declared:
                    raise PatternError(
                        f"{step.kind.value} has no attribute {predicate.key!r}; "
                        f"declared: {', '.join(sorted(declared)) or '(none)'}"
                    )

    def __str__(self) -> str:
        return "/".join(str(s) for s in self.steps)

    @classmethod
    def parse(cls, text: str) -> "QueryPattern":
        return _parse_pattern(text)


def query(root: IRNode, pattern: QueryPattern) -> list[IRNode]:
    """All nodes matched by the pattern, in document order, without duplicates."""
    context: list[IRNode] = [root]
    for step in pattern.steps:
        if not isinstance(step.kind, NodeKind):
            raise PatternError(f"unknown node kind: {step.kind!r}")
        matched: list[IRNode] = []
        seen: set[int] = set()
        for node in context:
            candidates = node.descendants() if step.axis is Axis.DESCENDANT else iter(node.children)
            for cand in candidates:
                if id(cand) in seen:
                    continue
                if _matches(cand, step):
                    seen.add(id(cand))
                    matched.append(cand)
        context = matched
    return context


def _matches(node: IRNode, step: Step) -> bool:
    if node.kind is not step.kind:
        return False
    if not all(p.holds(node) for p in step.predicates):
        return False
    return not any(query(node, sub) for sub in step.negated)


# -- string form ------------------------------------------------------------


def _quote(value: str) -> str:
    if value == "" or any(ch in value for ch in "[]/'\" "):
        return "'" + value.replace("'", "\\'") + "'"
    return value


def _parse_pattern(text: str) -> QueryPattern:
    steps = []
    for part in _split_top(text.strip(), "/"):
        steps.append(_parse_step(part))
    if not steps or any(not s for s in steps):
        raise PatternError(f"malformed pattern: {text!r}")
    return QueryPattern(tuple(steps))


def _split_top(text: str, sep: str) -> list[str]:
    """Split on sep outside brackets/parens/quotes."""
    parts: list[str] = []
    depth = 0
    quote: str | None = None
    current: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            if ch == "\\" and i + 1 < len(text):
                current.append(text[i : i + 2])
                i += 2
                continue
            if ch == quote:
                quote = None
            current.append(ch)
        elif ch in "'\"":
            quote = ch
            current.append(ch)
        elif ch in "([":
            depth += 1
            current.append(ch)
        elif ch in ")]":
            depth -= 1
            current.append(ch)
        elif ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
        i += 1
    parts.append("".join(current))
    return parts


def _parse_step(text: str) -> Step:
    text = text.strip()
    if "::" not in text:
        raise PatternError(f"step missing axis: {text!r}")
    axis_name, rest = text.split("::", 1)
    try:
        axis = Axis(axis_name.strip())
    except ValueError:
        raise PatternError(f"unknown axis: {axis_name!r}") from None
    bracket = rest.find("[")
    kind_name = rest.strip() if bracket == -1 else rest[:bracket].strip()
    kind = kind_from_name(kind_name)
    if kind is None:
        raise PatternError(f"unknown node kind: {kind_name!r}")
    predicates: list[AttrTest] = []
    negated: list[QueryPattern] = []
    for body in _iter_bracket_groups(rest[bracket:] if bracket != -1 else ""):
        body = body.strip()
        if body.startswith("not(") and body.endswith(")"):
            negated.append(_parse_pattern(body[4:-1]))
        elif "~=" in body:
            key, value = body.split("~=", 1)
            predicates.append(AttrTest(key.strip(), _unquote(value.strip()), contains=True))
        elif "=" in body:
            key, value = body.split("=", 1)
            predicates.append(AttrTest(key.strip(), _unquote(value.strip())))
        else:
            raise PatternError(f"malformed predicate: [{body}]")
    return Step(axis, kind, tuple(predicates), tuple(negated))


def _iter_bracket_groups(text: str) -> list[str]:
    groups: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "[":
            raise PatternError(f"unexpected text in step: {text[i:]!r}")
        depth = 1
        quote: str | None = None
        j = i + 1
        while j < len(text) and depth:
            cj = text[j]
            if quote:
                if cj == "\\":
                    j += 1
                elif cj == quote:
                    quote = None
            elif cj in "'\"":
                quote = cj
            elif cj in "([":
                depth += 1
            elif cj in ")]":
                depth -= 1
            j += 1
        if depth:
            raise PatternError(f"unterminated predicate in {text!r}")
        groups.append(text[i + 1 : j - 1])
        i = j
    return groups


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] in "'\"" and value[-1] == value[0]:
        body = value[1:-1]
        return body.replace("\\'", "'").replace('\\"', '"')
    return value
