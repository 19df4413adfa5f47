"""Parse-tree node type for the Solidity IR."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator


class NodeKind(enum.Enum):
    SOURCE_UNIT = "SourceUnit"
    PRAGMA_DIRECTIVE = "PragmaDirective"
    CONTRACT_DEF = "ContractDef"
    FUNCTION_DEF = "FunctionDef"
    MODIFIER_DEF = "ModifierDef"
    MODIFIER_INVOCATION = "ModifierInvocation"
    PARAMETER_LIST = "ParameterList"
    BLOCK = "Block"
    EXPRESSION_STATEMENT = "ExpressionStatement"
    IF_STATEMENT = "IfStatement"
    REQUIRE_CALL = "RequireCall"
    ASSIGNMENT = "Assignment"
    FUNCTION_CALL = "FunctionCall"
    MEMBER_ACCESS = "MemberAccess"
    IDENTIFIER = "Identifier"
    LITERAL = "Literal"
    BINARY_OP = "BinaryOp"
    UNARY_OP = "UnaryOp"
    UNPARSED = "Unparsed"


_KIND_BY_NAME = {k.value: k for k in NodeKind}


def kind_from_name(name: str) -> NodeKind | None:
    return _KIND_BY_NAME.get(name)


@dataclass
class IRNode:
    """One node of the parse tree.

    ``span`` is an inclusive (start_line, end_line) pair; every child's span
    is contained in its parent's. ``attributes`` is a flat string map, e.g.
    ``{"object": "block", "member": "timestamp"}`` on a MemberAccess node.
    """

    kind: NodeKind
    span: tuple[int, int]
    attributes: dict[str, str] = field(default_factory=dict)
    children: list["IRNode"] = field(default_factory=list)

    def attr(self, key: str, default: str = "") -> str:
        return self.attributes.get(key, default)

    def walk(self) -> Iterator["IRNode"]:
        """Yield this node and all descendants in document (preorder) order."""
        yield self
        for child in self.children:
            yield from child.walk()

    def descendants(self) -> Iterator["IRNode"]:
        for child in self.children:
            yield from child.walk()

    def find(self, kind: NodeKind) -> Iterator["IRNode"]:
        return (n for n in self.walk() if n.kind is kind)
