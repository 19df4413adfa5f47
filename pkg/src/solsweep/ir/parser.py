"""Recursive-descent parser for a pragmatic subset of Solidity.

Recognized constructs: pragma directives, contract/interface/library
definitions, function/modifier/constructor headers (visibility, modifier
invocations, parameter lists), blocks, if statements, require calls,
assignments (including declarations with initializers), function calls,
member accesses, identifiers, literals and unary/binary operators.

Anything else inside a balanced-delimiter region becomes an Unparsed node
covering its source span; parsing only fails on unbalanced braces,
parentheses or brackets.
"""

from __future__ import annotations

from solsweep.ir.lexer import (
    EOF,
    IDENT,
    NUMBER,
    PUNCT,
    STRING,
    Token,
    mask_comments_and_strings,
    tokenize,
)
from solsweep.ir.nodes import IRNode, NodeKind
from solsweep.ir.source import SourceFile


class ParseError(Exception):
    """Raised for unbalanced delimiters or a truncated file."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class _Fail(Exception):
    """Internal: a speculative parse did not match; caller rewinds."""


_VISIBILITY = {"public", "private", "internal", "external"}
_MUTABILITY = {"view", "pure", "constant", "payable"}
_HEADER_NOISE = {"virtual", "override", "returns"}
_CONTRACT_KEYWORDS = {"contract", "interface", "library"}
# Statement keywords outside the subset grammar; consumed as Unparsed chunks.
_UNPARSED_STMT_KEYWORDS = {
    "return", "emit", "throw", "for", "while", "do", "break", "continue",
    "assembly", "unchecked", "try", "revert",
}
_DECL_QUALIFIERS = {"memory", "storage", "calldata"}

_COMPARISON_OPS = {"<", ">", "<=", ">=", "==", "!="}
_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", ">", "<=", ">="],
    ["<<", ">>"],
    ["+", "-"],
    ["*", "/", "%"],
    ["**"],
]
_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}
_UNARY_PREFIX = {"!", "~", "-", "+", "++", "--"}

_UNIT_SUFFIXES = {
    "wei", "gwei", "szabo", "finney", "ether",
    "seconds", "minutes", "hours", "days", "weeks", "years",
}

_OPENERS = {"(": ")", "{": "}", "[": "]"}
_CLOSERS = {v: k for k, v in _OPENERS.items()}


def check_balanced(file: SourceFile, masked: str) -> None:
    stack: list[tuple[str, int]] = []
    for i, ch in enumerate(masked):
        if ch in _OPENERS:
            stack.append((ch, i))
        elif ch in _CLOSERS:
            if not stack or stack[-1][0] != _CLOSERS[ch]:
                line, col = file.position(i)
                raise ParseError(f"unbalanced {ch!r}", line, col)
            stack.pop()
    if stack:
        opener, off = stack[-1]
        line, col = file.position(off)
        raise ParseError(f"unclosed {opener!r}", line, col)


def parse_source(file: SourceFile) -> IRNode:
    """Parse a source file into an IR tree rooted at a SourceUnit node."""
    masked = mask_comments_and_strings(file.text)
    check_balanced(file, masked)
    return _Parser(file, masked).parse_unit()


class _Parser:
    def __init__(self, file: SourceFile, masked: str):
        self.file = file
        self.tokens = tokenize(masked)
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, type_: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.type == type_ and (value is None or tok.value == value)

    def at_ident(self, *values: str) -> bool:
        tok = self.peek()
        return tok.type == IDENT and tok.value in values

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != EOF:
            self.pos += 1
        return tok

    def expect(self, type_: str, value: str | None = None) -> Token:
        if not self.at(type_, value):
            raise _Fail()
        return self.take()

    def last_line(self) -> int:
        return self.tokens[max(self.pos - 1, 0)].line

    def slice_raw(self, start_tok: Token, end_pos: int) -> str:
        """Original-source slice from a token to the end of token index end_pos-1."""
        end_tok = self.tokens[max(end_pos - 1, 0)]
        return self.file.text[start_tok.offset : end_tok.offset + len(end_tok.value)]

    # -- top level ----------------------------------------------------------

    def parse_unit(self) -> IRNode:
        children: list[IRNode] = []
        while not self.at(EOF):
            if self.at_ident("pragma"):
                children.append(self.parse_pragma())
            elif self.at_ident("abstract") and self.peek(1).value in _CONTRACT_KEYWORDS:
                self.take()
                children.append(self.parse_contract())
            elif self.at_ident(*_CONTRACT_KEYWORDS):
                children.append(self.parse_contract())
            else:
                children.append(self.unparsed_chunk())
        return IRNode(NodeKind.SOURCE_UNIT, (1, max(self.file.line_count, 1)), {}, children)

    def parse_pragma(self) -> IRNode:
        start = self.take()  # 'pragma'
        while not self.at(EOF) and not self.at(PUNCT, ";"):
            self.take()
        if self.at(PUNCT, ";"):
            self.take()
        raw = self.slice_raw(start, self.pos)
        return IRNode(NodeKind.PRAGMA_DIRECTIVE, (start.line, self.last_line()), {"text": raw})

    def parse_contract(self) -> IRNode:
        start = self.take()  # contract | interface | library
        attrs = {"contract_kind": start.value}
        if self.at(IDENT):
            attrs["name"] = self.take().value
        if self.at_ident("is"):
            inherit_start = self.take()
            while not self.at(EOF) and not self.at(PUNCT, "{"):
                self.take()
            attrs["inheritance"] = self.slice_raw(inherit_start, self.pos)
        children: list[IRNode] = []
        if self.at(PUNCT, "{"):
            self.take()
            while not self.at(EOF) and not self.at(PUNCT, "}"):
                children.append(self.parse_member(attrs.get("name", "")))
            self.expect_closer("}")
        return IRNode(NodeKind.CONTRACT_DEF, (start.line, self.last_line()), attrs, children)

    def expect_closer(self, closer: str) -> None:
        # Balance was verified up front, so the closer must be here.
        if self.at(PUNCT, closer):
            self.take()

    def parse_member(self, contract_name: str) -> IRNode:
        if self.at_ident("function", "constructor"):
            mark = self.pos
            try:
                return self.parse_function(contract_name)
            except _Fail:
                self.pos = mark
        if self.at_ident("modifier"):
            mark = self.pos
            try:
                return self.parse_modifier()
            except _Fail:
                self.pos = mark
        return self.unparsed_chunk()

    # -- definitions --------------------------------------------------------

    def parse_function(self, contract_name: str) -> IRNode:
        start = self.take()  # 'function' | 'constructor'
        attrs: dict[str, str] = {}
        children: list[IRNode] = []
        if start.value == "constructor":
            attrs["name"] = "constructor"
            attrs["is_constructor"] = "true"
        else:
            name = self.take().value if self.at(IDENT) else ""
            attrs["name"] = name
            is_ctor = bool(name) and name == contract_name
            attrs["is_constructor"] = "true" if is_ctor else "false"
        children.append(self.parse_parameter_list("params"))
        self.parse_function_header(attrs, children)
        body = self.parse_body_or_semicolon()
        if body is not None:
            children.append(body)
        return IRNode(NodeKind.FUNCTION_DEF, (start.line, self.last_line()), attrs, children)

    def parse_function_header(self, attrs: dict[str, str], children: list[IRNode]) -> None:
        while True:
            tok = self.peek()
            if tok.type != IDENT:
                return
            if tok.value in _VISIBILITY:
                attrs["visibility"] = self.take().value
            elif tok.value in _MUTABILITY:
                attrs["mutability"] = self.take().value
            elif tok.value == "returns":
                self.take()
                children.append(self.parse_parameter_list("returns"))
            elif tok.value in _HEADER_NOISE:
                self.take()
                if self.at(PUNCT, "("):
                    self.skip_balanced("(")
            else:
                # modifier invocation: Identifier with optional argument list
                mod = self.take()
                node = IRNode(NodeKind.MODIFIER_INVOCATION, (mod.line, mod.line), {"name": mod.value})
                if self.at(PUNCT, "("):
                    args, end_line = self.parse_call_args()
                    node.children.extend(args)
                    node.span = (mod.line, end_line)
                children.append(node)

    def parse_parameter_list(self, role: str) -> IRNode:
        open_tok = self.expect(PUNCT, "(")
        params: list[IRNode] = []
        current: list[Token] = []

        def flush() -> None:
            if not current:
                return
            attrs: dict[str, str] = {}
            if len(current) >= 2 and current[-1].type == IDENT and current[-1].value not in _DECL_QUALIFIERS:
                attrs["name"] = current[-1].value
                attrs["type"] = " ".join(t.value for t in current[:-1] if t.value not in _DECL_QUALIFIERS)
            else:
                attrs["type"] = " ".join(t.value for t in current if t.value not in _DECL_QUALIFIERS)
            params.append(IRNode(NodeKind.IDENTIFIER, (current[0].line, current[-1].line), attrs))
            current.clear()

        depth = 0
        while not self.at(EOF):
            if self.at(PUNCT, ")") and depth == 0:
                break
            tok = self.take()
            if tok.type == PUNCT and tok.value in "([{":
                depth += 1
            elif tok.type == PUNCT and tok.value in ")]}":
                depth -= 1
            if tok.type == PUNCT and tok.value == "," and depth == 0:
                flush()
            else:
                current.append(tok)
        flush()
        self.expect(PUNCT, ")")
        return IRNode(
            NodeKind.PARAMETER_LIST, (open_tok.line, self.last_line()), {"role": role}, params
        )

    def parse_body_or_semicolon(self) -> IRNode | None:
        if self.at(PUNCT, ";"):
            self.take()
            return None
        if self.at(PUNCT, "{"):
            return self.parse_block()
        raise _Fail()

    def parse_modifier(self) -> IRNode:
        start = self.take()  # 'modifier'
        attrs = {"name": self.expect(IDENT).value}
        children: list[IRNode] = []
        if self.at(PUNCT, "("):
            children.append(self.parse_parameter_list("params"))
        while self.at(IDENT) and not self.at(PUNCT, "{"):
            self.take()  # virtual/override noise
        body = self.parse_body_or_semicolon()
        if body is not None:
            children.append(body)
        return IRNode(NodeKind.MODIFIER_DEF, (start.line, self.last_line()), attrs, children)

    # -- statements ---------------------------------------------------------

    def parse_block(self) -> IRNode:
        open_tok = self.expect(PUNCT, "{")
        children: list[IRNode] = []
        while not self.at(EOF) and not self.at(PUNCT, "}"):
            children.append(self.parse_statement())
        self.expect_closer("}")
        return IRNode(NodeKind.BLOCK, (open_tok.line, self.last_line()), {}, children)

    def parse_statement(self) -> IRNode:
        if self.at(PUNCT, "{"):
            return self.parse_block()
        if self.at_ident("if"):
            mark = self.pos
            try:
                return self.parse_if()
            except _Fail:
                self.pos = mark
                return self.unparsed_chunk()
        if self.at_ident("require") and self.peek(1).value == "(":
            mark = self.pos
            try:
                return self.parse_require()
            except _Fail:
                self.pos = mark
                return self.unparsed_chunk()
        if self.at_ident(*_UNPARSED_STMT_KEYWORDS):
            return self.unparsed_chunk()
        mark = self.pos
        try:
            return self.parse_declaration_statement()
        except _Fail:
            self.pos = mark
        try:
            return self.parse_expression_statement()
        except _Fail:
            self.pos = mark
        return self.unparsed_chunk()

    def parse_if(self) -> IRNode:
        start = self.take()  # 'if'
        self.expect(PUNCT, "(")
        condition = self.parse_expression()
        self.expect(PUNCT, ")")
        then_branch = self.parse_statement()
        children = [condition, then_branch]
        if self.at_ident("else"):
            self.take()
            children.append(self.parse_statement())
        return IRNode(NodeKind.IF_STATEMENT, (start.line, self.last_line()), {}, children)

    def parse_require(self) -> IRNode:
        start = self.take()  # 'require'
        args, _ = self.parse_call_args()
        self.expect(PUNCT, ";")
        return IRNode(NodeKind.REQUIRE_CALL, (start.line, self.last_line()), {}, args)

    def parse_declaration_statement(self) -> IRNode:
        """type [qualifier] name = expr ;  -> Assignment wrapped in ExpressionStatement."""
        start = self.peek()
        declared_type = self.parse_type_tokens()
        if self.at_ident(*_DECL_QUALIFIERS):
            self.take()
        name_tok = self.expect(IDENT)
        self.expect(PUNCT, "=")
        rhs = self.parse_expression()
        self.expect(PUNCT, ";")
        lhs = IRNode(NodeKind.IDENTIFIER, (name_tok.line, name_tok.line), {"name": name_tok.value})
        assign = IRNode(
            NodeKind.ASSIGNMENT,
            (start.line, rhs.span[1]),
            {"operator": "=", "target": name_tok.value, "declared_type": declared_type},
            [lhs, rhs],
        )
        return IRNode(NodeKind.EXPRESSION_STATEMENT, (start.line, self.last_line()), {}, [assign])

    def parse_type_tokens(self) -> str:
        parts: list[str] = []
        if self.at_ident("mapping"):
            parts.append(self.take().value)
            if not self.at(PUNCT, "("):
                raise _Fail()
            parts.append(self.skip_balanced("("))
        else:
            if not self.at(IDENT):
                raise _Fail()
            parts.append(self.take().value)
            while self.at(PUNCT, ".") and self.peek(1).type == IDENT:
                self.take()
                parts.append("." + self.take().value)
            if self.at_ident("payable"):
                parts.append(" " + self.take().value)
        while self.at(PUNCT, "["):
            parts.append(self.skip_balanced("["))
        return "".join(parts)

    def skip_balanced(self, opener: str) -> str:
        start_tok = self.expect(PUNCT, opener)
        depth = 1
        closer = _OPENERS[opener]
        while depth and not self.at(EOF):
            tok = self.take()
            if tok.type == PUNCT and tok.value == opener:
                depth += 1
            elif tok.type == PUNCT and tok.value == closer:
                depth -= 1
        return self.slice_raw(start_tok, self.pos)

    def parse_expression_statement(self) -> IRNode:
        start = self.peek()
        expr = self.parse_expression()
        self.expect(PUNCT, ";")
        return IRNode(NodeKind.EXPRESSION_STATEMENT, (start.line, self.last_line()), {}, [expr])

    def unparsed_chunk(self) -> IRNode:
        """Consume one statement-shaped region and wrap it in an Unparsed node."""
        start = self.peek()
        depth = 0
        consumed = 0
        while not self.at(EOF):
            tok = self.peek()
            if tok.type == PUNCT and tok.value in "([":
                depth += 1
            elif tok.type == PUNCT and tok.value in ")]":
                if depth == 0:
                    break  # closes an enclosing region; not ours
                depth -= 1
            elif tok.type == PUNCT and tok.value == "}" and depth == 0:
                break
            elif tok.type == PUNCT and tok.value == "{" and depth == 0:
                self.skip_balanced("{")
                consumed += 1
                break
            self.take()
            consumed += 1
            if tok.type == PUNCT and tok.value == ";" and depth == 0:
                break
        if consumed == 0:
            self.take()  # stray closer at top level: consume to guarantee progress
        raw = self.slice_raw(start, self.pos)
        return IRNode(NodeKind.UNPARSED, (start.line, self.last_line()), {"raw": raw})

    # -- expressions --------------------------------------------------------

    def parse_expression(self) -> IRNode:
        return self.parse_assignment()

    def parse_assignment(self) -> IRNode:
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok.type == PUNCT and tok.value in _ASSIGN_OPS:
            op = self.take().value
            rhs = self.parse_assignment()
            attrs = {"operator": op}
            target = _dotted_name(lhs)
            if target:
                attrs["target"] = target
            return IRNode(NodeKind.ASSIGNMENT, (lhs.span[0], rhs.span[1]), attrs, [lhs, rhs])
        return lhs

    def parse_ternary(self) -> IRNode:
        cond = self.parse_binary(0)
        if self.at(PUNCT, "?"):
            self.take()
            then = self.parse_expression()
            self.expect(PUNCT, ":")
            other = self.parse_expression()
            return IRNode(
                NodeKind.BINARY_OP, (cond.span[0], other.span[1]), {"operator": "?:"}, [cond, then, other]
            )
        return cond

    def parse_binary(self, level: int) -> IRNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while self.peek().type == PUNCT and self.peek().value in ops:
            op = self.take().value
            right = self.parse_binary(level + 1)
            left = IRNode(
                NodeKind.BINARY_OP, (left.span[0], right.span[1]), {"operator": op}, [left, right]
            )
        return left

    def parse_unary(self) -> IRNode:
        tok = self.peek()
        if tok.type == PUNCT and tok.value in _UNARY_PREFIX:
            op = self.take()
            operand = self.parse_unary()
            return IRNode(
                NodeKind.UNARY_OP, (op.line, operand.span[1]), {"operator": op.value}, [operand]
            )
        if tok.type == IDENT and tok.value in ("delete", "new"):
            op = self.take()
            operand = self.parse_unary()
            return IRNode(
                NodeKind.UNARY_OP, (op.line, operand.span[1]), {"operator": op.value}, [operand]
            )
        return self.parse_postfix()

    def parse_postfix(self) -> IRNode:
        node = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.type == PUNCT and tok.value == ".":
                if self.peek(1).type != IDENT:
                    raise _Fail()
                self.take()
                member = self.take()
                attrs = {"member": member.value}
                base_name = _dotted_name(node)
                if node.kind is NodeKind.IDENTIFIER:
                    attrs["object"] = node.attr("name")
                if base_name:
                    attrs["path"] = f"{base_name}.{member.value}"
                node = IRNode(NodeKind.MEMBER_ACCESS, (node.span[0], member.line), attrs, [node])
            elif tok.type == PUNCT and tok.value == "(":
                args, end_line = self.parse_call_args()
                attrs = {}
                callee = _dotted_name(node)
                if callee:
                    attrs["callee"] = callee
                node = IRNode(
                    NodeKind.FUNCTION_CALL, (node.span[0], end_line), attrs, [node, *args]
                )
            elif tok.type == PUNCT and tok.value == "[":
                self.take()
                if self.at(PUNCT, "]"):  # array type in expression position, e.g. new uint[](n)
                    self.take()
                    continue
                index = self.parse_expression()
                self.expect(PUNCT, "]")
                node = IRNode(
                    NodeKind.BINARY_OP,
                    (node.span[0], self.last_line()),
                    {"operator": "[]"},
                    [node, index],
                )
            elif tok.type == PUNCT and tok.value in ("++", "--"):
                op = self.take()
                node = IRNode(
                    NodeKind.UNARY_OP,
                    (node.span[0], op.line),
                    {"operator": op.value, "postfix": "true"},
                    [node],
                )
            else:
                return node

    def parse_call_args(self) -> tuple[list[IRNode], int]:
        self.expect(PUNCT, "(")
        args: list[IRNode] = []
        while not self.at(PUNCT, ")"):
            args.append(self.parse_expression())
            if self.at(PUNCT, ","):
                self.take()
            elif not self.at(PUNCT, ")"):
                raise _Fail()
        self.expect(PUNCT, ")")
        return args, self.last_line()

    def parse_primary(self) -> IRNode:
        tok = self.peek()
        if tok.type == IDENT:
            if tok.value in ("true", "false"):
                self.take()
                return IRNode(NodeKind.LITERAL, (tok.line, tok.line), {"value": tok.value, "literal_kind": "bool"})
            self.take()
            return IRNode(NodeKind.IDENTIFIER, (tok.line, tok.line), {"name": tok.value})
        if tok.type == NUMBER:
            self.take()
            value = tok.value
            if self.peek().type == IDENT and self.peek().value in _UNIT_SUFFIXES:
                value += " " + self.take().value
            return IRNode(NodeKind.LITERAL, (tok.line, tok.line), {"value": value, "literal_kind": "number"})
        if tok.type == STRING:
            self.take()
            raw = self.file.text[tok.offset : tok.offset + len(tok.value)]
            return IRNode(NodeKind.LITERAL, (tok.line, tok.line), {"value": raw, "literal_kind": "string"})
        if tok.type == PUNCT and tok.value == "(":
            self.take()
            parts = []
            while not self.at(PUNCT, ")"):
                if self.at(PUNCT, ","):  # skipped slot in tuple assignment
                    self.take()
                    continue
                parts.append(self.parse_expression())
                if self.at(PUNCT, ","):
                    self.take()
            self.expect(PUNCT, ")")
            if len(parts) == 1:
                return parts[0]
            if not parts:
                raise _Fail()
            node = parts[0]
            for part in parts[1:]:
                node = IRNode(
                    NodeKind.BINARY_OP, (node.span[0], part.span[1]), {"operator": ","}, [node, part]
                )
            return node
        raise _Fail()


def _dotted_name(node: IRNode) -> str | None:
    """a.b.c path for identifier/member-access chains, else None."""
    if node.kind is NodeKind.IDENTIFIER:
        return node.attr("name") or None
    if node.kind is NodeKind.MEMBER_ACCESS:
        return node.attr("path") or None
    return None
