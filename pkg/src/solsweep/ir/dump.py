"""XML-like textual dump of an IR tree, used by the debug CLI and golden tests."""

from __future__ import annotations

from solsweep.ir.nodes import IRNode


def dump_tree(root: IRNode) -> str:
    lines: list[str] = []
    _dump(root, 0, lines)
    return "\n".join(lines) + "\n"


def _dump(node: IRNode, depth: int, lines: list[str]) -> None:
    attrs = "".join(
        f' {key}="{_escape(value)}"' for key, value in sorted(node.attributes.items())
    )
    lines.append(f'{"  " * depth}<{node.kind.value} lines="{node.span[0]}-{node.span[1]}"{attrs}>')
    for child in node.children:
        _dump(child, depth + 1, lines)


def _escape(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace('"', "&quot;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace("\n", "\\n")
        .replace("\t", "\\t")
    )
