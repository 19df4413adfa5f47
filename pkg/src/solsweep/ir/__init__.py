"""Solidity parse-tree intermediate representation and pattern queries."""

from solsweep.ir.source import SourceFile
from solsweep.ir.nodes import IRNode, NodeKind
from solsweep.ir.parser import ParseError, parse_source
from solsweep.ir.pragma import VersionClass, VersionConstraint, extract_pragma
from solsweep.ir.query import Axis, PatternError, QueryPattern, query
from solsweep.ir.dump import dump_tree

__all__ = [
    "SourceFile",
    "IRNode",
    "NodeKind",
    "ParseError",
    "parse_source",
    "VersionClass",
    "VersionConstraint",
    "extract_pragma",
    "Axis",
    "PatternError",
    "QueryPattern",
    "query",
    "dump_tree",
]
