"""Lexing, parsing, printing and static analysis for the C++ subset."""

from .lexer import (FrontendError, LexError, Token, TokenStream, Trivia, tokenize,
                    encode_char, encode_string, decode_text)
from .astnodes import (Node, Program, Type, NODE_KINDS, same_structure, walk,
                       walk_with_paths, resolve_path, parent_of)
from .parser import SyntaxFailure, parse, parse_source
from .binder import BindError, BindInfo, Symbol, bind
from .printer import print_source, format_expr, format_type
from .paths import LeafPath, extract_leaf_paths
from .dfg import Dfg, Occurrence, UnresolvedIdentifierError, build_dfg

__all__ = [
    "FrontendError", "LexError", "Token", "TokenStream", "Trivia", "tokenize",
    "encode_char", "encode_string", "decode_text",
    "Node", "Program", "Type", "NODE_KINDS", "same_structure", "walk",
    "walk_with_paths", "resolve_path", "parent_of",
    "SyntaxFailure", "parse", "parse_source",
    "BindError", "BindInfo", "Symbol", "bind",
    "print_source", "format_expr", "format_type",
    "LeafPath", "extract_leaf_paths",
    "Dfg", "Occurrence", "UnresolvedIdentifierError", "build_dfg",
]
