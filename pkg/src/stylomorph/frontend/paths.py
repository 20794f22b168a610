"""Root-to-leaf kind paths.

A leaf is any token-bearing node (identifiers, literals, endl, declarator
and function names). Paths list node kinds from the root down to the leaf,
are truncated from the root side when deeper than max_depth, and come back
in source (token) order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .astnodes import Node
from .lexer import Token


@dataclass
class LeafPath:
    token: Token | None
    kinds: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.kinds)


def extract_leaf_paths(ast: Node, max_depth: int = 32,
                       max_count: int = 1000) -> list[LeafPath]:
    if max_count <= 0:
        return []
    found: list[LeafPath] = []

    def visit(node: Node, kinds: tuple[str, ...]) -> None:
        kinds = kinds + (node.kind,)
        if node.token is not None:
            found.append(LeafPath(node.token, kinds[-max_depth:]))
        for child in node.children():
            visit(child, kinds)

    visit(ast, ())
    found.sort(key=lambda p: p.token.index if p.token is not None else -1)
    return found[:max_count]
