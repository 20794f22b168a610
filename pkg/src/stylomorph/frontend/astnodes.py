"""Tree representation for the supported C++ subset.

Nodes expose an ordered ``children()`` view derived from per-class slot
declarations so that tree walks, node paths (index sequences from the root)
and generic child replacement work uniformly. Structural equality
(`same_structure`) compares kinds, semantic attributes and children while
ignoring positions, tokens, resolved symbols and comments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Optional

from .lexer import Token


@dataclass(frozen=True)
class Type:
    """A written type. ``name`` is a primitive name, "vector", or a typedef
    name; vectors carry an element type."""
    name: str
    elem: Optional["Type"] = None

    def __str__(self) -> str:
        if self.name == "vector":
            return f"vector<{self.elem}>"
        return self.name


INT = Type("int")
LONG_LONG = Type("long long")
DOUBLE = Type("double")
BOOL = Type("bool")
CHAR = Type("char")
STRING = Type("string")
VOID = Type("void")

PRIMITIVE_TYPES = {"int", "long long", "double", "bool", "char", "string", "void"}


class Node:
    """Base class. Subclasses declare:

    kind    node-kind string used by features, paths and printing
    _slots  ordered child slot names; a slot holding a list expands in place
    _attrs  semantic non-child attributes compared by same_structure
    """

    kind: ClassVar[str] = "node"
    _slots: ClassVar[tuple[str, ...]] = ()
    _attrs: ClassVar[tuple[str, ...]] = ()

    span: tuple[int, int, int, int] | None
    token: Token | None

    def children(self) -> list["Node"]:
        out: list[Node] = []
        for slot in self._slots:
            value = getattr(self, slot)
            if value is None:
                continue
            if isinstance(value, list):
                out.extend(value)
            else:
                out.append(value)
        return out

    def child_entries(self) -> list[tuple[str, int | None, "Node"]]:
        out: list[tuple[str, int | None, Node]] = []
        for slot in self._slots:
            value = getattr(self, slot)
            if value is None:
                continue
            if isinstance(value, list):
                for i, item in enumerate(value):
                    out.append((slot, i, item))
            else:
                out.append((slot, None, value))
        return out

    def replace_child(self, index: int, new: "Node") -> None:
        """Replace the index-th child (in children() order) with new."""
        entries = self.child_entries()
        slot, sub, _ = entries[index]
        if sub is None:
            setattr(self, slot, new)
        else:
            getattr(self, slot)[sub] = new


def walk(node: Node):
    """Pre-order traversal."""
    yield node
    for child in node.children():
        yield from walk(child)


def walk_with_paths(node: Node, prefix: tuple[int, ...] = ()):
    yield prefix, node
    for i, child in enumerate(node.children()):
        yield from walk_with_paths(child, prefix + (i,))


def resolve_path(root: Node, path: tuple[int, ...]) -> Node:
    node = root
    for i in path:
        node = node.children()[i]
    return node


def parent_of(root: Node, path: tuple[int, ...]) -> tuple[Node, int]:
    """Parent node and the child index of path's target within it."""
    if not path:
        raise ValueError("root has no parent")
    return resolve_path(root, path[:-1]), path[-1]


def same_structure(a: Node | None, b: Node | None) -> bool:
    if a is None or b is None:
        return a is b
    if a.kind != b.kind:
        return False
    for attr in a._attrs:
        if getattr(a, attr) != getattr(b, attr):
            return False
    ca, cb = a.children(), b.children()
    if len(ca) != len(cb):
        return False
    return all(same_structure(x, y) for x, y in zip(ca, cb))


def _node(cls):
    """Decorator: dataclass without eq (same_structure is the comparator)."""
    return dataclass(eq=False, repr=False)(cls)


# --- top level -------------------------------------------------------------

@_node
class Program(Node):
    kind = "translation-unit"
    _slots = ("items",)
    items: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None

    def functions(self) -> list["Function"]:
        return [it for it in self.items if isinstance(it, Function)]


@_node
class IncludeDirective(Node):
    kind = "include-directive"
    _attrs = ("text",)
    text: str = ""
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class UsingDirective(Node):
    kind = "using-directive"
    _attrs = ("text",)
    text: str = "using namespace std;"
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class TypedefDecl(Node):
    kind = "typedef-decl"
    _attrs = ("underlying", "name")
    underlying: Type = LONG_LONG
    name: str = "ll"
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class Param(Node):
    kind = "param"
    _attrs = ("type", "name")
    type: Type = INT
    name: str = ""
    span: tuple | None = None
    token: Token | None = None
    symbol: object = None


@_node
class Function(Node):
    kind = "function"
    _slots = ("params", "body")
    _attrs = ("return_type", "name")
    return_type: Type = INT
    name: str = ""
    params: list[Param] = field(default_factory=list)
    body: "Block" = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


# --- statements ------------------------------------------------------------

@_node
class Block(Node):
    kind = "block"
    _slots = ("stmts",)
    stmts: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class Declarator(Node):
    kind = "declarator"
    _slots = ("init",)
    _attrs = ("name", "array_size")
    name: str = ""
    array_size: int | None = None
    init: Node | None = None
    span: tuple | None = None
    token: Token | None = None
    symbol: object = None


@_node
class DeclStmt(Node):
    kind = "decl-stmt"
    _slots = ("declarators",)
    _attrs = ("base_type",)
    base_type: Type = INT
    declarators: list[Declarator] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class ExprStmt(Node):
    kind = "expr-stmt"
    _slots = ("expr",)
    expr: Node = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class AssignStmt(Node):
    kind = "assign-stmt"
    _slots = ("target", "value")
    _attrs = ("op",)
    op: str = "="
    target: Node = None
    value: Node = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class IfStmt(Node):
    kind = "if-stmt"
    _slots = ("cond", "then_body", "else_body")
    cond: Node = None
    then_body: Node = None
    else_body: Node | None = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class ForStmt(Node):
    kind = "for-stmt"
    _slots = ("init", "cond", "step", "body")
    init: Node | None = None
    cond: Node | None = None
    step: Node | None = None
    body: Node = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class WhileStmt(Node):
    kind = "while-stmt"
    _slots = ("cond", "body")
    cond: Node = None
    body: Node = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class DoWhileStmt(Node):
    kind = "do-stmt"
    _slots = ("body", "cond")
    body: Node = None
    cond: Node = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class BreakStmt(Node):
    kind = "break-stmt"
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class ContinueStmt(Node):
    kind = "continue-stmt"
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class ReturnStmt(Node):
    kind = "return-stmt"
    _slots = ("value",)
    value: Node | None = None
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class CinStmt(Node):
    kind = "cin-stmt"
    _slots = ("targets",)
    targets: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


@_node
class CoutStmt(Node):
    kind = "cout-stmt"
    _slots = ("items",)
    items: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    leading_comments: tuple[str, ...] = ()


STATEMENT_KINDS = frozenset([
    "block", "decl-stmt", "expr-stmt", "assign-stmt", "if-stmt", "for-stmt",
    "while-stmt", "do-stmt", "break-stmt", "continue-stmt", "return-stmt",
    "cin-stmt", "cout-stmt",
])


# --- expressions -----------------------------------------------------------

@_node
class Var(Node):
    kind = "var"
    _attrs = ("name",)
    name: str = ""
    span: tuple | None = None
    token: Token | None = None
    symbol: object = None
    static_type: Type | None = None


@_node
class IntLiteral(Node):
    kind = "int-literal"
    _attrs = ("value",)
    value: int = 0
    lexeme: str | None = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class FloatLiteral(Node):
    kind = "float-literal"
    _attrs = ("value",)
    value: float = 0.0
    lexeme: str | None = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class StringLiteral(Node):
    kind = "string-literal"
    _attrs = ("value",)
    value: str = ""
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class CharLiteral(Node):
    kind = "char-literal"
    _attrs = ("value",)
    value: str = " "
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class BoolLiteral(Node):
    kind = "bool-literal"
    _attrs = ("value",)
    value: bool = False
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Endl(Node):
    kind = "endl"
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Binary(Node):
    kind = "binary"
    _slots = ("left", "right")
    _attrs = ("op",)
    op: str = "+"
    left: Node = None
    right: Node = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Unary(Node):
    kind = "unary"
    _slots = ("operand",)
    _attrs = ("op",)
    op: str = "-"
    operand: Node = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class IncDec(Node):
    kind = "incdec"
    _slots = ("target",)
    _attrs = ("op", "is_prefix")
    op: str = "++"
    is_prefix: bool = False
    target: Node = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Ternary(Node):
    kind = "ternary"
    _slots = ("cond", "if_true", "if_false")
    cond: Node = None
    if_true: Node = None
    if_false: Node = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Call(Node):
    kind = "call"
    _slots = ("args",)
    _attrs = ("name",)
    name: str = ""
    args: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class MethodCall(Node):
    kind = "method-call"
    _slots = ("obj", "args")
    _attrs = ("method",)
    method: str = ""
    obj: Node = None
    args: list[Node] = field(default_factory=list)
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


@_node
class Index(Node):
    kind = "index"
    _slots = ("base", "subscript")
    base: Node = None
    subscript: Node = None
    span: tuple | None = None
    token: Token | None = None
    static_type: Type | None = None


NODE_KINDS = (
    "translation-unit", "include-directive", "using-directive", "typedef-decl",
    "function", "param", "block", "decl-stmt", "declarator", "expr-stmt",
    "assign-stmt", "if-stmt", "for-stmt", "while-stmt", "do-stmt",
    "break-stmt", "continue-stmt", "return-stmt", "cin-stmt", "cout-stmt",
    "var", "int-literal", "float-literal", "string-literal", "char-literal",
    "bool-literal", "endl", "binary", "unary", "incdec", "ternary", "call",
    "method-call", "index",
)

KIND_INDEX = {k: i for i, k in enumerate(NODE_KINDS)}
