"""Deterministic source renderer.

Fixed style: 4-space indentation, one statement per line, a space around
binary operators. Braces follow the tree: a Block body prints braced, a bare
statement body prints on its own indented line. parse(print_source(ast)) is
structurally equal to ast and printing is idempotent.
"""

from __future__ import annotations

from .astnodes import (
    AssignStmt, Binary, Block, BoolLiteral, BreakStmt, Call, CharLiteral,
    CinStmt, ContinueStmt, CoutStmt, DeclStmt, DoWhileStmt, Endl, ExprStmt,
    FloatLiteral, ForStmt, Function, IfStmt, IncDec, IncludeDirective, Index,
    IntLiteral, MethodCall, Node, Program, ReturnStmt, StringLiteral, Ternary,
    Type, TypedefDecl, Unary, UsingDirective, Var, WhileStmt,
)
from .lexer import encode_char, encode_string

INDENT = "    "

# precedence levels, higher binds tighter
_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5, "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "<<": 8, ">>": 8,
    "+": 9, "-": 9, "*": 10, "/": 10, "%": 10,
}
_TERNARY_PREC = 0
_UNARY_PREC = 11
_POSTFIX_PREC = 12


def _expr_prec(node: Node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Ternary):
        return _TERNARY_PREC
    if isinstance(node, Unary):
        return _UNARY_PREC
    if isinstance(node, IncDec):
        return _UNARY_PREC if node.is_prefix else _POSTFIX_PREC
    return _POSTFIX_PREC  # atoms, calls, indexing


def format_type(t: Type) -> str:
    if t.name == "vector":
        return f"vector<{format_type(t.elem)}>"
    return t.name


def format_expr(node: Node) -> str:
    if isinstance(node, Var):
        return node.name
    if isinstance(node, IntLiteral):
        return node.lexeme if node.lexeme else str(node.value)
    if isinstance(node, FloatLiteral):
        return node.lexeme if node.lexeme else repr(node.value)
    if isinstance(node, StringLiteral):
        return encode_string(node.value)
    if isinstance(node, CharLiteral):
        return encode_char(node.value)
    if isinstance(node, BoolLiteral):
        return "true" if node.value else "false"
    if isinstance(node, Endl):
        return "endl"
    if isinstance(node, Binary):
        left = _wrap(node.left, _PREC[node.op], right_side=False)
        right = _wrap(node.right, _PREC[node.op], right_side=True)
        return f"{left} {node.op} {right}"
    if isinstance(node, Unary):
        inner = _wrap(node.operand, _UNARY_PREC, right_side=False,
                      unary_ctx=True)
        # keep --x from gluing into a decrement token
        sep = " " if node.op in ("+", "-") and inner.startswith(node.op) else ""
        return f"{node.op}{sep}{inner}"
    if isinstance(node, IncDec):
        target = format_expr(node.target)
        return f"{node.op}{target}" if node.is_prefix else f"{target}{node.op}"
    if isinstance(node, Ternary):
        cond = _wrap(node.cond, _TERNARY_PREC + 1, right_side=False)
        if_true = format_expr(node.if_true)
        if_false = format_expr(node.if_false)
        return f"{cond} ? {if_true} : {if_false}"
    if isinstance(node, Call):
        args = ", ".join(format_expr(a) for a in node.args)
        return f"{node.name}({args})"
    if isinstance(node, MethodCall):
        obj = _wrap(node.obj, _POSTFIX_PREC, right_side=False)
        args = ", ".join(format_expr(a) for a in node.args)
        return f"{obj}.{node.method}({args})"
    if isinstance(node, Index):
        base = _wrap(node.base, _POSTFIX_PREC, right_side=False)
        return f"{base}[{format_expr(node.subscript)}]"
    raise TypeError(f"not an expression node: {node.kind}")


def _wrap(node: Node, parent_prec: int, right_side: bool,
          unary_ctx: bool = False) -> str:
    text = format_expr(node)
    prec = _expr_prec(node)
    if prec < parent_prec:
        return f"({text})"
    if prec == parent_prec and right_side and isinstance(node, Binary):
        # left-associative tree printed right-nested needs parens
        return f"({text})"
    if unary_ctx and isinstance(node, Ternary):
        return f"({text})"
    return text


def _format_declarator(decl) -> str:
    text = decl.name
    if decl.array_size is not None:
        text += f"[{decl.array_size}]"
    if decl.init is not None:
        text += f" = {format_expr(decl.init)}"
    return text


def _format_decl(stmt: DeclStmt) -> str:
    decls = ", ".join(_format_declarator(d) for d in stmt.declarators)
    return f"{format_type(stmt.base_type)} {decls}"


def _format_simple(node: Node) -> str:
    """Statement content without the trailing semicolon (for-init/step)."""
    if isinstance(node, DeclStmt):
        return _format_decl(node)
    if isinstance(node, AssignStmt):
        return (f"{format_expr(node.target)} {node.op} "
                f"{format_expr(node.value)}")
    if isinstance(node, ExprStmt):
        return format_expr(node.expr)
    raise TypeError(f"not a simple statement: {node.kind}")


class _Writer:
    def __init__(self):
        self.lines: list[str] = []

    def line(self, depth: int, text: str) -> None:
        self.lines.append(INDENT * depth + text if text else "")

    def comments(self, node: Node, depth: int) -> None:
        for comment in getattr(node, "leading_comments", ()):
            for part in comment.splitlines():
                self.line(depth, part.strip())

    def statement(self, node: Node, depth: int) -> None:
        self.comments(node, depth)
        if isinstance(node, Block):
            self.line(depth, "{")
            for stmt in node.stmts:
                self.statement(stmt, depth + 1)
            self.line(depth, "}")
        elif isinstance(node, (DeclStmt, AssignStmt, ExprStmt)):
            self.line(depth, _format_simple(node) + ";")
        elif isinstance(node, IfStmt):
            self.if_chain(node, depth)
        elif isinstance(node, ForStmt):
            init = _format_simple(node.init) if node.init is not None else ""
            cond = format_expr(node.cond) if node.cond is not None else ""
            step = _format_simple(node.step) if node.step is not None else ""
            self.header_with_body(f"for ({init}; {cond}; {step})", node.body,
                                  depth)
        elif isinstance(node, WhileStmt):
            self.header_with_body(f"while ({format_expr(node.cond)})",
                                  node.body, depth)
        elif isinstance(node, DoWhileStmt):
            if isinstance(node.body, Block):
                self.line(depth, "do {")
                for stmt in node.body.stmts:
                    self.statement(stmt, depth + 1)
                self.line(depth, f"}} while ({format_expr(node.cond)});")
            else:
                self.line(depth, "do")
                self.statement(node.body, depth + 1)
                self.line(depth, f"while ({format_expr(node.cond)});")
        elif isinstance(node, BreakStmt):
            self.line(depth, "break;")
        elif isinstance(node, ContinueStmt):
            self.line(depth, "continue;")
        elif isinstance(node, ReturnStmt):
            if node.value is None:
                self.line(depth, "return;")
            else:
                self.line(depth, f"return {format_expr(node.value)};")
        elif isinstance(node, CinStmt):
            chain = " >> ".join(format_expr(t) for t in node.targets)
            self.line(depth, f"cin >> {chain};")
        elif isinstance(node, CoutStmt):
            chain = " << ".join(_cout_item(it) for it in node.items)
            self.line(depth, f"cout << {chain};")
        else:
            raise TypeError(f"not a statement node: {node.kind}")

    def header_with_body(self, header: str, body: Node, depth: int) -> None:
        if isinstance(body, Block):
            self.line(depth, header + " {")
            for stmt in body.stmts:
                self.statement(stmt, depth + 1)
            self.line(depth, "}")
        else:
            self.line(depth, header)
            self.statement(body, depth + 1)

    def if_chain(self, node: IfStmt, depth: int, prefix: str = "") -> None:
        header = f"{prefix}if ({format_expr(node.cond)})"
        braced = isinstance(node.then_body, Block)
        # an unbraced then ending in an else-less if would capture our else
        if not braced and node.else_body is not None \
                and _open_if_tail(node.then_body):
            braced = True
            self.line(depth, header + " {")
            self.statement(node.then_body, depth + 1)
        elif braced:
            self.line(depth, header + " {")
            for stmt in node.then_body.stmts:
                self.statement(stmt, depth + 1)
        else:
            self.line(depth, header)
            self.statement(node.then_body, depth + 1)
        if node.else_body is None:
            if braced:
                self.line(depth, "}")
            return
        lead = "} " if braced else ""
        if isinstance(node.else_body, IfStmt):
            self.comments(node.else_body, depth)
            self.if_chain(node.else_body, depth, prefix=f"{lead}else ")
        elif isinstance(node.else_body, Block):
            self.line(depth, f"{lead}else {{")
            for stmt in node.else_body.stmts:
                self.statement(stmt, depth + 1)
            self.line(depth, "}")
        else:
            self.line(depth, f"{lead}else" if lead else "else")
            self.statement(node.else_body, depth + 1)


def _open_if_tail(node: Node) -> bool:
    """True when the statement ends in an else-less if that would capture
    a following else token."""
    if isinstance(node, IfStmt):
        if node.else_body is None:
            return True
        return not isinstance(node.else_body, Block) \
            and _open_if_tail(node.else_body)
    if isinstance(node, (WhileStmt, ForStmt)):
        return not isinstance(node.body, Block) and _open_if_tail(node.body)
    return False


def _cout_item(node: Node) -> str:
    if isinstance(node, Endl):
        return "endl"
    prec = _expr_prec(node)
    text = format_expr(node)
    # anything at or below shift precedence needs parens inside a << chain
    return f"({text})" if prec <= _PREC["<<"] else text


def print_source(program: Program) -> str:
    writer = _Writer()
    for item in program.items:
        if isinstance(item, IncludeDirective):
            writer.comments(item, 0)
            writer.line(0, item.text.strip())
        elif isinstance(item, UsingDirective):
            writer.comments(item, 0)
            writer.line(0, item.text.strip())
        elif isinstance(item, TypedefDecl):
            writer.comments(item, 0)
            writer.line(0,
                        f"typedef {format_type(item.underlying)} {item.name};")
        elif isinstance(item, Function):
            writer.comments(item, 0)
            params = ", ".join(f"{format_type(p.type)} {p.name}"
                               for p in item.params)
            writer.line(0, f"{format_type(item.return_type)} "
                           f"{item.name}({params}) {{")
            for stmt in item.body.stmts:
                writer.statement(stmt, 1)
            writer.line(0, "}")
        else:
            raise TypeError(f"not a top-level node: {item.kind}")
    return "\n".join(writer.lines) + "\n"
