"""Name resolution and static typing for parsed programs.

Walks each function with a scope stack, attaches Symbol objects to variable
occurrences and resolved types to every expression, and enforces the
bind-time half of the syntax-error taxonomy: undeclared-variable,
redeclared-variable, return-statement (arity), plus "other" for subset and
type violations.

Functions are resolvable regardless of definition order. Declarations must
precede uses within a function, as in C++.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import formats
from .lexer import FrontendError
from .astnodes import (
    AssignStmt, Binary, Block, BoolLiteral, BreakStmt, Call, CharLiteral,
    CinStmt, ContinueStmt, CoutStmt, DeclStmt, DoWhileStmt, Endl, ExprStmt,
    FloatLiteral, ForStmt, Function, IfStmt, IncDec, IncludeDirective, Index,
    IntLiteral, MethodCall, Node, Program, ReturnStmt, StringLiteral, Ternary,
    Type, TypedefDecl, Unary, UsingDirective, Var, WhileStmt,
)

BIND_UNDECLARED = "undeclared-variable"
BIND_REDECLARED = "redeclared-variable"
BIND_RETURN = "return-statement"
BIND_OTHER = "other"

INT_T = Type("int")
LL_T = Type("long long")
DOUBLE_T = Type("double")
BOOL_T = Type("bool")
CHAR_T = Type("char")
STRING_T = Type("string")
VOID_T = Type("void")

BUILTIN_FUNCTIONS = ("printf", "scanf", "min", "max", "abs", "swap", "sqrt")
RESERVED_NAMES = frozenset(("cin", "cout", "endl", "main") +
                           BUILTIN_FUNCTIONS)

_INT_CLASS = ("int", "long long", "bool", "char")
_NUMERIC = ("int", "long long", "bool", "char", "double")


class BindError(FrontendError):
    def __init__(self, category: str, message: str,
                 line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.category = category
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Symbol:
    name: str
    type: Type
    kind: str  # "var" | "param"
    sid: int
    is_array: bool = False
    array_size: int | None = None


@dataclass
class BindInfo:
    functions: dict[str, Function] = field(default_factory=dict)
    typedefs: dict[str, Type] = field(default_factory=dict)
    symbols: list[Symbol] = field(default_factory=list)


def _loc(node: Node) -> tuple[int, int]:
    if node is not None and node.span:
        return node.span[0], node.span[1]
    return 0, 0


class _Binder:
    def __init__(self, program: Program):
        self.program = program
        self.info = BindInfo()
        self.sid = itertools.count()
        self.scopes: list[dict[str, Symbol]] = []
        self.current_fn: Function | None = None

    def error(self, category: str, message: str, node: Node = None):
        line, col = _loc(node)
        raise BindError(category, message, line, col)

    # --- types ------------------------------------------------------------

    def resolve(self, t: Type, node: Node = None) -> Type:
        if t.name == "vector":
            return Type("vector", self.resolve(t.elem, node))
        if t.name in ("int", "long long", "double", "bool", "char",
                      "string", "void"):
            return t
        if t.name in self.info.typedefs:
            return self.info.typedefs[t.name]
        self.error(BIND_OTHER, f"unknown type {t.name!r}", node)

    # --- scopes -----------------------------------------------------------

    def push(self):
        self.scopes.append({})

    def pop(self):
        self.scopes.pop()

    def declare(self, name: str, type_: Type, kind: str, node: Node,
                is_array: bool = False, array_size=None) -> Symbol:
        if name in RESERVED_NAMES:
            self.error(BIND_OTHER, f"{name!r} is a reserved name", node)
        if name in self.scopes[-1]:
            self.error(BIND_REDECLARED,
                       f"{name!r} redeclared in the same scope", node)
        sym = Symbol(name, type_, kind, next(self.sid), is_array, array_size)
        self.scopes[-1][name] = sym
        self.info.symbols.append(sym)
        return sym

    def lookup(self, name: str, node: Node) -> Symbol:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        self.error(BIND_UNDECLARED, f"use of undeclared {name!r}", node)

    # --- program ----------------------------------------------------------

    def run(self) -> BindInfo:
        for item in self.program.items:
            if isinstance(item, TypedefDecl):
                if item.name in self.info.typedefs \
                        or item.name in RESERVED_NAMES:
                    self.error(BIND_OTHER,
                               f"typedef {item.name!r} already defined", item)
                self.info.typedefs[item.name] = self.resolve(item.underlying,
                                                             item)
            elif isinstance(item, Function):
                if item.name in self.info.functions \
                        or item.name in BUILTIN_FUNCTIONS:
                    self.error(BIND_OTHER,
                               f"function {item.name!r} already defined",
                               item)
                self.info.functions[item.name] = item
                item.resolved_return = self.resolve(item.return_type, item)
            elif isinstance(item, (IncludeDirective, UsingDirective)):
                pass
            else:
                self.error(BIND_OTHER, f"unexpected {item.kind} at top level",
                           item)
        if "main" not in self.info.functions:
            self.error(BIND_OTHER, "program has no main function")
        main = self.info.functions["main"]
        if main.params:
            self.error(BIND_OTHER, "main must take no parameters", main)
        for fn in self.info.functions.values():
            self.bind_function(fn)
        return self.info

    def bind_function(self, fn: Function) -> None:
        self.current_fn = fn
        self.push()
        for param in fn.params:
            ptype = self.resolve(param.type, param)
            if ptype.name == "void":
                self.error(BIND_OTHER, "void parameter", param)
            param.symbol = self.declare(param.name, ptype, "param", param)
        self.bind_block(fn.body, new_scope=True)
        self.pop()
        self.current_fn = None

    # --- statements -------------------------------------------------------

    def bind_block(self, block: Block, new_scope: bool = True) -> None:
        if new_scope:
            self.push()
        for stmt in block.stmts:
            self.bind_stmt(stmt)
        if new_scope:
            self.pop()

    def bind_stmt(self, stmt: Node) -> None:
        if isinstance(stmt, Block):
            self.bind_block(stmt)
        elif isinstance(stmt, DeclStmt):
            self.bind_decl(stmt)
        elif isinstance(stmt, ExprStmt):
            self.type_of(stmt.expr)
        elif isinstance(stmt, AssignStmt):
            self.bind_assign(stmt)
        elif isinstance(stmt, IfStmt):
            self.check_condition(stmt.cond)
            self.bind_body(stmt.then_body)
            if stmt.else_body is not None:
                self.bind_body(stmt.else_body)
        elif isinstance(stmt, WhileStmt):
            self.check_condition(stmt.cond)
            self.bind_body(stmt.body)
        elif isinstance(stmt, DoWhileStmt):
            self.bind_body(stmt.body)
            self.check_condition(stmt.cond)
        elif isinstance(stmt, ForStmt):
            self.push()  # for-init declarations scope to the loop
            if stmt.init is not None:
                self.bind_stmt(stmt.init)
            if stmt.cond is not None:
                self.check_condition(stmt.cond)
            if stmt.step is not None:
                self.bind_stmt(stmt.step)
            self.bind_body(stmt.body)
            self.pop()
        elif isinstance(stmt, (BreakStmt, ContinueStmt)):
            pass
        elif isinstance(stmt, ReturnStmt):
            self.bind_return(stmt)
        elif isinstance(stmt, CinStmt):
            for target in stmt.targets:
                t = self.type_of(target)
                if t.name not in ("int", "long long", "double", "char",
                                  "string"):
                    self.error(BIND_OTHER,
                               f"cannot read into a {t.name}", target)
        elif isinstance(stmt, CoutStmt):
            for item in stmt.items:
                if isinstance(item, Endl):
                    item.static_type = VOID_T
                    continue
                t = self.type_of(item)
                if t.name not in _NUMERIC + ("string",):
                    self.error(BIND_OTHER, f"cannot print a {t.name}", item)
        else:
            self.error(BIND_OTHER, f"unexpected statement {stmt.kind}", stmt)

    def bind_body(self, body: Node) -> None:
        if isinstance(body, Block):
            self.bind_block(body)
        else:
            self.bind_stmt(body)

    def bind_decl(self, stmt: DeclStmt) -> None:
        base = self.resolve(stmt.base_type, stmt)
        if base.name == "void":
            self.error(BIND_OTHER, "void is not a variable type", stmt)
        for decl in stmt.declarators:
            is_array = decl.array_size is not None
            if is_array and base.name in ("vector", "string"):
                self.error(BIND_OTHER, "arrays of this type are unsupported",
                           decl)
            if decl.init is not None:
                vtype = self.type_of(decl.init)
                if not _convertible(vtype, base):
                    self.error(BIND_OTHER,
                               f"cannot initialize {base.name} from "
                               f"{vtype.name}", decl)
            decl.symbol = self.declare(decl.name, base, "var", decl,
                                       is_array, decl.array_size)

    def bind_assign(self, stmt: AssignStmt) -> None:
        ttype = self.type_of(stmt.target)
        sym = _root_symbol(stmt.target)
        if sym is not None and sym.is_array and isinstance(stmt.target, Var):
            self.error(BIND_OTHER, "arrays are not assignable", stmt)
        vtype = self.type_of(stmt.value)
        if stmt.op == "=":
            if not _convertible(vtype, ttype):
                self.error(BIND_OTHER,
                           f"cannot assign {vtype.name} to {ttype.name}",
                           stmt)
            return
        op = stmt.op[0]
        if ttype.name == "string":
            if op != "+" or vtype.name not in ("string", "char"):
                self.error(BIND_OTHER, "bad compound assignment on string",
                           stmt)
            return
        if ttype.name not in _NUMERIC or vtype.name not in _NUMERIC:
            self.error(BIND_OTHER, "compound assignment needs numbers", stmt)
        if op == "%" and (ttype.name == "double" or vtype.name == "double"):
            self.error(BIND_OTHER, "%= needs integers", stmt)

    def bind_return(self, stmt: ReturnStmt) -> None:
        ret = self.current_fn.resolved_return
        if stmt.value is None:
            if ret.name != "void":
                self.error(BIND_RETURN,
                           "return without a value in a function returning "
                           + ret.name, stmt)
            return
        if ret.name == "void":
            self.error(BIND_RETURN, "value returned from a void function",
                       stmt)
        vtype = self.type_of(stmt.value)
        if not _convertible(vtype, ret):
            self.error(BIND_OTHER,
                       f"cannot return {vtype.name} as {ret.name}", stmt)

    def check_condition(self, cond: Node) -> None:
        t = self.type_of(cond)
        if t.name not in _NUMERIC:
            self.error(BIND_OTHER, f"a {t.name} is not a condition", cond)

    # --- expressions ------------------------------------------------------

    def type_of(self, node: Node, scanf_arg: bool = False) -> Type:
        t = self._type_of(node, scanf_arg)
        node.static_type = t
        return t

    def _type_of(self, node: Node, scanf_arg: bool) -> Type:
        if isinstance(node, IntLiteral):
            lex = node.lexeme or ""
            return LL_T if lex[-1:] in ("l", "L") else INT_T
        if isinstance(node, FloatLiteral):
            return DOUBLE_T
        if isinstance(node, StringLiteral):
            return STRING_T
        if isinstance(node, CharLiteral):
            return CHAR_T
        if isinstance(node, BoolLiteral):
            return BOOL_T
        if isinstance(node, Var):
            sym = self.lookup(node.name, node)
            node.symbol = sym
            if sym.is_array:
                return Type("array", sym.type)
            return sym.type
        if isinstance(node, Index):
            base = self.type_of(node.base)
            sub = self.type_of(node.subscript)
            if sub.name not in _INT_CLASS:
                self.error(BIND_OTHER, "subscript must be an integer", node)
            if base.name in ("vector", "array"):
                return base.elem
            if base.name == "string":
                return CHAR_T
            self.error(BIND_OTHER, f"cannot index a {base.name}", node)
        if isinstance(node, Binary):
            return self.type_binary(node)
        if isinstance(node, Unary):
            return self.type_unary(node, scanf_arg)
        if isinstance(node, IncDec):
            t = self.type_of(node.target)
            if t.name not in ("int", "long long"):
                self.error(BIND_OTHER, f"{node.op} needs an integer", node)
            return t
        if isinstance(node, Ternary):
            self.check_condition(node.cond)
            a = self.type_of(node.if_true)
            b = self.type_of(node.if_false)
            if a == b:
                return a
            if a.name in _NUMERIC and b.name in _NUMERIC:
                return _promote(a, b)
            self.error(BIND_OTHER, "ternary branches disagree", node)
        if isinstance(node, Call):
            return self.type_call(node)
        if isinstance(node, MethodCall):
            return self.type_method(node)
        if isinstance(node, Endl):
            self.error(BIND_OTHER, "endl outside cout", node)
        self.error(BIND_OTHER, f"unexpected expression {node.kind}", node)

    def type_binary(self, node: Binary) -> Type:
        op = node.op
        lt = self.type_of(node.left)
        rt = self.type_of(node.right)
        if op == "+" and "string" in (lt.name, rt.name):
            ok = {lt.name, rt.name} <= {"string", "char"}
            if not ok:
                self.error(BIND_OTHER, "bad string concatenation", node)
            return STRING_T
        if op in ("==", "!=", "<", ">", "<=", ">="):
            if lt.name == rt.name == "string":
                return BOOL_T
            if lt.name in _NUMERIC and rt.name in _NUMERIC:
                return BOOL_T
            self.error(BIND_OTHER, f"cannot compare {lt.name} and {rt.name}",
                       node)
        if op in ("&&", "||"):
            for t, side in ((lt, node.left), (rt, node.right)):
                if t.name not in _NUMERIC:
                    self.error(BIND_OTHER, f"a {t.name} is not a condition",
                               side)
            return BOOL_T
        if op in ("&", "|", "^", "<<", ">>"):
            if lt.name not in _INT_CLASS or rt.name not in _INT_CLASS:
                self.error(BIND_OTHER, f"{op} needs integers", node)
            return _promote(lt, rt) if op not in ("<<", ">>") \
                else _int_promote(lt)
        if op in ("+", "-", "*", "/", "%"):
            if lt.name not in _NUMERIC or rt.name not in _NUMERIC:
                self.error(BIND_OTHER, f"{op} needs numbers", node)
            if op == "%" and (lt.name == "double" or rt.name == "double"):
                self.error(BIND_OTHER, "% needs integers", node)
            return _promote(lt, rt)
        self.error(BIND_OTHER, f"unknown operator {op}", node)

    def type_unary(self, node: Unary, scanf_arg: bool) -> Type:
        if node.op == "&":
            if not scanf_arg:
                self.error(BIND_OTHER, "'&' is only allowed on scanf targets",
                           node)
            if not _is_lvalue_node(node.operand):
                self.error(BIND_OTHER, "scanf target must be a variable",
                           node)
            return self.type_of(node.operand)
        t = self.type_of(node.operand)
        if node.op == "!":
            if t.name not in _NUMERIC:
                self.error(BIND_OTHER, "! needs a condition", node)
            return BOOL_T
        if node.op == "~":
            if t.name not in _INT_CLASS:
                self.error(BIND_OTHER, "~ needs an integer", node)
            return _int_promote(t)
        if t.name not in _NUMERIC:
            self.error(BIND_OTHER, f"unary {node.op} needs a number", node)
        return _promote(t, INT_T) if t.name != "double" else DOUBLE_T

    def type_call(self, node: Call) -> Type:
        name = node.name
        if name == "printf":
            return self.type_printf(node)
        if name == "scanf":
            return self.type_scanf(node)
        if name in ("min", "max"):
            if len(node.args) != 2:
                self.error(BIND_OTHER, f"{name} takes two arguments", node)
            a = self.type_of(node.args[0])
            b = self.type_of(node.args[1])
            if a.name not in _NUMERIC or b.name not in _NUMERIC:
                self.error(BIND_OTHER, f"{name} needs numbers", node)
            return _promote(a, b)
        if name == "abs":
            if len(node.args) != 1:
                self.error(BIND_OTHER, "abs takes one argument", node)
            t = self.type_of(node.args[0])
            if t.name not in _NUMERIC:
                self.error(BIND_OTHER, "abs needs a number", node)
            return DOUBLE_T if t.name == "double" else _int_promote(t)
        if name == "sqrt":
            if len(node.args) != 1:
                self.error(BIND_OTHER, "sqrt takes one argument", node)
            t = self.type_of(node.args[0])
            if t.name not in _NUMERIC:
                self.error(BIND_OTHER, "sqrt needs a number", node)
            return DOUBLE_T
        if name == "swap":
            if len(node.args) != 2:
                self.error(BIND_OTHER, "swap takes two arguments", node)
            a, b = node.args
            if not (_is_lvalue_node(a) and _is_lvalue_node(b)):
                self.error(BIND_OTHER, "swap needs variables", node)
            at = self.type_of(a)
            bt = self.type_of(b)
            if at != bt:
                self.error(BIND_OTHER, "swap needs matching types", node)
            return VOID_T
        if name in self.info.functions:
            fn = self.info.functions[name]
            if len(node.args) != len(fn.params):
                self.error(BIND_OTHER,
                           f"{name} takes {len(fn.params)} arguments", node)
            for arg, param in zip(node.args, fn.params):
                at = self.type_of(arg)
                pt = self.resolve(param.type, param)
                if not _convertible(at, pt):
                    self.error(BIND_OTHER,
                               f"cannot pass {at.name} as {pt.name}", arg)
            node.function = fn
            return fn.resolved_return
        self.error(BIND_UNDECLARED, f"call to undeclared {name!r}", node)

    def type_printf(self, node: Call) -> Type:
        if not node.args or not isinstance(node.args[0], StringLiteral):
            self.error(BIND_OTHER, "printf needs a literal format string",
                       node)
        fmt = node.args[0]
        fmt.static_type = STRING_T
        try:
            segments = formats.parse_format(fmt.value)
        except formats.FormatError as err:
            self.error(BIND_OTHER, str(err), node)
        specs = [s for kind, s in segments if kind == "spec"]
        if len(specs) != len(node.args) - 1:
            self.error(BIND_OTHER, "printf argument count does not match "
                                   "the format", node)
        for spec, arg in zip(specs, node.args[1:]):
            t = self.type_of(arg)
            if spec in ("d", "lld") and t.name not in _INT_CLASS:
                self.error(BIND_OTHER, f"%{spec} needs an integer", arg)
            if spec == "f" and t.name != "double":
                self.error(BIND_OTHER, "%f needs a double", arg)
            if spec == "c" and t.name != "char":
                self.error(BIND_OTHER, "%c needs a char", arg)
            if spec == "s" and t.name != "string":
                self.error(BIND_OTHER, "%s needs a string", arg)
        node.segments = segments
        return INT_T

    def type_scanf(self, node: Call) -> Type:
        if not node.args or not isinstance(node.args[0], StringLiteral):
            self.error(BIND_OTHER, "scanf needs a literal format string",
                       node)
        fmt = node.args[0]
        fmt.static_type = STRING_T
        try:
            segments = formats.parse_format(fmt.value)
        except formats.FormatError as err:
            self.error(BIND_OTHER, str(err), node)
        specs = [s for kind, s in segments if kind == "spec"]
        if len(specs) != len(node.args) - 1:
            self.error(BIND_OTHER, "scanf argument count does not match "
                                   "the format", node)
        for spec, arg in zip(specs, node.args[1:]):
            t = self.type_of(arg, scanf_arg=True)
            target = arg.operand if isinstance(arg, Unary) else arg
            if not _is_lvalue_node(target):
                self.error(BIND_OTHER, "scanf target must be a variable",
                           arg)
            expected = {"d": _INT_CLASS[:2], "lld": _INT_CLASS[:2],
                        "f": ("double",), "c": ("char",),
                        "s": ("string",)}[spec]
            if t.name not in expected:
                self.error(BIND_OTHER, f"%{spec} cannot read a {t.name}",
                           arg)
        node.segments = segments
        return INT_T

    def type_method(self, node: MethodCall) -> Type:
        obj = self.type_of(node.obj)
        method = node.method
        if obj.name == "vector":
            if method == "push_back":
                if len(node.args) != 1:
                    self.error(BIND_OTHER, "push_back takes one argument",
                               node)
                at = self.type_of(node.args[0])
                if not _convertible(at, obj.elem):
                    self.error(BIND_OTHER,
                               f"cannot push a {at.name} into a "
                               f"vector<{obj.elem.name}>", node)
                return VOID_T
            if method == "size" and not node.args:
                return INT_T
        if obj.name == "string":
            if method == "size" and not node.args:
                return INT_T
            if method == "substr" and len(node.args) in (1, 2):
                for arg in node.args:
                    if self.type_of(arg).name not in _INT_CLASS:
                        self.error(BIND_OTHER, "substr needs integers", arg)
                return STRING_T
        self.error(BIND_OTHER, f"no method {method!r} on {obj.name}", node)


def _root_symbol(node: Node):
    if isinstance(node, Var):
        return node.symbol
    if isinstance(node, Index):
        return _root_symbol(node.base)
    return None


def _is_lvalue_node(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Index):
        return _is_lvalue_node(node.base)
    return False


def _int_promote(t: Type) -> Type:
    return LL_T if t.name == "long long" else INT_T


def _promote(a: Type, b: Type) -> Type:
    names = (a.name, b.name)
    if "double" in names:
        return DOUBLE_T
    if "long long" in names:
        return LL_T
    return INT_T


def _convertible(src: Type, dst: Type) -> bool:
    if src == dst:
        return True
    if src.name in _NUMERIC and dst.name in _NUMERIC:
        return True
    if src.name == "char" and dst.name == "string":
        return False
    return False


def bind(program: Program) -> BindInfo:
    """Resolve and type-check; annotates the tree in place. Raises
    BindError. Safe to call repeatedly (annotations are overwritten)."""
    return _Binder(program).run()
