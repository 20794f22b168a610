"""Def-use data-flow graph over variable occurrences.

Reaching definitions are tracked per function through the structured control
flow. Loop headers get a single fixed-point pass: the body is walked once to
discover the definitions it generates, those are joined with the entry
state, and the body is walked again with the merged state. That one merge
suffices for def-use edges in this subset because a second iteration cannot
enlarge any reaching set.

Element stores (a[i] = x, cin >> v[i]) generate a definition without killing
earlier ones, since other elements survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .astnodes import (
    AssignStmt, Binary, Block, BreakStmt, Call, CinStmt, ContinueStmt,
    CoutStmt, Declarator, DeclStmt, DoWhileStmt, ExprStmt, ForStmt, Function,
    IfStmt, IncDec, Index, MethodCall, Node, Param, Program, ReturnStmt,
    Ternary, Unary, Var, WhileStmt,
)
from .binder import BindError, Symbol, bind
from .lexer import Token


class UnresolvedIdentifierError(Exception):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"{line}:{column}: unresolved identifier {name!r}")
        self.name = name
        self.line = line
        self.column = column


@dataclass
class Occurrence:
    symbol: Symbol
    role: str  # "def" | "use"
    node: Node
    token: Token | None

    def location(self) -> tuple[int, int]:
        if self.token is not None:
            return self.token.line, self.token.column
        return (0, 0)


@dataclass
class Dfg:
    nodes: list[Occurrence] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)


_State = dict  # symbol sid -> frozenset of occurrence ids


def _join(*states: _State) -> _State:
    out: _State = {}
    for state in states:
        for sid, occs in state.items():
            out[sid] = out.get(sid, frozenset()) | occs
    return out


class _Builder:
    def __init__(self):
        self.occs: list[Occurrence] = []
        self.occ_ids: dict[tuple[int, str], int] = {}
        self.edges: set[tuple[int, int]] = set()

    def occ(self, node: Node, symbol: Symbol, role: str) -> int:
        key = (id(node), role)
        if key not in self.occ_ids:
            self.occ_ids[key] = len(self.occs)
            self.occs.append(Occurrence(symbol, role, node, node.token))
        return self.occ_ids[key]

    # --- state transitions ------------------------------------------------

    def use(self, state: _State, node: Var) -> None:
        sym = node.symbol
        use_id = self.occ(node, sym, "use")
        for def_id in state.get(sym.sid, frozenset()):
            self.edges.add((def_id, use_id))

    def define(self, state: _State, node: Node, sym: Symbol,
               kill: bool = True) -> None:
        def_id = self.occ(node, sym, "def")
        if kill:
            state[sym.sid] = frozenset((def_id,))
        else:
            state[sym.sid] = state.get(sym.sid, frozenset()) | {def_id}

    def store_target(self, state: _State, target: Node,
                     read_first: bool) -> None:
        """An assignment/read target: Var kills, Index gen-only."""
        if isinstance(target, Var):
            if read_first:
                self.use(state, target)
            self.define(state, target, target.symbol, kill=True)
        elif isinstance(target, Index):
            self.expr(state, target.subscript)
            base = target.base
            while isinstance(base, Index):
                self.expr(state, base.subscript)
                base = base.base
            self.use(state, base)
            self.define(state, base, base.symbol, kill=False)

    # --- expressions ------------------------------------------------------

    def expr(self, state: _State, node: Node | None) -> None:
        if node is None:
            return
        if isinstance(node, Var):
            self.use(state, node)
        elif isinstance(node, Index):
            self.expr(state, node.base)
            self.expr(state, node.subscript)
        elif isinstance(node, Binary):
            self.expr(state, node.left)
            self.expr(state, node.right)
        elif isinstance(node, Unary):
            self.expr(state, node.operand)
        elif isinstance(node, IncDec):
            self.store_target(state, node.target, read_first=True)
        elif isinstance(node, Ternary):
            self.expr(state, node.cond)
            self.expr(state, node.if_true)
            self.expr(state, node.if_false)
        elif isinstance(node, Call):
            if node.name == "scanf":
                for arg in node.args[1:]:
                    target = arg.operand if isinstance(arg, Unary) else arg
                    if isinstance(target, (Var, Index)):
                        self.store_target(state, target, read_first=False)
                return
            if node.name == "swap":
                for arg in node.args:
                    self.expr(state, arg)
                for arg in node.args:
                    if isinstance(arg, (Var, Index)):
                        self.store_target(state, arg, read_first=False)
                return
            for arg in node.args:
                self.expr(state, arg)
        elif isinstance(node, MethodCall):
            self.expr(state, node.obj)
            for arg in node.args:
                self.expr(state, arg)
            # push_back mutates the vector in place
            if node.method == "push_back" and isinstance(node.obj, Var):
                self.define(state, node.obj, node.obj.symbol, kill=False)

    # --- statements -------------------------------------------------------

    def stmt(self, state: _State, node: Node,
             breaks: list[_State], continues: list[_State]) -> _State:
        if isinstance(node, Block):
            for child in node.stmts:
                state = self.stmt(state, child, breaks, continues)
            return state
        if isinstance(node, DeclStmt):
            for decl in node.declarators:
                self.expr(state, decl.init)
                self.define(state, decl, decl.symbol, kill=True)
            return state
        if isinstance(node, ExprStmt):
            self.expr(state, node.expr)
            return state
        if isinstance(node, AssignStmt):
            self.expr(state, node.value)
            self.store_target(state, node.target,
                              read_first=(node.op != "="))
            return state
        if isinstance(node, IfStmt):
            self.expr(state, node.cond)
            s_then = self.stmt(dict(state), node.then_body, breaks,
                               continues)
            if node.else_body is not None:
                s_else = self.stmt(dict(state), node.else_body, breaks,
                                   continues)
                return _join(s_then, s_else)
            return _join(state, s_then)
        if isinstance(node, WhileStmt):
            return self.while_loop(state, node)
        if isinstance(node, ForStmt):
            return self.for_loop(state, node)
        if isinstance(node, DoWhileStmt):
            return self.do_loop(state, node)
        if isinstance(node, BreakStmt):
            breaks.append(dict(state))
            return state
        if isinstance(node, ContinueStmt):
            continues.append(dict(state))
            return state
        if isinstance(node, ReturnStmt):
            self.expr(state, node.value)
            return state
        if isinstance(node, CinStmt):
            for target in node.targets:
                self.store_target(state, target, read_first=False)
            return state
        if isinstance(node, CoutStmt):
            for item in node.items:
                self.expr(state, item)
            return state
        return state  # break/continue handled above; literals are inert

    def _body_pass(self, entry: _State, body: Node,
                   breaks: list[_State]) -> tuple[_State, list[_State]]:
        continues: list[_State] = []
        out = self.stmt(dict(entry), body, breaks, continues)
        return out, continues

    def while_loop(self, state: _State, node: WhileStmt) -> _State:
        self.expr(state, node.cond)
        breaks: list[_State] = []
        out1, cont1 = self._body_pass(state, node.body, breaks)
        merged = _join(state, out1, *cont1)
        self.expr(merged, node.cond)
        out2, cont2 = self._body_pass(merged, node.body, breaks)
        return _join(state, out2, *cont2, *breaks)

    def for_loop(self, state: _State, node: ForStmt) -> _State:
        breaks: list[_State] = []
        state = dict(state)
        if node.init is not None:
            state = self.stmt(state, node.init, breaks, [])
        self.expr(state, node.cond)
        out1, cont1 = self._body_pass(state, node.body, breaks)
        back1 = _join(out1, *cont1)
        if node.step is not None:
            back1 = self.stmt(back1, node.step, breaks, [])
        merged = _join(state, back1)
        self.expr(merged, node.cond)
        out2, cont2 = self._body_pass(merged, node.body, breaks)
        back2 = _join(out2, *cont2)
        if node.step is not None:
            back2 = self.stmt(back2, node.step, breaks, [])
        return _join(state, back2, *breaks)

    def do_loop(self, state: _State, node: DoWhileStmt) -> _State:
        breaks: list[_State] = []
        out1, cont1 = self._body_pass(state, node.body, breaks)
        exit1 = _join(out1, *cont1)
        self.expr(exit1, node.cond)
        merged = _join(state, exit1)
        out2, cont2 = self._body_pass(merged, node.body, breaks)
        exit2 = _join(out2, *cont2)
        self.expr(exit2, node.cond)
        return _join(exit2, *breaks)

    def function(self, fn: Function) -> None:
        state: _State = {}
        for param in fn.params:
            self.define(state, param, param.symbol, kill=True)
        self.stmt(state, fn.body, [], [])


def build_dfg(ast: Program, max_nodes: int = 1000) -> Dfg:
    """Build the def-use graph. Binds the tree first; an undeclared
    identifier surfaces as UnresolvedIdentifierError."""
    try:
        bind(ast)
    except BindError as err:
        if err.category == "undeclared-variable":
            raise UnresolvedIdentifierError(err.message, err.line,
                                            err.column) from None
        raise
    builder = _Builder()
    for fn in ast.functions():
        builder.function(fn)

    order = sorted(range(len(builder.occs)),
                   key=lambda i: (builder.occs[i].token.index
                                  if builder.occs[i].token is not None
                                  else 10 ** 9, i))
    keep = order[:max_nodes]
    remap = {old: new for new, old in enumerate(keep)}
    nodes = [builder.occs[i] for i in keep]
    edges = sorted((remap[a], remap[b]) for a, b in builder.edges
                   if a in remap and b in remap)
    return Dfg(nodes=nodes, edges=edges)
