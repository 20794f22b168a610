"""Semantics-preserving style transformations.

Each transform Tn has an applicability predicate baked into
enumerate_actions and a rewrite in apply. Applying any enumerated action
to the same tree yields a new tree that prints, reparses, and behaves
identically on every input; I/O statement count and order never change.

    T1  for -> while (continue-safe desugaring)       control-flow
    T2  while -> for with empty init/step             control-flow
    T3  printf -> cout (int/ll/bool/char/string)      api
    T4  cout -> printf (no doubles)                   api
    T5  rename variable (camelCase / snake_case /     declarations
        single letter), first 8 variables
    T6  split "int a, b;" into separate declarations  declarations
    T7  merge adjacent same-type declarations         declarations
    T8  x = x + k <-> x += k <-> x++ statement forms  expressions
    T9  swap if/else branches, negating the condition control-flow
    T10 add or remove braces on one-statement bodies  layout
    T11 typedef long long <-> inline alias            declarations
    T12 move a declaration down to its first use      declarations
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from ..frontend.astnodes import (
    AssignStmt, Binary, Block, BoolLiteral, BreakStmt, Call, CharLiteral,
    ContinueStmt, CoutStmt, Declarator, DeclStmt, DoWhileStmt, Endl, ExprStmt,
    FloatLiteral, ForStmt, Function, IfStmt, IncDec, IntLiteral, Node, Param,
    Program, StringLiteral, Type, TypedefDecl, Unary, Var, WhileStmt,
    resolve_path, walk, walk_with_paths,
)
from ..frontend.binder import RESERVED_NAMES, bind
from ..frontend.lexer import KEYWORDS
from ..frontend.printer import _open_if_tail

TRANSFORM_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9",
                 "T10", "T11", "T12")

CATALOG = {
    "T1": ("control-flow", "rewrite a for loop as a while loop"),
    "T2": ("control-flow", "rewrite a while loop as a for loop"),
    "T3": ("api", "replace printf with a cout chain"),
    "T4": ("api", "replace a cout chain with printf"),
    "T5": ("declarations", "rename a variable to another naming scheme"),
    "T6": ("declarations", "split a multi-variable declaration"),
    "T7": ("declarations", "merge adjacent same-type declarations"),
    "T8": ("expressions", "switch assignment form (plain/compound/++)"),
    "T9": ("control-flow", "swap if/else branches with negated condition"),
    "T10": ("layout", "add or remove braces around a one-statement body"),
    "T11": ("declarations", "introduce or inline a long long typedef"),
    "T12": ("declarations", "move a declaration to its first use"),
}


class InapplicableAction(Exception):
    pass


@dataclass(frozen=True)
class Site:
    path: tuple[int, ...]
    payload: str | None = None


@dataclass(frozen=True)
class TransformAction:
    transform: str
    site: Site

    def describe(self) -> str:
        extra = f" [{self.site.payload}]" if self.site.payload else ""
        return f"{self.transform}@{'/'.join(map(str, self.site.path))}{extra}"


# --- shared helpers -------------------------------------------------------

_FORBIDDEN_NAMES = frozenset(KEYWORDS) | RESERVED_NAMES

_LITERALS = (IntLiteral, FloatLiteral, StringLiteral, CharLiteral,
             BoolLiteral)


def _declared_names(ast: Program) -> set[str]:
    names = set()
    for node in walk(ast):
        if isinstance(node, (Declarator, Param, TypedefDecl)):
            names.add(node.name)
        elif isinstance(node, Function):
            names.add(node.name)
    return names


def _fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken and base not in _FORBIDDEN_NAMES:
        return base
    n = 2
    while f"{base}{n}" in taken or f"{base}{n}" in _FORBIDDEN_NAMES:
        n += 1
    return f"{base}{n}"


def _split_words(name: str) -> list[str]:
    parts: list[str] = []
    for chunk in name.split("_"):
        cur = ""
        for ch in chunk:
            if ch.isupper() and cur and not cur[-1].isupper():
                parts.append(cur)
                cur = ch
            else:
                cur += ch
        if cur:
            parts.append(cur)
    return [p.lower() for p in parts if p]


def _to_camel(words: list[str]) -> str:
    return words[0] + "".join(w.capitalize() for w in words[1:])


def _to_snake(words: list[str]) -> str:
    return "_".join(words)


def _has_own_continue(body: Node) -> bool:
    """Continue statements targeting the loop whose body this is. Nested
    loops capture their own continues."""
    if isinstance(body, ContinueStmt):
        return True
    if isinstance(body, (WhileStmt, ForStmt, DoWhileStmt)):
        return False
    return any(_has_own_continue(c) for c in body.children())


def _written_types(ast: Program):
    """Yields (owner, attr) pairs for every written type slot."""
    for node in walk(ast):
        if isinstance(node, Function):
            yield node, "return_type"
        elif isinstance(node, Param):
            yield node, "type"
        elif isinstance(node, DeclStmt):
            yield node, "base_type"
        elif isinstance(node, TypedefDecl):
            yield node, "underlying"


def _rewrite_type(t: Type, source: str, target: str) -> Type:
    if t.name == source:
        return Type(target, t.elem)
    if t.elem is not None:
        return Type(t.name, _rewrite_type(t.elem, source, target))
    return t


def _type_mentions(t: Type, name: str) -> bool:
    return t.name == name or (t.elem is not None
                              and _type_mentions(t.elem, name))


def _negated(cond: Node) -> Node:
    if isinstance(cond, Unary) and cond.op == "!":
        return cond.operand
    flips = {"==": "!=", "!=": "==", "<": ">=", ">": "<=",
             "<=": ">", ">=": "<"}
    if isinstance(cond, Binary) and cond.op in flips:
        return Binary(op=flips[cond.op], left=cond.left, right=cond.right)
    return Unary(op="!", operand=cond)


def _is_ll_alias(ast: Program, td: TypedefDecl) -> bool:
    """Does this typedef (possibly through other typedefs) name long long?"""
    seen = set()
    t = td.underlying
    aliases = {item.name: item.underlying for item in ast.items
               if isinstance(item, TypedefDecl)}
    while t.name in aliases and t.name not in seen:
        seen.add(t.name)
        t = aliases[t.name]
    return t.name == "long long" and t.elem is None


_PRINTF_OK = {"d": ("int", "long long", "bool"),
              "lld": ("int", "long long", "bool"),
              "c": ("char",), "s": ("string",)}


# --- enumeration ----------------------------------------------------------

def enumerate_actions(ast: Program) -> list[TransformAction]:
    """All applicable actions in deterministic source order."""
    bind(ast)
    actions: list[TransformAction] = []
    names = _declared_names(ast)
    rename_budget = 8
    renamed_syms: set[int] = set()

    for path, node in walk_with_paths(ast):
        parent = resolve_path(ast, path[:-1]) if path else None

        if isinstance(node, ForStmt):
            actions.append(TransformAction("T1", Site(path)))
        if isinstance(node, WhileStmt):
            actions.append(TransformAction("T2", Site(path)))

        if isinstance(node, ExprStmt) and isinstance(node.expr, Call) \
                and node.expr.name == "printf":
            if _printf_to_cout_items(node.expr) is not None:
                actions.append(TransformAction("T3", Site(path)))
        if isinstance(node, CoutStmt) \
                and _cout_to_printf_parts(node) is not None:
            actions.append(TransformAction("T4", Site(path)))

        if isinstance(node, (Declarator, Param)) and rename_budget > 0:
            sym = node.symbol
            if sym is not None and id(sym) not in renamed_syms:
                renamed_syms.add(id(sym))
                rename_budget -= 1
                for new in _rename_candidates(node.name, names):
                    actions.append(TransformAction("T5", Site(path, new)))

        if isinstance(node, DeclStmt) and isinstance(parent, Block):
            if len(node.declarators) >= 2:
                actions.append(TransformAction("T6", Site(path)))
            i = path[-1]
            if i + 1 < len(parent.stmts):
                nxt = parent.stmts[i + 1]
                if isinstance(nxt, DeclStmt) \
                        and nxt.base_type == node.base_type:
                    actions.append(TransformAction("T7", Site(path)))
            if _move_decl_target(parent, i) is not None:
                actions.append(TransformAction("T12", Site(path)))

        if isinstance(node, AssignStmt):
            for payload in _assign_forms(node):
                actions.append(TransformAction("T8", Site(path, payload)))
        if isinstance(node, ExprStmt) and isinstance(node.expr, IncDec) \
                and isinstance(node.expr.target, Var):
            actions.append(TransformAction("T8", Site(path, "to-compound")))

        if isinstance(node, IfStmt) and node.else_body is not None:
            actions.append(TransformAction("T9", Site(path)))

        if isinstance(node, (IfStmt, WhileStmt, ForStmt, DoWhileStmt)):
            for payload in _brace_moves(node):
                actions.append(TransformAction("T10", Site(path, payload)))

    actions.extend(_typedef_actions(ast, names))
    actions.sort(key=lambda a: (a.site.path, int(a.transform[1:]),
                                a.site.payload or ""))
    return actions


def _rename_candidates(name: str, taken: set[str]) -> list[str]:
    words = _split_words(name)
    if not words:
        return []
    candidates = set()
    for styled in (_to_camel(words), _to_snake(words)):
        if styled != name and styled not in taken \
                and styled not in _FORBIDDEN_NAMES:
            candidates.add(styled)
    for letter in "abcdefghijklmnopqrstuvwxyz":
        if letter != name and letter not in taken \
                and letter not in _FORBIDDEN_NAMES:
            candidates.add(letter)
            break
    return sorted(candidates)


def _assign_forms(node: AssignStmt) -> list[str]:
    forms = []
    target = node.target
    if not isinstance(target, Var):
        return forms
    if node.op == "=":
        value = node.value
        if isinstance(value, Binary) and value.op in "+-*/%" \
                and isinstance(value.left, Var) \
                and value.left.symbol is target.symbol:
            forms.append("to-compound")
    else:
        forms.append("to-plain")
        if node.op in ("+=", "-=") and isinstance(node.value, IntLiteral) \
                and node.value.value == 1 \
                and target.static_type is not None \
                and target.static_type.name in ("int", "long long"):
            forms.append("to-incdec")
    return forms


def _brace_moves(node: Node) -> list[str]:
    moves = []
    if isinstance(node, IfStmt):
        limbs = [("then", node.then_body), ("else", node.else_body)]
    else:
        limbs = [("body", node.body)]
    for which, limb in limbs:
        if limb is None:
            continue
        if not isinstance(limb, Block):
            moves.append(f"add-{which}")
        elif len(limb.stmts) == 1 \
                and not isinstance(limb.stmts[0], DeclStmt):
            inner = limb.stmts[0]
            hazard = (which == "then"
                      and node.else_body is not None
                      and _open_if_tail(inner))
            if not hazard:
                moves.append(f"remove-{which}")
    return moves


def _typedef_actions(ast: Program, names: set[str]) -> list[TransformAction]:
    actions = []
    ll_aliases = [(i, item) for i, item in enumerate(ast.items)
                  if isinstance(item, TypedefDecl) and _is_ll_alias(ast, item)]
    uses_ll = any(
        _type_mentions(getattr(owner, attr), "long long")
        for owner, attr in _written_types(ast)
        if not isinstance(owner, TypedefDecl))
    if uses_ll and not ll_aliases:
        alias = _fresh_name("ll", names)
        actions.append(TransformAction("T11", Site((), f"introduce:{alias}")))
    for i, item in ll_aliases:
        actions.append(TransformAction(
            "T11", Site((i,), f"inline:{item.name}")))
    return actions


def _move_decl_target(block: Block, i: int) -> int | None:
    """First-use statement index for moving the declaration at block
    position i, or None when the move is inapplicable."""
    decl = block.stmts[i]
    if len(decl.declarators) != 1:
        return None
    d = decl.declarators[0]
    if d.init is not None and not isinstance(d.init, _LITERALS):
        return None
    sym = d.symbol
    if sym is None:
        return None
    for j in range(i + 1, len(block.stmts)):
        for sub in walk(block.stmts[j]):
            if isinstance(sub, Var) and sub.symbol is sym:
                return j if j > i + 1 else None
    return None


# --- printf/cout conversion helpers --------------------------------------

def _printf_to_cout_items(call: Call) -> list[Node] | None:
    """Cout item list for an equivalent statement, or None."""
    segments = getattr(call, "segments", None)
    if segments is None:
        return None
    items: list[Node] = []
    args = call.args[1:]
    arg_pos = 0
    chunks: list = []  # text runs then expressions, flattened later
    for kind, payload in segments:
        if kind == "text":
            chunks.append(("text", payload))
            continue
        if arg_pos >= len(args):
            return None
        arg = args[arg_pos]
        arg_pos += 1
        allowed = _PRINTF_OK.get(payload)
        if allowed is None or arg.static_type is None \
                or arg.static_type.name not in allowed:
            return None
        chunks.append(("expr", arg))
    # merge adjacent text, convert trailing newline to endl
    merged: list = []
    for kind, payload in chunks:
        if kind == "text" and merged and merged[-1][0] == "text":
            merged[-1] = ("text", merged[-1][1] + payload)
        else:
            merged.append((kind, payload))
    trailing_endl = False
    if merged and merged[-1][0] == "text" and merged[-1][1].endswith("\n"):
        text = merged[-1][1][:-1]
        if text:
            merged[-1] = ("text", text)
        else:
            merged.pop()
        trailing_endl = True
    for kind, payload in merged:
        if kind == "text":
            items.append(StringLiteral(value=payload))
        else:
            items.append(payload)
    if trailing_endl:
        items.append(Endl())
    if not items:
        return None
    return items


def _cout_to_printf_parts(node: CoutStmt) -> tuple[str, list[Node]] | None:
    """(format string, argument expressions) or None."""
    fmt_parts: list[str] = []
    args: list[Node] = []
    for item in node.items:
        if isinstance(item, Endl):
            fmt_parts.append("\n")
        elif isinstance(item, StringLiteral):
            fmt_parts.append(item.value.replace("%", "%%"))
        elif isinstance(item, CharLiteral):
            fmt_parts.append(item.value.replace("%", "%%"))
        elif isinstance(item, BoolLiteral):
            fmt_parts.append("1" if item.value else "0")
        elif isinstance(item, IntLiteral):
            t = item.static_type
            spec = "%lld" if t is not None and t.name == "long long" \
                else "%d"
            fmt_parts.append(spec)
            args.append(item)
        else:
            t = item.static_type
            if t is None:
                return None
            if t.name in ("int", "bool"):
                fmt_parts.append("%d")
            elif t.name == "long long":
                fmt_parts.append("%lld")
            elif t.name == "char":
                fmt_parts.append("%c")
            elif t.name == "string":
                fmt_parts.append("%s")
            else:
                return None
            args.append(item)
    return "".join(fmt_parts), args


# --- application ----------------------------------------------------------

def apply(ast: Program, action: TransformAction) -> Program:
    """Returns a transformed deep copy; the input tree is untouched."""
    tree = copy.deepcopy(ast)
    bind(tree)
    handler = _APPLIERS.get(action.transform)
    if handler is None:
        raise InapplicableAction(f"unknown transform {action.transform}")
    handler(tree, action.site)
    return tree


def _fail(action_id: str, site: Site, why: str):
    raise InapplicableAction(f"{action_id} at {site.path}: {why}")


def _node_at(tree: Program, site: Site, want, action_id: str):
    try:
        node = resolve_path(tree, site.path)
    except IndexError:
        _fail(action_id, site, "path does not resolve")
    if not isinstance(node, want):
        _fail(action_id, site, f"expected {want}, found {node.kind}")
    return node


def _replace_at(tree: Program, site: Site, new: Node, action_id: str) -> None:
    if not site.path:
        _fail(action_id, site, "cannot replace the root")
    parent = resolve_path(tree, site.path[:-1])
    parent.replace_child(site.path[-1], new)


def _apply_t1(tree: Program, site: Site) -> None:
    loop = _node_at(tree, site, ForStmt, "T1")
    body_stmts = list(loop.body.stmts) if isinstance(loop.body, Block) \
        else [loop.body]
    cond = loop.cond if loop.cond is not None else BoolLiteral(value=True)
    needs_flag = loop.step is not None and any(
        _has_own_continue(s) for s in body_stmts)
    if not needs_flag:
        while_body = body_stmts + ([loop.step] if loop.step is not None
                                   else [])
        new_loop = WhileStmt(cond=cond, body=Block(stmts=while_body))
        if loop.init is not None:
            replacement: Node = Block(stmts=[loop.init, new_loop])
        else:
            replacement = new_loop
    else:
        flag = _fresh_name("first", _declared_names(tree))
        flag_decl = DeclStmt(base_type=Type("bool"), declarators=[
            Declarator(name=flag, init=BoolLiteral(value=True))])
        step_guard = IfStmt(
            cond=Unary(op="!", operand=Var(name=flag)),
            then_body=Block(stmts=[loop.step]))
        clear_flag = AssignStmt(op="=", target=Var(name=flag),
                                value=BoolLiteral(value=False))
        exit_guard = IfStmt(cond=_negated(cond),
                            then_body=Block(stmts=[BreakStmt()]))
        inner = [step_guard, clear_flag, exit_guard] + body_stmts
        new_loop = WhileStmt(cond=BoolLiteral(value=True),
                             body=Block(stmts=inner))
        header = [loop.init] if loop.init is not None else []
        replacement = Block(stmts=header + [flag_decl, new_loop])
    replacement.leading_comments = loop.leading_comments
    _replace_at(tree, site, replacement, "T1")


def _apply_t2(tree: Program, site: Site) -> None:
    loop = _node_at(tree, site, WhileStmt, "T2")
    new_loop = ForStmt(init=None, cond=loop.cond, step=None, body=loop.body)
    new_loop.leading_comments = loop.leading_comments
    _replace_at(tree, site, new_loop, "T2")


def _apply_t3(tree: Program, site: Site) -> None:
    stmt = _node_at(tree, site, ExprStmt, "T3")
    if not isinstance(stmt.expr, Call) or stmt.expr.name != "printf":
        _fail("T3", site, "not a printf statement")
    items = _printf_to_cout_items(stmt.expr)
    if items is None:
        _fail("T3", site, "format not representable as cout")
    new = CoutStmt(items=items)
    new.leading_comments = stmt.leading_comments
    _replace_at(tree, site, new, "T3")


def _apply_t4(tree: Program, site: Site) -> None:
    stmt = _node_at(tree, site, CoutStmt, "T4")
    parts = _cout_to_printf_parts(stmt)
    if parts is None:
        _fail("T4", site, "items not representable as printf")
    fmt, args = parts
    call = Call(name="printf",
                args=[StringLiteral(value=fmt)] + list(args))
    new = ExprStmt(expr=call)
    new.leading_comments = stmt.leading_comments
    _replace_at(tree, site, new, "T4")


def _apply_t5(tree: Program, site: Site) -> None:
    decl = _node_at(tree, site, (Declarator, Param), "T5")
    new_name = site.payload
    if not new_name:
        _fail("T5", site, "missing new name")
    if new_name in _FORBIDDEN_NAMES or new_name in _declared_names(tree):
        _fail("T5", site, f"name {new_name} unavailable")
    sym = decl.symbol
    if sym is None:
        _fail("T5", site, "declaration has no symbol")
    decl.name = new_name
    sym.name = new_name
    for node in walk(tree):
        if isinstance(node, Var) and node.symbol is sym:
            node.name = new_name


def _apply_t6(tree: Program, site: Site) -> None:
    decl = _node_at(tree, site, DeclStmt, "T6")
    if len(decl.declarators) < 2:
        _fail("T6", site, "single declarator")
    parent = resolve_path(tree, site.path[:-1])
    if not isinstance(parent, Block):
        _fail("T6", site, "declaration not directly inside a block")
    i = site.path[-1]
    pieces = []
    for k, d in enumerate(decl.declarators):
        piece = DeclStmt(base_type=decl.base_type, declarators=[d])
        if k == 0:
            piece.leading_comments = decl.leading_comments
        pieces.append(piece)
    parent.stmts[i:i + 1] = pieces


def _apply_t7(tree: Program, site: Site) -> None:
    decl = _node_at(tree, site, DeclStmt, "T7")
    parent = resolve_path(tree, site.path[:-1])
    if not isinstance(parent, Block):
        _fail("T7", site, "declaration not directly inside a block")
    i = site.path[-1]
    if i + 1 >= len(parent.stmts):
        _fail("T7", site, "no following statement")
    nxt = parent.stmts[i + 1]
    if not isinstance(nxt, DeclStmt) or nxt.base_type != decl.base_type:
        _fail("T7", site, "next statement is not a same-type declaration")
    decl.declarators.extend(nxt.declarators)
    del parent.stmts[i + 1]


def _apply_t8(tree: Program, site: Site) -> None:
    node = resolve_path(tree, site.path)
    payload = site.payload
    if payload == "to-compound" and isinstance(node, ExprStmt) \
            and isinstance(node.expr, IncDec):
        inc = node.expr
        if not isinstance(inc.target, Var):
            _fail("T8", site, "increment target is not a variable")
        op = "+=" if inc.op == "++" else "-="
        new = AssignStmt(op=op, target=inc.target,
                         value=IntLiteral(value=1, lexeme="1"))
        new.leading_comments = node.leading_comments
        _replace_at(tree, site, new, "T8")
        return
    if not isinstance(node, AssignStmt):
        _fail("T8", site, "not an assignment")
    if payload == "to-compound":
        value = node.value
        if node.op != "=" or not isinstance(value, Binary) \
                or value.op not in "+-*/%" \
                or not isinstance(value.left, Var) \
                or not isinstance(node.target, Var) \
                or value.left.symbol is not node.target.symbol:
            _fail("T8", site, "not of the form x = x op k")
        node.op = value.op + "="
        node.value = value.right
    elif payload == "to-plain":
        if node.op == "=":
            _fail("T8", site, "already a plain assignment")
        base_op = node.op[:-1]
        node.value = Binary(op=base_op, left=copy.deepcopy(node.target),
                            right=node.value)
        node.op = "="
    elif payload == "to-incdec":
        ok = (node.op in ("+=", "-=")
              and isinstance(node.value, IntLiteral)
              and node.value.value == 1
              and isinstance(node.target, Var))
        if not ok:
            _fail("T8", site, "not a +/- 1 compound assignment")
        op = "++" if node.op == "+=" else "--"
        new = ExprStmt(expr=IncDec(op=op, is_prefix=False,
                                   target=node.target))
        new.leading_comments = node.leading_comments
        _replace_at(tree, site, new, "T8")
    else:
        _fail("T8", site, f"unknown form {payload!r}")


def _apply_t9(tree: Program, site: Site) -> None:
    node = _node_at(tree, site, IfStmt, "T9")
    if node.else_body is None:
        _fail("T9", site, "if statement has no else branch")
    new_then = node.else_body
    new_else = node.then_body
    if not isinstance(new_then, Block) and _open_if_tail(new_then):
        new_then = Block(stmts=[new_then])
    node.cond = _negated(node.cond)
    node.then_body = new_then
    node.else_body = new_else


def _apply_t10(tree: Program, site: Site) -> None:
    node = _node_at(tree, site,
                    (IfStmt, WhileStmt, ForStmt, DoWhileStmt), "T10")
    payload = site.payload or ""
    mode, _, which = payload.partition("-")
    attr = {"then": "then_body", "else": "else_body", "body": "body"}.get(
        which)
    if attr is None or not hasattr(node, attr) or mode not in ("add",
                                                               "remove"):
        _fail("T10", site, f"bad payload {payload!r}")
    limb = getattr(node, attr)
    if limb is None:
        _fail("T10", site, f"no {which} branch")
    if mode == "add":
        if isinstance(limb, Block):
            _fail("T10", site, "branch already braced")
        setattr(node, attr, Block(stmts=[limb]))
        return
    if not isinstance(limb, Block) or len(limb.stmts) != 1:
        _fail("T10", site, "branch is not a one-statement block")
    inner = limb.stmts[0]
    if isinstance(inner, DeclStmt):
        _fail("T10", site, "cannot unbrace a declaration")
    if which == "then" and isinstance(node, IfStmt) \
            and node.else_body is not None and _open_if_tail(inner):
        _fail("T10", site, "unbracing would capture the else")
    setattr(node, attr, inner)


def _apply_t11(tree: Program, site: Site) -> None:
    payload = site.payload or ""
    mode, _, alias = payload.partition(":")
    if mode == "introduce":
        if not alias or alias in _FORBIDDEN_NAMES \
                or alias in _declared_names(tree):
            _fail("T11", site, f"alias {alias!r} unavailable")
        for owner, attr in _written_types(tree):
            setattr(owner, attr,
                    _rewrite_type(getattr(owner, attr), "long long", alias))
        td = TypedefDecl(underlying=Type("long long"), name=alias)
        pos = 0
        for i, item in enumerate(tree.items):
            if isinstance(item, Function):
                break
            pos = i + 1
        tree.items.insert(pos, td)
    elif mode == "inline":
        target = _node_at(tree, site, TypedefDecl, "T11")
        if target.name != alias or not _is_ll_alias(tree, target):
            _fail("T11", site, f"{alias} is not a long long alias here")
        tree.items.remove(target)
        for owner, attr in _written_types(tree):
            setattr(owner, attr,
                    _rewrite_type(getattr(owner, attr), alias,
                                  "long long"))
    else:
        _fail("T11", site, f"bad payload {payload!r}")


def _apply_t12(tree: Program, site: Site) -> None:
    decl = _node_at(tree, site, DeclStmt, "T12")
    parent = resolve_path(tree, site.path[:-1])
    if not isinstance(parent, Block):
        _fail("T12", site, "declaration not directly inside a block")
    i = site.path[-1]
    j = _move_decl_target(parent, i)
    if j is None:
        _fail("T12", site, "no later first use to move to")
    parent.stmts.pop(i)
    parent.stmts.insert(j - 1, decl)


_APPLIERS = {
    "T1": _apply_t1, "T2": _apply_t2, "T3": _apply_t3, "T4": _apply_t4,
    "T5": _apply_t5, "T6": _apply_t6, "T7": _apply_t7, "T8": _apply_t8,
    "T9": _apply_t9, "T10": _apply_t10, "T11": _apply_t11, "T12": _apply_t12,
}
