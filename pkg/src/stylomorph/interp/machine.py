"""Deterministic tree-walking interpreter for the C++ subset.

Semantics the subset pins down (chosen so every run is deterministic):

* all integer arithmetic wraps at 64 bits, two's complement; division
  truncates toward zero and % takes the dividend's sign, as in C++
* division or modulo by zero is a runtime error for both ints and doubles
* shift amounts are masked to 0..63
* char values are unsigned bytes; bools are 0/1
* locals are default-initialized (0 / 0.0 / false / "" / zeroed arrays)
* a non-void function falling off the end returns its type's default
* cout formats doubles like printf %g (6 significant digits); printf %f
  emits 6 fixed decimals
* exhausted input on any extraction is a runtime error

Execution counts statements (plus one per loop iteration) against a step
limit; stdout is capped; call depth is capped. Limit overruns map to the
"timeout" and "resource-limit" statuses.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..frontend.astnodes import (
    AssignStmt, Binary, Block, BoolLiteral, BreakStmt, Call, CharLiteral,
    CinStmt, ContinueStmt, CoutStmt, DeclStmt, DoWhileStmt, Endl, ExprStmt,
    FloatLiteral, ForStmt, Function, IfStmt, IncDec, Index, IntLiteral,
    MethodCall, Node, Program, ReturnStmt, StringLiteral, Ternary, Type,
    Unary, Var, WhileStmt,
)
from ..frontend.binder import bind

_U64 = 1 << 64
_I63 = 1 << 63

STATUS_OK = "ok"
STATUS_RUNTIME = "runtime-error"
STATUS_TIMEOUT = "timeout"
STATUS_RESOURCE = "resource-limit"

REASON_DIV_ZERO = "div-zero"
REASON_INDEX = "index-out-of-bounds"
REASON_INPUT = "input-exhausted"
REASON_UNRESOLVED = "unresolved"


def wrap64(x: int) -> int:
    return (x + _I63) % _U64 - _I63


def c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def c_mod(a: int, b: int) -> int:
    return a - b * c_div(a, b)


@dataclass
class RunLimits:
    step_limit: int = 10_000_000
    output_limit: int = 1 << 20
    call_depth: int = 512


@dataclass
class ExecutionResult:
    status: str
    stdout: str
    steps: int
    inputs_consumed: int = 0
    outputs_emitted: int = 0
    error_reason: str | None = None
    error_message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


class _Trap(Exception):
    def __init__(self, status: str, reason: str | None, message: str):
        self.status = status
        self.reason = reason
        self.message = message


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def _default(t: Type):
    if t.name == "double":
        return 0.0
    if t.name == "string":
        return ""
    if t.name == "vector":
        return []
    return 0


def convert(value, src: Type, dst: Type):
    if src == dst:
        return value
    if dst.name == "double":
        return float(value)
    if dst.name in ("int", "long long"):
        if isinstance(value, float):
            value = int(value)  # truncates toward zero
        return wrap64(int(value))
    if dst.name == "bool":
        return 1 if value != 0 else 0
    if dst.name == "char":
        return int(value) & 0xFF
    return value


class _StrSlot:
    """Write-through view of one character in a stored string."""

    def __init__(self, container, key, idx: int):
        self.container = container
        self.key = key
        self.idx = idx

    def __getitem__(self, _):
        return ord(self.container[self.key][self.idx]) & 0xFF

    def __setitem__(self, _, value):
        s = self.container[self.key]
        self.container[self.key] = \
            s[:self.idx] + chr(int(value) & 0xFF) + s[self.idx + 1:]


class _Input:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def read_int(self) -> int:
        self._skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise _Trap(STATUS_RUNTIME, REASON_INPUT, "expected an integer")
        return wrap64(int(self.text[start:self.pos]))

    def read_double(self) -> float:
        self._skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        seen = False
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
            seen = True
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
                seen = True
        if seen and self.pos < len(self.text) \
                and self.text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            exp = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == exp:
                self.pos = mark
        if not seen:
            self.pos = start
            raise _Trap(STATUS_RUNTIME, REASON_INPUT, "expected a number")
        return float(self.text[start:self.pos])

    def read_word(self) -> str:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) \
                and not self.text[self.pos].isspace():
            self.pos += 1
        if self.pos == start:
            raise _Trap(STATUS_RUNTIME, REASON_INPUT, "expected a word")
        return self.text[start:self.pos]

    def read_char(self, skip_ws: bool) -> int:
        if skip_ws:
            self._skip_ws()
        if self.pos >= len(self.text):
            raise _Trap(STATUS_RUNTIME, REASON_INPUT, "expected a character")
        ch = self.text[self.pos]
        self.pos += 1
        return ord(ch) & 0xFF

    def match_literal(self, text: str) -> None:
        for ch in text:
            if ch.isspace():
                self._skip_ws()
                continue
            if self.pos >= len(self.text) or self.text[self.pos] != ch:
                raise _Trap(STATUS_RUNTIME, REASON_INPUT,
                            f"input does not match {ch!r}")
            self.pos += 1


class Interpreter:
    def __init__(self, program: Program, stdin_text: str,
                 limits: RunLimits):
        self.info = bind(program)
        self.limits = limits
        self.input = _Input(stdin_text)
        self.out: list[str] = []
        self.out_len = 0
        self.steps = 0
        self.inputs_consumed = 0
        self.outputs_emitted = 0
        self.frames: list[dict] = []
        self.depth = 0
        self._current_return = Type("int")

    # --- bookkeeping ------------------------------------------------------

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.limits.step_limit:
            raise _Trap(STATUS_TIMEOUT, None, "step limit exceeded")

    def emit(self, text: str) -> None:
        self.out_len += len(text)
        if self.out_len > self.limits.output_limit:
            raise _Trap(STATUS_RESOURCE, None, "output limit exceeded")
        self.out.append(text)

    @property
    def frame(self) -> dict:
        return self.frames[-1]

    # --- entry ------------------------------------------------------------

    def run(self) -> ExecutionResult:
        main = self.info.functions["main"]
        self._current_return = main.resolved_return
        try:
            self.call(main, [])
            status, reason, message = STATUS_OK, None, ""
        except _Trap as trap:
            status, reason, message = trap.status, trap.reason, trap.message
        return ExecutionResult(status=status, stdout="".join(self.out),
                               steps=self.steps,
                               inputs_consumed=self.inputs_consumed,
                               outputs_emitted=self.outputs_emitted,
                               error_reason=reason, error_message=message)

    def call(self, fn: Function, args: list):
        if self.depth >= self.limits.call_depth:
            raise _Trap(STATUS_RESOURCE, None, "call depth exceeded")
        self.depth += 1
        frame: dict = {}
        for param, value in zip(fn.params, args):
            frame[param.symbol.sid] = value
        self.frames.append(frame)
        try:
            self.exec_block(fn.body)
            result = _default(fn.resolved_return)
        except _Return as ret:
            result = ret.value
        finally:
            self.frames.pop()
            self.depth -= 1
        return result

    # --- statements -------------------------------------------------------

    def exec_block(self, block: Block) -> None:
        for stmt in block.stmts:
            self.exec_stmt(stmt)

    def exec_stmt(self, node: Node) -> None:
        self.tick()
        if isinstance(node, Block):
            self.exec_block(node)
        elif isinstance(node, DeclStmt):
            for decl in node.declarators:
                sym = decl.symbol
                if sym.is_array:
                    value = [_default(sym.type)] * sym.array_size
                elif decl.init is not None:
                    value = convert(self.eval(decl.init),
                                    decl.init.static_type, sym.type)
                    if sym.type.name == "vector":
                        value = list(value)
                else:
                    value = _default(sym.type)
                self.frame[sym.sid] = value
        elif isinstance(node, ExprStmt):
            self.eval(node.expr)
        elif isinstance(node, AssignStmt):
            self.exec_assign(node)
        elif isinstance(node, IfStmt):
            if self.truthy(node.cond):
                self.exec_stmt(node.then_body)
            elif node.else_body is not None:
                self.exec_stmt(node.else_body)
        elif isinstance(node, WhileStmt):
            while True:
                self.tick()
                if not self.truthy(node.cond):
                    break
                try:
                    self.exec_stmt(node.body)
                except _Break:
                    break
                except _Continue:
                    continue
        elif isinstance(node, ForStmt):
            if node.init is not None:
                self.exec_stmt(node.init)
            while True:
                self.tick()
                if node.cond is not None and not self.truthy(node.cond):
                    break
                try:
                    self.exec_stmt(node.body)
                except _Break:
                    break
                except _Continue:
                    pass
                if node.step is not None:
                    self.exec_stmt(node.step)
        elif isinstance(node, DoWhileStmt):
            while True:
                self.tick()
                try:
                    self.exec_stmt(node.body)
                except _Break:
                    break
                except _Continue:
                    pass
                if not self.truthy(node.cond):
                    break
        elif isinstance(node, BreakStmt):
            raise _Break()
        elif isinstance(node, ContinueStmt):
            raise _Continue()
        elif isinstance(node, ReturnStmt):
            if node.value is None:
                raise _Return(None)
            value = self.eval(node.value)
            raise _Return(convert(value, node.value.static_type,
                                  self.current_return))
        elif isinstance(node, CinStmt):
            for target in node.targets:
                self.read_into(target, target.static_type, skip_ws=True)
        elif isinstance(node, CoutStmt):
            parts = [self.format_item(item) for item in node.items]
            self.emit("".join(parts))
            self.outputs_emitted += 1
        else:
            raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                        f"cannot execute {node.kind}")

    @property
    def current_return(self) -> Type:
        return self._current_return

    def exec_assign(self, node: AssignStmt) -> None:
        value = self.eval(node.value)
        container, key, ttype = self.lvalue(node.target)
        if node.op == "=":
            converted = convert(value, node.value.static_type, ttype)
            if ttype.name == "vector":
                converted = list(converted)
            container[key] = converted
        else:
            op = node.op[0]
            current = container[key]
            if ttype.name == "string":
                if node.value.static_type.name == "char":
                    value = chr(value)
                container[key] = current + value
                return
            result = _binop_values(op, current, value, ttype,
                                   node.value.static_type)
            container[key] = convert(result, _result_type(
                ttype, node.value.static_type, op), ttype)

    def read_into(self, target: Node, ttype: Type, skip_ws: bool,
                  raw_char: bool = False) -> None:
        if ttype.name in ("int", "long long"):
            value = self.input.read_int()
        elif ttype.name == "double":
            value = self.input.read_double()
        elif ttype.name == "char":
            value = self.input.read_char(skip_ws=not raw_char)
        elif ttype.name == "string":
            value = self.input.read_word()
        else:
            raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                        f"cannot read a {ttype.name}")
        self.inputs_consumed += 1
        container, key, _ = self.lvalue(target)
        container[key] = value

    def format_item(self, node: Node) -> str:
        if isinstance(node, Endl):
            return "\n"
        value = self.eval(node)
        return _format_value(value, node.static_type)

    # --- expressions ------------------------------------------------------

    def truthy(self, node: Node) -> bool:
        return self.eval(node) != 0

    def lvalue(self, node: Node) -> tuple:
        """Returns (container, key, type) for an assignable place."""
        if isinstance(node, Var):
            sym = node.symbol
            if sym.sid not in self.frame:
                raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                            f"{node.name} read before its declaration ran")
            return self.frame, sym.sid, \
                (Type("array", sym.type) if sym.is_array else sym.type)
        if isinstance(node, Index):
            container, key, btype = self.lvalue(node.base)
            seq = container[key]
            idx = self.eval(node.subscript)
            if not 0 <= idx < len(seq):
                raise _Trap(STATUS_RUNTIME, REASON_INDEX,
                            f"index {idx} out of range 0..{len(seq) - 1}")
            if btype.name in ("array", "vector"):
                return seq, idx, btype.elem
            if btype.name == "string":
                return _StrSlot(container, key, idx), 0, Type("char")
            raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                        "cannot assign into this expression")
        raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                    "not an assignable expression")

    def eval(self, node: Node):
        if isinstance(node, IntLiteral):
            return wrap64(node.value)
        if isinstance(node, FloatLiteral):
            return node.value
        if isinstance(node, StringLiteral):
            return node.value
        if isinstance(node, CharLiteral):
            return ord(node.value) & 0xFF
        if isinstance(node, BoolLiteral):
            return 1 if node.value else 0
        if isinstance(node, Var):
            sym = node.symbol
            if sym.sid not in self.frame:
                raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                            f"{node.name} read before its declaration ran")
            return self.frame[sym.sid]
        if isinstance(node, Index):
            seq = self.eval(node.base)
            idx = self.eval(node.subscript)
            if not 0 <= idx < len(seq):
                raise _Trap(STATUS_RUNTIME, REASON_INDEX,
                            f"index {idx} out of range 0..{len(seq) - 1}")
            item = seq[idx]
            if isinstance(seq, str):
                return ord(item) & 0xFF
            return item
        if isinstance(node, Binary):
            return self.eval_binary(node)
        if isinstance(node, Unary):
            return self.eval_unary(node)
        if isinstance(node, IncDec):
            container, key, ttype = self.lvalue(node.target)
            old = container[key]
            delta = 1 if node.op == "++" else -1
            new = wrap64(old + delta)
            container[key] = new
            return new if node.is_prefix else old
        if isinstance(node, Ternary):
            if self.truthy(node.cond):
                chosen, src = node.if_true, node.if_true.static_type
            else:
                chosen, src = node.if_false, node.if_false.static_type
            return convert(self.eval(chosen), src, node.static_type)
        if isinstance(node, Call):
            return self.eval_call(node)
        if isinstance(node, MethodCall):
            return self.eval_method(node)
        raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                    f"cannot evaluate {node.kind}")

    def eval_binary(self, node: Binary):
        op = node.op
        if op == "&&":
            return 1 if (self.truthy(node.left) and self.truthy(node.right)) \
                else 0
        if op == "||":
            return 1 if (self.truthy(node.left) or self.truthy(node.right)) \
                else 0
        left = self.eval(node.left)
        right = self.eval(node.right)
        lt, rt = node.left.static_type, node.right.static_type
        if op in ("==", "!=", "<", ">", "<=", ">="):
            if lt.name == "char" and rt.name == "string":
                left = chr(left)
            if rt.name == "char" and lt.name == "string":
                right = chr(right)
            result = {"==": left == right, "!=": left != right,
                      "<": left < right, ">": left > right,
                      "<=": left <= right, ">=": left >= right}[op]
            return 1 if result else 0
        if op == "+" and "string" in (lt.name, rt.name):
            if lt.name == "char":
                left = chr(left)
            if rt.name == "char":
                right = chr(right)
            return left + right
        return _binop_values(op, left, right, lt, rt)

    def eval_unary(self, node: Unary):
        if node.op == "&":  # scanf-only; value semantics here
            return self.eval(node.operand)
        value = self.eval(node.operand)
        if node.op == "+":
            return value
        if node.op == "-":
            return -value if isinstance(value, float) else wrap64(-value)
        if node.op == "!":
            return 0 if value != 0 else 1
        if node.op == "~":
            return wrap64(~value)
        raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                    f"unknown operator {node.op}")

    def eval_call(self, node: Call):
        name = node.name
        if name == "printf":
            return self.eval_printf(node)
        if name == "scanf":
            return self.eval_scanf(node)
        if name in ("min", "max"):
            a = self.eval(node.args[0])
            b = self.eval(node.args[1])
            at = node.args[0].static_type
            bt = node.args[1].static_type
            rt = node.static_type
            a = convert(a, at, rt)
            b = convert(b, bt, rt)
            return (min if name == "min" else max)(a, b)
        if name == "abs":
            value = self.eval(node.args[0])
            return abs(value) if isinstance(value, float) \
                else wrap64(abs(value))
        if name == "sqrt":
            value = convert(self.eval(node.args[0]),
                            node.args[0].static_type, Type("double"))
            if value < 0:
                raise _Trap(STATUS_RUNTIME, REASON_DIV_ZERO,
                            "sqrt of a negative number")
            return value ** 0.5
        if name == "swap":
            ca, ka, _ = self.lvalue(node.args[0])
            cb, kb, _ = self.lvalue(node.args[1])
            ca[ka], cb[kb] = cb[kb], ca[ka]
            return 0
        fn = self.info.functions[name]
        args = []
        for arg, param in zip(node.args, fn.params):
            value = convert(self.eval(arg), arg.static_type,
                            param.symbol.type)
            if param.symbol.type.name == "vector":
                value = [list(v) if isinstance(v, list) else v
                         for v in value]
            args.append(value)
        saved = self._current_return
        self._current_return = fn.resolved_return
        try:
            return self.call(fn, args)
        finally:
            self._current_return = saved

    def eval_printf(self, node: Call) -> int:
        args = iter(node.args[1:])
        parts: list[str] = []
        for kind, payload in node.segments:
            if kind == "text":
                parts.append(payload)
                continue
            arg = next(args)
            value = self.eval(arg)
            if payload in ("d", "lld"):
                parts.append(str(int(value)))
            elif payload == "f":
                parts.append(f"{convert(value, arg.static_type, Type('double')):.6f}")
            elif payload == "c":
                parts.append(chr(value & 0xFF))
            elif payload == "s":
                parts.append(value)
        self.emit("".join(parts))
        self.outputs_emitted += 1
        return 0

    def eval_scanf(self, node: Call) -> int:
        args = iter(node.args[1:])
        count = 0
        for kind, payload in node.segments:
            if kind == "text":
                self.input.match_literal(payload)
                continue
            arg = next(args)
            target = arg.operand if isinstance(arg, Unary) else arg
            ttype = target.static_type
            self.read_into(target, ttype, skip_ws=True,
                           raw_char=(payload == "c"))
            count += 1
        return count

    def eval_method(self, node: MethodCall):
        obj_type = node.obj.static_type
        if node.method == "push_back":
            container, key, _ = self.lvalue(node.obj)
            value = convert(self.eval(node.args[0]),
                            node.args[0].static_type, obj_type.elem)
            container[key].append(value)
            return 0
        if node.method == "size":
            return wrap64(len(self.eval(node.obj)))
        if node.method == "substr":
            text = self.eval(node.obj)
            start = self.eval(node.args[0])
            if not 0 <= start <= len(text):
                raise _Trap(STATUS_RUNTIME, REASON_INDEX,
                            f"substr start {start} out of range")
            if len(node.args) == 2:
                length = self.eval(node.args[1])
                if length < 0:
                    raise _Trap(STATUS_RUNTIME, REASON_INDEX,
                                "substr length is negative")
                return text[start:start + length]
            return text[start:]
        raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                    f"unknown method {node.method}")


def _result_type(lt: Type, rt: Type, op: str) -> Type:
    if "double" in (lt.name, rt.name):
        return Type("double")
    if "long long" in (lt.name, rt.name):
        return Type("long long")
    return Type("int")


def _binop_values(op: str, left, right, lt: Type, rt: Type):
    as_float = "double" in (lt.name, rt.name)
    if as_float:
        left, right = float(left), float(right)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0.0:
                raise _Trap(STATUS_RUNTIME, REASON_DIV_ZERO,
                            "division by zero")
            return left / right
        raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED,
                    f"bad float operator {op}")
    left, right = int(left), int(right)
    if op == "+":
        return wrap64(left + right)
    if op == "-":
        return wrap64(left - right)
    if op == "*":
        return wrap64(left * right)
    if op == "/":
        if right == 0:
            raise _Trap(STATUS_RUNTIME, REASON_DIV_ZERO, "division by zero")
        return wrap64(c_div(left, right))
    if op == "%":
        if right == 0:
            raise _Trap(STATUS_RUNTIME, REASON_DIV_ZERO, "modulo by zero")
        return wrap64(c_mod(left, right))
    if op == "&":
        return wrap64(left & right)
    if op == "|":
        return wrap64(left | right)
    if op == "^":
        return wrap64(left ^ right)
    if op == "<<":
        return wrap64(left << (right & 63))
    if op == ">>":
        return wrap64(left >> (right & 63))
    raise _Trap(STATUS_RUNTIME, REASON_UNRESOLVED, f"bad operator {op}")


def _format_value(value, t: Type) -> str:
    if t.name == "double":
        return f"{value:g}"
    if t.name == "char":
        return chr(int(value) & 0xFF)
    if t.name == "string":
        return value
    return str(int(value))


def execute(program: Program, stdin_text: str = "",
            limits: RunLimits | None = None) -> ExecutionResult:
    """Bind and run a program's main. BindError propagates to the caller;
    everything that can go wrong at runtime lands in the result status."""
    interp = Interpreter(program, stdin_text, limits or RunLimits())
    return interp.run()
