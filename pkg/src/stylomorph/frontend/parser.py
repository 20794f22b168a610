"""Recursive-descent parser for the supported C++ subset.

Grammar (statements):
    program     := (include | using | typedef | function)*
    function    := type IDENT '(' params? ')' block
    block       := '{' statement* '}'
    statement   := declaration | if | for | while | dowhile | 'break' ';'
                 | 'continue' ';' | return | block | cin | cout | exprstmt
    declaration := type declarator (',' declarator)* ';'
    declarator  := IDENT ('[' INT ']')? ('=' ternary)?
    body        := block | statement        (braces optional)

Failures raise SyntaxFailure with a category: missing-semicolon-or-brace,
malformed-return (a broken expression inside a return), or other. Scope
and type problems (undeclared/redeclared variables, return arity) are the
binder's job, not the parser's.
"""

from __future__ import annotations

from .lexer import FrontendError, Token, TokenStream, decode_text, tokenize
from .astnodes import (
    AssignStmt, Binary, Block, BoolLiteral, BreakStmt, Call, CharLiteral,
    CinStmt, ContinueStmt, CoutStmt, Declarator, DeclStmt, DoWhileStmt, Endl,
    ExprStmt, FloatLiteral, ForStmt, Function, IfStmt, IncDec,
    IncludeDirective, Index, IntLiteral, MethodCall, Node, Param, Program,
    ReturnStmt, StringLiteral, Ternary, Type, TypedefDecl, Unary,
    UsingDirective, Var, WhileStmt,
)

SYNTAX_MISSING = "missing-semicolon-or-brace"
SYNTAX_RETURN = "malformed-return"
SYNTAX_OTHER = "other"

ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=")
TYPE_KEYWORDS = ("int", "long", "double", "bool", "char", "string", "void",
                 "vector")


class SyntaxFailure(FrontendError):
    def __init__(self, category: str, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.category = category
        self.message = message
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, stream: TokenStream):
        self.stream = stream
        self.toks = stream.tokens
        self.pos = 0
        self.typedef_names: set[str] = set()

    # --- token plumbing ---------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.text == text

    def at_kind(self, kind: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == kind

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail(SYNTAX_OTHER, "unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, text: str, category: str = SYNTAX_OTHER) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            found = "end of input" if tok is None else repr(tok.text)
            self.fail(category, f"expected {text!r}, found {found}")
        return self.advance()

    def expect_semi(self) -> Token:
        return self.expect(";", SYNTAX_MISSING)

    def fail(self, category: str, message: str) -> None:
        tok = self.peek()
        if tok is None:
            if self.toks:
                last = self.toks[-1]
                line, col = last.line, last.column + len(last.text)
            else:
                line, col = 1, 1
            raise SyntaxFailure(category, message, line, col)
        raise SyntaxFailure(category, message, tok.line, tok.column)

    def _span(self, start_index: int) -> tuple[int, int, int, int] | None:
        if start_index >= len(self.toks) or self.pos == start_index:
            return None
        first = self.toks[start_index]
        last = self.toks[self.pos - 1]
        return (first.line, first.column, last.line,
                last.column + len(last.text))

    def _comments(self, tok: Token | None) -> tuple[str, ...]:
        if tok is None:
            return ()
        return tuple(piece.text for piece in tok.leading
                     if piece.category in ("line-comment", "block-comment"))

    # --- types ------------------------------------------------------------

    def at_type(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        if tok.kind == "keyword" and tok.text in TYPE_KEYWORDS:
            return True
        # typedef-name heuristic: a known typedef followed by an identifier
        return (tok.kind == "identifier" and tok.text in self.typedef_names
                and self.at_kind("identifier", 1))

    def parse_type(self) -> Type:
        tok = self.peek()
        if tok is None:
            self.fail(SYNTAX_OTHER, "expected a type")
        if tok.text == "long":
            self.advance()
            self.expect("long")
            return Type("long long")
        if tok.text == "vector":
            self.advance()
            self.expect("<")
            elem = self.parse_type()
            self.expect(">")
            return Type("vector", elem)
        if tok.kind == "keyword" and tok.text in TYPE_KEYWORDS:
            self.advance()
            return Type(tok.text)
        if tok.kind == "identifier" and tok.text in self.typedef_names:
            self.advance()
            return Type(tok.text)
        self.fail(SYNTAX_OTHER, f"expected a type, found {tok.text!r}")

    # --- top level --------------------------------------------------------

    def collect_directives(self, out: list[Node]) -> None:
        tok = self.peek()
        pieces = tok.leading if tok is not None else self.stream.trailing
        for piece in pieces:
            if piece.category == "directive":
                out.append(IncludeDirective(text=piece.text))

    def parse_program(self) -> Program:
        items: list[Node] = []
        while self.peek() is not None:
            self.collect_directives(items)
            tok = self.peek()
            if tok is None:
                break
            comments = self._comments(tok)
            start = self.pos
            if tok.text == "using":
                items.append(self.parse_using(comments, start))
            elif tok.text == "typedef":
                items.append(self.parse_typedef(comments, start))
            elif self.at_type():
                items.append(self.parse_function(comments, start))
            else:
                self.fail(SYNTAX_OTHER,
                          f"unexpected {tok.text!r} at top level")
        self.collect_directives(items)
        return Program(items=items)

    def parse_using(self, comments, start) -> UsingDirective:
        self.expect("using")
        self.expect("namespace")
        name = self.advance()
        if name.kind not in ("identifier", "keyword"):
            self.fail(SYNTAX_OTHER, "expected a namespace name")
        self.expect_semi()
        node = UsingDirective(text=f"using namespace {name.text};")
        node.span = self._span(start)
        node.leading_comments = comments
        return node

    def parse_typedef(self, comments, start) -> TypedefDecl:
        self.expect("typedef")
        underlying = self.parse_type()
        name = self.advance()
        if name.kind != "identifier":
            self.fail(SYNTAX_OTHER, "expected a typedef name")
        self.expect_semi()
        self.typedef_names.add(name.text)
        node = TypedefDecl(underlying=underlying, name=name.text)
        node.token = name
        node.span = self._span(start)
        node.leading_comments = comments
        return node

    def parse_function(self, comments, start) -> Function:
        ret = self.parse_type()
        name = self.advance()
        if name.kind != "identifier":
            self.fail(SYNTAX_OTHER, "expected a function name")
        self.expect("(")
        params: list[Param] = []
        if not self.at(")"):
            while True:
                pstart = self.pos
                ptype = self.parse_type()
                pname = self.advance()
                if pname.kind != "identifier":
                    self.fail(SYNTAX_OTHER, "expected a parameter name")
                param = Param(type=ptype, name=pname.text)
                param.token = pname
                param.span = self._span(pstart)
                params.append(param)
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        body = self.parse_block()
        node = Function(return_type=ret, name=name.text, params=params,
                        body=body)
        node.token = name
        node.span = self._span(start)
        node.leading_comments = comments
        return node

    # --- statements -------------------------------------------------------

    def parse_block(self) -> Block:
        start = self.pos
        open_tok = self.peek()
        comments = self._comments(open_tok)
        self.expect("{", SYNTAX_MISSING)
        stmts: list[Node] = []
        while not self.at("}"):
            if self.peek() is None:
                self.fail(SYNTAX_MISSING, "expected '}' before end of input")
            stmts.append(self.parse_statement())
        self.expect("}", SYNTAX_MISSING)
        node = Block(stmts=stmts)
        node.span = self._span(start)
        node.leading_comments = comments
        return node

    def parse_statement(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.fail(SYNTAX_MISSING, "expected a statement")
        comments = self._comments(tok)
        start = self.pos
        node = self._parse_statement_inner(tok)
        node.span = self._span(start)
        node.leading_comments = comments
        return node

    def _parse_statement_inner(self, tok: Token) -> Node:
        text = tok.text
        if text == "{":
            return self.parse_block()
        if self.at_type():
            if text == "void":
                self.fail(SYNTAX_OTHER, "void is not a variable type")
            return self.parse_declaration()
        if text == "if":
            return self.parse_if()
        if text == "for":
            return self.parse_for()
        if text == "while":
            return self.parse_while()
        if text == "do":
            return self.parse_do_while()
        if text == "break":
            self.advance()
            self.expect_semi()
            return BreakStmt()
        if text == "continue":
            self.advance()
            self.expect_semi()
            return ContinueStmt()
        if text == "return":
            return self.parse_return()
        if text == "cin" and self.at(">>", 1):
            return self.parse_cin()
        if text == "cout" and self.at("<<", 1):
            return self.parse_cout()
        node = self.parse_simple_stmt()
        self.expect_semi()
        return node

    def parse_declaration(self, consume_semi: bool = True) -> DeclStmt:
        base = self.parse_type()
        if base.name == "void":
            self.fail(SYNTAX_OTHER, "void is not a variable type")
        declarators: list[Declarator] = []
        while True:
            dstart = self.pos
            name = self.advance()
            if name.kind != "identifier":
                self.fail(SYNTAX_OTHER,
                          f"expected a variable name, found {name.text!r}")
            array_size = None
            init = None
            if self.at("["):
                self.advance()
                size_tok = self.peek()
                if size_tok is None or size_tok.kind != "integer-literal":
                    self.fail(SYNTAX_OTHER, "array size must be a literal")
                self.advance()
                array_size = int(size_tok.text.rstrip("lL"))
                self.expect("]")
            elif self.at("="):
                self.advance()
                init = self.parse_ternary()
            decl = Declarator(name=name.text, array_size=array_size,
                              init=init)
            decl.token = name
            decl.span = self._span(dstart)
            declarators.append(decl)
            if self.at(","):
                self.advance()
                continue
            break
        if consume_semi:
            self.expect_semi()
        return DeclStmt(base_type=base, declarators=declarators)

    def parse_body(self) -> Node:
        """Loop/branch body: a block or a single non-declaration statement."""
        if self.at("{"):
            return self.parse_block()
        if self.at_type():
            self.fail(SYNTAX_OTHER,
                      "a declaration cannot be an unbraced body")
        return self.parse_statement()

    def parse_if(self) -> IfStmt:
        self.expect("if")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then_body = self.parse_body()
        else_body = None
        if self.at("else"):
            self.advance()
            else_body = self.parse_body()
        return IfStmt(cond=cond, then_body=then_body, else_body=else_body)

    def parse_for(self) -> ForStmt:
        self.expect("for")
        self.expect("(")
        init = None
        if not self.at(";"):
            if self.at_type():
                init = self.parse_declaration(consume_semi=False)
            else:
                init = self.parse_simple_stmt()
        self.expect_semi()
        cond = None if self.at(";") else self.parse_expression()
        self.expect_semi()
        step = None if self.at(")") else self.parse_simple_stmt()
        self.expect(")")
        body = self.parse_body()
        return ForStmt(init=init, cond=cond, step=step, body=body)

    def parse_while(self) -> WhileStmt:
        self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        return WhileStmt(cond=cond, body=self.parse_body())

    def parse_do_while(self) -> DoWhileStmt:
        self.expect("do")
        body = self.parse_body()
        self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        self.expect_semi()
        return DoWhileStmt(body=body, cond=cond)

    def parse_return(self) -> ReturnStmt:
        self.expect("return")
        value = None
        if not self.at(";"):
            try:
                value = self.parse_expression()
            except SyntaxFailure as err:
                if err.category == SYNTAX_OTHER:
                    raise SyntaxFailure(SYNTAX_RETURN, err.message, err.line,
                                        err.column) from None
                raise
        self.expect_semi()
        return ReturnStmt(value=value)

    def parse_cin(self) -> CinStmt:
        self.expect("cin")
        targets: list[Node] = []
        while self.at(">>"):
            self.advance()
            target = self.parse_unary()
            if not _is_lvalue(target):
                self.fail(SYNTAX_OTHER, "cin target must be a variable")
            targets.append(target)
        self.expect_semi()
        return CinStmt(targets=targets)

    def parse_cout(self) -> CoutStmt:
        self.expect("cout")
        items: list[Node] = []
        while self.at("<<"):
            self.advance()
            tok = self.peek()
            if tok is not None and tok.text == "endl" \
                    and tok.kind == "identifier":
                self.advance()
                endl = Endl()
                endl.token = tok
                endl.span = (tok.line, tok.column, tok.line,
                             tok.column + len(tok.text))
                items.append(endl)
            else:
                # additive level: stop at << rather than folding it in
                items.append(self.parse_additive())
        self.expect_semi()
        return CoutStmt(items=items)

    def parse_simple_stmt(self) -> Node:
        """Assignment, inc/dec or expression, without the semicolon.
        Shared by expression statements and for-init/step."""
        start = self.pos
        expr = self.parse_expression()
        tok = self.peek()
        if tok is not None and tok.text in ASSIGN_OPS:
            if not _is_lvalue(expr):
                self.fail(SYNTAX_OTHER, "assignment target is not assignable")
            self.advance()
            value = self.parse_expression()
            node = AssignStmt(op=tok.text, target=expr, value=value)
            node.span = self._span(start)
            return node
        node = ExprStmt(expr=expr)
        node.span = self._span(start)
        return node

    # --- expressions (precedence climbing) --------------------------------

    def parse_expression(self) -> Node:
        return self.parse_ternary()

    def parse_ternary(self) -> Node:
        start = self.pos
        cond = self.parse_logic_or()
        if self.at("?"):
            self.advance()
            if_true = self.parse_expression()
            self.expect(":")
            if_false = self.parse_ternary()
            node = Ternary(cond=cond, if_true=if_true, if_false=if_false)
            node.span = self._span(start)
            return node
        return cond

    def _binary_level(self, ops: tuple[str, ...], next_level) -> Node:
        start = self.pos
        left = next_level()
        while True:
            tok = self.peek()
            if tok is None or tok.text not in ops:
                return left
            self.advance()
            right = next_level()
            left = Binary(op=tok.text, left=left, right=right)
            left.span = self._span(start)

    def parse_logic_or(self) -> Node:
        return self._binary_level(("||",), self.parse_logic_and)

    def parse_logic_and(self) -> Node:
        return self._binary_level(("&&",), self.parse_bit_or)

    def parse_bit_or(self) -> Node:
        return self._binary_level(("|",), self.parse_bit_xor)

    def parse_bit_xor(self) -> Node:
        return self._binary_level(("^",), self.parse_bit_and)

    def parse_bit_and(self) -> Node:
        return self._binary_level(("&",), self.parse_equality)

    def parse_equality(self) -> Node:
        return self._binary_level(("==", "!="), self.parse_relational)

    def parse_relational(self) -> Node:
        return self._binary_level(("<", ">", "<=", ">="), self.parse_shift)

    def parse_shift(self) -> Node:
        return self._binary_level(("<<", ">>"), self.parse_additive)

    def parse_additive(self) -> Node:
        return self._binary_level(("+", "-"), self.parse_multiplicative)

    def parse_multiplicative(self) -> Node:
        return self._binary_level(("*", "/", "%"), self.parse_unary)

    def parse_unary(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.fail(SYNTAX_OTHER, "expected an expression")
        start = self.pos
        if tok.text in ("+", "-", "!", "~", "&"):
            self.advance()
            operand = self.parse_unary()
            node = Unary(op=tok.text, operand=operand)
            node.span = self._span(start)
            return node
        if tok.text in ("++", "--"):
            self.advance()
            target = self.parse_unary()
            if not _is_lvalue(target):
                self.fail(SYNTAX_OTHER, f"{tok.text} needs a variable")
            node = IncDec(op=tok.text, is_prefix=True, target=target)
            node.span = self._span(start)
            return node
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        start = self.pos
        node = self.parse_primary()
        while True:
            if self.at("["):
                self.advance()
                sub = self.parse_expression()
                self.expect("]")
                node = Index(base=node, subscript=sub)
                node.span = self._span(start)
            elif self.at("."):
                self.advance()
                name = self.advance()
                if name.kind != "identifier":
                    self.fail(SYNTAX_OTHER, "expected a method name")
                self.expect("(")
                args = self.parse_args()
                node = MethodCall(method=name.text, obj=node, args=args)
                node.token = name
                node.span = self._span(start)
            elif self.at("++") or self.at("--"):
                op = self.advance().text
                if not _is_lvalue(node):
                    self.fail(SYNTAX_OTHER, f"{op} needs a variable")
                node = IncDec(op=op, is_prefix=False, target=node)
                node.span = self._span(start)
            else:
                return node

    def parse_args(self) -> list[Node]:
        args: list[Node] = []
        if not self.at(")"):
            while True:
                args.append(self.parse_expression())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return args

    def parse_primary(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.fail(SYNTAX_OTHER, "expected an expression")
        start = self.pos
        span = (tok.line, tok.column, tok.line, tok.column + len(tok.text))
        if tok.text == "(":
            self.advance()
            expr = self.parse_expression()
            self.expect(")")
            return expr
        if tok.kind == "integer-literal":
            self.advance()
            node = IntLiteral(value=int(tok.text.rstrip("lL")),
                              lexeme=tok.text)
            node.token = tok
            node.span = span
            return node
        if tok.kind == "float-literal":
            self.advance()
            node = FloatLiteral(value=float(tok.text), lexeme=tok.text)
            node.token = tok
            node.span = span
            return node
        if tok.kind == "string-literal":
            self.advance()
            node = StringLiteral(value=decode_text(tok.text[1:-1]))
            node.token = tok
            node.span = span
            return node
        if tok.kind == "char-literal":
            self.advance()
            node = CharLiteral(value=decode_text(tok.text[1:-1]))
            node.token = tok
            node.span = span
            return node
        if tok.text in ("true", "false"):
            self.advance()
            node = BoolLiteral(value=(tok.text == "true"))
            node.token = tok
            node.span = span
            return node
        if tok.kind == "identifier":
            self.advance()
            if self.at("("):
                self.advance()
                args = self.parse_args()
                node = Call(name=tok.text, args=args)
                node.token = tok
                node.span = self._span(start)
                return node
            node = Var(name=tok.text)
            node.token = tok
            node.span = span
            return node
        self.fail(SYNTAX_OTHER,
                  f"unexpected {tok.text!r} in an expression")


def _is_lvalue(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Index):
        return _is_lvalue(node.base)
    return False


def parse(tokens: TokenStream) -> Program:
    parser = _Parser(tokens)
    program = parser.parse_program()
    if not program.items:
        parser.fail(SYNTAX_OTHER, "empty program")
    return program


def parse_source(source: str) -> Program:
    return parse(tokenize(source))
