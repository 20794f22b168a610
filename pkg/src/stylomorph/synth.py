"""Synthetic styled corpus generator.

Produces a contest-style corpus of small programs where each author writes
every challenge in a fixed personal style.  Style dimensions map onto the
transform catalog (naming scheme, loop form, output form, brace habit,
declaration merging, increment form), so a search over the catalog can move
any program from one author's style toward another's, and no dimension can
be converted wholesale by a single action: names move one variable at a
time, outputs one statement at a time, loops and increments one site at a
time.

Every challenge template exercises every dimension several times: adjacent
same-type declarations, multiple loops and increment sites, a long-long
accumulator, single-statement conditionals, and several outputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, SourceUnit
from .frontend import bind, parse_source
from .interp import derive_tests

NAMING = ("camel", "snake", "short")
LOOP = ("for", "while")
IO = ("stream", "newline", "printf")
BRACES = ("always", "minimal")
INCR = ("incdec", "compound", "plain")


@dataclass(frozen=True)
class StyleProfile:
    naming: str
    loop: str
    io: str
    braces: str
    merge_decls: bool
    incr: str

    def as_tuple(self):
        return (self.naming, self.loop, self.io, self.braces,
                self.merge_decls, self.incr)


def _profile_codewords():
    """All (naming, loop, io, incr, braces) combos passing a mod-3 check.

    The check digit forces any two codewords to differ in at least two of
    these dimensions, so no author pair is separated by a single style
    habit alone.
    """
    words = []
    for nm in range(3):
        for lp in range(2):
            for io in range(3):
                for inc in range(3):
                    for br in range(2):
                        if (nm + lp + io + inc + br) % 3 == 0:
                            words.append((nm, lp, io, inc, br))
    return words


def distinct_profiles(n, seed=0):
    """n style profiles pairwise distinct in at least two dimensions;
    declaration-merge habit adds further spread."""
    codewords = _profile_codewords()
    capacity = len(codewords) * 2
    if n > capacity:
        raise ValueError(f"at most {capacity} distinct profiles exist")
    rng = random.Random(seed)
    rng.shuffle(codewords)
    profiles = []
    for k in range(n):
        nm, lp, io, inc, br = codewords[k % len(codewords)]
        layer = k // len(codewords)
        profiles.append(
            StyleProfile(
                naming=NAMING[nm],
                loop=LOOP[lp],
                io=IO[io],
                braces=BRACES[br],
                merge_decls=bool((k // 2 + layer) % 2),
                incr=INCR[inc],
            )
        )
    return profiles


class _Writer:
    def __init__(self):
        self.lines = []
        self.depth = 0

    def line(self, text=""):
        self.lines.append("    " * self.depth + text if text else "")

    def open(self, head):
        self.line(head + " {")
        self.depth += 1

    def close(self):
        self.depth -= 1
        self.line("}")

    def text(self):
        return "\n".join(self.lines) + "\n"


def _nm(p, *words):
    """Render a multi-word variable name in the profile's scheme."""
    if p.naming == "camel":
        return words[0] + "".join(w.capitalize() for w in words[1:])
    if p.naming == "snake":
        return "_".join(words)
    return words[0][0]


def _decls(w, p, typ, names):
    if p.merge_decls and len(names) > 1:
        w.line(f"{typ} {', '.join(names)};")
    else:
        for name in names:
            w.line(f"{typ} {name};")


def _inc_expr(p, var):
    if p.incr == "incdec":
        return f"{var}++"
    if p.incr == "compound":
        return f"{var} += 1"
    return f"{var} = {var} + 1"


def _inc_stmt(p, var):
    return _inc_expr(p, var) + ";"


def _acc(p, var, op, expr):
    """Accumulation statement: var op= expr, styled plain or compound."""
    if p.incr == "plain":
        return f"{var} = {var} {op} {expr};"
    return f"{var} {op}= {expr};"


def _count_loop(w, p, bound, body, var="i"):
    """A loop running var over 0..bound-1; body(w) writes the payload."""
    if p.loop == "for":
        w.open(f"for (int {var} = 0; {var} < {bound}; {_inc_expr(p, var)})")
        body(w)
        w.close()
    else:
        w.line(f"int {var} = 0;")
        w.open(f"while ({var} < {bound})")
        body(w)
        w.line(_inc_stmt(p, var))
        w.close()


def _audit_block(w, p, expr, bound=4):
    """Two small styled checksum loops appended to every challenge.

    They add two more styled names, loops, increment chains and outputs,
    so no single style dimension rests on one or two sites and no single
    rename or rewrite moves a large share of the style evidence.
    """
    audit = _nm(p, "audit", "sum")
    gauge = _nm(p, "gauge", "total")
    w.line(f"int {audit};")
    w.line(f"{audit} = 0;")
    _count_loop(w, p, str(bound),
                lambda w: w.line(_acc(p, audit, "+", expr)), var="j")
    w.line(_out_val(p, audit))
    w.line(f"int {gauge};")
    w.line(f"{gauge} = 0;")

    def gauge_body(w):
        w.line(_acc(p, gauge, "+", f"k * 2"))
        _if1(w, p, "k % 2 == 1", _inc_stmt(p, gauge))

    _count_loop(w, p, "3", gauge_body, var="k")
    w.line(_out_val(p, gauge))
    meter = _nm(p, "meter", "count")
    w.line(f"int {meter};")
    w.line(f"{meter} = 0;")

    def meter_body(w):
        _if1(w, p, "q % 2 == 0", _inc_stmt(p, meter))
        w.line(_acc(p, meter, "+", "q"))

    _count_loop(w, p, "5", meter_body, var="q")
    w.line(_out_val(p, meter))


def _cond_loop(w, p, cond, body):
    """A condition-only loop, rendered as while or as a for with no init."""
    if p.loop == "for":
        w.open(f"for (; {cond}; )")
    else:
        w.open(f"while ({cond})")
    body(w)
    w.close()


def _if1(w, p, cond, stmt):
    """Single-statement conditional, braced or not per profile."""
    if p.braces == "always":
        w.open(f"if ({cond})")
        w.line(stmt)
        w.close()
    else:
        w.line(f"if ({cond}) {stmt}")


def _out_val(p, expr, spec="%d"):
    if p.io == "stream":
        return f"cout << {expr} << endl;"
    if p.io == "newline":
        return f'cout << {expr} << "\\n";'
    return f'printf("{spec}\\n", {expr});'


def _out_word(p, word):
    if p.io == "stream":
        return f'cout << "{word}" << endl;'
    if p.io == "newline":
        return f'cout << "{word}\\n";'
    return f'printf("{word}\\n");'


def _ll_prefix(w, p):
    return "long long"


def _t_sum_range(p):
    w = _Writer()
    limit, odd = _nm(p, "limit", "value"), _nm(p, "odd", "count")
    total = _nm(p, "total", "sum")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [limit, odd])
    w.line(f"cin >> {limit};")
    w.line(f"{odd} = 0;")
    w.line(f"{ll} {total};")
    w.line(f"{total} = 0;")

    def body(w):
        w.line(_acc(p, total, "+", "i + 1"))
        _if1(w, p, "i % 2 == 0", _inc_stmt(p, odd))

    _count_loop(w, p, limit, body)
    w.line(_out_val(p, total, "%lld"))
    w.line(_out_val(p, odd))
    _audit_block(w, p, f"j + {limit}")
    w.line("return 0;")
    w.close()
    return w.text(), ["5\n", "9\n", "1\n", "16\n", "30\n"]


def _t_max_of_list(p):
    w = _Writer()
    count, best = _nm(p, "count", "value"), _nm(p, "best", "value")
    whole, nxt = _nm(p, "whole", "sum"), _nm(p, "next", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [count, best])
    w.line(f"cin >> {count};")
    w.line(f"{best} = -1000000;")
    w.line(f"{ll} {whole};")
    w.line(f"{whole} = 0;")

    def body(w):
        w.line(f"int {nxt};")
        w.line(f"cin >> {nxt};")
        _if1(w, p, f"{nxt} > {best}", f"{best} = {nxt};")
        w.line(_acc(p, whole, "+", nxt))

    _count_loop(w, p, count, body)
    w.line(_out_val(p, best))
    w.line(_out_val(p, whole, "%lld"))
    _audit_block(w, p, f"j * {count}")
    w.line("return 0;")
    w.close()
    return w.text(), [
        "3\n4 9 2\n", "5\n-3 -8 -1 -40 -2\n", "1\n7\n",
        "6\n10 20 5 30 25 15\n", "4\n0 0 0 0\n",
    ]


def _t_count_even(p):
    w = _Writer()
    count, evens = _nm(p, "count", "value"), _nm(p, "even", "total")
    squares, nxt = _nm(p, "square", "sum"), _nm(p, "next", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [count, evens])
    w.line(f"cin >> {count};")
    w.line(f"{evens} = 0;")
    w.line(f"{ll} {squares};")
    w.line(f"{squares} = 0;")

    def body(w):
        w.line(f"int {nxt};")
        w.line(f"cin >> {nxt};")
        _if1(w, p, f"{nxt} % 2 == 0", _inc_stmt(p, evens))
        w.line(_acc(p, squares, "+", f"{nxt} * {nxt}"))

    _count_loop(w, p, count, body)
    w.line(_out_val(p, evens))
    w.line(_out_val(p, squares, "%lld"))
    _audit_block(w, p, f"j + {evens}")
    w.line("return 0;")
    w.close()
    return w.text(), [
        "4\n1 2 3 4\n", "3\n5 7 9\n", "5\n2 4 6 8 10\n",
        "1\n0\n", "6\n11 12 13 14 15 16\n",
    ]


def _t_factorial(p):
    w = _Writer()
    limit, steps = _nm(p, "limit", "value"), _nm(p, "step", "count")
    product = _nm(p, "product", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [limit, steps])
    w.line(f"cin >> {limit};")
    w.line(f"{steps} = 0;")
    w.line(f"{ll} {product};")
    w.line(f"{product} = 1;")

    def body(w):
        w.line(_acc(p, product, "*", "i + 1"))
        w.line(_inc_stmt(p, steps))

    _count_loop(w, p, limit, body)
    _if1(w, p, f"{limit} > 10", _out_word(p, "large"))
    w.line(_out_val(p, product, "%lld"))
    w.line(_out_val(p, steps))
    _audit_block(w, p, f"j + {limit}")
    w.line("return 0;")
    w.close()
    return w.text(), ["5\n", "1\n", "10\n", "12\n", "20\n"]


def _t_gcd(p):
    w = _Writer()
    first, second = _nm(p, "first", "value"), _nm(p, "second", "value")
    steps, temp = _nm(p, "round", "count"), _nm(p, "temp", "value")
    product = _nm(p, "product", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [first, second])
    w.line(f"cin >> {first} >> {second};")
    w.line(f"{ll} {product};")
    w.line(f"{product} = {first};")
    w.line(_acc(p, product, "*", second))
    w.line(f"int {steps};")
    w.line(f"{steps} = 0;")

    def body(w):
        w.line(f"int {temp} = {second};")
        w.line(f"{second} = {first} % {second};")
        w.line(f"{first} = {temp};")
        w.line(_inc_stmt(p, steps))

    _cond_loop(w, p, f"{second} != 0", body)
    _if1(w, p, f"{steps} > 3", _out_word(p, "slow"))
    w.line(_out_val(p, first))
    w.line(_out_val(p, steps))
    w.line(_out_val(p, f"{product} / {first}", "%lld"))
    _audit_block(w, p, f"j * {steps}")
    w.line("return 0;")
    w.close()
    return w.text(), [
        "12 18\n", "7 13\n", "100 75\n", "9 3\n", "84 126\n",
    ]


def _t_power(p):
    w = _Writer()
    base, expo = _nm(p, "base", "value"), _nm(p, "exp", "count")
    result, steps = _nm(p, "result", "value"), _nm(p, "step", "count")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [base, expo])
    w.line(f"cin >> {base} >> {expo};")
    w.line(f"{ll} {result};")
    w.line(f"{result} = 1;")
    w.line(f"int {steps};")
    w.line(f"{steps} = 0;")

    def body(w):
        w.line(_acc(p, result, "*", base))
        w.line(_inc_stmt(p, steps))

    _count_loop(w, p, expo, body)
    _if1(w, p, f"{base} % 2 == 0", _out_word(p, "even"))
    w.line(_out_val(p, result, "%lld"))
    w.line(_out_val(p, steps))
    _audit_block(w, p, f"j + {expo}")
    w.line("return 0;")
    w.close()
    return w.text(), ["2 10\n", "3 4\n", "5 0\n", "7 7\n", "2 40\n"]


def _t_digit_sum(p):
    w = _Writer()
    number, digits = _nm(p, "number", "value"), _nm(p, "digit", "total")
    rounds, weight = _nm(p, "round", "count"), _nm(p, "weight", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [number, digits, rounds])
    w.line(f"cin >> {number};")
    w.line(f"{digits} = 0;")
    w.line(f"{rounds} = 0;")
    w.line(f"{ll} {weight};")
    w.line(f"{weight} = 1;")

    def body(w):
        w.line(_acc(p, digits, "+", f"{number} % 10"))
        w.line(_acc(p, weight, "*", "10"))
        w.line(_acc(p, number, "/", "10"))
        w.line(_inc_stmt(p, rounds))

    _cond_loop(w, p, f"{number} > 0", body)
    _if1(w, p, f"{digits} > 20", _out_word(p, "heavy"))
    w.line(_out_val(p, digits))
    w.line(_out_val(p, rounds))
    w.line(_out_val(p, weight, "%lld"))
    _audit_block(w, p, f"j * {digits}")
    w.line("return 0;")
    w.close()
    return w.text(), ["123\n", "9\n", "100000\n", "987654\n", "5050\n"]


def _t_classify(p):
    w = _Writer()
    count, zeros = _nm(p, "count", "value"), _nm(p, "zero", "count")
    cubes, nxt = _nm(p, "total", "cubes"), _nm(p, "next", "value")
    ll = _ll_prefix(w, p)
    w.open("int main()")
    _decls(w, p, "int", [count, zeros])
    w.line(f"cin >> {count};")
    w.line(f"{zeros} = 0;")
    w.line(f"{ll} {cubes};")
    w.line(f"{cubes} = 0;")

    def body(w):
        w.line(f"int {nxt};")
        w.line(f"cin >> {nxt};")
        w.line(_acc(p, cubes, "+", f"{nxt} * {nxt} * {nxt}"))
        if p.braces == "always":
            w.open(f"if ({nxt} > 0)")
            w.line(_out_word(p, "pos"))
            w.close()
            w.lines[-1] += f" else if ({nxt} < 0) {{"
            w.depth += 1
            w.line(_out_word(p, "neg"))
            w.close()
            w.lines[-1] += " else {"
            w.depth += 1
            w.line(_out_word(p, "zero"))
            w.line(_inc_stmt(p, zeros))
            w.close()
        else:
            w.line(f"if ({nxt} > 0) {_out_word(p, 'pos')}")
            w.line(f"else if ({nxt} < 0) {_out_word(p, 'neg')}")
            w.open("else")
            w.line(_out_word(p, "zero"))
            w.line(_inc_stmt(p, zeros))
            w.close()

    _count_loop(w, p, count, body)
    w.line(_out_val(p, zeros))
    w.line(_out_val(p, cubes, "%lld"))
    _audit_block(w, p, f"j + {zeros}")
    w.line("return 0;")
    w.close()
    return w.text(), [
        "3\n5 -2 0\n", "4\n-1 -2 -3 -4\n", "2\n0 0\n",
        "5\n1 2 3 4 5\n", "6\n9 -9 0 1 -1 0\n",
    ]


CHALLENGES = (
    ("sum_range", _t_sum_range),
    ("max_of_list", _t_max_of_list),
    ("count_even", _t_count_even),
    ("factorial", _t_factorial),
    ("gcd", _t_gcd),
    ("power", _t_power),
    ("digit_sum", _t_digit_sum),
    ("classify", _t_classify),
)


def generate_unit(author, challenge, builder, profile):
    code, inputs = builder(profile)
    program = parse_source(code)
    bind(program)
    tests = tuple(derive_tests(program, inputs))
    return SourceUnit(author=author, challenge=challenge, code=code,
                      tests=tests)


def generate_corpus(n_authors=20, seed=0):
    """A full styled corpus: n_authors profiles x all challenges."""
    profiles = distinct_profiles(n_authors, seed)
    units = []
    authors = []
    for idx, profile in enumerate(profiles):
        author = f"author{idx:02d}"
        authors.append(author)
        for challenge, builder in CHALLENGES:
            units.append(generate_unit(author, challenge, builder, profile))
    units.sort(key=lambda u: (u.author, u.challenge))
    return Corpus(units=tuple(units), authors=tuple(sorted(authors)),
                  rejections=())


def write_tree(corpus, root):
    """Write the corpus as an ingestable directory tree."""
    root = Path(root)
    for unit in corpus.units:
        author_dir = root / unit.author
        tests_dir = author_dir / "tests"
        tests_dir.mkdir(parents=True, exist_ok=True)
        (author_dir / f"{unit.challenge}.cpp").write_text(
            unit.code, encoding="utf-8"
        )
        for k, test in enumerate(unit.tests, start=1):
            (tests_dir / f"{unit.challenge}.{k}.in").write_text(
                test.input, encoding="utf-8"
            )
            (tests_dir / f"{unit.challenge}.{k}.out").write_text(
                test.expected_output, encoding="utf-8"
            )
    return root
