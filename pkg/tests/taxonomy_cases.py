"""Hand-seeded broken candidates, one per failure-taxonomy category.

Shared by the oracle unit tests and the acceptance suite.  Each entry
maps the intended category to a candidate derived from BASE by exactly
one targeted break.
"""

BASE = """int main() {
    int n;
    cin >> n;
    int total = 0;
    for (int i = 1; i <= n; i++) {
        total += i;
    }
    cout << total << endl;
    return 0;
}
"""

BASE_INPUTS = ["3\n", "5\n", "10\n"]

CANDIDATES = {
    # syntax family
    "undeclared-variable":
        BASE.replace("cout << total", "cout << totl"),
    "redeclared-variable":
        BASE.replace("int total = 0;", "int total = 0;\n    int n;"),
    "missing-semicolon-or-brace":
        BASE.replace("return 0;", "return 0"),
    "return-statement":
        BASE.replace("return 0;", "return;"),
    "other":
        BASE.replace("return 0;", "return 0; @"),
    # semantic family
    "input-statement":
        BASE.replace("cin >> n;", "n = 5;"),
    "output-statement":
        BASE.replace("    cout << total << endl;",
                     "    cout << total << endl;\n    cout << 9 << endl;"),
    "misused-variable":
        BASE.replace("total += i;", "total += n;"),
}
