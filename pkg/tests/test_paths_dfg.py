"""Leaf paths and def-use graph extraction."""

from stylomorph.frontend import (bind, build_dfg, extract_leaf_paths,
                                 parse_source)

SOURCE = """int main() {
    int x;
    cin >> x;
    int y = x + 1;
    x = y * 2;
    cout << x << endl;
    return 0;
}
"""


def prepared(source=SOURCE):
    ast = parse_source(source)
    bind(ast)
    return ast


def test_paths_in_source_order():
    paths = extract_leaf_paths(prepared())
    tokens = [p.token.text for p in paths if p.token is not None]
    assert tokens == ["main", "x", "x", "y", "x", "1", "x", "y", "2",
                      "x", "endl", "0"]


def test_path_depth_truncation_keeps_leaf_side():
    full = extract_leaf_paths(prepared())
    shallow = extract_leaf_paths(prepared(), max_depth=1)
    assert all(p.depth == 1 for p in shallow)
    for deep, cut in zip(full, shallow):
        assert deep.kinds[-1:] == cut.kinds
    two = extract_leaf_paths(prepared(), max_depth=2)
    for deep, cut in zip(full, two):
        assert deep.kinds[-2:] == cut.kinds or deep.depth < 2


def test_path_count_truncation():
    capped = extract_leaf_paths(prepared(), max_count=4)
    assert len(capped) == 4


def test_dfg_edges_connect_defs_to_uses():
    ast = prepared()
    dfg = build_dfg(ast)
    by_line = {}
    for index, occ in enumerate(dfg.nodes):
        by_line.setdefault((occ.symbol.name, occ.role, occ.token.line),
                           index)
    # cin >> x defines x at line 3; its use at line 4 must be linked
    x_def = by_line[("x", "def", 3)]
    x_use = by_line[("x", "use", 4)]
    assert (x_def, x_use) in dfg.edges
    # y defined line 4, used line 5
    y_def = by_line[("y", "def", 4)]
    y_use = by_line[("y", "use", 5)]
    assert (y_def, y_use) in dfg.edges


def test_redefinition_cuts_older_reaching_def():
    ast = prepared()
    dfg = build_dfg(ast)
    # x redefined at line 5; the line-6 use must link to the line-5 def,
    # not the line-3 def
    def_3 = def_5 = use_6 = None
    for index, occ in enumerate(dfg.nodes):
        if occ.symbol.name != "x":
            continue
        if occ.role == "def" and occ.token.line == 3:
            def_3 = index
        if occ.role == "def" and occ.token.line == 5:
            def_5 = index
        if occ.role == "use" and occ.token.line == 6:
            use_6 = index
    assert (def_5, use_6) in dfg.edges
    assert (def_3, use_6) not in dfg.edges


def test_branch_joins_merge_reaching_defs():
    ast = prepared("""int main() {
    int x;
    cin >> x;
    if (x > 0) {
        x = 1;
    } else {
        x = 2;
    }
    cout << x << endl;
    return 0;
}
""")
    dfg = build_dfg(ast)
    use_lines = [i for i, occ in enumerate(dfg.nodes)
                 if occ.symbol.name == "x" and occ.role == "use"
                 and occ.token.line == 9]
    assert use_lines
    use = use_lines[0]
    sources = {dfg.nodes[a].token.line for a, b in dfg.edges if b == use}
    assert sources == {5, 7}


def test_node_cap_respected():
    ast = prepared()
    dfg = build_dfg(ast, max_nodes=3)
    assert len(dfg.nodes) == 3
    assert all(a < 3 and b < 3 for a, b in dfg.edges)
