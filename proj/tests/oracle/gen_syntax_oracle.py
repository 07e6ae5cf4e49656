"""Freeze reference extraction results for the statement recognizers.

Parses tests/fixtures/syntax/*.py with CPython's ast module and writes
`<name>.expected.json` holding imports, assignment bindings and function
signatures in source order, using the recognizers' conventions:

- `from a import b` gives full_path "a.b" with alias "b"; relative imports
  have root "" and keep their leading dots.
- bindings come from plain, chained, tuple/list/starred and annotated
  (with value) assignment targets only; for/with/except/walrus targets,
  augmented assignments and attribute/subscript targets bind nothing.
- parameter counts exclude a leading self/cls; *args and **kw count one.
"""
import ast
import json
import pathlib


def imports(tree):
    out = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            for a in node.names:
                out.append({"root": a.name.split(".")[0], "full_path": a.name,
                            "alias": a.asname, "line": node.lineno, "col": node.col_offset + 1})
        elif isinstance(node, ast.ImportFrom):
            dots = "." * node.level
            module = dots + (node.module or "")
            root = "" if node.level else node.module.split(".")[0]
            prefix = module if module.endswith(".") else module + "."
            for a in node.names:
                if a.name == "*":
                    out.append({"root": root, "full_path": prefix + "*", "alias": None,
                                "line": node.lineno, "col": node.col_offset + 1})
                else:
                    out.append({"root": root, "full_path": prefix + a.name,
                                "alias": a.asname or a.name, "line": node.lineno, "col": node.col_offset + 1})
    return sorted(out, key=lambda r: (r["line"], r["col"]))


def target_names(t, out):
    if isinstance(t, ast.Name):
        out.append({"name": t.id, "line": t.lineno, "col": t.col_offset + 1})
    elif isinstance(t, (ast.Tuple, ast.List)):
        for e in t.elts:
            target_names(e, out)
    elif isinstance(t, ast.Starred):
        target_names(t.value, out)


def bindings(tree):
    out = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Assign):
            for t in node.targets:
                target_names(t, out)
        elif isinstance(node, ast.AnnAssign) and node.value is not None:
            target_names(node.target, out)
    return sorted(out, key=lambda b: (b["line"], b["col"]))


def functions(tree):
    out = []
    for node in ast.walk(tree):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            a = node.args
            names = [x.arg for x in a.posonlyargs + a.args]
            if a.vararg:
                names.append(a.vararg.arg)
            names += [x.arg for x in a.kwonlyargs]
            if a.kwarg:
                names.append(a.kwarg.arg)
            if names and names[0] in ("self", "cls"):
                names = names[1:]
            out.append({"name": node.name, "line": node.lineno, "params": names})
    return sorted(out, key=lambda f: f["line"])


root = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "syntax"
for src in sorted(root.glob("*.py")):
    tree = ast.parse(src.read_text())
    expected = {"imports": imports(tree), "bindings": bindings(tree), "functions": functions(tree)}
    src.with_suffix(".expected.json").write_text(json.dumps(expected, indent=1) + "\n")
    print(src.name, {k: len(v) for k, v in expected.items()})
