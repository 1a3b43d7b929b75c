"""Runs every mero subcommand with --format json and validates the output."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    mero, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for schema in schemas.values():
        jsonschema.Draft202012Validator.check_schema(schema)

    with tempfile.TemporaryDirectory() as d:
        return check(mero, schemas, pathlib.Path(d))


def check(mero, schemas, tmp):
    gram = {"gram": [["2", "1/2"], ["1/2", "1"]]}
    jsonschema.validate(gram, schemas["gram"])
    (tmp / "gram.json").write_text(json.dumps(gram))
    forest = {"nodes": [{"id": 1, "set": [1, 2, 3], "exp": 2, "children": [{"id": 2, "set": [1]}, {"id": 3, "set": [3]}]}]}
    jsonschema.validate(forest, schemas["forest"])
    (tmp / "forest.json").write_text(json.dumps(forest))

    def run(args, stdin=None, expect=0):
        proc = subprocess.run([mero, "--format", "json", *args], input=stdin, capture_output=True, text=True)
        if proc.returncode != expect:
            raise SystemExit(f"{args}: exit {proc.returncode}\n{proc.stderr}")
        return json.loads(proc.stdout if expect == 0 else proc.stderr)

    transform = tmp / "transform.json"
    derived = run(["galois", "derive", "--evaluator", "zeta", "--letters", "1,2", "--max-weight", "3"])
    transform.write_text(json.dumps(derived))

    cases = [
        ("decomposition", ["decompose", "z2/(z1+z2)"]),
        ("decomposition", ["--gram", str(tmp / "gram.json"), "decompose", "(z1 + z2^2)/(z1*(z1+z2))"]),
        ("decomposition", ["residue", "--kind", "p", "1/(z1^2*(z1+z2))"]),
        ("decomposition", ["residue", "--kind", "d", "1/(z1*(z1+z2)) + 1/z3"]),
        ("holo", ["pi-plus", "-"], "z2/(z1+z2)"),
        ("eval", ["eval", "--evaluator", "iter", "((z1-z2)/(z1+z2))^2"]),
        ("eval", ["eval", "--evaluator", "ms", "f[2; 1]*(z2 + 1)"]),
        ("eval", ["--precision", "8", "eval", "--evaluator", "zeta", "f[2; 1] - f[1,2; 2,1]"]),
        ("dep", ["dep", "1/(z1*(z1+z2)) + 1/(z2*(z1+z2)) - 2/(z1*(z1+2*z2)) - 1/(z2*(z1+2*z2)) + 1/z3"]),
        ("orth", ["orth", "--onto", "z1+z2,z3", "z1"]),
        ("germ", ["mul", "z1", "1/z2"]),
        ("germ", ["mul", "--locality", "raw", "z1", "1/(z1+z2)"]),
        ("germ", ["phi", "--lmap", "speer", "x0x{1}x{2,3}"]),
        ("word", ["unphi", "f[2,1; 2,1]"]),
        ("word_polynomial", ["shuffle", "x0x1", "x2"]),
        ("cfl", ["lyndon", "factor", "x2x1x0x1"]),
        ("locality_cfl", ["lyndon", "factor", "--locality", "x1x0x2x0"]),
        ("lyndon_polynomial", ["lyndon", "rewrite", "x2x1x0"]),
        ("generators", ["lyndon", "generators", "--alphabet", "sets", "--letters", "x{1}x{2}", "--max-length", "3"]),
        ("fraction_combo", ["expand", "f[2; 1]", "f[1,1; 2,3]"]),
        ("flatten", ["flatten", str(tmp / "forest.json")]),
        ("transform", ["galois", "compose", str(transform), str(transform)]),
        ("transform", ["galois", "invert", str(transform)]),
        ("locality_combo", ["galois", "apply", "--transform", str(transform), "f[2; 1]*f[1; 2] + 1/2"]),
        ("factorization", ["galois", "check", "--evaluator", "zeta", "f[2; 1]*f[2; 2]", "f[2,1; 1,2]"]),
        ("factorization", ["galois", "check", "--evaluator", "iter", "f[1,1; 1,2]*(z3 + 1)"]),
    ]
    jsonschema.validate(derived, schemas["transform"])
    for name, args, *stdin in cases:
        jsonschema.validate(run(args, *stdin), schemas[name])
        print(f"ok {name}: {' '.join(args)}")

    errors = [
        (["decompose", "1/(1+z1)"], 1),
        (["decompose", "1/(z1"], 2),
        (["eval", "--evaluator", "zeta", "f[2; 1]*f[2; 1]"], 1),
        (["eval", "--evaluator", "zeta", "--lmap", "speer", "f[2; {1}]"], 1),
    ]
    for args, code in errors:
        jsonschema.validate(run(args, expect=code), schemas["error"])
        print(f"ok error: {' '.join(args)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
