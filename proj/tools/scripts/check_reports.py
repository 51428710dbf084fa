#!/usr/bin/env python3
"""Report checks run from ctest: golden comparison, schema validation, determinism, error paths."""
import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

GOLDEN_RUNS = {
    "abhyankar": ["abhyankar", "--p", "3", "--depth", "15"],
    "example-e1": ["example-e1", "--depth", "12"],
    "example-e2": ["example-e2", "--depth", "12"],
}


def config_runs(configs):
    runs = []
    for path in sorted(pathlib.Path(configs).glob("*.json")):
        name = path.name
        if name.startswith("check-def"):
            runs.append(["check-def", "--config", str(path)])
        elif name.startswith("eval"):
            runs.append(["eval", "--config", str(path)])
        else:
            runs.append(["classify", "--config", str(path)])
            runs.append(["kaehler", "--config", str(path)])
    return runs


def builtin_runs():
    return list(GOLDEN_RUNS.values()) + [
        ["abhyankar", "--p", "2"],
        ["abhyankar", "--p", "5"],
        ["kummer-mixed", "--p", "3"],
        ["prescribe", "--rank", "3", "--select", "1,3"],
        ["prescribe", "--rank", "2", "--char", "mixed"],
    ]


def run(tool, args):
    proc = subprocess.run([tool] + args, capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr.decode()


def golden(opts):
    failed = 0
    for name, args in GOLDEN_RUNS.items():
        code, out, err = run(opts.tool, args)
        want = json.loads((pathlib.Path(opts.golden) / f"{name}.json").read_text())
        got = json.loads(out)
        ok = code == 0 and got == want
        print(f"{'PASS' if ok else 'FAIL'} golden {name}")
        if not ok:
            failed += 1
            if err:
                print(err, file=sys.stderr)
    return failed


def schema(opts):
    import jsonschema

    s = json.loads(pathlib.Path(opts.schema).read_text())
    failed = 0
    for args in builtin_runs() + config_runs(opts.configs):
        code, out, err = run(opts.tool, args)
        try:
            jsonschema.validate(json.loads(out), s)
            ok = code == 0
        except (jsonschema.ValidationError, json.JSONDecodeError) as e:
            print(e, file=sys.stderr)
            ok = False
        print(f"{'PASS' if ok else 'FAIL'} schema {' '.join(args)}")
        failed += not ok
    return failed


def determinism(opts):
    failed = 0
    for args in builtin_runs() + config_runs(opts.configs):
        outputs = {run(opts.tool, args)[1] for _ in range(3)}
        ok = len(outputs) == 1
        print(f"{'PASS' if ok else 'FAIL'} byte-stable x3 {' '.join(args)}")
        failed += not ok
    return failed


BAD_CONFIGS = {
    "unknown-field": ({"group": {"rank": 1, "components": ["pdiv"], "p": 2}, "colour": 1}, ["colour"]),
    "bad-group": ({"group": {"rank": 3, "components": ["pdiv", "real"], "p": 4}}, ["group.components[1]", "group.p", "group.rank"]),
    "bad-segment": (
        {
            "group": {"rank": 1, "components": ["pdiv"], "p": 2},
            "extension": {"kind": "synthetic", "sigma": {"direction": "up", "kind": "subgroup", "level": 0}},
        },
        ["segment.direction"],
    ),
    "bad-extension": (
        {"group": {"rank": 1, "components": ["pdiv"], "p": 2}, "extension": {"kind": "artin_schreier", "rhs": "t^2"}},
        ["extension.rhs"],
    ),
}


def errors(opts):
    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, (doc, fields) in BAD_CONFIGS.items():
            path = pathlib.Path(tmp) / f"{name}.json"
            path.write_text(json.dumps(doc))
            code, out, err = run(opts.tool, ["classify", "--config", str(path)])
            ok = code == 2 and not out and all(f in err for f in fields)
            print(f"{'PASS' if ok else 'FAIL'} error {name}: {err.strip()}")
            failed += not ok
        bad = pathlib.Path(tmp) / "broken.json"
        bad.write_text("{ not json")
        code, _, err = run(opts.tool, ["classify", "--config", str(bad)])
        ok = code == 2 and "not valid JSON" in err
        print(f"{'PASS' if ok else 'FAIL'} error invalid-json")
        failed += not ok
    code, _, _ = run(opts.tool, ["abhyankar", "--p", "4"])
    ok = code == 2
    print(f"{'PASS' if ok else 'FAIL'} error non-prime p")
    failed += not ok
    code, _, _ = run(opts.tool, ["abhyankar", "--format", "xml"])
    ok = code == 2
    print(f"{'PASS' if ok else 'FAIL'} error format")
    failed += not ok
    return failed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("mode", choices=["golden", "schema", "determinism", "errors"])
    ap.add_argument("--tool", required=True)
    ap.add_argument("--golden")
    ap.add_argument("--schema")
    ap.add_argument("--configs")
    opts = ap.parse_args()
    failed = globals()[opts.mode](opts)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
