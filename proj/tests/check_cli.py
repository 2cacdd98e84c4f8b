#!/usr/bin/env python3
"""Runs bhlab subcommands and validates what they write against the report schema."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main():
    if len(sys.argv) != 4:
        sys.exit("usage: check_cli.py BHLAB SCHEMA OUTDIR")
    bhlab, schema_path, out = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    shutil.rmtree(out, ignore_errors=True)
    out.mkdir(parents=True)
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    failures = []

    def validator(name):
        sub = schema if name is None else {"$defs": schema["$defs"], "$ref": "#/$defs/" + name}
        return jsonschema.Draft202012Validator(sub)

    def run(args, expect=(0,)):
        proc = subprocess.run([bhlab, *args], capture_output=True, text=True)
        if proc.returncode not in expect:
            failures.append(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
        return proc

    def check(path, name=None):
        if not path.exists():
            failures.append(f"missing {path}")
            return None
        doc = json.loads(path.read_text())
        for err in validator(name).iter_errors(doc):
            failures.append(f"{path}: {err.message[:200]} at {list(err.absolute_path)}")
        return doc

    run(["sample", "--n", "3000", "--seed", "4", "--out", str(out / "sample")])
    check(out / "sample" / "sample.json", "sample")

    run(["construct", "--n", "20000", "--seeds", "1:3", "--out", str(out / "construct")])
    report = check(out / "construct" / "report.json")
    if report is not None and report["kind"] != "construction":
        failures.append("construct wrote kind " + report["kind"])

    run(["verify", "--n", "5000", "--seed", "2", "--out", str(out / "verify")])
    check(out / "verify" / "verify.json", "verify")
    lines = (out / "verify" / "collisions.jsonl").read_text().splitlines()
    if not lines:
        failures.append("collisions.jsonl is empty")
    collision = validator("collision")
    for line in lines:
        for err in collision.iter_errors(json.loads(line)):
            failures.append(f"collisions.jsonl: {err.message}")

    run(["sweep", "--n", "1000,4000", "--seeds", "1:2", "--out", str(out / "sweep")])
    check(out / "sweep" / "sweep.json", "sweep")

    run(["lemma4", "--part", "ii", "--alpha", "0.6", "--beta", "0.6", "--mmax", "300", "--points",
         "--out", str(out / "lemma4")], expect=(0, 2))
    check(out / "lemma4" / "lemma4.json")
    run(["lemma4", "--part", "iv", "--s", "2", "--t", "4", "--h", "2"], expect=(1,))

    run(["lemma568", "--windows", "2000,20000", "--seeds", "1:3", "--out", str(out / "lemma568")])
    check(out / "lemma568" / "lemma5.json")
    check(out / "lemma568" / "lemma68.json")

    proc = run(["replay", str(out / "construct" / "report.json")])
    if proc.returncode != 0 or "identical" not in proc.stderr:
        failures.append("replay did not reproduce the construction report")

    run(["construct", "--n", "5"], expect=(1,))

    for f in failures:
        print("FAIL:", f)
    print(f"cli checks: {len(failures)} failure(s)")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
