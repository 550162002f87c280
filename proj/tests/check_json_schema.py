"""Runs every subcommand with --format json and validates the documents."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main() -> int:
    tool, schema_path, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    schema = json.loads(schema_path.read_text())
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)

    def run(*args: str) -> str:
        done = subprocess.run([tool, *args], check=True, capture_output=True, text=True)
        return done.stdout

    def check(doc: dict, kind: str, label: str) -> None:
        sub = {"$ref": f"#/$defs/{kind}", "$defs": schema["$defs"]}
        jsonschema.validate(doc, sub, cls=jsonschema.Draft202012Validator)
        print(f"ok {label}")

    run("fig1", "--J-list", "1.8", "--format", "json", "--out", str(work))
    check(json.loads((work / "fig1_Jx1.8.json").read_text()), "fig1", "fig1")
    run("fig2", "--J-count", "5", "--eps2-count", "6", "--format", "json", "--out", str(work))
    check(json.loads((work / "fig2.json").read_text()), "fig2", "fig2")
    run("sweep", "--direction", "down", "--format", "json", "--out", str(work))
    check(json.loads((work / "sweep_down.json").read_text()), "sweep_file", "sweep")
    check(json.loads(run("tfim", "--J", "0", "--J", "1", "--format", "json")), "tfim", "tfim")
    spec = work / "spec.json"
    spec.write_text(json.dumps({"C0": 1.94e-15, "C1": 1.94e-16, "E_J": 7.2e9}))
    check(json.loads(run("circuit", "--spec", str(spec))), "circuit", "circuit")
    return 0


if __name__ == "__main__":
    sys.exit(main())
