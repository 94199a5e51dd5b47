#!/usr/bin/env python3
"""Runs crekit commands with --format json and validates every output line."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)

    tmp = tempfile.mkdtemp(prefix="crekit-schema-")

    def weights(name, text):
        path = os.path.join(tmp, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    yes, no, odd, zero = (weights("yes", "1 2 3"), weights("no", "1 3"),
                          weights("odd", "1 2"), weights("zero", "0 1"))
    commands = [
        (["parse", "a b? (c|d)+"], 0),
        (["parse", "a{3,2}"], 2),
        (["parse", "(a|"], 2),
        (["member", "a{2,3}", "a a"], 0),
        (["member", "a{2,3}", "a"], 1),
        (["enumerate", "a{1,3}", "5"], 0),
        (["lengths", "(a a)*", "7"], 0),
        (["unambiguous", "a b*"], 0),
        (["unambiguous", "b (a b)* a"], 1),
        (["include", "a{2,2}", "a{1,3}"], 0),
        (["include", "a{1,3}", "a{2,2}"], 1),
        (["overlap", "a", "b"], 1),
        (["equiv", "a{1,2}", "(a|%)a{0,1}"], 1),
        (["reduce", yes], 0),
        (["reduce", odd], 2),
        (["partition", yes], 0),
        (["partition", no], 1),
        (["partition", odd], 1),
        (["verify", no], 0),
        (["verify", zero], 2),
        (["verify-suite", "2", "2"], 0),
        (["--cap", "10", "include", "a{100}", "a"], 3),
        (["--budget", "2", "include", "a{10}", "a{10}"], 3),
        (["--limit", "3", "enumerate", "(a|b)*", "3"], 3),
        (["include", "a"], 2),
    ]

    failures = 0
    lines = 0
    for args, expected in commands:
        proc = subprocess.run([binary, "--format", "json", *args],
                              capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode != expected:
            print(f"FAIL {label}: exit {proc.returncode}, expected {expected}")
            failures += 1
        out = proc.stdout.splitlines()
        if not out:
            print(f"FAIL {label}: no output")
            failures += 1
        for line in out:
            lines += 1
            try:
                validator.validate(json.loads(line))
            except (ValueError, jsonschema.ValidationError) as e:
                print(f"FAIL {label}: {e}")
                failures += 1

    print(f"{len(commands)} commands, {lines} lines, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
