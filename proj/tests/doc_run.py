"""Runs every ```console example in a Markdown file and compares the output.

A block holds commands prefixed with "$ ", each followed by its expected
output (stdout and stderr merged). An "[exit N]" line sets the expected exit
status; the default is 0.
"""

import argparse
import os
import re
import subprocess
import sys

BLOCK = re.compile(r"^```console\n(.*?)^```", re.M | re.S)
EXIT = re.compile(r"^\[exit (\d+)\]$")


def examples(text):
    for block in BLOCK.findall(text):
        cmd, out, code = None, [], 0
        for line in block.splitlines():
            if line.startswith("$ "):
                if cmd is not None:
                    yield cmd, out, code
                cmd, out, code = line[2:], [], 0
            elif (m := EXIT.match(line)) is not None:
                code = int(m.group(1))
            elif cmd is not None:
                out.append(line)
        if cmd is not None:
            yield cmd, out, code


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("markdown")
    ap.add_argument("--bin", required=True, help="directory holding the wb binary")
    ap.add_argument("--cwd", required=True)
    args = ap.parse_args()

    with open(args.markdown, encoding="utf-8") as f:
        text = f.read()
    env = dict(os.environ, PATH=args.bin + os.pathsep + os.environ["PATH"])
    failures = ran = 0
    for cmd, expected, code in examples(text):
        ran += 1
        p = subprocess.run(["bash", "-c", "{ " + cmd + "\n} 2>&1"], cwd=args.cwd, env=env,
                           capture_output=True, text=True)
        got = p.stdout.rstrip("\n").split("\n") if p.stdout.strip() else []
        want = "\n".join(expected).rstrip("\n").split("\n") if expected else []
        if got != want or p.returncode != code:
            failures += 1
            print(f"FAIL: $ {cmd}\n  exit {p.returncode}, expected {code}")
            print("  --- expected\n" + "\n".join("  " + w for w in want))
            print("  --- got\n" + "\n".join("  " + g for g in got))
        else:
            print(f"ok: $ {cmd}")
    print(f"{ran} examples, {failures} failures")
    sys.exit(1 if failures or ran == 0 else 0)


if __name__ == "__main__":
    main()
