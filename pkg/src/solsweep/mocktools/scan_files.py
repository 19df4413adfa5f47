#!/usr/bin/env python3
"""Demo analyzer that writes its findings to a JSON result file.

Usage: scan_files.py --out /results/output.json CONTRACT
Prints only a one-line summary to stdout; the findings live in the file.
"""

import json
import re
import sys


def scan(text: str) -> list[dict]:
    results = []
    for number, line in enumerate(text.splitlines(), 1):
        if re.search(r"\b(selfdestruct|suicide)\s*\(", line):
            results.append({"rule": "destructible", "line": number, "message": "contract can be destroyed from this call"})
        if "tx.origin" in line:
            results.append({"rule": "origin_auth", "line": number, "message": "transaction origin used in a check"})
    return results


def main() -> int:
    args = sys.argv[1:]
    out_path = None
    if "--out" in args:
        i = args.index("--out")
        try:
            out_path = args[i + 1]
        except IndexError:
            print("--out requires a path", file=sys.stderr)
            return 2
        del args[i : i + 2]
    if not args:
        print("usage: scan_files.py [--out FILE] CONTRACT", file=sys.stderr)
        return 2
    try:
        with open(args[-1], encoding="utf-8", errors="replace") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read contract: {exc}", file=sys.stderr)
        return 2
    results = scan(text)
    payload = json.dumps({"results": results}, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {len(results)} results")
    else:
        print(payload, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
