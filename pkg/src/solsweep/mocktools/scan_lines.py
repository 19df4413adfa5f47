#!/usr/bin/env python3
"""Demo analyzer with line-oriented output.

Reads the contract given as the last argument and prints one line per
issue (`issue <rule> line <N> <message>`) followed by a `<count> issues`
summary. A `mock:sleep=N` marker in the contract makes the scan stall,
which the test suite uses to exercise timeout handling.
"""

import re
import sys
import time


def scan(text: str) -> list[tuple[int, str, str]]:
    issues = []
    for number, line in enumerate(text.splitlines(), 1):
        if ".call.value(" in line or ".call{value" in line:
            issues.append((number, "reentrant_call", "external call forwards value before state settles"))
        if re.search(r"\.send\s*\(", line):
            issues.append((number, "unchecked_send", "send return value may be ignored"))
        if re.search(r"\bthrow\s*;", line):
            issues.append((number, "deprecated_throw", "throw is deprecated; use revert"))
    return issues


def main() -> int:
    if len(sys.argv) < 2:
        print("usage: scan_lines.py CONTRACT", file=sys.stderr)
        return 2
    path = sys.argv[-1]
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read contract: {exc}", file=sys.stderr)
        return 2
    stall = re.search(r"mock:sleep=(\d+)", text)
    if stall:
        time.sleep(int(stall.group(1)))
    print("mock-lines analyzer v1")
    issues = scan(text)
    for number, rule, message in issues:
        print(f"issue {rule} line {number} {message}")
    print(f"{len(issues)} issues")
    return 0


if __name__ == "__main__":
    sys.exit(main())
