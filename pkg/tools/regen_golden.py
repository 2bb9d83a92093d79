"""Regenerate the CLI golden reports under tests/golden/expected.

Each case in tests/golden/cases.json is an argv list; the command runs from
tests/golden with --json --no-timing and BRUNR_BUDGET unset, so the output is
byte-stable.  Run ``python tools/regen_golden.py`` after an intentional change
and review the diff.
"""

import contextlib
import io
import json
import os
import sys
from pathlib import Path

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def render(argv):
    """Exit code and stdout of one CLI invocation, run inside the golden directory."""
    from brunr.cli import main

    old = os.getcwd()
    env = os.environ.pop("BRUNR_BUDGET", None)
    buf = io.StringIO()
    try:
        os.chdir(GOLDEN)
        with contextlib.redirect_stdout(buf):
            code = main(list(argv) + ["--json", "--no-timing"])
    finally:
        os.chdir(old)
        if env is not None:
            os.environ["BRUNR_BUDGET"] = env
    return code, buf.getvalue()


def cases():
    return json.loads((GOLDEN / "cases.json").read_text())


def main():
    out = GOLDEN / "expected"
    out.mkdir(exist_ok=True)
    for name, argv in cases().items():
        code, text = render(argv)
        (out / f"{name}.json").write_text(text)
        print(f"{name}: exit {code}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
