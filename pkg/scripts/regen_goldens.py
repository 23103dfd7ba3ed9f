"""Rewrite the CLI golden outputs under tests/golden from tests/golden/cases.json.

Run after an intentional output change, then review the diff before committing.
"""

import io
import json
import sys
from pathlib import Path

from motivzeta.cli import run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
FIXTURE = ROOT / "tests" / "fixtures" / "x3_minus_y3_resolution.json"


def expand(argv: list[str]) -> list[str]:
    return [a.replace("{fixture}", str(FIXTURE.relative_to(ROOT))) for a in argv]


def main() -> int:
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, argv in cases.items():
        out = io.StringIO()
        code = run(expand(argv), out=out)
        if code != 0:
            print(f"{name}: exit {code}", file=sys.stderr)
            return 1
        (GOLDEN / name).write_text(out.getvalue())
        print(f"wrote {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
