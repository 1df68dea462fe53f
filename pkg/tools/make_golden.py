"""Regenerate the golden export from the fixture corpus via the brute-force oracle.

The oracle lives in tests/oracles.py and never touches the package code; the
acceptance suite checks both the pipeline output and the oracle output against
the committed golden bytes.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import full_table_oracle  # noqa: E402

WINDOW = (2017, 2021)


def main() -> None:
    fixtures = ROOT / "fixtures"
    golden_dir = fixtures / "golden"
    golden_dir.mkdir(exist_ok=True)
    data = full_table_oracle(
        fixtures / "institutions.csv",
        fixtures / "roster.csv",
        fixtures / "records",
        *WINDOW,
    )
    out = golden_dir / "full_table.csv"
    out.write_bytes(data)
    rows = data.count(b"\n") - 1
    print(f"wrote {out} ({len(data)} bytes, {rows} data rows)")


if __name__ == "__main__":
    main()
