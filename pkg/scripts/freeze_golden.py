#!/usr/bin/env python3
"""Regenerate the frozen golden fixture files under tests/data/golden/.

Run from the repo root after any intentional change to the scenario
definitions, detector defaults, or file formats, then review the diff:

    python scripts/freeze_golden.py

The test suite replays the same pipeline into temporary directories and
byte-compares against these files, so stale goldens fail loudly.
"""

from pathlib import Path

from ddmrfi.cli import main
from ddmrfi.scenario import GOLDEN_SCENARIO_NAMES, golden_fixture

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden"


def freeze() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    paths = golden_fixture(GOLDEN_DIR)
    for name in GOLDEN_SCENARIO_NAMES:
        records = paths[name]["records"]
        flags = GOLDEN_DIR / f"{name}.flags.csv"
        code = main(["detect", str(records), "--out", str(flags)])
        assert code == 0, f"detect failed for {name}"
    eval_dir = GOLDEN_DIR / "eval_partial_channel"
    code = main(
        [
            "evaluate",
            str(GOLDEN_DIR / "partial_channel.flags.csv"),
            "--truth",
            str(paths["partial_channel"]["truth"]),
            "--out-dir",
            str(eval_dir),
        ]
    )
    assert code == 0, "evaluate failed"
    for path in sorted(GOLDEN_DIR.rglob("*")):
        if path.is_file():
            print(f"froze {path.relative_to(GOLDEN_DIR.parent.parent)}")


if __name__ == "__main__":
    freeze()
