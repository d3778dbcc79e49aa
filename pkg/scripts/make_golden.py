"""Write (or with --check, compare) the q=3 golden vectors in tests/golden."""

import argparse
import sys
from pathlib import Path

from hmst3.golden import golden_files

ROOT = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--dir", type=Path, default=ROOT)
    args = ap.parse_args()
    bad = 0
    for name, data in golden_files().items():
        path = args.dir / name
        if args.check:
            same = path.exists() and path.read_bytes() == data
            print(f"{'same' if same else 'DIFF'} {name}")
            bad += not same
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
            print(f"wrote {path}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
