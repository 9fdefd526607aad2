"""Regenerate tests/data/golden_package.json from the canned completions.

Run after intentionally changing prompts or the package serialization:

    python tests/regen_golden.py
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import helpers


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        data = helpers.build_golden_bytes(Path(tmp))
    helpers.GOLDEN_PACKAGE.write_bytes(data)
    print(f"wrote {helpers.GOLDEN_PACKAGE} ({len(data)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
