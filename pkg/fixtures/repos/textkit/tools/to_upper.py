import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import textkit

if len(sys.argv) != 2:
    print("usage: to_upper.py TEXT", file=sys.stderr)
    raise SystemExit(2)

print(textkit.to_upper(sys.argv[1]))
