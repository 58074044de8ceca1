import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import textkit

if len(sys.argv) not in (2, 3):
    print("usage: word_count.py INPUT [OUTPUT]", file=sys.stderr)
    raise SystemExit(2)

count = len(textkit.words(Path(sys.argv[1]).read_text(encoding="utf-8")))
if len(sys.argv) == 3:
    Path(sys.argv[2]).write_text(f"{count}\n", encoding="utf-8")
print(count)
