import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import textkit

if len(sys.argv) != 3:
    print("usage: extract_words.py INPUT OUTPUT", file=sys.stderr)
    raise SystemExit(2)

tokens = textkit.words(Path(sys.argv[1]).read_text(encoding="utf-8"))
Path(sys.argv[2]).write_text("\n".join(tokens) + "\n", encoding="utf-8")
print(f"extracted {len(tokens)} words")
