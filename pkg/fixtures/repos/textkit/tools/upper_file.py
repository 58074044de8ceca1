import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import textkit

if len(sys.argv) != 3:
    print("usage: upper_file.py INPUT OUTPUT", file=sys.stderr)
    raise SystemExit(2)

src, dst = Path(sys.argv[1]), Path(sys.argv[2])
content = textkit.to_upper(src.read_text(encoding="utf-8"))
dst.write_text(content, encoding="utf-8")
print(content[:200].strip())
