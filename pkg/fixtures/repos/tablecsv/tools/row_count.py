import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import tablecsv

if len(sys.argv) not in (2, 3):
    print("usage: row_count.py CSV [OUTPUT]", file=sys.stderr)
    raise SystemExit(2)

count = len(tablecsv.read_rows(sys.argv[1]))
if len(sys.argv) == 3:
    Path(sys.argv[2]).write_text(f"{count}\n", encoding="utf-8")
print(count)
