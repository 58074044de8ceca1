import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import tablecsv

if len(sys.argv) not in (3, 4):
    print("usage: sum_column.py CSV COLUMN [OUTPUT]", file=sys.stderr)
    raise SystemExit(2)

total = tablecsv.sum_column(sys.argv[1], sys.argv[2])
if len(sys.argv) == 4:
    Path(sys.argv[3]).write_text(f"{total:g}\n", encoding="utf-8")
print(f"{total:g}")
