import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import tablecsv

if len(sys.argv) != 3:
    print("usage: make_table.py WORDS_FILE OUTPUT_CSV", file=sys.stderr)
    raise SystemExit(2)

lines = Path(sys.argv[1]).read_text(encoding="utf-8").splitlines()
rows = tablecsv.frequency_table(lines)
tablecsv.write_table(rows, sys.argv[2])
print(f"wrote {len(rows)} rows")
