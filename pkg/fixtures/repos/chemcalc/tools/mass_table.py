import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import chemcalc

if len(sys.argv) != 3:
    print("usage: mass_table.py FORMULAS_FILE OUTPUT_CSV", file=sys.stderr)
    raise SystemExit(2)

formulas = [
    line.strip()
    for line in Path(sys.argv[1]).read_text(encoding="utf-8").splitlines()
    if line.strip()
]
with open(sys.argv[2], "w", newline="", encoding="utf-8") as f:
    writer = csv.writer(f)
    writer.writerow(["formula", "mass"])
    for formula in formulas:
        writer.writerow([formula, chemcalc.molecular_mass(formula)])
print(f"computed {len(formulas)} masses")
