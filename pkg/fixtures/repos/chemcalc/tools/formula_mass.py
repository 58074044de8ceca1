import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import chemcalc

if len(sys.argv) != 2:
    print("usage: formula_mass.py FORMULA", file=sys.stderr)
    raise SystemExit(2)

try:
    print(chemcalc.molecular_mass(sys.argv[1]))
except chemcalc.FormulaError as exc:
    print(exc, file=sys.stderr)
    raise SystemExit(1)
