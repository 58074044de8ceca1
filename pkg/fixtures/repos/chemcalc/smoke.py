"""Import check used as the environment probe."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import chemcalc

assert abs(chemcalc.molecular_mass("H2O") - 18.015) < 1e-9
print("chemcalc smoke ok")
