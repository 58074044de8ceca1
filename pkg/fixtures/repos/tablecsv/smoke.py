"""Import check used as the environment probe."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import tablecsv

assert tablecsv.frequency_table(["a", "b", "a"])[0] == ("a", 2)
print("tablecsv smoke ok")
