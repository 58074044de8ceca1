"""Import check used as the environment probe."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import textkit

assert textkit.to_upper("ok") == "OK"
print("textkit smoke ok")
