"""Molecular mass computation for flat chemical formulas."""

import re

ATOMIC_MASS = {
    "H": 1.008,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "Na": 22.990,
    "Mg": 24.305,
    "P": 30.974,
    "S": 32.06,
    "Cl": 35.45,
    "K": 39.098,
    "Ca": 40.078,
    "Fe": 55.845,
}

_TOKEN = re.compile(r"([A-Z][a-z]?)(\d*)")


class FormulaError(ValueError):
    pass


def molecular_mass(formula):
    """Mass of a flat formula like H2O or NaCl; raises on unknown symbols."""
    if not formula or not re.fullmatch(r"(?:[A-Z][a-z]?\d*)+", formula):
        raise FormulaError(f"not a valid formula: {formula!r}")
    total = 0.0
    for symbol, count in _TOKEN.findall(formula):
        if symbol not in ATOMIC_MASS:
            raise FormulaError(f"unknown element {symbol!r} in {formula!r}")
        total += ATOMIC_MASS[symbol] * (int(count) if count else 1)
    return round(total, 3)
