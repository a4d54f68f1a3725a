"""Bundled periodic table.

The table is a static 89-entry subset (Z = 1..84 plus Ac, Th, Pa, U, Pu)
that covers every element appearing in the crystal corpora this toolkit
targets. Masses are standard atomic weights in amu; covalent radii are in
Angstrom.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .errors import UnknownElementError


@dataclass(frozen=True)
class Element:
    symbol: str
    atomic_number: int
    mass: float
    covalent_radius: float


def _load_table() -> dict[str, Element]:
    table: dict[str, Element] = {}
    path = resources.files("chemlm.data").joinpath("periodic_table.csv")
    with path.open("r", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            el = Element(
                symbol=row["symbol"],
                atomic_number=int(row["atomic_number"]),
                mass=float(row["mass"]),
                covalent_radius=float(row["covalent_radius"]),
            )
            table[el.symbol] = el
    return table


ELEMENTS: dict[str, Element] = _load_table()

SYMBOLS: frozenset[str] = frozenset(ELEMENTS)

#: Symbols longer than one character ("Cl", "Na", ...). These stay atomic
#: tokens even under character-level tokenization.
MULTI_LETTER_SYMBOLS: frozenset[str] = frozenset(s for s in SYMBOLS if len(s) > 1)


def get_element(symbol: str) -> Element:
    """Look up an element by symbol, raising UnknownElementError if absent."""
    try:
        return ELEMENTS[symbol]
    except KeyError:
        raise UnknownElementError(f"unknown element symbol: {symbol!r}") from None


def is_element(symbol: str) -> bool:
    return symbol in ELEMENTS
