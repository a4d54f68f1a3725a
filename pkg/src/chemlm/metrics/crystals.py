"""Crystal validity checks and scalar properties."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..geometry import crystal_density, lattice_matrix, min_image_distance
from ..structures import Crystal
from .verdict import Verdict

#: Minimum allowed distance between any two atoms, periodic images included.
MIN_ATOM_DISTANCE = 0.5


@dataclass(frozen=True)
class OxidationTable:
    states: dict

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.states

    def __getitem__(self, symbol: str) -> tuple[int, ...]:
        return self.states[symbol]


def load_oxidation_table() -> OxidationTable:
    states = {}
    path = resources.files("chemlm.data").joinpath("oxidation_states.csv")
    with path.open("r", encoding="utf-8") as fh:
        next(fh)  # header
        for line in fh:
            line = line.strip()
            if not line:
                continue
            symbol, values = line.split(",", 1)
            states[symbol] = tuple(int(v) for v in values.split())
    return OxidationTable(states)


_DEFAULT_TABLE = None


def default_oxidation_table() -> OxidationTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_oxidation_table()
    return _DEFAULT_TABLE


def shortest_self_image_distance(crystal: Crystal) -> float:
    """Distance from any site to its nearest own periodic image.

    Independent of the site: it is the shortest nonzero lattice vector
    with offsets in {-1,0,1}^3.
    """
    m = lattice_matrix(crystal.lattice)
    offsets = np.array(
        [o for o in itertools.product((-1, 0, 1), repeat=3) if o != (0, 0, 0)],
        dtype=float,
    )
    return float(np.min(np.linalg.norm(offsets @ m, axis=1)))


def crystal_structural_validity(crystal: Crystal, threshold: float = MIN_ATOM_DISTANCE) -> Verdict:
    """Valid iff every atom pair, periodic images included, is farther than `threshold`."""
    self_image = shortest_self_image_distance(crystal)
    if self_image <= threshold:
        return Verdict.fail(
            f"self-image distance {self_image:.3f} A not larger than {threshold} A"
        )
    coords = crystal.frac_coords()
    for i in range(len(coords)):
        for j in range(i + 1, len(coords)):
            d = min_image_distance(crystal.lattice, coords[i], coords[j])
            if d <= threshold:
                return Verdict.fail(
                    f"sites {i} and {j} at {d:.3f} A, not larger than {threshold} A"
                )
    return Verdict.ok()


def charge_neutrality(composition: dict, table: OxidationTable = None) -> Verdict:
    """Valid iff one oxidation state per element can balance the total charge.

    Exhaustive search over per-element state choices with min/max bound
    pruning; compositions here have few distinct elements.
    """
    if table is None:
        table = default_oxidation_table()
    items = sorted(composition.items())
    for symbol, count in items:
        if symbol not in table:
            return Verdict.fail(f"no oxidation states for element {symbol}")
        if count < 1:
            raise ValueError(f"non-positive count for {symbol}")

    choices = [[state * count for state in table[symbol]] for symbol, count in items]
    min_tail = [0] * (len(choices) + 1)
    max_tail = [0] * (len(choices) + 1)
    for k in range(len(choices) - 1, -1, -1):
        min_tail[k] = min_tail[k + 1] + min(choices[k])
        max_tail[k] = max_tail[k + 1] + max(choices[k])

    def search(k: int, total: int) -> bool:
        if k == len(choices):
            return total == 0
        if total + min_tail[k] > 0 or total + max_tail[k] < 0:
            return False
        return any(search(k + 1, total + c) for c in choices[k])

    if search(0, 0):
        return Verdict.ok()
    counts = ", ".join(f"{s}:{c}" for s, c in items)
    return Verdict.fail(f"no neutral oxidation-state assignment for {counts}")


def crystal_composition(crystal: Crystal) -> dict:
    return dict(Counter(crystal.symbols()))


def density(crystal: Crystal) -> float:
    """Mass density in g/cm^3."""
    return crystal_density(crystal)


def n_unique_elements(crystal: Crystal) -> int:
    return len(set(crystal.symbols()))


def crystal_validity(crystal: Crystal, table: OxidationTable = None) -> Verdict:
    """Structural and compositional checks together; first failure wins."""
    structural = crystal_structural_validity(crystal)
    if not structural:
        return structural
    return charge_neutrality(crystal_composition(crystal), table)
