"""Geometric bond perception and molecule validity.

A deliberately simple stand-in for graph-inference tools: bonds come
from covalent-radius distance windows, atoms must hit an allowed valence,
and the bond graph must be connected. No formal charges, no aromaticity.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from ..elements import get_element
from ..geometry import pairwise_distances
from ..structures import Molecule
from .verdict import Verdict

#: Bonded iff CLASH_FLOOR < d < r_cov(i) + r_cov(j) + BOND_SLACK (Angstrom).
CLASH_FLOOR = 0.4
BOND_SLACK = 0.4


def _load_valences() -> dict[str, frozenset[int]]:
    table = {}
    path = resources.files("chemlm.data").joinpath("valences.csv")
    with path.open("r", encoding="utf-8") as fh:
        next(fh)  # header
        for line in fh:
            line = line.strip()
            if not line:
                continue
            symbol, states = line.split(",", 1)
            table[symbol] = frozenset(int(v) for v in states.split())
    return table


VALENCES = _load_valences()


def perceive_bonds(molecule: Molecule):
    """Return (bond index pairs, clash index pairs) from the distance matrix."""
    d = pairwise_distances(molecule.positions())
    radii = np.array([get_element(s).covalent_radius for s in molecule.symbols()])
    upper = radii[:, None] + radii[None, :] + BOND_SLACK
    n = len(molecule)
    bonds = []
    clashes = []
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] < CLASH_FLOOR:
                clashes.append((i, j))
            elif d[i, j] < upper[i, j]:
                bonds.append((i, j))
    return bonds, clashes


def _connected(n: int, bonds) -> bool:
    if n == 1:
        return True
    adjacency = [[] for _ in range(n)]
    for i, j in bonds:
        adjacency[i].append(j)
        adjacency[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for k in adjacency[stack.pop()]:
            if k not in seen:
                seen.add(k)
                stack.append(k)
    return len(seen) == n


def molecule_validity(molecule: Molecule) -> Verdict:
    """Three-stage check: no clashes, valences satisfied, graph connected."""
    symbols = molecule.symbols()
    for sym in set(symbols):
        if sym not in VALENCES:
            return Verdict.fail(f"no valence data for element {sym}")

    bonds, clashes = perceive_bonds(molecule)
    if clashes:
        i, j = clashes[0]
        return Verdict.fail(f"clash: atoms {i} and {j} closer than {CLASH_FLOOR} A")

    degree = [0] * len(symbols)
    for i, j in bonds:
        degree[i] += 1
        degree[j] += 1
    for i, sym in enumerate(symbols):
        if degree[i] not in VALENCES[sym]:
            allowed = sorted(VALENCES[sym])
            return Verdict.fail(
                f"valence: atom {i} ({sym}) has {degree[i]} bonds, allowed {allowed}"
            )

    if not _connected(len(symbols), bonds):
        return Verdict.fail("disconnected bond graph")
    return Verdict.ok()
