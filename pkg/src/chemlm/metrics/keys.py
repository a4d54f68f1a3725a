"""Canonical keys for uniqueness and novelty counting.

Molecules are keyed by their perceived bond graph (element-labeled,
coordinates excluded), crystals by composition plus rounded lattice and
sorted rounded sites, pockets by the order their residues appear in.
All hashing is sha256 so keys are stable across processes.
"""

from __future__ import annotations

import hashlib
from collections import Counter

from ..rounding import fmt_fixed
from ..structures import Crystal, Molecule, Pocket, Structure
from .bonds import perceive_bonds


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def molecule_key(molecule: Molecule) -> str:
    """Weisfeiler-Lehman-style hash of the element-labeled bond graph."""
    n = len(molecule)
    bonds, _ = perceive_bonds(molecule)
    adjacency = [[] for _ in range(n)]
    for i, j in bonds:
        adjacency[i].append(j)
        adjacency[j].append(i)
    labels = [_sha(sym) for sym in molecule.symbols()]
    for _ in range(n):
        labels = [
            _sha(labels[i] + "|" + ",".join(sorted(labels[j] for j in adjacency[i])))
            for i in range(n)
        ]
    return "mol:" + _sha(",".join(sorted(labels)))


def composition_formula(symbols) -> str:
    counts = Counter(symbols)
    return " ".join(f"{sym}{counts[sym]}" for sym in sorted(counts))


def crystal_key(crystal: Crystal) -> str:
    lattice = ",".join(fmt_fixed(v, 2) for v in crystal.lattice.params())
    sites = sorted(
        f"{s.symbol}@{fmt_fixed(s.fx, 2)},{fmt_fixed(s.fy, 2)},{fmt_fixed(s.fz, 2)}"
        for s in crystal.sites
    )
    return "xtl:" + composition_formula(crystal.symbols()) + ";" + lattice + ";" + "|".join(sites)


def residue_ordering(pocket: Pocket) -> str:
    return "-".join(code for code, _ in pocket.residues())


def pocket_key(pocket: Pocket) -> str:
    return "pkt:" + residue_ordering(pocket)


def canonical_key(structure: Structure) -> str:
    if isinstance(structure, Molecule):
        return molecule_key(structure)
    if isinstance(structure, Crystal):
        return crystal_key(structure)
    if isinstance(structure, Pocket):
        return pocket_key(structure)
    raise TypeError(f"not a structure: {type(structure).__name__}")


def unique_novel(sample_keys, train_keys) -> tuple[float, float]:
    """(unique%, novel%): distinct/sample and distinct-not-in-train/distinct."""
    sample_keys = list(sample_keys)
    if not sample_keys:
        raise ValueError("empty sample")
    distinct = set(sample_keys)
    train = set(train_keys)
    unique_pct = len(distinct) / len(sample_keys) * 100.0
    novel_pct = len(distinct - train) / len(distinct) * 100.0
    return unique_pct, novel_pct
