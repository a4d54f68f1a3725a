"""Pocket validity checks and residue-ordering statistics."""

from __future__ import annotations

from collections import Counter
from importlib import resources

from ..geometry import pairwise_distances
from ..structures import Pocket
from .keys import residue_ordering, unique_novel
from .verdict import Verdict

#: Inter-residue atom pairs closer than this fail the overlap check. The
#: peptide-bond C-N distance of about 1.33 A passes by design.
DEFAULT_OVERLAP_THRESHOLD = 1.1


def load_residue_table() -> dict:
    """Residue code -> heavy-atom element counts, e.g. GLY -> {C:2, N:1, O:1}."""
    table = {}
    path = resources.files("chemlm.data").joinpath("residue_atoms.csv")
    with path.open("r", encoding="utf-8") as fh:
        next(fh)  # header
        for line in fh:
            line = line.strip()
            if not line:
                continue
            code, spec = line.split(",", 1)
            counts = {}
            for pair in spec.split():
                element, n = pair.split(":")
                counts[element] = int(n)
            table[code] = counts
    return table


_DEFAULT_TABLE = None


def default_residue_table() -> dict:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_residue_table()
    return _DEFAULT_TABLE


def pocket_residue_check(pocket: Pocket, table: dict = None) -> tuple[bool, list[str]]:
    """Each residue's heavy-atom multiset must equal its table entry exactly.

    Returns the overall verdict plus one reason per failing residue, like
    "GLY@3: missing O".
    """
    if table is None:
        table = default_residue_table()
    reasons = []
    for code, atoms in pocket.residues():
        index = atoms[0].residue_index
        expected = table.get(code)
        if expected is None:
            reasons.append(f"{code}@{index}: residue not in the composition table")
            continue
        have = Counter(a.element for a in atoms)
        problems = []
        for element in sorted(set(expected) | set(have)):
            want = expected.get(element, 0)
            got = have.get(element, 0)
            if got < want:
                problems.append(f"missing {element}" if want - got == 1 else f"missing {want - got} {element}")
            elif got > want:
                problems.append(f"extra {element}" if got - want == 1 else f"extra {got - want} {element}")
        if problems:
            reasons.append(f"{code}@{index}: " + ", ".join(problems))
    return (not reasons), reasons


def pocket_overlap_check(
    pocket: Pocket, threshold: float = DEFAULT_OVERLAP_THRESHOLD
) -> Verdict:
    """Fail iff atoms of different residues come closer than `threshold`."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    d = pairwise_distances(pocket.positions())
    atoms = pocket.atoms
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            if atoms[i].residue_index != atoms[j].residue_index and d[i, j] < threshold:
                return Verdict.fail(
                    f"atoms {i} ({atoms[i].indicator}@{atoms[i].residue_index}) and "
                    f"{j} ({atoms[j].indicator}@{atoms[j].residue_index}) "
                    f"at {d[i, j]:.3f} A, below {threshold} A"
                )
    return Verdict.ok()


def pocket_validity(
    pocket: Pocket,
    table: dict = None,
    overlap_threshold: float = DEFAULT_OVERLAP_THRESHOLD,
) -> Verdict:
    ok, reasons = pocket_residue_check(pocket, table)
    if not ok:
        return Verdict.fail("residue composition: " + "; ".join(reasons))
    return pocket_overlap_check(pocket, overlap_threshold)


def residue_ordering_stats(sample, train) -> tuple[float, float]:
    """Unique/novel percentages over residue-ordering strings."""
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    sample_keys = [residue_ordering(p) for p in sample]
    train_keys = [residue_ordering(p) for p in train]
    return unique_novel(sample_keys, train_keys)
