import pytest

from chemlm.formats.prune import PruneResult, prune_pocket
from chemlm.structures import Pocket, PocketAtom


def residue(code, index, n_atoms, x0, element="C"):
    """n_atoms atoms of one residue spread along y near x=x0."""
    return [
        PocketAtom(code, element, index, x0, 0.7 * j, 0.0) for j in range(n_atoms)
    ]


def build(*specs):
    atoms = []
    for code, index, n_atoms, x0 in specs:
        atoms.extend(residue(code, index, n_atoms, x0))
    return Pocket(tuple(atoms))


class TestPrunePocket:
    def test_removes_exactly_the_farthest_residue(self):
        p = build(("GLY", 1, 3, 0.0), ("ALA", 2, 3, 2.0), ("SER", 3, 3, 50.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(3, 6))
        assert r.removed_residues == 1
        assert {a.residue for a in r.pocket.atoms} == {"GLY", "ALA"}
        assert not r.below_min

    def test_within_window_unchanged(self):
        p = build(("GLY", 1, 3, 0.0), ("ALA", 2, 2, 2.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(2, 5))
        assert r.pocket == p
        assert r.removed_residues == 0

    def test_below_min_flagged_and_unchanged(self):
        p = build(("GLY", 1, 2, 0.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(200, 250))
        assert r == PruneResult(p, 0, True)

    def test_equidistant_tie_removes_larger_index(self):
        # two single-atom residues mirrored about the center
        atoms = (
            PocketAtom("GLY", "C", 1, -3.0, 0, 0),
            PocketAtom("ALA", "C", 2, 3.0, 0, 0),
            PocketAtom("SER", "C", 3, 0.0, 0, 0),
        )
        r = prune_pocket(Pocket(atoms), center=(0, 0, 0), target_atoms=(1, 2))
        assert r.removed_residues == 1
        assert {a.residue for a in r.pocket.atoms} == {"GLY", "SER"}

    def test_overshoot_accepted(self):
        # removing the farthest (5-atom) residue jumps from 8 past the
        # window straight to 3; the overshoot is kept
        p = build(("GLY", 1, 3, 0.0), ("LEU", 2, 5, 40.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(4, 6))
        assert len(r.pocket) == 3
        assert r.removed_residues == 1

    def test_never_removes_the_last_residue(self):
        p = build(("LEU", 1, 8, 0.0))
        r = prune_pocket(p, center=(100, 0, 0), target_atoms=(2, 4))
        assert len(r.pocket) == 8

    def test_residues_never_split(self):
        p = build(("GLY", 1, 4, 0.0), ("ALA", 2, 4, 10.0), ("SER", 3, 4, 20.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(2, 7))
        counts = {code: len(atoms) for code, atoms in r.pocket.residues()}
        assert counts == {"GLY": 4}

    def test_output_order_is_a_subsequence(self):
        p = build(("GLY", 1, 3, 5.0), ("ALA", 2, 3, 0.0), ("SER", 3, 3, 2.0))
        r = prune_pocket(p, center=(0, 0, 0), target_atoms=(3, 6))
        kept = [(a.residue, a.x, a.y) for a in r.pocket.atoms]
        original = [(a.residue, a.x, a.y) for a in p.atoms]
        it = iter(original)
        assert all(any(item == o for o in it) for item in kept)

    def test_default_window(self):
        # 26 ten-atom residues = 260 atoms; the default [200, 250] window
        # drops exactly one residue
        specs = [("GLY", i, 10, float(i)) for i in range(1, 27)]
        p = build(*specs)
        r = prune_pocket(p, center=(0, 0, 0))
        assert len(r.pocket) == 250
        assert r.removed_residues == 1

    def test_bad_range_rejected(self):
        p = build(("GLY", 1, 3, 0.0))
        with pytest.raises(ValueError):
            prune_pocket(p, center=(0, 0, 0), target_atoms=(5, 2))
