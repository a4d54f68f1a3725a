import math

import pytest

from chemlm.elements import get_element
from chemlm.errors import InvalidLatticeError, UnknownElementError
from chemlm.structures import (
    Atom,
    Crystal,
    Lattice,
    Molecule,
    Pocket,
    PocketAtom,
    Site,
    structure_kind,
    wrap_frac,
)


class TestElements:
    def test_known_symbols(self):
        assert get_element("H").atomic_number == 1
        assert get_element("C").mass == pytest.approx(12.011, abs=1e-3)
        assert get_element("Fe").covalent_radius == pytest.approx(1.32)

    def test_unknown_symbol(self):
        with pytest.raises(UnknownElementError):
            get_element("Xx")

    def test_case_sensitive(self):
        with pytest.raises(UnknownElementError):
            get_element("CL")


class TestAtomAndMolecule:
    def test_construction(self):
        m = Molecule([Atom("C", 0, 0, 0), Atom("H", 1.09, 0, 0)])
        assert len(m) == 2
        assert m.symbols() == ["C", "H"]
        assert m.positions()[1] == (1.09, 0.0, 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Molecule([])

    def test_bad_symbol_rejected(self):
        with pytest.raises(UnknownElementError):
            Atom("Qq", 0, 0, 0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            Atom("C", math.nan, 0, 0)
        with pytest.raises(ValueError):
            Atom("C", 0, math.inf, 0)


class TestLattice:
    def test_valid(self):
        lat = Lattice(3.9, 3.9, 3.9, 90, 90, 90)
        assert lat.params() == (3.9, 3.9, 3.9, 90, 90, 90)

    def test_nonpositive_length(self):
        with pytest.raises(InvalidLatticeError):
            Lattice(0, 1, 1, 90, 90, 90)
        with pytest.raises(InvalidLatticeError):
            Lattice(1, -2, 1, 90, 90, 90)

    def test_angle_out_of_range(self):
        with pytest.raises(InvalidLatticeError):
            Lattice(1, 1, 1, 180, 90, 90)
        with pytest.raises(InvalidLatticeError):
            Lattice(1, 1, 1, 90, 0, 90)

    def test_unrealizable_angle_triple(self):
        # each angle individually fine, but no 3D cell has this combination
        with pytest.raises(InvalidLatticeError):
            Lattice(1, 1, 1, 5, 5, 179)


class TestSiteWrapping:
    def test_wrap_frac(self):
        assert wrap_frac(1.25) == pytest.approx(0.25)
        assert wrap_frac(-0.25) == pytest.approx(0.75)
        assert wrap_frac(0.0) == 0.0
        assert wrap_frac(1.0) == 0.0
        assert wrap_frac(-3.0) == 0.0

    def test_site_wraps_on_construction(self):
        s = Site("Na", 1.25, -0.25, 2.0)
        assert (s.fx, s.fy, s.fz) == pytest.approx((0.25, 0.75, 0.0))

    def test_in_range_untouched(self):
        s = Site("Na", 0.25, 0.5, 0.999)
        assert (s.fx, s.fy, s.fz) == (0.25, 0.5, 0.999)

    def test_crystal_accessors(self):
        xtl = Crystal(
            lattice=Lattice(4, 4, 4, 90, 90, 90),
            sites=[Site("Ca", 0, 0, 0), Site("O", 0.5, 0.5, 0.5)],
        )
        assert len(xtl) == 2
        assert xtl.symbols() == ["Ca", "O"]
        assert xtl.frac_coords()[1] == (0.5, 0.5, 0.5)

    def test_empty_crystal_rejected(self):
        with pytest.raises(ValueError):
            Crystal(lattice=Lattice(4, 4, 4, 90, 90, 90), sites=[])


class TestPocket:
    def test_renumbering_preserves_grouping(self):
        # file uses indices 7,7,9; the pocket renumbers to 1,1,2
        p = Pocket(
            [
                PocketAtom("GLY", "C", 7, 0, 0, 0),
                PocketAtom("GLY", "O", 7, 1, 0, 0),
                PocketAtom("ALA", "N", 9, 5, 0, 0),
            ]
        )
        assert [a.residue_index for a in p.atoms] == [1, 1, 2]
        assert p.n_residues() == 2

    def test_interleaved_indices_rejected(self):
        with pytest.raises(ValueError, match="not contiguous"):
            Pocket(
                [
                    PocketAtom("GLY", "C", 1, 0, 0, 0),
                    PocketAtom("ALA", "N", 2, 5, 0, 0),
                    PocketAtom("GLY", "O", 1, 1, 0, 0),
                ]
            )

    def test_one_index_two_codes_rejected(self):
        with pytest.raises(ValueError, match="mixes codes"):
            Pocket(
                [
                    PocketAtom("GLY", "C", 1, 0, 0, 0),
                    PocketAtom("ALA", "N", 1, 5, 0, 0),
                ]
            )

    def test_non_canonical_residue_rejected(self):
        with pytest.raises(ValueError, match="non-canonical"):
            PocketAtom("XYZ", "C", 1, 0, 0, 0)

    def test_residue_groups(self):
        p = Pocket(
            [
                PocketAtom("SER", "N", 3, 0, 0, 0),
                PocketAtom("SER", "C", 3, 1, 0, 0),
                PocketAtom("VAL", "C", 4, 5, 0, 0),
            ]
        )
        groups = p.residues()
        assert [code for code, _ in groups] == ["SER", "VAL"]
        assert [len(atoms) for _, atoms in groups] == [2, 1]

    def test_indicator(self):
        assert PocketAtom("CYS", "S", 1, 0, 0, 0).indicator == "CYS-S"


class TestStructureKind:
    def test_all_kinds(self, rng):
        from conftest import random_structure

        for kind in ("molecule", "crystal", "pocket"):
            assert structure_kind(random_structure(rng, kind)) == kind

    def test_non_structure(self):
        with pytest.raises(TypeError):
            structure_kind("water")
