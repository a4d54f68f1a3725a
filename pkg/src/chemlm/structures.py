"""Domain types: molecules, crystals, and protein pockets.

All three are point clouds of atoms. Molecules and pockets carry Cartesian
coordinates in Angstrom; crystals carry fractional coordinates inside a
periodic lattice. Instances are immutable and validated on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .elements import get_element
from .errors import InvalidLatticeError

#: The 20 canonical amino-acid residue codes.
CANONICAL_RESIDUES: frozenset[str] = frozenset(
    [
        "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
        "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL",
    ]
)


def _check_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} has non-finite coordinate {v!r}")


@dataclass(frozen=True)
class Atom:
    """One atom of a molecule: element symbol plus Cartesian position (A)."""

    symbol: str
    x: float
    y: float
    z: float

    def __post_init__(self):
        get_element(self.symbol)
        _check_finite("atom", self.x, self.y, self.z)


@dataclass(frozen=True)
class Molecule:
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) == 0:
            raise ValueError("a molecule needs at least one atom")

    def __len__(self) -> int:
        return len(self.atoms)

    def symbols(self) -> list[str]:
        return [a.symbol for a in self.atoms]

    def positions(self) -> list[tuple[float, float, float]]:
        return [(a.x, a.y, a.z) for a in self.atoms]


@dataclass(frozen=True)
class Lattice:
    """Unit-cell edge lengths (A) and angles (degrees).

    Construction rejects parameter sets whose angle triple is not
    geometrically realizable (the cell-volume radicand must be positive).
    """

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidLatticeError(f"cell length {name}={v!r} must be positive")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 < v < 180.0):
                raise InvalidLatticeError(
                    f"cell angle {name}={v!r} must lie in (0, 180) degrees"
                )
        if self.volume_radicand() <= 0.0:
            raise InvalidLatticeError(
                f"angle triple ({self.alpha}, {self.beta}, {self.gamma}) "
                "does not define a realizable cell"
            )

    def volume_radicand(self) -> float:
        ca = math.cos(math.radians(self.alpha))
        cb = math.cos(math.radians(self.beta))
        cg = math.cos(math.radians(self.gamma))
        return 1.0 - ca * ca - cb * cb - cg * cg + 2.0 * ca * cb * cg

    def params(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.alpha, self.beta, self.gamma)


def wrap_frac(f: float) -> float:
    """Wrap a fractional coordinate into [0, 1)."""
    w = f - math.floor(f)
    return 0.0 if w >= 1.0 else w  # floor rounding can land exactly on 1.0


@dataclass(frozen=True)
class Site:
    """One crystal site: element symbol plus fractional coordinates in [0, 1)."""

    symbol: str
    fx: float
    fy: float
    fz: float

    def __post_init__(self):
        get_element(self.symbol)
        _check_finite("site", self.fx, self.fy, self.fz)
        object.__setattr__(self, "fx", wrap_frac(self.fx))
        object.__setattr__(self, "fy", wrap_frac(self.fy))
        object.__setattr__(self, "fz", wrap_frac(self.fz))


@dataclass(frozen=True)
class Crystal:
    lattice: Lattice
    sites: tuple[Site, ...]

    def __post_init__(self):
        if not isinstance(self.sites, tuple):
            object.__setattr__(self, "sites", tuple(self.sites))
        if len(self.sites) == 0:
            raise ValueError("a crystal needs at least one site")

    def __len__(self) -> int:
        return len(self.sites)

    def symbols(self) -> list[str]:
        return [s.symbol for s in self.sites]

    def frac_coords(self) -> list[tuple[float, float, float]]:
        return [(s.fx, s.fy, s.fz) for s in self.sites]


@dataclass(frozen=True)
class PocketAtom:
    """One pocket atom: residue-atom indicator plus Cartesian position (A).

    `residue` is a canonical 3-letter code and `residue_index` groups atoms
    into residues (1-based, consecutive in file order).
    """

    residue: str
    element: str
    residue_index: int
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.residue not in CANONICAL_RESIDUES:
            raise ValueError(f"non-canonical residue code: {self.residue!r}")
        get_element(self.element)
        _check_finite("pocket atom", self.x, self.y, self.z)

    @property
    def indicator(self) -> str:
        """Combined residue-element indicator, e.g. "CYS-S"."""
        return f"{self.residue}-{self.element}"


@dataclass(frozen=True)
class Pocket:
    atoms: tuple[PocketAtom, ...]

    def __post_init__(self):
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) == 0:
            raise ValueError("a pocket needs at least one residue")
        # Renumber residues 1..k in order of appearance; reject interleaving
        # and one index spanning two residue codes.
        seen: dict[int, int] = {}
        codes: dict[int, str] = {}
        renumbered = []
        last_orig = None
        for atom in self.atoms:
            orig = atom.residue_index
            if orig in seen:
                if orig != last_orig:
                    raise ValueError(
                        f"residue index {orig} is not contiguous in the atom list"
                    )
                if codes[orig] != atom.residue:
                    raise ValueError(
                        f"residue index {orig} mixes codes "
                        f"{codes[orig]} and {atom.residue}"
                    )
                new_index = seen[orig]
            else:
                new_index = len(seen) + 1
                seen[orig] = new_index
                codes[orig] = atom.residue
            last_orig = orig
            if new_index != orig:
                atom = PocketAtom(
                    atom.residue, atom.element, new_index, atom.x, atom.y, atom.z
                )
            renumbered.append(atom)
        object.__setattr__(self, "atoms", tuple(renumbered))

    def __len__(self) -> int:
        return len(self.atoms)

    def residues(self) -> list[tuple[str, list[PocketAtom]]]:
        """Group atoms by residue, in order of appearance."""
        groups: list[tuple[str, list[PocketAtom]]] = []
        for atom in self.atoms:
            if groups and groups[-1][1][-1].residue_index == atom.residue_index:
                groups[-1][1].append(atom)
            else:
                groups.append((atom.residue, [atom]))
        return groups

    def n_residues(self) -> int:
        return len({a.residue_index for a in self.atoms})

    def positions(self) -> list[tuple[float, float, float]]:
        return [(a.x, a.y, a.z) for a in self.atoms]


Structure = Union[Molecule, Crystal, Pocket]


def structure_kind(s: Structure) -> str:
    """Return "molecule", "crystal", or "pocket"."""
    if isinstance(s, Molecule):
        return "molecule"
    if isinstance(s, Crystal):
        return "crystal"
    if isinstance(s, Pocket):
        return "pocket"
    raise TypeError(f"not a structure: {type(s).__name__}")
