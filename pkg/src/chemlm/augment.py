"""Rotation augmentation for training structures.

Molecules and pockets get a uniform random rotation about their
centroid. Rotating fractional coordinates would break the lattice
frame, so crystals instead get an optional cyclic origin shift of the
fractional coordinates, off by default.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EncodeError
from .geometry import centroid
from .structures import Atom, Crystal, Molecule, Pocket, PocketAtom, Site
from .tokenize import Vocabulary, content_tokens


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform over SO(3) via a normalized 4-normal quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def rotation_angle(R: np.ndarray) -> float:
    """Rotation angle in [0, pi]."""
    c = (np.trace(R) - 1.0) / 2.0
    return math.acos(min(1.0, max(-1.0, c)))


def rotate_about_center(structure, R: np.ndarray):
    """p <- R (p - centroid) + centroid; crystals are rejected."""
    if isinstance(structure, Crystal):
        raise ValueError("crystals cannot be rotated; use shift_origin instead")
    points = np.array([(a.x, a.y, a.z) for a in structure.atoms])
    c = centroid(points)
    moved = (points - c) @ R.T + c
    if isinstance(structure, Molecule):
        return Molecule(
            atoms=[
                Atom(a.symbol, p[0], p[1], p[2])
                for a, p in zip(structure.atoms, moved)
            ]
        )
    return Pocket(
        atoms=[
            PocketAtom(a.residue, a.element, a.residue_index, p[0], p[1], p[2])
            for a, p in zip(structure.atoms, moved)
        ]
    )


def shift_origin(crystal: Crystal, shift) -> Crystal:
    """Cyclic shift of fractional coordinates, f <- f + u mod 1."""
    u = np.asarray(shift, dtype=float)
    sites = [
        Site(s.symbol, (s.fx + u[0]) % 1.0, (s.fy + u[1]) % 1.0, (s.fz + u[2]) % 1.0)
        for s in crystal.sites
    ]
    return Crystal(lattice=crystal.lattice, sites=sites)


def augment_structure(
    structure,
    vocab: Vocabulary,
    rng: np.random.Generator,
    attempts: int = 8,
    crystal_shift: bool = False,
):
    """One fresh augmentation whose tokens all stay inside the vocabulary.

    Redraws up to `attempts` times when the transformed coordinates
    produce out-of-vocabulary tokens, then falls back to the original.
    """
    if isinstance(structure, Crystal):
        if not crystal_shift:
            return structure
        make = lambda: shift_origin(structure, rng.random(3))
    else:
        make = lambda: rotate_about_center(structure, random_rotation(rng))
    for _ in range(attempts):
        candidate = make()
        try:
            for token in content_tokens(candidate, vocab.scheme):
                vocab.id_of(token)
        except EncodeError:
            continue
        return candidate
    return structure
