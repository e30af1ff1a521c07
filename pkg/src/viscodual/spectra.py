"""Finite discrete measures on the open half line.

A spectrum is a finite list of ``(rate, weight)`` atoms. It stands for the
measure ``sum(weight * delta(rate))`` and generates exponential mixtures
``sum(weight * exp(-rate * t))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import NegativeWeight, NonFinite, NonpositiveRate, ValidationError

Atom = Tuple[float, float]


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Canonical finite measure: rates strictly increasing, weights positive.

    Build one from arbitrary atom lists with :func:`normalize`; the
    constructor only accepts atoms that are already canonical.
    """

    atoms: Tuple[Atom, ...] = ()

    def __post_init__(self):
        atoms = tuple((float(r), float(w)) for r, w in self.atoms)
        _check_values(atoms)
        for (r0, _), (r1, _) in zip(atoms, atoms[1:]):
            if not r1 > r0:
                raise ValidationError(
                    f"rates must be strictly increasing, got {r0!r} then {r1!r}"
                )
        for r, w in atoms:
            if w == 0.0:
                raise ValidationError(f"zero-weight atom at rate {r!r}")
        object.__setattr__(self, "atoms", atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __bool__(self):
        return bool(self.atoms)

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for r, _ in self.atoms], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    @property
    def mass(self) -> float:
        """Total mass, the sum of the weights."""
        return math.fsum(w for _, w in self.atoms)


def _check_values(atoms):
    for r, w in atoms:
        if not (math.isfinite(r) and math.isfinite(w)):
            raise NonFinite(f"non-finite atom ({r!r}, {w!r})")
        if r <= 0.0:
            raise NonpositiveRate(f"rate must be > 0, got {r!r}")
        if w < 0.0:
            raise NegativeWeight(f"weight must be >= 0, got {w!r} at rate {r!r}")


def normalize(atoms: Iterable[Atom] | DiscreteSpectrum) -> DiscreteSpectrum:
    """Return the canonical spectrum for a raw atom list.

    Atoms are sorted by rate, atoms with exactly equal rates are merged by
    summing their weights and zero-weight atoms are dropped. Nearby but
    unequal rates are kept apart.

    Raises
    ------
    NonFinite, NonpositiveRate, NegativeWeight
        If an atom is not a finite ``(rate > 0, weight >= 0)`` pair.
    """
    if isinstance(atoms, DiscreteSpectrum):
        return atoms
    raw = []
    for atom in atoms:
        r, w = atom
        try:
            raw.append((float(r), float(w)))
        except (TypeError, ValueError) as exc:
            raise NonFinite(f"atom {atom!r} is not numeric") from exc
    _check_values(raw)

    merged: dict[float, list[float]] = {}
    for r, w in raw:
        merged.setdefault(r, []).append(w)
    canon = []
    for r in sorted(merged):
        w = math.fsum(merged[r])
        if w > 0.0:
            canon.append((r, w))
    return DiscreteSpectrum(tuple(canon))


def moment_sum(spectrum: DiscreteSpectrum) -> float:
    """Return ``sum(weight / (1 + rate))``, the integrability moment of the measure."""
    return math.fsum(w / (1.0 + r) for r, w in spectrum.atoms)
