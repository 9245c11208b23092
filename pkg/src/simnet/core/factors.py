from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from simnet.core.model import Cpt


@dataclass(frozen=True, eq=False)
class Factor:
    """Non-negative table over named axes."""

    variables: tuple[str, ...]
    values: np.ndarray

    @classmethod
    def from_cpt(cls, cpt: Cpt) -> Factor:
        return cls(cpt.parents + (cpt.child,), np.asarray(cpt.table))

    @classmethod
    def unit(cls) -> Factor:
        return cls((), np.ones(()))

    def axis(self, name: str) -> int:
        return self.variables.index(name)

    def product(self, other: Factor) -> Factor:
        extra = tuple(v for v in other.variables if v not in self.variables)
        union = self.variables + extra

        left = self.values.reshape(self.values.shape + (1,) * len(extra))

        perm = sorted(range(len(other.variables)), key=lambda i: union.index(other.variables[i]))
        moved = np.transpose(other.values, perm)
        sizes = dict(zip(other.variables, other.values.shape, strict=True))
        right = moved.reshape(tuple(sizes.get(v, 1) for v in union))

        return Factor(union, left * right)

    def marginalize(self, name: str) -> Factor:
        i = self.axis(name)
        return Factor(self.variables[:i] + self.variables[i + 1 :], self.values.sum(axis=i))

    def reduce(self, name: str, index: int) -> Factor:
        i = self.axis(name)
        return Factor(
            self.variables[:i] + self.variables[i + 1 :], np.take(self.values, index, axis=i)
        )

    def ordered(self, names: tuple[str, ...]) -> np.ndarray:
        """Values with axes permuted to `names` (which must be a permutation of variables)."""
        return np.transpose(self.values, [self.axis(n) for n in names])


def multiply_all(factors: list[Factor]) -> Factor:
    out = Factor.unit()
    for f in factors:
        out = out.product(f)
    return out


def normalize_rows(joint: np.ndarray) -> np.ndarray:
    """Normalize over the last axis; rows with zero mass become uniform."""
    mass = joint.sum(axis=-1, keepdims=True)
    uniform = np.full_like(joint, 1.0 / joint.shape[-1], dtype=float)
    return np.divide(joint, mass, out=uniform, where=mass > 0)
