"""Dense joint tables: the brute-force ground truth for every structured path."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from simnet.core.inference import joint_tensor
from simnet.core.model import BayesianNetwork, EventFilter, Evidence, PosteriorVector, VariableDecl
from simnet.errors import (
    AssignmentError,
    BudgetExceededError,
    ZeroProbabilityEvent,
    ZeroProbabilityEvidence,
)
from simnet.settings import get_settings

if TYPE_CHECKING:
    from simnet.multinet.conversion import Multinet


@dataclass(frozen=True, eq=False)
class JointTable:
    variables: tuple[VariableDecl, ...]
    cells: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        cells = np.array(self.cells, dtype=float, copy=True)
        expected = tuple(v.cardinality for v in self.variables)
        if cells.shape != expected:
            raise ValueError(f"cells have shape {cells.shape}, variables need {expected}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AssignmentError(f"{name!r} is not a variable of the table") from None

    def decl(self, name: str) -> VariableDecl:
        return self.variables[self.axis(name)]

    def marginal(self, names: Sequence[str]) -> JointTable:
        """Marginal over `names`, axes in the given order."""
        axes = [self.axis(n) for n in names]
        dropped = tuple(i for i in range(len(self.variables)) if i not in axes)
        summed = self.cells.sum(axis=dropped) if dropped else self.cells
        kept = [i for i in range(len(self.variables)) if i in axes]
        perm = [kept.index(a) for a in axes]
        return JointTable(tuple(self.variables[a] for a in axes), np.transpose(summed, perm))

    def probability(self, assignment: Evidence) -> float:
        """Mass of all cells consistent with a partial assignment."""
        return float(self._slice(assignment).sum())

    def _slice(self, assignment: Evidence) -> np.ndarray:
        index: list[int | slice] = [slice(None)] * len(self.variables)
        for name, value in assignment.items():
            index[self.axis(name)] = self.decl(name).index(value)
        return self.cells[tuple(index)]


def _check_budget(size: int, cell_budget: int | None) -> None:
    budget = get_settings().cell_budget if cell_budget is None else cell_budget
    if size > budget:
        raise BudgetExceededError(f"joint of {size} cells exceeds the budget of {budget}")


def from_network(bn: BayesianNetwork, cell_budget: int | None = None) -> JointTable:
    return JointTable(bn.variables, joint_tensor(bn, cell_budget))


def condition(t: JointTable, e: EventFilter) -> JointTable:
    decl = t.decl(e.variable)
    keep = [i for i, v in enumerate(decl.values) if e.admits(v)]
    unknown = set(e.allowed) - set(decl.values)
    if unknown:
        raise AssignmentError(f"{sorted(unknown)} not in the domain of {e.variable!r}")

    axis = t.axis(e.variable)
    sub = np.take(t.cells, keep, axis=axis)
    total = float(sub.sum())
    if total <= get_settings().eps_zero:
        raise ZeroProbabilityEvent(
            f"zero-probability conditioning event {e.variable} in {sorted(e.allowed)}"
        )
    variables = list(t.variables)
    variables[axis] = decl.restrict(e.allowed)
    return JointTable(tuple(variables), sub / total)


def posterior(t: JointTable, query: str, evidence: Evidence) -> PosteriorVector:
    if query in evidence:
        raise AssignmentError(f"query variable {query!r} is also observed")
    sliced = t._slice(evidence)
    remaining = [n for n in t.names if n not in evidence]
    q_axis = remaining.index(query)
    others = tuple(i for i in range(len(remaining)) if i != q_axis)
    scores = sliced.sum(axis=others) if others else sliced
    total = float(scores.sum())
    if total <= get_settings().eps_zero:
        raise ZeroProbabilityEvidence(f"P(evidence) = {total!r} for {dict(evidence)}")
    values = t.decl(query).values
    return PosteriorVector(
        variable=query,
        probabilities={v: float(s / total) for v, s in zip(values, scores, strict=True)},
    )


def from_multinet(mn: Multinet, cell_budget: int | None = None) -> JointTable:
    """P(h, v) = P(h_i) * P_{M_i}(v) tabulated over the depicted variables."""
    variables = (mn.hypothesis,) + mn.variables
    _check_budget(math.prod(v.cardinality for v in variables), cell_budget)
    names = tuple(v.name for v in mn.variables)
    blocks = []
    for h in mn.hypothesis.values:
        network = mn.networks[h].network
        block = joint_tensor(network, cell_budget)
        perm = [network.names.index(n) for n in names]
        blocks.append(mn.prior[h] * np.transpose(block, perm))
    return JointTable(variables, np.stack(blocks, axis=0))


def table_from_cells(
    variables: Sequence[VariableDecl], cells: Mapping[tuple[str, ...], float]
) -> JointTable:
    """Dense table from sparse cells; missing assignments are 0."""
    decls = tuple(variables)
    dense = np.zeros(tuple(v.cardinality for v in decls))
    for assignment, p in cells.items():
        index = tuple(d.index(v) for d, v in zip(decls, assignment, strict=True))
        dense[index] += p
    return JointTable(decls, dense)
