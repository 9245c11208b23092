"""Exact inference on a single Bayesian network.

Enumeration over completions is the reference; variable elimination is the
fast path and must agree with it.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal

import networkx as nx
import numpy as np

from simnet.core.factors import Factor, multiply_all
from simnet.core.model import BayesianNetwork, Evidence, PosteriorVector
from simnet.errors import AssignmentError, BudgetExceededError, ZeroProbabilityEvidence
from simnet.settings import get_settings

InferenceMethod = Literal["enumeration", "elimination"]


@dataclass(frozen=True)
class OperationCount:
    lookups: int = 0
    multiplications: int = 0
    additions: int = 0

    def __add__(self, other: OperationCount) -> OperationCount:
        return OperationCount(
            self.lookups + other.lookups,
            self.multiplications + other.multiplications,
            self.additions + other.additions,
        )


def state_space_size(bn: BayesianNetwork, names: Iterable[str] | None = None) -> int:
    selected = bn.names if names is None else names
    return math.prod(bn.decl(n).cardinality for n in selected)


def _check_budget(bn: BayesianNetwork, cell_budget: int | None) -> None:
    budget = get_settings().cell_budget if cell_budget is None else cell_budget
    size = state_space_size(bn)
    if size > budget:
        raise BudgetExceededError(f"state space of {size} cells exceeds the budget of {budget}")


def _entry(bn: BayesianNetwork, name: str, state: dict[str, int]) -> float:
    cpt = bn.cpts[name]
    key = tuple(state[p] for p in cpt.parents) + (state[name],)
    return float(cpt.table[key])


def _product(bn: BayesianNetwork, names: Iterable[str], state: dict[str, int]) -> float:
    p = 1.0
    for name in names:
        p *= _entry(bn, name, state)
    return p


def joint_probability(bn: BayesianNetwork, full_assignment: Evidence) -> float:
    missing = [n for n in bn.names if n not in full_assignment]
    if missing:
        raise AssignmentError(f"unassigned nodes: {missing}")
    state = bn.state_indices({n: full_assignment[n] for n in bn.names})
    return _product(bn, bn.names, state)


def joint_tensor(bn: BayesianNetwork, cell_budget: int | None = None) -> np.ndarray:
    """Dense joint with one axis per node in declaration order."""
    _check_budget(bn, cell_budget)
    f = multiply_all([Factor.from_cpt(bn.cpts[n]) for n in bn.names])
    return f.ordered(bn.names)


def _checked_evidence(bn: BayesianNetwork, evidence: Evidence) -> dict[str, int]:
    for name in evidence:
        if not bn.has(name):
            raise AssignmentError(f"evidence variable {name!r} is not a node of the network")
    return bn.state_indices(evidence)


def _completions(bn: BayesianNetwork, hidden: list[str]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(bn.decl(n).cardinality) for n in hidden))


def _enumerate(bn: BayesianNetwork, query: str, observed: dict[str, int]) -> np.ndarray:
    hidden = [n for n in bn.names if n != query and n not in observed]
    scores = np.zeros(bn.decl(query).cardinality)
    for q in range(len(scores)):
        total = 0.0
        for combo in _completions(bn, hidden):
            state = dict(observed)
            state[query] = q
            state.update(zip(hidden, combo, strict=True))
            total += _product(bn, bn.names, state)
        scores[q] = total
    return scores


def _elimination_order(
    factors: list[Factor], hidden: list[str], names: tuple[str, ...]
) -> list[str]:
    """Min-degree on the interaction graph, ties by declaration order."""
    g = nx.Graph()
    g.add_nodes_from(hidden)
    for f in factors:
        for a, b in itertools.combinations(f.variables, 2):
            g.add_edge(a, b)
    position = {n: i for i, n in enumerate(names)}
    remaining = set(hidden)
    order: list[str] = []
    while remaining:
        pick = min(remaining, key=lambda n: (g.degree(n), position[n]))
        neighbours = list(g.neighbors(pick))
        g.add_edges_from(itertools.combinations(neighbours, 2))
        g.remove_node(pick)
        remaining.remove(pick)
        order.append(pick)
    return order


def _eliminate(bn: BayesianNetwork, query: str, observed: dict[str, int]) -> np.ndarray:
    factors = []
    for name in bn.names:
        f = Factor.from_cpt(bn.cpts[name])
        for var, idx in observed.items():
            if var in f.variables:
                f = f.reduce(var, idx)
        factors.append(f)

    hidden = [n for n in bn.names if n != query and n not in observed]
    for var in _elimination_order(factors, hidden, bn.names):
        touching = [f for f in factors if var in f.variables]
        factors = [f for f in factors if var not in f.variables]
        factors.append(multiply_all(touching).marginalize(var))

    return multiply_all(factors).ordered((query,))


def infer(
    bn: BayesianNetwork,
    query: str,
    evidence: Evidence,
    method: InferenceMethod = "enumeration",
) -> PosteriorVector:
    if not bn.has(query):
        raise AssignmentError(f"query variable {query!r} is not a node of the network")
    if query in evidence:
        raise AssignmentError(f"query variable {query!r} is also observed")
    observed = _checked_evidence(bn, evidence)

    if method == "enumeration":
        scores = _enumerate(bn, query, observed)
    elif method == "elimination":
        scores = _eliminate(bn, query, observed)
    else:
        raise ValueError(f"unknown inference method {method!r}")

    total = float(scores.sum())
    if total <= get_settings().eps_zero:
        raise ZeroProbabilityEvidence(f"P(evidence) = {total!r} for {dict(evidence)}")
    values = bn.decl(query).values
    return PosteriorVector(
        variable=query,
        probabilities={v: float(s / total) for v, s in zip(values, scores, strict=True)},
    )


def _ancestral(bn: BayesianNetwork, names: Iterable[str]) -> list[str]:
    keep: set[str] = set()
    for n in names:
        keep.add(n)
        keep.update(nx.ancestors(bn.graph, n))
    # barren nodes sum to one and are skipped
    return [n for n in bn.names if n in keep]


def evidence_likelihood(bn: BayesianNetwork, evidence: Evidence) -> float:
    if not evidence:
        return 1.0
    observed = _checked_evidence(bn, evidence)
    relevant = _ancestral(bn, observed)
    hidden = [n for n in relevant if n not in observed]
    total = 0.0
    for combo in _completions(bn, hidden):
        state = dict(observed)
        state.update(zip(hidden, combo, strict=True))
        total += _product(bn, relevant, state)
    return total


def likelihood_operations(bn: BayesianNetwork, evidence: Evidence) -> OperationCount:
    """Work performed by `evidence_likelihood` for this evidence."""
    if not evidence:
        return OperationCount()
    observed = _checked_evidence(bn, evidence)
    relevant = _ancestral(bn, observed)
    hidden = [n for n in relevant if n not in observed]
    completions = state_space_size(bn, hidden)
    return OperationCount(
        lookups=completions * len(relevant),
        multiplications=completions * (len(relevant) - 1),
        additions=completions - 1,
    )
