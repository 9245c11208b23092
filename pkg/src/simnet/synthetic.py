"""Seeded random models for property tests and benchmarks."""

from __future__ import annotations

import itertools
import math

import numpy as np

from simnet.core.model import BayesianNetwork, Cpt, VariableDecl
from simnet.oracle.joint_table import JointTable, from_network
from simnet.similarity.network import Cover

BINARY = ("0", "1")


def hypothesis_decl(n_hypotheses: int, name: str = "h") -> VariableDecl:
    return VariableDecl(name=name, values=tuple(f"h{i + 1}" for i in range(n_hypotheses)))


def structured_network(
    rng: np.random.Generator,
    n_hypotheses: int,
    n_variables: int,
    zero_rate: float = 0.0,
) -> BayesianNetwork:
    """Hypothesis root plus binary findings that depend on h and up to two earlier findings.

    Each finding groups the hypotheses and shares CPT rows inside a group, so
    subset independence appears whenever a cell falls inside one group.

    With `zero_rate` > 0, that share of the finding CPT entries is set to zero
    by making whole rows deterministic, anywhere in the finding tables. The
    share is kept within [0.1, 0.3] of the entries. The prior stays positive.
    """
    h = hypothesis_decl(n_hypotheses)
    findings = [VariableDecl(name=f"u{i + 1}", values=BINARY) for i in range(n_variables)]

    prior = rng.uniform(0.5, 1.5, size=n_hypotheses)
    cpts = {"h": Cpt("h", (), prior / prior.sum())}
    edges: list[tuple[str, str]] = []
    parents_of: dict[str, tuple[str, ...]] = {}
    first_columns: dict[str, np.ndarray] = {}

    for i, finding in enumerate(findings):
        pool = [v.name for v in findings[:i]]
        k = int(rng.integers(0, min(2, len(pool)) + 1))
        picked = sorted(rng.choice(len(pool), size=k, replace=False).tolist()) if k else []
        extra = [pool[p] for p in picked]
        parents_of[finding.name] = ("h", *extra)

        n_groups = int(rng.integers(1, n_hypotheses + 1))
        group_of = rng.integers(0, n_groups, size=n_hypotheses)
        rows = rng.uniform(0.1, 0.9, size=(n_groups,) + (2,) * len(extra))
        first_columns[finding.name] = rows[group_of]  # (n_hypotheses, 2, ..., 2)
        edges.extend((p, finding.name) for p in parents_of[finding.name])

    if zero_rate > 0:
        _make_rows_deterministic(rng, first_columns, zero_rate)

    for finding in findings:
        p_first = first_columns[finding.name]
        table = np.stack([p_first, 1.0 - p_first], axis=-1)
        cpts[finding.name] = Cpt(finding.name, parents_of[finding.name], table)

    return BayesianNetwork((h, *findings), tuple(edges), cpts)


def _make_rows_deterministic(
    rng: np.random.Generator, first_columns: dict[str, np.ndarray], zero_rate: float
) -> None:
    # a deterministic binary row holds exactly one zero entry
    slots = [(name, idx) for name, col in first_columns.items() for idx in np.ndindex(col.shape)]
    n_entries = 2 * len(slots)
    lower, upper = math.ceil(0.1 * n_entries), math.floor(0.3 * n_entries)
    n_rows = min(max(round(zero_rate * n_entries), lower), upper)
    for s in rng.choice(len(slots), size=n_rows, replace=False):
        name, idx = slots[int(s)]
        first_columns[name][idx] = float(rng.integers(0, 2))


def zero_fraction(bn: BayesianNetwork, exclude: str = "h") -> float:
    """Share of zero entries over every CPT except `exclude`'s."""
    tables = [bn.cpts[n].table for n in bn.names if n != exclude]
    total = sum(t.size for t in tables)
    return sum(int(np.count_nonzero(t == 0.0)) for t in tables) / total


def structured_joint(
    rng: np.random.Generator, n_hypotheses: int, n_variables: int, zero_rate: float = 0.0
) -> JointTable:
    return from_network(structured_network(rng, n_hypotheses, n_variables, zero_rate))


def connected_cover(rng: np.random.Generator, values: tuple[str, ...]) -> Cover:
    """Random connected cover: each new cell overlaps the hypotheses covered so far."""
    if len(values) <= 2 or rng.random() < 0.1:
        return Cover.of([values])
    order = [values[i] for i in rng.permutation(len(values))]
    first = int(rng.integers(2, len(values)))
    cells = [order[:first]]
    covered = list(order[:first])
    pending = order[first:]
    while pending:
        take = int(rng.integers(1, min(2, len(pending)) + 1))
        anchor = covered[int(rng.integers(len(covered)))]
        cells.append([anchor, *pending[:take]])
        covered.extend(pending[:take])
        pending = pending[take:]
    if rng.random() < 0.3:
        size = int(rng.integers(2, len(values) + 1))
        cells.append([order[i] for i in sorted(rng.choice(len(values), size=size, replace=False))])
    # keep cells in domain order
    rank = {v: i for i, v in enumerate(values)}
    return Cover.of([sorted(c, key=rank.__getitem__) for c in cells])


def random_evidence(
    rng: np.random.Generator, t: JointTable, exclude: str, max_variables: int | None = None
) -> dict[str, str]:
    names = [n for n in t.names if n != exclude]
    limit = len(names) if max_variables is None else min(max_variables, len(names))
    k = int(rng.integers(0, limit + 1))
    chosen = rng.choice(len(names), size=k, replace=False) if k else []
    evidence = {}
    for i in sorted(chosen):
        decl = t.decl(names[i])
        evidence[decl.name] = decl.values[int(rng.integers(decl.cardinality))]
    return evidence


def random_network(
    rng: np.random.Generator,
    n_nodes: int,
    max_cardinality: int = 3,
    edge_probability: float = 0.5,
) -> BayesianNetwork:
    """Random DAG over nodes n1..nk with Dirichlet CPTs."""
    variables = tuple(
        VariableDecl(
            name=f"n{i + 1}",
            values=tuple(f"s{j}" for j in range(int(rng.integers(2, max_cardinality + 1)))),
        )
        for i in range(n_nodes)
    )
    edges = [
        (variables[i].name, variables[j].name)
        for i, j in itertools.combinations(range(n_nodes), 2)
        if rng.random() < edge_probability
    ]
    cpts = {}
    for v in variables:
        parents = tuple(p for p, c in edges if c == v.name)
        shape = tuple(variables[int(p[1:]) - 1].cardinality for p in parents)
        table = rng.dirichlet(np.ones(v.cardinality), size=shape or None)
        cpts[v.name] = Cpt(v.name, parents, np.asarray(table).reshape(shape + (v.cardinality,)))
    return BayesianNetwork(variables, tuple(edges), cpts)


def random_order(rng: np.random.Generator, names: tuple[str, ...]) -> list[str]:
    return [names[i] for i in rng.permutation(len(names))]
