from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from simnet.core.model import BayesianNetwork, EventFilter, VariableDecl
from simnet.core.validation import ValidationReport, validate_network
from simnet.errors import AssignmentError, ConversionError, NoMatchingCellError
from simnet.similarity.union_find import UnionFind

NetworkKind = Literal["type1", "type2", "unspecified"]


class DiscreteModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    variables: tuple[VariableDecl, ...]
    hypothesis: str

    @model_validator(mode="after")
    def _check(self) -> DiscreteModel:
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if self.hypothesis not in names:
            raise ValueError(f"hypothesis {self.hypothesis!r} is not declared")
        if self.hypothesis_decl.cardinality < 2:
            raise ValueError("the hypothesis variable needs at least two values")
        return self

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def decl(self, name: str) -> VariableDecl:
        for v in self.variables:
            if v.name == name:
                return v
        raise AssignmentError(f"{name!r} is not declared in the model")

    @property
    def hypothesis_decl(self) -> VariableDecl:
        return self.decl(self.hypothesis)


@dataclass(frozen=True)
class Cover:
    cells: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(tuple(dict.fromkeys(c)) for c in self.cells))

    @classmethod
    def of(cls, cells: Iterable[Iterable[str]]) -> Cover:
        return cls(tuple(tuple(c) for c in cells))

    def __len__(self) -> int:
        return len(self.cells)

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and bool(set(self.cells[i]) & set(self.cells[j]))

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(len(self.cells)) if self.adjacent(i, j)]

    def containing(self, value: str) -> list[int]:
        return [j for j, cell in enumerate(self.cells) if value in cell]


@dataclass(frozen=True)
class LocalNetwork:
    cell: tuple[str, ...]
    network: BayesianNetwork

    @property
    def variables(self) -> tuple[str, ...]:
        """Nondistinguished nodes."""
        h = self.network.hypothesis
        return tuple(n for n in self.network.names if n != h)


@dataclass(frozen=True)
class SimilarityNetwork:
    model: DiscreteModel
    cover: Cover
    locals: tuple[LocalNetwork, ...]
    kind: NetworkKind = "unspecified"

    def __post_init__(self) -> None:
        object.__setattr__(self, "locals", tuple(self.locals))

    @property
    def hypothesis(self) -> str:
        return self.model.hypothesis


def validate_cover(cover: Cover, hypothesis_domain: Sequence[str]) -> ValidationReport:
    report = ValidationReport()
    domain = list(hypothesis_domain)

    for j, cell in enumerate(cover.cells):
        if not cell:
            report.add("empty_cell", f"cell {j}", "cell is empty")
        stray = [v for v in cell if v not in domain]
        if stray:
            report.add("domain_mismatch", f"cell {j}", f"values {stray} are not hypotheses")

    covered = {v for cell in cover.cells for v in cell}
    uncovered = [v for v in domain if v not in covered]
    if uncovered:
        report.add("union", "cover", f"hypotheses {uncovered} are in no cell")

    if len(cover) > 1:
        uf = UnionFind(len(cover))
        for value in covered:
            holders = cover.containing(value)
            for j in holders[1:]:
                uf.union(holders[0], j)
        if uf.components > 1:
            report.add(
                "connectivity",
                "cover",
                f"similarity hypergraph has {uf.components} components, expected 1",
            )
    return report


def validate_similarity_network(sn: SimilarityNetwork) -> ValidationReport:
    model = sn.model
    h = model.hypothesis
    report = validate_cover(sn.cover, model.hypothesis_decl.values)

    if len(sn.locals) != len(sn.cover):
        report.add(
            "local_count",
            "local_networks",
            f"{len(sn.locals)} local networks for {len(sn.cover)} cells",
        )

    for j, local in enumerate(sn.locals):
        where = f"local {j} {list(local.cell)}: "
        net = local.network
        if j < len(sn.cover) and set(local.cell) != set(sn.cover.cells[j]):
            report.add("cell_mismatch", where.strip(), "local network cell differs from the cover")
        if net.context is None or net.context.variable != h:
            report.add(
                "domain_mismatch", where.strip(), f"local network is not conditioned on {h!r}"
            )
        if not net.has(h):
            report.add("domain_mismatch", where.strip(), f"hypothesis {h!r} is not a node")
        elif set(net.decl(h).values) != set(local.cell):
            report.add("domain_mismatch", where.strip(), "hypothesis domain differs from the cell")
        for decl in net.variables:
            if decl.name == h:
                continue
            if decl.name not in model.names:
                report.add("unknown_node", where.strip(), f"{decl.name!r} is not declared")
            elif model.decl(decl.name) != decl:
                report.add("domain_mismatch", where.strip(), f"{decl.name!r} domain differs")
        report.extend(validate_network(net), prefix=where)
    return report


def hypergraph_path(
    cover: Cover, start: int, predicate: Callable[[int], bool]
) -> list[int]:
    """Shortest cell path from `start` to the nearest cell satisfying `predicate`.

    BFS visits neighbours in declaration order, so ties resolve the same way on
    every run. Cells are returned as indices into `cover.cells`.
    """
    previous: dict[int, int | None] = {start: None}
    queue = deque([start])
    while queue:
        j = queue.popleft()
        if predicate(j):
            path = [j]
            while (back := previous[path[-1]]) is not None:
                path.append(back)
            return path[::-1]
        for k in cover.neighbours(j):
            if k not in previous:
                previous[k] = j
                queue.append(k)
    raise NoMatchingCellError(f"no cell reachable from cell {start} satisfies the predicate")


def connecting_hypotheses(
    path: Sequence[Iterable[str]], hypothesis_domain: Sequence[str]
) -> list[str]:
    """One shared hypothesis per consecutive pair, first in domain order."""
    cells = [set(c) for c in path]
    out = []
    for a, b in zip(cells, cells[1:], strict=False):
        shared = [v for v in hypothesis_domain if v in a and v in b]
        if not shared:
            raise ConversionError(f"consecutive cells {sorted(a)} and {sorted(b)} do not intersect")
        out.append(shared[0])
    return out


def depicted_variables(sn: SimilarityNetwork) -> frozenset[str]:
    return frozenset(v for local in sn.locals for v in local.variables)


def depicted_in_order(sn: SimilarityNetwork) -> tuple[str, ...]:
    depicted = depicted_variables(sn)
    return tuple(n for n in sn.model.names if n in depicted)


def cell_event(sn: SimilarityNetwork, j: int) -> EventFilter:
    return EventFilter.of(sn.hypothesis, sn.cover.cells[j])


def log_summary(sn: SimilarityNetwork) -> None:
    sizes = [len(local.variables) for local in sn.locals]
    logging.info(
        f"similarity network ({sn.kind}): {len(sn.cover)} cells, "
        f"{len(depicted_variables(sn))} depicted variables, local sizes {sizes}"
    )
