from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from simnet.errors import AssignmentError

# variable name -> value label
Evidence = Mapping[str, str]


class VariableDecl(BaseModel):
    model_config = ConfigDict(frozen=True, extra="ignore")

    name: str = Field(min_length=1)
    values: tuple[str, ...] = Field(min_length=1)

    @field_validator("values")
    @classmethod
    def _unique_values(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if len(set(v)) != len(v):
            raise ValueError("value labels must be unique within a variable")
        return v

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def index(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise AssignmentError(
                f"value {value!r} is not in the domain of {self.name!r} {list(self.values)}"
            ) from None

    def restrict(self, allowed: Iterable[str]) -> VariableDecl:
        """Keep only `allowed`, preserving declaration order."""
        keep = set(allowed)
        unknown = keep - set(self.values)
        if unknown:
            raise AssignmentError(f"{sorted(unknown)} not in the domain of {self.name!r}")
        return VariableDecl(name=self.name, values=tuple(v for v in self.values if v in keep))


class EventFilter(BaseModel):
    """The event "variable draws its value from `allowed`"."""

    model_config = ConfigDict(frozen=True, extra="ignore")

    variable: str = Field(min_length=1)
    allowed: frozenset[str] = Field(min_length=1)

    @classmethod
    def of(cls, variable: str, allowed: Iterable[str]) -> EventFilter:
        return cls(variable=variable, allowed=frozenset(allowed))

    def admits(self, value: str) -> bool:
        return value in self.allowed


HypothesisEvent = EventFilter


class PosteriorVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    variable: str
    probabilities: dict[str, float]
    warnings: tuple[str, ...] = ()

    def __getitem__(self, value: str) -> float:
        return self.probabilities[value]

    def as_array(self, values: Iterable[str] | None = None) -> np.ndarray:
        keys = list(values) if values is not None else list(self.probabilities)
        return np.array([self.probabilities[k] for k in keys], dtype=float)


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Cpt:
    """P(child | parents) as a dense array with axes (parent_1, ..., parent_k, child).

    NaN rows stand for parent configurations the source left undefined.
    """

    child: str
    parents: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "table", _readonly(self.table))

    def same_as(self, other: Cpt) -> bool:
        return (
            self.child == other.child
            and self.parents == other.parents
            and self.table.shape == other.table.shape
            and bool(np.array_equal(self.table, other.table, equal_nan=True))
        )


@dataclass(frozen=True, eq=False)
class BayesianNetwork:
    variables: tuple[VariableDecl, ...]
    edges: tuple[tuple[str, str], ...]
    cpts: Mapping[str, Cpt]
    context: EventFilter | None = None
    _by_name: dict[str, VariableDecl] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "edges", tuple((p, c) for p, c in self.edges))
        object.__setattr__(self, "cpts", dict(self.cpts))
        object.__setattr__(self, "_by_name", {v.name: v for v in self.variables})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def hypothesis(self) -> str | None:
        return self.context.variable if self.context is not None else None

    def has(self, name: str) -> bool:
        return name in self._by_name

    def decl(self, name: str) -> VariableDecl:
        try:
            return self._by_name[name]
        except KeyError:
            raise AssignmentError(f"{name!r} is not a node of this network") from None

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.names)
        g.add_edges_from(self.edges)
        return g

    def parents(self, name: str) -> tuple[str, ...]:
        return self.cpts[name].parents

    def topological_order(self) -> list[str]:
        position = {n: i for i, n in enumerate(self.names)}
        return list(nx.lexicographical_topological_sort(self.graph, key=position.__getitem__))

    def state_indices(self, assignment: Evidence) -> dict[str, int]:
        return {name: self.decl(name).index(value) for name, value in assignment.items()}

    def replace(self, **changes) -> BayesianNetwork:
        values = {
            "variables": self.variables,
            "edges": self.edges,
            "cpts": self.cpts,
            "context": self.context,
        }
        values.update(changes)
        return BayesianNetwork(**values)

    def same_as(self, other: BayesianNetwork) -> bool:
        """Graph-isomorphic on the same labels and CPT-equal."""
        if self.variables != other.variables or set(self.edges) != set(other.edges):
            return False
        if set(self.cpts) != set(other.cpts):
            return False
        return all(self.cpts[n].same_as(other.cpts[n]) for n in self.cpts)
