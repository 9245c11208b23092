from __future__ import annotations

from collections import Counter

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from simnet.core.model import BayesianNetwork
from simnet.settings import get_settings


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    location: str
    message: str


class ValidationReport(BaseModel):
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, location: str, message: str) -> None:
        self.violations.append(Violation(kind=kind, location=location, message=message))

    def extend(self, other: ValidationReport, prefix: str = "") -> None:
        for v in other.violations:
            location = f"{prefix}{v.location}" if prefix else v.location
            self.violations.append(v.model_copy(update={"location": location}))

    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]


def validate_network(bn: BayesianNetwork, eps_norm: float | None = None) -> ValidationReport:
    """Check every structural and numeric invariant of a network.

    Problems are collected, never raised, so a single pass reports all of them.
    """
    eps = get_settings().eps_norm if eps_norm is None else eps_norm
    report = ValidationReport()
    names = bn.names

    for name, count in Counter(names).items():
        if count > 1:
            report.add("duplicate_variable", name, f"variable {name!r} declared {count} times")

    known = set(names)
    for parent, child in bn.edges:
        for end in (parent, child):
            if end not in known:
                report.add("unknown_node", f"edge {parent}->{child}", f"{end!r} is not a node")

    for cycle in nx.simple_cycles(bn.graph):
        path = " -> ".join([*cycle, cycle[0]])
        report.add("cycle", path, f"directed cycle {path}")

    for child in bn.cpts:
        if child not in known:
            report.add("unknown_node", f"cpt {child}", f"CPT for undeclared node {child!r}")

    for name in dict.fromkeys(names):
        if name not in bn.cpts:
            report.add("missing_cpt", name, f"node {name!r} has no CPT")
            continue
        _check_cpt(bn, name, eps, report)

    if bn.context is not None:
        h = bn.context.variable
        if not bn.has(h):
            report.add("domain_mismatch", h, f"context variable {h!r} is not a node")
        else:
            domain = set(bn.decl(h).values)
            if domain != set(bn.context.allowed):
                report.add(
                    "domain_mismatch",
                    h,
                    f"domain {sorted(domain)} differs from context {sorted(bn.context.allowed)}",
                )
            if any(c == h for _, c in bn.edges):
                report.add("hypothesis_parent", h, f"hypothesis {h!r} must be a root")

    return report


def _check_cpt(bn: BayesianNetwork, name: str, eps: float, report: ValidationReport) -> None:
    cpt = bn.cpts[name]
    location = f"cpt {name}"
    graph_parents = {p for p, c in bn.edges if c == name}
    if set(cpt.parents) != graph_parents:
        report.add(
            "parent_mismatch",
            location,
            f"CPT parents {list(cpt.parents)} differ from graph parents {sorted(graph_parents)}",
        )

    unknown = [p for p in cpt.parents if not bn.has(p)]
    if unknown:
        report.add("unknown_node", location, f"CPT parents {unknown} are not nodes")
        return

    expected = tuple(bn.decl(p).cardinality for p in cpt.parents) + (bn.decl(name).cardinality,)
    if cpt.table.shape != expected:
        report.add(
            "domain_mismatch", location, f"table shape {cpt.table.shape} != expected {expected}"
        )
        return

    rows = cpt.table.reshape(-1, expected[-1])
    parent_configs = list(np.ndindex(*expected[:-1])) if cpt.parents else [()]
    for config, row in zip(parent_configs, rows, strict=True):
        where = _row_label(bn, cpt.parents, config)
        if np.isnan(row).any():
            report.add("missing_row", f"{location}[{where}]", "row is missing")
            continue
        if (row < 0).any():
            report.add(
                "negative_entry", f"{location}[{where}]", f"negative entry in {row.tolist()}"
            )
        total = float(row.sum())
        if abs(total - 1.0) > eps:
            report.add(
                "normalization",
                f"{location}[{where}]",
                f"row sums to {total!r}, not 1 within eps_norm={eps:g}",
            )


def _row_label(bn: BayesianNetwork, parents: tuple[str, ...], config: tuple[int, ...]) -> str:
    return "|".join(bn.decl(p).values[i] for p, i in zip(parents, config, strict=True))
