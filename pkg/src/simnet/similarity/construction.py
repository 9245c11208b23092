from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from typing import Literal

from simnet.core.factors import normalize_rows
from simnet.core.model import BayesianNetwork, Cpt, EventFilter
from simnet.errors import AssignmentError, ModelValidationError
from simnet.oracle.joint_table import JointTable, condition
from simnet.oracle.relations import (
    is_conditionally_independent,
    is_mutually_irrelevant,
    is_unrelated,
)
from simnet.similarity.network import (
    Cover,
    DiscreteModel,
    LocalNetwork,
    SimilarityNetwork,
    log_summary,
    validate_cover,
)

BuildKind = Literal["type1", "type2"]


def _resolve_order(t: JointTable, hypothesis: str, order: Sequence[str] | None) -> list[str]:
    if order is None:
        return [hypothesis, *(n for n in t.names if n != hypothesis)]
    order = list(order)
    if not order or order[0] != hypothesis:
        raise AssignmentError(f"construction order must start with {hypothesis!r}")
    if sorted(order) != sorted(t.names):
        raise AssignmentError(f"construction order {order} must list every variable once")
    return order


def minimal_network(
    t: JointTable, order: Sequence[str], context: EventFilter | None
) -> BayesianNetwork:
    """Boundary DAG of `t` along `order`.

    Each node takes the smallest set of predecessors that screens it off from
    the other predecessors; among equal sizes the earliest-in-order set wins.
    """
    edges: list[tuple[str, str]] = []
    cpts: dict[str, Cpt] = {}
    for i, node in enumerate(order):
        preds = list(order[:i])
        parents: tuple[str, ...] = tuple(preds)
        found = False
        for size in range(len(preds) + 1):
            for subset in itertools.combinations(preds, size):
                others = [p for p in preds if p not in subset]
                if is_conditionally_independent(t, [node], others, subset):
                    parents, found = subset, True
                    break
            if found:
                break
        table = normalize_rows(t.marginal([*parents, node]).cells)
        cpts[node] = Cpt(node, parents, table)
        edges.extend((p, node) for p in parents)
    variables = tuple(t.decl(n) for n in order)
    return BayesianNetwork(variables, tuple(edges), cpts, context)


def _local_variables(
    tc: JointTable, hypothesis: str, candidates: Sequence[str], kind: BuildKind
) -> list[str]:
    if kind == "type1":
        return [u for u in candidates if not is_unrelated(tc, u, hypothesis)]
    return [u for u in candidates if not is_mutually_irrelevant(tc, u, hypothesis)]


def build_similarity_network(
    t: JointTable,
    hypothesis: str,
    cover: Cover,
    kind: BuildKind,
    order: Sequence[str] | None = None,
) -> SimilarityNetwork:
    """Local network per cell, keeping only variables related (type1) or relevant (type2) to h.

    Variables outside h's factor block are independent of it, so the minimal
    network is built on the marginal over h and the kept variables.
    """
    if kind not in ("type1", "type2"):
        raise ValueError(f"kind must be 'type1' or 'type2', got {kind!r}")
    model = DiscreteModel(variables=t.variables, hypothesis=hypothesis)
    report = validate_cover(cover, model.hypothesis_decl.values)
    if not report.ok:
        raise ModelValidationError(report, what="cover")
    order = _resolve_order(t, hypothesis, order)

    locals_ = []
    for j, cell in enumerate(cover.cells):
        event = EventFilter.of(hypothesis, cell)
        tc = condition(t, event)
        kept = _local_variables(tc, hypothesis, order[1:], kind)
        nodes = [hypothesis, *kept]
        network = minimal_network(tc.marginal(nodes), nodes, event)
        logging.debug(f"cell {j} {list(cell)}: variables {kept}, edges {list(network.edges)}")
        locals_.append(LocalNetwork(cell=tuple(cell), network=network))

    sn = SimilarityNetwork(model=model, cover=cover, locals=tuple(locals_), kind=kind)
    log_summary(sn)
    return sn

