from __future__ import annotations

import logging
from collections.abc import Sequence

import networkx as nx
import numpy as np

from simnet.core.factors import Factor, normalize_rows
from simnet.core.model import BayesianNetwork, Cpt
from simnet.errors import ArcReversalError, AssignmentError, CycleError


def arc_reverse(bn: BayesianNetwork, edge: tuple[str, str]) -> BayesianNetwork:
    """Turn x -> y into y -> x while keeping the joint distribution.

    Both endpoints end up with the parents C = pa(x) | pa(y) minus x:
    y gets C, x gets C plus y.
    """
    x, y = edge
    if not bn.graph.has_edge(x, y):
        raise ArcReversalError(f"edge {x}->{y} does not exist")

    without = bn.graph.copy()
    without.remove_edge(x, y)
    if nx.has_path(without, x, y):
        raise CycleError(f"reversing {x}->{y} would create a directed cycle")

    position = {n: i for i, n in enumerate(bn.names)}
    shared = set(bn.parents(x)) | set(bn.parents(y))
    shared.discard(x)
    context = tuple(sorted(shared, key=position.__getitem__))

    f = Factor.from_cpt(bn.cpts[x]).product(Factor.from_cpt(bn.cpts[y]))
    joint = f.ordered(context + (x, y))  # P(x, y | C)

    y_given_c = joint.sum(axis=-2)
    new_y = Cpt(y, context, normalize_rows(y_given_c))

    x_parents = tuple(sorted(shared | {y}, key=position.__getitem__))
    x_given_yc = normalize_rows(np.swapaxes(joint, -1, -2))  # axes C + (y, x)
    x_factor = Factor(context + (y, x), x_given_yc)
    new_x = Cpt(x, x_parents, x_factor.ordered(x_parents + (x,)))

    edges = [(y, x) if (p, c) == (x, y) else (p, c) for p, c in bn.edges]
    present = set(edges)
    for p in context:
        for child in (x, y):
            if (p, child) not in present:
                edges.append((p, child))
                present.add((p, child))

    cpts = dict(bn.cpts)
    cpts[x] = new_x
    cpts[y] = new_y
    logging.debug(f"reversed {x}->{y}; shared parents {list(context)}")
    return bn.replace(edges=tuple(edges), cpts=cpts)


def reorient(bn: BayesianNetwork, order: Sequence[str]) -> BayesianNetwork:
    """Reverse arcs until every edge points from earlier to later in `order`.

    Nodes are settled from last to first. For the node being settled, the
    offending child that comes first topologically is reversed each time, so
    no second path to it can exist and the reversal is always legal.
    """
    position = {n: i for i, n in enumerate(order)}
    missing = [n for n in bn.names if n not in position]
    if missing:
        raise AssignmentError(f"order does not cover nodes {missing}")

    if all(position[p] < position[c] for p, c in bn.edges):
        return bn

    current = bn
    for node in sorted(bn.names, key=position.__getitem__, reverse=True):
        while True:
            late = [c for c in current.graph.successors(node) if position[c] < position[node]]
            if not late:
                break
            topo = {n: i for i, n in enumerate(current.topological_order())}
            first = min(late, key=topo.__getitem__)
            current = arc_reverse(current, (node, first))
    return current
