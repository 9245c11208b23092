"""Brute-force independence, relevance and relatedness decisions.

Everything here enumerates subsets and is exponential on purpose.
"""

from __future__ import annotations

import itertools
from collections.abc import Collection, Iterator, Sequence

import numpy as np

from simnet.core.model import EventFilter
from simnet.oracle.joint_table import JointTable, condition
from simnet.settings import get_settings


def _subsets(items: Sequence[str]) -> Iterator[tuple[str, ...]]:
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def _block_matrix(t: JointTable, blocks: Sequence[Sequence[str]]) -> np.ndarray:
    """Marginal over the concatenated blocks, flattened to one axis per block."""
    names = [n for block in blocks for n in block]
    m = t.marginal(names).cells
    sizes = [int(np.prod([t.decl(n).cardinality for n in block])) for block in blocks]
    return m.reshape(sizes)


def is_conditionally_independent(
    t: JointTable,
    x: Collection[str],
    y: Collection[str],
    z: Collection[str],
    eps_ci: float | None = None,
) -> bool:
    xs, ys, zs = list(x), list(y), list(z)
    if set(xs) & set(ys) or set(xs) & set(zs) or set(ys) & set(zs):
        raise ValueError("X, Y and Z must be pairwise disjoint")
    settings = get_settings()
    eps = settings.eps_ci if eps_ci is None else eps_ci

    m = _block_matrix(t, [xs, ys, zs])  # (nx, ny, nz)
    pz = m.sum(axis=(0, 1))
    live = pz > settings.eps_zero
    if not live.any():
        return True
    cond = m[:, :, live] / pz[live]
    px = cond.sum(axis=1, keepdims=True)
    py = cond.sum(axis=0, keepdims=True)
    return bool(np.max(np.abs(cond - px * py)) <= eps)


def _conditioned(t: JointTable, e: EventFilter | None) -> JointTable:
    return t if e is None else condition(t, e)


def is_mutually_irrelevant(
    t: JointTable, u_i: str, u_j: str, e: EventFilter | None = None
) -> bool:
    """Independent given every subset of the remaining variables, under e."""
    if u_i == u_j:
        raise ValueError("u_i and u_j must differ")
    tc = _conditioned(t, e)
    rest = [n for n in tc.names if n not in (u_i, u_j)]
    return all(is_conditionally_independent(tc, [u_i], [u_j], z) for z in _subsets(rest))


def is_unrelated(t: JointTable, u_i: str, u_j: str, e: EventFilter | None = None) -> bool:
    """Some bipartition separating u_i from u_j factorizes the conditioned table."""
    if u_i == u_j:
        raise ValueError("u_i and u_j must differ")
    tc = _conditioned(t, e)
    rest = [n for n in tc.names if n not in (u_i, u_j)]
    eps = get_settings().eps_ci
    for side in _subsets(rest):
        left = [u_i, *side]
        right = [u_j, *(n for n in rest if n not in side)]
        m = _block_matrix(tc, [left, right])
        outer = np.outer(m.sum(axis=1), m.sum(axis=0))
        if np.max(np.abs(m - outer)) <= eps:
            return True
    return False


def check_transitivity(
    t: JointTable, e: EventFilter | None = None
) -> list[tuple[str, str, str]]:
    """Triples (a, b, c) with relevant(a, b), relevant(b, c) but not relevant(a, c).

    Ends are reported once, a before c in declaration order.
    """
    tc = _conditioned(t, e)
    names = tc.names
    relevant: dict[frozenset[str], bool] = {}
    for a, b in itertools.combinations(names, 2):
        relevant[frozenset((a, b))] = not is_mutually_irrelevant(tc, a, b)

    violations = []
    for a, c in itertools.combinations(names, 2):
        if relevant[frozenset((a, c))]:
            continue
        for b in names:
            if b in (a, c):
                continue
            if relevant[frozenset((a, b))] and relevant[frozenset((b, c))]:
                violations.append((a, b, c))
    return violations


def strictly_positive(t: JointTable) -> bool:
    return bool(np.all(t.cells > get_settings().eps_zero))
