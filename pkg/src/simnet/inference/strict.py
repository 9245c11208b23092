"""Posterior over the hypothesis from a similarity network, strictly positive case.

Each cell yields local posteriors alpha(h, j). Within a cell their ratios equal
the ratios of the global posterior; ratios are chained across the cover along a
BFS spanning tree in log space and normalized at the end.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field

from simnet.core.inference import infer, state_space_size
from simnet.core.model import Evidence, PosteriorVector
from simnet.errors import (
    AssignmentError,
    InconsistentNetworkError,
    ModelValidationError,
    PositivityError,
    ZeroProbabilityEvidence,
)
from simnet.settings import get_settings
from simnet.similarity.network import Cover, LocalNetwork, SimilarityNetwork, validate_cover


@dataclass(frozen=True)
class AlphaTable:
    entries: Mapping[tuple[str, int], float]
    cells_touched: int = 0
    dropped: tuple[str, ...] = field(default=())

    def cell(self, j: int) -> dict[str, float]:
        return {h: a for (h, k), a in self.entries.items() if k == j}

    def __getitem__(self, key: tuple[str, int]) -> float:
        return self.entries[key]


class RatioViolation(BaseModel):
    pair: tuple[str, str]
    cells: tuple[int, int]
    ratio_j: float
    ratio_k: float
    discrepancy: float


class ConsistencyReport(BaseModel):
    violations: list[RatioViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_evidence(sn: SimilarityNetwork, evidence: Evidence) -> None:
    for name, value in evidence.items():
        if name == sn.hypothesis:
            raise AssignmentError("the hypothesis variable cannot be observed")
        sn.model.decl(name).index(value)


def _local_alphas(local: LocalNetwork, hypothesis: str, evidence: Evidence) -> dict[str, float]:
    filtered = {v: val for v, val in evidence.items() if local.network.has(v)}
    try:
        post = infer(local.network, hypothesis, filtered)
    except ZeroProbabilityEvidence as exc:
        raise PositivityError(f"cell {list(local.cell)}: {exc}") from exc
    return post.probabilities


def compute_alphas(
    sn: SimilarityNetwork, evidence: Evidence, max_workers: int | None = None
) -> AlphaTable:
    """Local posteriors of every hypothesis in every cell.

    Evidence on variables a local network does not contain is dropped for that
    cell only.
    """
    _check_evidence(sn, evidence)
    h = sn.hypothesis

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_cell = list(pool.map(lambda loc: _local_alphas(loc, h, evidence), sn.locals))
    else:
        per_cell = [_local_alphas(loc, h, evidence) for loc in sn.locals]

    entries = {(value, j): a for j, alphas in enumerate(per_cell) for value, a in alphas.items()}
    touched = sum(state_space_size(loc.network) for loc in sn.locals)
    nowhere = tuple(v for v in evidence if not any(loc.network.has(v) for loc in sn.locals))
    return AlphaTable(entries=entries, cells_touched=touched, dropped=nowhere)


def check_consistency(a: AlphaTable, cover: Cover) -> ConsistencyReport:
    """Compare alpha ratios of hypothesis pairs shared by several cells."""
    settings = get_settings()
    report = ConsistencyReport()
    values = list(dict.fromkeys(v for cell in cover.cells for v in cell))
    for ha, hb in itertools.combinations(values, 2):
        ratios = []
        for j in range(len(cover)):
            alpha_a, alpha_b = a.entries.get((ha, j)), a.entries.get((hb, j))
            if alpha_a is None or alpha_b is None:
                continue
            if alpha_a <= settings.eps_zero or alpha_b <= settings.eps_zero:
                continue
            ratios.append((j, alpha_a / alpha_b))
        for (j, rj), (k, rk) in itertools.combinations(ratios, 2):
            discrepancy = abs(math.log(rj) - math.log(rk))
            if discrepancy > settings.eps_consist:
                report.violations.append(
                    RatioViolation(
                        pair=(ha, hb), cells=(j, k), ratio_j=rj, ratio_k=rk, discrepancy=discrepancy
                    )
                )
    return report


def _spanning_log_scores(
    alphas: AlphaTable, cover: Cover, domain: tuple[str, ...], seed: int | None
) -> dict[str, float]:
    rng = np.random.default_rng(seed) if seed is not None else None
    start = int(rng.integers(len(cover))) if rng is not None else 0

    log_q = {h: math.log(alphas[(h, start)]) for h in cover.cells[start]}
    seen = {start}
    queue = deque([start])
    while queue:
        j = queue.popleft()
        neighbours = cover.neighbours(j)
        if rng is not None:
            neighbours = [neighbours[i] for i in rng.permutation(len(neighbours))]
        for k in neighbours:
            if k in seen:
                continue
            seen.add(k)
            queue.append(k)
            shared = [v for v in domain if v in cover.cells[j] and v in cover.cells[k]]
            pivot = shared[int(rng.integers(len(shared)))] if rng is not None else shared[0]
            base = log_q[pivot] - math.log(alphas[(pivot, k)])
            for h in cover.cells[k]:
                log_q.setdefault(h, base + math.log(alphas[(h, k)]))
    return log_q


def posterior_from_alphas(
    sn: SimilarityNetwork, alphas: AlphaTable, seed: int | None = None
) -> PosteriorVector:
    """Chain the ratios of already computed alphas into a posterior.

    `seed` shuffles the spanning tree (start cell, neighbour order and pivot
    hypotheses); the answer does not depend on it.
    """
    settings = get_settings()
    cover_report = validate_cover(sn.cover, sn.model.hypothesis_decl.values)
    if not cover_report.ok:
        raise ModelValidationError(cover_report, what="cover")

    zeros = [key for key, a in alphas.entries.items() if a <= settings.eps_zero]
    if zeros:
        h_i, j = zeros[0]
        raise PositivityError(f"alpha({h_i}, cell {j}) = {alphas[(h_i, j)]!r}")

    report = check_consistency(alphas, sn.cover)
    if not report.ok:
        raise InconsistentNetworkError(report)

    domain = sn.model.hypothesis_decl.values
    log_q = _spanning_log_scores(alphas, sn.cover, domain, seed)
    scores = np.array([log_q[h] for h in domain])
    weights = np.exp(scores - scores.max())
    posterior = weights / weights.sum()

    warnings = []
    for name in alphas.dropped:
        message = f"evidence on {name!r} dropped: no local network depicts it"
        logging.warning(message)
        warnings.append(message)
    return PosteriorVector(
        variable=sn.hypothesis,
        probabilities={h: float(p) for h, p in zip(domain, posterior, strict=True)},
        warnings=tuple(warnings),
    )


def infer_posterior_strict(
    sn: SimilarityNetwork,
    evidence: Evidence,
    seed: int | None = None,
    max_workers: int | None = None,
) -> PosteriorVector:
    """P(h | evidence) from the local networks alone."""
    alphas = compute_alphas(sn, evidence, max_workers=max_workers)
    return posterior_from_alphas(sn, alphas, seed=seed)


def recover_prior(sn: SimilarityNetwork) -> PosteriorVector:
    return infer_posterior_strict(sn, {})
