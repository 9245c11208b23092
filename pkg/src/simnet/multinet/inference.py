from __future__ import annotations

import logging

from simnet.core.inference import OperationCount, evidence_likelihood, likelihood_operations
from simnet.core.model import Evidence, PosteriorVector
from simnet.errors import AssignmentError, ImpossibleEvidenceError
from simnet.multinet.conversion import Multinet
from simnet.settings import get_settings


def _split_evidence(mn: Multinet, evidence: Evidence) -> tuple[dict[str, str], list[str]]:
    kept: dict[str, str] = {}
    warnings: list[str] = []
    names = mn.names
    for name, value in evidence.items():
        if name == mn.hypothesis.name:
            raise AssignmentError("the hypothesis variable cannot be observed")
        if name not in names:
            warnings.append(f"evidence on {name!r} dropped: no comprehensive network depicts it")
            continue
        kept[name] = value
    return kept, warnings


def infer_multinet(mn: Multinet, evidence: Evidence) -> PosteriorVector:
    """Bayes rule over per-hypothesis evidence likelihoods."""
    kept, warnings = _split_evidence(mn, evidence)
    for message in warnings:
        logging.warning(message)
    weights = {}
    for h in mn.hypothesis.values:
        beta = evidence_likelihood(mn.networks[h].network, kept)
        weights[h] = mn.prior[h] * beta

    total = sum(weights.values())
    if total <= get_settings().eps_zero:
        raise ImpossibleEvidenceError(f"evidence {kept} is impossible under every hypothesis")
    return PosteriorVector(
        variable=mn.hypothesis.name,
        probabilities={h: w / total for h, w in weights.items()},
        warnings=tuple(warnings),
    )


def count_operations(mn: Multinet, evidence: Evidence) -> dict[str, OperationCount]:
    kept, _ = _split_evidence(mn, evidence)
    return {
        h: likelihood_operations(mn.networks[h].network, kept) for h in mn.hypothesis.values
    }
