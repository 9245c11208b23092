"""Similarity network -> hypothesis-specific Bayesian multinet.

Every local network is first reoriented to one construction order. Then, for
each hypothesis h_i and depicted variable v, the CPT of v is copied from the
nearest cell that depicts v, read at the connecting hypothesis that ends the
path from a cell holding h_i.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from simnet.core.arc_reversal import reorient
from simnet.core.model import BayesianNetwork, Cpt, PosteriorVector, VariableDecl
from simnet.core.validation import ValidationReport
from simnet.errors import ConversionError, ModelValidationError, UnsupportedNetworkError
from simnet.inference.strict import recover_prior
from simnet.settings import get_settings
from simnet.similarity.network import (
    LocalNetwork,
    SimilarityNetwork,
    connecting_hypotheses,
    depicted_in_order,
    hypergraph_path,
)


@dataclass(frozen=True)
class ComprehensiveLocalNetwork:
    hypothesis: str
    network: BayesianNetwork


@dataclass(frozen=True, eq=False)
class Multinet:
    hypothesis: VariableDecl
    networks: Mapping[str, ComprehensiveLocalNetwork]
    prior: PosteriorVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "networks", dict(self.networks))
        report = ValidationReport()
        if set(self.networks) != set(self.hypothesis.values):
            report.add(
                "network_count",
                "networks",
                f"need one network per hypothesis {list(self.hypothesis.values)}",
            )
        total = sum(self.prior.probabilities.values())
        if abs(total - 1.0) > get_settings().eps_norm:
            report.add("normalization", "prior", f"prior sums to {total!r}")
        for h in self.hypothesis.values:
            if self.prior.probabilities.get(h, 0.0) <= 0.0:
                report.add("zero_prior", f"prior[{h}]", "hypothesis priors must be positive")
        if not report.ok:
            raise ModelValidationError(report, what="multinet")

    @property
    def variables(self) -> tuple[VariableDecl, ...]:
        first = self.networks[self.hypothesis.values[0]]
        return first.network.variables

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)


def _resolve_order(sn: SimilarityNetwork, order: Sequence[str] | None) -> list[str]:
    h = sn.hypothesis
    depicted = depicted_in_order(sn)
    if order is None:
        return [h, *depicted]
    rest = [n for n in order if n != h]
    missing = [n for n in depicted if n not in rest]
    if missing:
        raise ConversionError(f"construction order does not list depicted variables {missing}")
    return [h, *(n for n in rest if n in depicted)]


def _check_kind(sn: SimilarityNetwork, assume_type1: bool, allow_type2: bool) -> None:
    if sn.kind == "type1":
        return
    if sn.kind == "type2":
        if not allow_type2:
            raise UnsupportedNetworkError(
                "conversion is only proven for type-1 similarity networks; whether type-2 "
                "networks are diagnostically complete is an open conjecture "
                "(use the experimental flag to search for counterexamples)"
            )
        logging.warning("converting a type-2 similarity network: experimental, non-normative")
        return
    if not assume_type1:
        raise UnsupportedNetworkError(
            "similarity network kind is unspecified; pass assume_type1 to convert it as type-1"
        )


def _reoriented(sn: SimilarityNetwork, order: list[str]) -> list[LocalNetwork]:
    out = []
    for j, local in enumerate(sn.locals):
        local_order = [n for n in order if local.network.has(n)]
        network = reorient(local.network, local_order)
        if network is not local.network:
            logging.debug(f"cell {j}: reoriented to {local_order}")
        out.append(LocalNetwork(cell=local.cell, network=network))
    return out


def _source_cell(
    sn: SimilarityNetwork, locals_: list[LocalNetwork], h_i: str, variable: str
) -> tuple[int, str]:
    """Cell whose CPT of `variable` serves h_i, and the hypothesis to read it at."""
    domain = sn.model.hypothesis_decl.values
    best: list[int] | None = None
    for start in sn.cover.containing(h_i):
        path = hypergraph_path(sn.cover, start, lambda j: locals_[j].network.has(variable))
        if best is None or len(path) < len(best):
            best = path
    if best is None:
        raise ConversionError(f"hypothesis {h_i!r} is in no cell")
    chain = connecting_hypotheses([sn.cover.cells[j] for j in best], domain)
    h_m = chain[-1] if chain else h_i
    logging.debug(f"{variable} | {h_i}: path {best}, read at {h_m}")
    return best[-1], h_m


def _copy_cpt(local: LocalNetwork, variable: str, h: str, h_m: str, order: list[str]) -> Cpt:
    source = local.network.cpts[variable]
    position = {n: i for i, n in enumerate(order)}
    parents = tuple(p for p in source.parents if p != h)
    if any(position[p] >= position[variable] for p in parents):
        raise ConversionError(
            f"parents {list(parents)} of {variable!r} are not earlier in the construction order"
        )
    table = source.table
    if h in source.parents:
        idx = local.network.decl(h).index(h_m)
        table = np.take(table, idx, axis=source.parents.index(h))
    return Cpt(variable, parents, table)


def convert(
    sn: SimilarityNetwork,
    order: Sequence[str] | None = None,
    assume_type1: bool = False,
    allow_type2: bool = False,
) -> Multinet:
    _check_kind(sn, assume_type1, allow_type2)
    h = sn.hypothesis
    full_order = _resolve_order(sn, order)
    depicted = full_order[1:]
    locals_ = _reoriented(sn, full_order)

    networks = {}
    for h_i in sn.model.hypothesis_decl.values:
        cpts: dict[str, Cpt] = {}
        for variable in depicted:
            j, h_m = _source_cell(sn, locals_, h_i, variable)
            cpts[variable] = _copy_cpt(locals_[j], variable, h, h_m, full_order)
        edges = tuple((p, v) for v in depicted for p in cpts[v].parents)
        variables = tuple(sn.model.decl(v) for v in depicted)
        network = BayesianNetwork(variables, edges, cpts)
        networks[h_i] = ComprehensiveLocalNetwork(hypothesis=h_i, network=network)

    prior = recover_prior(sn)
    logging.info(
        f"converted {len(sn.locals)} local networks into {len(networks)} comprehensive "
        f"networks over {depicted}"
    )
    return Multinet(hypothesis=sn.model.hypothesis_decl, networks=networks, prior=prior)
