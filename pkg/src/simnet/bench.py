"""Local-network inference versus the global joint on a synthetic diagnosis model.

Hypotheses h1..hm sit on a ring cover {h_i, h_(i+1)} (one cell when m = 2).
Finding k belongs to signature hypothesis h_(k mod m): its distribution under
that hypothesis differs from a single shared distribution under all others,
and findings with the same signature form a chain. A cell therefore depicts
exactly the findings whose signature lies in it.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd
from tqdm import tqdm

from simnet.core.inference import state_space_size
from simnet.core.model import BayesianNetwork, Cpt, EventFilter, VariableDecl
from simnet.errors import BudgetExceededError
from simnet.inference.strict import compute_alphas, infer_posterior_strict
from simnet.oracle.joint_table import from_network, posterior
from simnet.settings import get_settings
from simnet.similarity.network import Cover, DiscreteModel, LocalNetwork, SimilarityNetwork
from simnet.synthetic import BINARY, hypothesis_decl

GLOBAL_MAX_FINDINGS = 20


@dataclass(frozen=True)
class BenchModel:
    network: BayesianNetwork
    similarity: SimilarityNetwork
    signature: dict[str, str]


def _ring(values: tuple[str, ...]) -> Cover:
    if len(values) == 2:
        return Cover.of([values])
    m = len(values)
    cells = [tuple(sorted((values[i], values[(i + 1) % m]), key=values.index)) for i in range(m)]
    return Cover.of(cells)


def synthetic_model(
    rng: np.random.Generator, n_hypotheses: int, n_findings: int, vars_per_local: int
) -> BenchModel:
    h = hypothesis_decl(n_hypotheses)
    findings = [VariableDecl(name=f"v{k + 1}", values=BINARY) for k in range(n_findings)]
    signature = {f.name: h.values[k % n_hypotheses] for k, f in enumerate(findings)}

    prior = rng.uniform(0.5, 1.5, size=n_hypotheses)
    cpts: dict[str, Cpt] = {"h": Cpt("h", (), prior / prior.sum())}
    previous: dict[str, str] = {}
    for f in findings:
        sig = signature[f.name]
        chain = (previous[sig],) if sig in previous else ()
        previous[sig] = f.name
        # (own, other) x parent states
        p_first = rng.uniform(0.1, 0.9, size=(2,) + (2,) * len(chain))
        rows = np.stack([p_first[0] if v == sig else p_first[1] for v in h.values])
        cpts[f.name] = Cpt(f.name, ("h", *chain), np.stack([rows, 1.0 - rows], axis=-1))

    edges = tuple((p, c) for c, cpt in cpts.items() for p in cpt.parents)
    network = BayesianNetwork((h, *findings), edges, cpts)

    cover = _ring(h.values)
    locals_ = []
    for cell in cover.cells:
        kept = [f for f in findings if signature[f.name] in cell]
        if len(kept) > vars_per_local:
            raise ValueError(
                f"cell {list(cell)} depicts {len(kept)} findings, more than {vars_per_local}"
            )
        local_h = h.restrict(cell)
        idx = [h.values.index(v) for v in local_h.values]
        local_cpts = {"h": Cpt("h", (), cpts["h"].table[idx] / cpts["h"].table[idx].sum())}
        for f in kept:
            local_cpts[f.name] = Cpt(f.name, cpts[f.name].parents, cpts[f.name].table[idx])
        local_edges = tuple((p, c) for c, cpt in local_cpts.items() for p in cpt.parents)
        local = BayesianNetwork(
            (local_h, *kept), local_edges, local_cpts, EventFilter.of("h", cell)
        )
        locals_.append(LocalNetwork(cell=cell, network=local))

    model = DiscreteModel(variables=(h, *findings), hypothesis="h")
    sn = SimilarityNetwork(model=model, cover=cover, locals=tuple(locals_), kind="type1")
    return BenchModel(network=network, similarity=sn, signature=signature)


def _evidence(rng: np.random.Generator, findings: list[str]) -> dict[str, str]:
    return {f: BINARY[int(rng.integers(2))] for f in findings}


def run_bench(
    n_hypotheses: int,
    vars_per_local: int,
    n_findings: int,
    seed: int | None = None,
    repeats: int = 3,
    cell_budget: int | None = None,
) -> pd.DataFrame:
    """One row per mode: cells touched, best wall time, and ratio to the local mode."""
    seed = get_settings().seed if seed is None else seed
    rng = np.random.default_rng(seed)
    bench = synthetic_model(rng, n_hypotheses, n_findings, vars_per_local)
    findings = [n for n in bench.network.names if n != "h"]
    evidence = _evidence(rng, findings)

    sinet_cells = compute_alphas(bench.similarity, evidence).cells_touched
    sinet_time = math.inf
    for _ in tqdm(range(repeats), desc="sinet", disable=repeats < 2):
        start = time.perf_counter()
        result = infer_posterior_strict(bench.similarity, evidence)
        sinet_time = min(sinet_time, time.perf_counter() - start)

    rows = [{"mode": "sinet", "cells_touched": sinet_cells, "seconds": sinet_time}]

    global_cells = state_space_size(bench.network)
    global_time: float | None = None
    status = "ok"
    if n_findings > GLOBAL_MAX_FINDINGS:
        status = "skipped (budget)"
    else:
        try:
            global_time = math.inf
            for _ in tqdm(range(repeats), desc="global", disable=repeats < 2):
                start = time.perf_counter()
                reference = posterior(from_network(bench.network, cell_budget), "h", evidence)
                global_time = min(global_time, time.perf_counter() - start)
            gap = max(abs(result[v] - reference[v]) for v in reference.probabilities)
            logging.info(f"sinet vs global max posterior difference {gap:.3g}")
        except BudgetExceededError:
            status, global_time = "skipped (budget)", None
    if status != "ok":
        logging.warning(f"global mode skipped: {global_cells} cells exceed the budget")

    rows.append(
        {
            "mode": "global" if status == "ok" else f"global {status}",
            "cells_touched": global_cells,
            "seconds": global_time,
        }
    )
    table = pd.DataFrame(rows)
    table["ratio"] = table["cells_touched"] / sinet_cells
    table.attrs.update(seed=seed, hypotheses=n_hypotheses, findings=n_findings)
    return table
