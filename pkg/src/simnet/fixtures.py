"""Small worked models used by tests, docs and `simnet fixtures`.

toy3 / toy3p
    three equally likely hypotheses and one binary finding y. In toy3 the
    finding is impossible under h2, which defeats the ratio-chain algorithm;
    toy3p is the strictly positive variant.
mc3
    a Markov chain x -> y -> z whose two transition matrices multiply to a
    matrix with identical rows: x and z are related but mutually irrelevant.
sb
    secured building. Hypotheses spy, visitor, worker, executive; findings
    gender g, badge b and limousine l.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np

from simnet.core.model import BayesianNetwork, Cpt, EventFilter, VariableDecl
from simnet.io.files import dump_joint, dump_model
from simnet.oracle.joint_table import JointTable, from_network, table_from_cells
from simnet.similarity.network import Cover, DiscreteModel, LocalNetwork, SimilarityNetwork

TOY_H = VariableDecl(name="h", values=("h1", "h2", "h3"))
TOY_Y = VariableDecl(name="y", values=("+y", "-y"))

SB_H = VariableDecl(name="h", values=("spy", "visitor", "worker", "executive"))
SB_G = VariableDecl(name="g", values=("male", "female"))
SB_B = VariableDecl(name="b", values=("yes", "no"))
SB_L = VariableDecl(name="l", values=("yes", "no"))
SB_ORDER = ("h", "g", "b", "l")


def network(
    variables: Sequence[VariableDecl],
    cpts: Mapping[str, tuple[Sequence[str], Sequence]],
    context: EventFilter | None = None,
) -> BayesianNetwork:
    """Network from {child: (parents, nested probability list)}."""
    built = {
        child: Cpt(child, tuple(parents), np.asarray(table, dtype=float))
        for child, (parents, table) in cpts.items()
    }
    edges = tuple((p, c) for c, cpt in built.items() for p in cpt.parents)
    return BayesianNetwork(tuple(variables), edges, built, context)


def _local(
    cell: Sequence[str], h: VariableDecl, others: Sequence[VariableDecl], cpts
) -> LocalNetwork:
    context = EventFilter.of(h.name, cell)
    return LocalNetwork(
        cell=tuple(cell), network=network([h.restrict(cell), *others], cpts, context)
    )


# ---------- toy3 ----------


def _toy_likelihood(positive: bool) -> list[list[float]]:
    h2 = 0.2 if positive else 0.0
    return [[0.8, 0.2], [h2, 1.0 - h2], [0.4, 0.6]]


def toy3_network(positive: bool = False) -> BayesianNetwork:
    return network(
        [TOY_H, TOY_Y],
        {"h": ((), [1 / 3, 1 / 3, 1 / 3]), "y": (("h",), _toy_likelihood(positive))},
    )


def toy3_joint(positive: bool = False) -> JointTable:
    return from_network(toy3_network(positive))


def toy3_similarity(positive: bool = False) -> SimilarityNetwork:
    rows = dict(zip(TOY_H.values, _toy_likelihood(positive), strict=True))
    cells = [("h1", "h2"), ("h2", "h3")]
    locals_ = [
        _local(
            cell,
            TOY_H,
            [TOY_Y],
            {"h": ((), [0.5, 0.5]), "y": (("h",), [rows[v] for v in cell])},
        )
        for cell in cells
    ]
    model = DiscreteModel(variables=(TOY_H, TOY_Y), hypothesis="h")
    return SimilarityNetwork(
        model=model, cover=Cover.of(cells), locals=tuple(locals_), kind="type1"
    )


def toy3p_joint() -> JointTable:
    return toy3_joint(positive=True)


def toy3p_similarity() -> SimilarityNetwork:
    return toy3_similarity(positive=True)


# ---------- mc3 ----------

MC3_X = VariableDecl(name="x", values=("x0", "x1"))
MC3_Y = VariableDecl(name="y", values=("y0", "y1", "y2"))
MC3_Z = VariableDecl(name="z", values=("z0", "z1"))
MC3_Y_GIVEN_X = [[0.5, 0.3, 0.2], [0.2, 0.4, 0.4]]
MC3_Z_GIVEN_Y = [[0.5, 0.5], [0.9, 0.1], [0.3, 0.7]]


def mc3_network() -> BayesianNetwork:
    return network(
        [MC3_X, MC3_Y, MC3_Z],
        {
            "x": ((), [0.4, 0.6]),
            "y": (("x",), MC3_Y_GIVEN_X),
            "z": (("y",), MC3_Z_GIVEN_Y),
        },
    )


def mc3_joint() -> JointTable:
    return from_network(mc3_network())


# ---------- secured building ----------

SB_PRIOR = {"spy": 0.1, "visitor": 0.2, "worker": 0.5, "executive": 0.2}
SB_MALE = {"spy": 0.9, "visitor": 0.5, "worker": 0.4, "executive": 0.4}
# P(b = yes | g, h) for (male, female)
SB_BADGE = {
    "spy": (1.0, 1.0),
    "visitor": (0.0, 0.0),
    "worker": (0.6, 0.9),
    "executive": (0.6, 0.9),
}
SB_LIMOUSINE = {"spy": 0.0, "visitor": 0.0, "worker": 0.0, "executive": 0.6}


def sb_joint() -> JointTable:
    cells: dict[tuple[str, ...], float] = {}
    for h, ph in SB_PRIOR.items():
        for g, pg in (("male", SB_MALE[h]), ("female", 1.0 - SB_MALE[h])):
            yes = SB_BADGE[h][0 if g == "male" else 1]
            for b, pb in (("yes", yes), ("no", 1.0 - yes)):
                for limo, pl in (("yes", SB_LIMOUSINE[h]), ("no", 1.0 - SB_LIMOUSINE[h])):
                    p = ph * pg * pb * pl
                    if p > 0:
                        cells[(h, g, b, limo)] = p
    return table_from_cells((SB_H, SB_G, SB_B, SB_L), cells)


def _gender_rows(cell: Sequence[str]) -> list[list[float]]:
    return [[SB_MALE[h], 1.0 - SB_MALE[h]] for h in cell]


def _cell_prior(cell: Sequence[str]) -> list[float]:
    total = sum(SB_PRIOR[h] for h in cell)
    return [SB_PRIOR[h] / total for h in cell]


def sb_similarity() -> SimilarityNetwork:
    """The secured-building similarity network, one local network per link."""
    spy_visitor = ("spy", "visitor")
    visitor_worker = ("visitor", "worker")
    worker_executive = ("worker", "executive")

    locals_ = [
        _local(
            spy_visitor,
            SB_H,
            [SB_G, SB_B],
            {
                "h": ((), _cell_prior(spy_visitor)),
                "g": (("h",), _gender_rows(spy_visitor)),
                "b": (("h",), [[SB_BADGE[h][0], 1.0 - SB_BADGE[h][0]] for h in spy_visitor]),
            },
        ),
        _local(
            visitor_worker,
            SB_H,
            [SB_G, SB_B],
            {
                "h": ((), _cell_prior(visitor_worker)),
                "g": (("h",), _gender_rows(visitor_worker)),
                "b": (
                    ("h", "g"),
                    [[[yes, 1.0 - yes] for yes in SB_BADGE[h]] for h in visitor_worker],
                ),
            },
        ),
        _local(
            worker_executive,
            SB_H,
            [SB_L],
            {
                "h": ((), _cell_prior(worker_executive)),
                "l": (
                    ("h",),
                    [[SB_LIMOUSINE[h], 1.0 - SB_LIMOUSINE[h]] for h in worker_executive],
                ),
            },
        ),
    ]
    model = DiscreteModel(variables=(SB_H, SB_G, SB_B, SB_L), hypothesis="h")
    cover = Cover.of([spy_visitor, visitor_worker, worker_executive])
    return SimilarityNetwork(model=model, cover=cover, locals=tuple(locals_), kind="type1")


# ---------- prior recovery by hand ----------


def two_cell_prior() -> SimilarityNetwork:
    """Hypothesis-only locals with priors (0.5, 0.5) and (0.25, 0.75)."""
    h = TOY_H
    cells = [("h1", "h2"), ("h2", "h3")]
    locals_ = [
        _local(cells[0], h, [], {"h": ((), [0.5, 0.5])}),
        _local(cells[1], h, [], {"h": ((), [0.25, 0.75])}),
    ]
    model = DiscreteModel(variables=(h, TOY_Y), hypothesis="h")
    return SimilarityNetwork(
        model=model, cover=Cover.of(cells), locals=tuple(locals_), kind="type1"
    )


def write_fixtures(directory: str | Path) -> list[Path]:
    """Write the JSON fixture set into `directory`."""
    out = Path(directory)
    written = []
    for name, sn in (
        ("toy3.json", toy3_similarity()),
        ("toy3p.json", toy3p_similarity()),
        ("sb.json", sb_similarity()),
    ):
        dump_model(sn, out / name)
        written.append(out / name)
    for name, t in (("sb-joint.json", sb_joint()), ("mc3-joint.json", mc3_joint())):
        dump_joint(t, out / name)
        written.append(out / name)
    return written
