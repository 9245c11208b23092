"""JSON file formats: similarity-network models, joints, multinets and evidence.

Probabilities are written as decimal strings with 17 significant digits so a
dump/load cycle reproduces every float bit for bit. Readers accept numbers too.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, TypeAdapter, ValidationError

from simnet.core.model import (
    BayesianNetwork,
    Cpt,
    EventFilter,
    Evidence,
    PosteriorVector,
    VariableDecl,
)
from simnet.errors import ModelFileError
from simnet.multinet.conversion import ComprehensiveLocalNetwork, Multinet
from simnet.oracle.joint_table import JointTable, table_from_cells
from simnet.similarity.network import Cover, DiscreteModel, LocalNetwork, SimilarityNetwork

Probability = Annotated[
    float, PlainSerializer(lambda p: format(p, ".17g"), return_type=str, when_used="json")
]

ROW_SEPARATOR = "|"


class CptSpec(BaseModel):
    model_config = ConfigDict(extra="ignore")

    parents: list[str] = Field(default_factory=list)
    rows: dict[str, list[Probability]]


class NetworkSpec(BaseModel):
    model_config = ConfigDict(extra="ignore")

    nodes: list[str]
    edges: list[tuple[str, str]] = Field(default_factory=list)
    cpts: dict[str, CptSpec]


class LocalNetworkSpec(NetworkSpec):
    hypotheses: list[str] = Field(min_length=1)


class ModelFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    variables: list[VariableDecl]
    hypothesis: str
    cover: list[list[str]]
    kind: Literal["type1", "type2", "unspecified"] = "unspecified"
    local_networks: list[LocalNetworkSpec]


class JointCellSpec(BaseModel):
    assignment: dict[str, str]
    probability: Probability


class JointFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    variables: list[VariableDecl]
    cells: list[JointCellSpec]


class MultinetFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    hypothesis: str
    variables: list[VariableDecl]
    prior: dict[str, Probability]
    networks: dict[str, NetworkSpec]


_evidence_adapter = TypeAdapter(dict[str, str])


# ---------- Reading ----------


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"{path}: cannot read file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _parse(schema: Any, data: Any, path: str | Path) -> Any:
    try:
        if isinstance(schema, TypeAdapter):
            return schema.validate_python(data)
        return schema.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        raise ModelFileError(f"{path}: {problems}") from exc


def _decls(variables: list[VariableDecl], where: str) -> dict[str, VariableDecl]:
    out: dict[str, VariableDecl] = {}
    for v in variables:
        if v.name in out:
            raise ModelFileError(f"{where}: variable {v.name!r} declared twice")
        out[v.name] = v
    return out


def _table(spec: CptSpec, child: str, decls: dict[str, VariableDecl], where: str) -> np.ndarray:
    for name in [*spec.parents, child]:
        if name not in decls:
            raise ModelFileError(f"{where}: cpt {child}: {name!r} is not a node")
    parent_decls = [decls[p] for p in spec.parents]
    child_decl = decls[child]
    table = np.full([d.cardinality for d in parent_decls] + [child_decl.cardinality], np.nan)

    for key, row in spec.rows.items():
        labels = key.split(ROW_SEPARATOR) if key else []
        if len(labels) != len(parent_decls):
            raise ModelFileError(
                f"{where}: cpt {child}: row key {key!r} does not match parents {spec.parents}"
            )
        if any(label not in d.values for label, d in zip(labels, parent_decls, strict=True)):
            raise ModelFileError(f"{where}: cpt {child}: row key {key!r} is outside the domains")
        if len(row) != child_decl.cardinality:
            raise ModelFileError(
                f"{where}: cpt {child}[{key}]: {len(row)} entries, expected "
                f"{child_decl.cardinality}"
            )
        index = tuple(d.values.index(label) for label, d in zip(labels, parent_decls, strict=True))
        table[index] = row
    return table


def network_from_spec(
    spec: NetworkSpec,
    decls: dict[str, VariableDecl],
    context: EventFilter | None,
    where: str,
) -> BayesianNetwork:
    unknown = [n for n in spec.nodes if n not in decls]
    if unknown:
        raise ModelFileError(f"{where}: nodes {unknown} are not declared")
    local_decls = {n: decls[n] for n in spec.nodes}
    cpts = {
        child: Cpt(child, tuple(c.parents), _table(c, child, local_decls, where))
        for child, c in spec.cpts.items()
    }
    variables = tuple(local_decls[n] for n in spec.nodes)
    return BayesianNetwork(variables, tuple(spec.edges), cpts, context)


def model_from_file(data: ModelFile, where: str) -> SimilarityNetwork:
    decls = _decls(data.variables, where)
    if data.hypothesis not in decls:
        raise ModelFileError(f"{where}: hypothesis {data.hypothesis!r} is not declared")
    h_decl = decls[data.hypothesis]
    try:
        model = DiscreteModel(variables=tuple(data.variables), hypothesis=data.hypothesis)
    except ValidationError as exc:
        raise ModelFileError(f"{where}: {exc.errors()[0]['msg']}") from exc

    locals_ = []
    for j, spec in enumerate(data.local_networks):
        cell = tuple(spec.hypotheses)
        stray = [v for v in cell if v not in h_decl.values]
        if stray:
            raise ModelFileError(f"{where}: local network {j}: {stray} are not hypotheses")
        local_decls = dict(decls)
        local_decls[data.hypothesis] = h_decl.restrict(cell)
        network = network_from_spec(
            spec, local_decls, EventFilter.of(data.hypothesis, cell), f"{where}: local {j}"
        )
        locals_.append(LocalNetwork(cell=cell, network=network))

    return SimilarityNetwork(
        model=model, cover=Cover.of(data.cover), locals=tuple(locals_), kind=data.kind
    )


def load_model(path: str | Path) -> SimilarityNetwork:
    data = _parse(ModelFile, _read_json(path), path)
    return model_from_file(data, str(path))


def load_joint(path: str | Path) -> JointTable:
    data: JointFile = _parse(JointFile, _read_json(path), path)
    decls = _decls(data.variables, str(path))
    names = list(decls)
    cells: dict[tuple[str, ...], float] = {}
    for i, cell in enumerate(data.cells):
        if set(cell.assignment) != set(names):
            raise ModelFileError(f"{path}: cell {i} must assign exactly {names}")
        key = tuple(cell.assignment[n] for n in names)
        for n, value in zip(names, key, strict=True):
            if value not in decls[n].values:
                raise ModelFileError(f"{path}: cell {i}: {value!r} is not a value of {n!r}")
        if key in cells:
            raise ModelFileError(f"{path}: cell {i} repeats assignment {dict(cell.assignment)}")
        if cell.probability < 0:
            raise ModelFileError(f"{path}: cell {i} has negative probability")
        cells[key] = cell.probability
    total = sum(cells.values())
    if abs(total - 1.0) > 1e-9:
        raise ModelFileError(f"{path}: cells sum to {total!r}, not 1")
    return table_from_cells(data.variables, cells)


def load_multinet(path: str | Path) -> Multinet:
    data: MultinetFile = _parse(MultinetFile, _read_json(path), path)
    decls = _decls(data.variables, str(path))
    if data.hypothesis not in decls:
        raise ModelFileError(f"{path}: hypothesis {data.hypothesis!r} is not declared")
    h_decl = decls.pop(data.hypothesis)
    networks = {}
    for h, spec in data.networks.items():
        network = network_from_spec(spec, decls, None, f"{path}: network {h}")
        networks[h] = ComprehensiveLocalNetwork(hypothesis=h, network=network)
    prior = PosteriorVector(variable=data.hypothesis, probabilities=dict(data.prior))
    return Multinet(hypothesis=h_decl, networks=networks, prior=prior)


def load_evidence(path: str | Path) -> dict[str, str]:
    return _parse(_evidence_adapter, _read_json(path), path)


# ---------- Writing ----------


def network_to_spec(bn: BayesianNetwork) -> NetworkSpec:
    cpts = {}
    for name in bn.names:
        cpt = bn.cpts[name]
        parent_decls = [bn.decl(p) for p in cpt.parents]
        rows = {}
        for combo in itertools.product(*(range(d.cardinality) for d in parent_decls)):
            key = ROW_SEPARATOR.join(d.values[i] for d, i in zip(parent_decls, combo, strict=True))
            rows[key] = [float(p) for p in cpt.table[combo]]
        cpts[name] = CptSpec(parents=list(cpt.parents), rows=rows)
    return NetworkSpec(nodes=list(bn.names), edges=list(bn.edges), cpts=cpts)


def model_to_file(sn: SimilarityNetwork) -> ModelFile:
    local_specs = []
    for local in sn.locals:
        spec = network_to_spec(local.network)
        local_specs.append(
            LocalNetworkSpec(
                hypotheses=list(local.cell), nodes=spec.nodes, edges=spec.edges, cpts=spec.cpts
            )
        )
    return ModelFile(
        variables=list(sn.model.variables),
        hypothesis=sn.hypothesis,
        cover=[list(c) for c in sn.cover.cells],
        kind=sn.kind,
        local_networks=local_specs,
    )


def multinet_to_file(mn: Multinet) -> MultinetFile:
    return MultinetFile(
        hypothesis=mn.hypothesis.name,
        variables=[mn.hypothesis, *mn.variables],
        prior={h: mn.prior[h] for h in mn.hypothesis.values},
        networks={h: network_to_spec(mn.networks[h].network) for h in mn.hypothesis.values},
    )


def joint_to_file(t: JointTable) -> JointFile:
    cells = []
    for index in np.ndindex(*t.cells.shape):
        p = float(t.cells[index])
        if p == 0.0:
            continue
        assignment = {v.name: v.values[i] for v, i in zip(t.variables, index, strict=True)}
        cells.append(JointCellSpec(assignment=assignment, probability=p))
    return JointFile(variables=list(t.variables), cells=cells)


def write_json(document: BaseModel, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")


def dump_model(sn: SimilarityNetwork, path: str | Path) -> None:
    write_json(model_to_file(sn), path)


def dump_multinet(mn: Multinet, path: str | Path) -> None:
    write_json(multinet_to_file(mn), path)


def dump_joint(t: JointTable, path: str | Path) -> None:
    write_json(joint_to_file(t), path)


def dump_evidence(evidence: Evidence, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(dict(evidence), indent=2) + "\n", encoding="utf-8")
