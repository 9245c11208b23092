import numpy as np
import pytest

from simnet.core.model import EventFilter, VariableDecl
from simnet.errors import AssignmentError, ZeroProbabilityEvent, ZeroProbabilityEvidence
from simnet.fixtures import mc3_network, toy3_joint
from simnet.io.files import load_joint
from simnet.oracle.joint_table import (
    JointTable,
    condition,
    from_network,
    posterior,
    table_from_cells,
)
from simnet.oracle.relations import (
    check_transitivity,
    is_conditionally_independent,
    is_mutually_irrelevant,
    is_unrelated,
    strictly_positive,
)
from simnet.synthetic import random_network, structured_joint

# ---------- joint tables ----------


def test_marginal_reorders_axes(mc3_joint):
    m = mc3_joint.marginal(["z", "x"])
    assert m.names == ("z", "x")
    np.testing.assert_allclose(m.cells.sum(axis=0), [0.4, 0.6], atol=1e-12)


def test_probability_of_partial_assignment(mc3_joint):
    assert mc3_joint.probability({"x": "x0", "y": "y1"}) == pytest.approx(0.12, abs=1e-12)


def test_condition_restricts_the_event_variable(sb_joint):
    t = condition(sb_joint, EventFilter.of("h", ["worker", "executive"]))
    assert t.decl("h").values == ("worker", "executive")
    assert t.cells.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(t.marginal(["h"]).cells, [5 / 7, 2 / 7], atol=1e-12)


def test_conditioning_on_a_zero_probability_event():
    t = table_from_cells([VariableDecl(name="a", values=("a0", "a1"))], {("a0",): 1.0})
    with pytest.raises(ZeroProbabilityEvent):
        condition(t, EventFilter.of("a", ["a1"]))


def test_conditioning_on_unknown_values():
    with pytest.raises(AssignmentError):
        condition(toy3_joint(), EventFilter.of("h", ["h9"]))


def test_posterior_matches_bayes_rule():
    post = posterior(toy3_joint(), "h", {"y": "+y"})
    np.testing.assert_allclose(post.as_array(), [2 / 3, 0.0, 1 / 3], atol=1e-12)


def test_posterior_of_impossible_evidence(sb_joint):
    with pytest.raises(ZeroProbabilityEvidence):
        posterior(sb_joint, "g", {"h": "spy", "b": "no"})


def test_missing_cells_are_zero(sb_joint):
    assert not strictly_positive(sb_joint)
    assert sb_joint.probability({"h": "visitor", "b": "yes"}) == 0.0


def test_table_shape_is_checked():
    with pytest.raises(ValueError):
        JointTable((VariableDecl(name="a", values=("a0", "a1")),), np.ones(3) / 3)


# ---------- independence and relatedness ----------


def test_chain_is_conditionally_independent_given_the_middle(mc3_joint):
    assert is_conditionally_independent(mc3_joint, ["x"], ["z"], ["y"])
    assert not is_conditionally_independent(mc3_joint, ["x"], ["y"], [])


def test_overlapping_sets_are_rejected(mc3_joint):
    with pytest.raises(ValueError):
        is_conditionally_independent(mc3_joint, ["x"], ["x"], [])


def test_mc3_breaks_transitivity_of_relevance(mc3_joint):
    assert not is_mutually_irrelevant(mc3_joint, "x", "y")
    assert not is_mutually_irrelevant(mc3_joint, "y", "z")
    assert is_mutually_irrelevant(mc3_joint, "x", "z")
    assert not is_unrelated(mc3_joint, "x", "z")
    assert check_transitivity(mc3_joint) == [("x", "y", "z")]


def test_golden_mc3_joint_matches_the_chain(fixture_dir):
    golden = load_joint(fixture_dir / "mc3-joint.json")
    np.testing.assert_allclose(golden.cells, from_network(mc3_network()).cells, atol=1e-12)
    assert check_transitivity(golden) == [("x", "y", "z")]


def test_independent_block_is_unrelated():
    # a is independent of (b, c)
    a = VariableDecl(name="a", values=("a0", "a1"))
    b = VariableDecl(name="b", values=("b0", "b1"))
    c = VariableDecl(name="c", values=("c0", "c1"))
    bc = np.array([[0.1, 0.2], [0.3, 0.4]])
    cells = np.stack([0.25 * bc, 0.75 * bc])
    t = JointTable((a, b, c), cells)
    assert is_unrelated(t, "a", "b")
    assert is_unrelated(t, "a", "c")
    assert not is_unrelated(t, "b", "c")


def test_relevance_to_the_event_variable(sb_joint):
    e = EventFilter.of("h", ["worker", "executive"])
    assert is_mutually_irrelevant(sb_joint, "g", "h", e)
    assert not is_mutually_irrelevant(sb_joint, "l", "h", e)
    assert is_unrelated(sb_joint, "b", "h", e)


def _random_event(rng: np.random.Generator, t: JointTable) -> EventFilter | None:
    if rng.random() < 0.3:
        return None
    decl = t.variables[int(rng.integers(len(t.variables)))]
    size = int(rng.integers(1, decl.cardinality + 1))
    picked = rng.choice(decl.cardinality, size=size, replace=False)
    return EventFilter.of(decl.name, [decl.values[i] for i in picked])


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_relevant_pairs_are_related(seed):
    """Relevance implies relatedness: no pair is relevant yet unrelated."""
    rng = np.random.default_rng(seed)
    if seed % 2:
        t = from_network(random_network(rng, n_nodes=int(rng.integers(2, 6))))
    else:
        t = structured_joint(rng, int(rng.integers(2, 4)), int(rng.integers(1, 4)))
    e = _random_event(rng, t)
    names = t.names
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            if not is_mutually_irrelevant(t, u, v, e):
                assert not is_unrelated(t, u, v, e), (u, v, e)


@pytest.mark.parametrize("seed", range(20))
def test_relations_are_symmetric(seed):
    rng = np.random.default_rng(seed)
    t = structured_joint(rng, int(rng.integers(2, 4)), int(rng.integers(2, 4)))
    e = _random_event(rng, t)
    names = t.names
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            assert is_unrelated(t, u, v, e) == is_unrelated(t, v, u, e)
            assert is_mutually_irrelevant(t, u, v, e) == is_mutually_irrelevant(t, v, u, e)


@pytest.mark.parametrize("seed", range(20))
def test_nested_conditioning_is_conditioning_on_the_inner_event(seed):
    rng = np.random.default_rng(seed)
    t = structured_joint(rng, n_hypotheses=int(rng.integers(3, 6)), n_variables=2)
    values = t.decl("h").values
    picked = rng.choice(len(values), size=len(values) - 1, replace=False)
    outer = [values[i] for i in sorted(picked)]
    inner = [outer[i] for i in sorted(rng.choice(len(outer), size=2, replace=False))]
    nested = condition(condition(t, EventFilter.of("h", outer)), EventFilter.of("h", inner))
    direct = condition(t, EventFilter.of("h", inner))
    assert nested.variables == direct.variables
    np.testing.assert_allclose(nested.cells, direct.cells, atol=1e-12)
