"""Seeded end-to-end suites: every structured path against the dense joint."""

import numpy as np
import pytest

from simnet.errors import PositivityError
from simnet.inference.strict import compute_alphas, infer_posterior_strict, recover_prior
from simnet.multinet.conversion import convert
from simnet.multinet.inference import infer_multinet
from simnet.oracle.joint_table import condition, from_multinet, from_network, posterior
from simnet.oracle.relations import strictly_positive
from simnet.settings import get_settings
from simnet.similarity.construction import build_similarity_network
from simnet.similarity.network import cell_event, validate_similarity_network
from simnet.synthetic import (
    connected_cover,
    random_evidence,
    random_order,
    structured_network,
    zero_fraction,
)

EVIDENCE_SETS = 5


def _model(seed: int, with_zeros: bool = False):
    rng = np.random.default_rng(seed)
    zero_rate = float(rng.uniform(0.1, 0.3)) if with_zeros else 0.0
    bn = structured_network(
        rng,
        n_hypotheses=int(rng.integers(3, 6)),
        n_variables=int(rng.integers(3, 6)),
        zero_rate=zero_rate,
    )
    cover = connected_cover(rng, bn.decl("h").values)
    return rng, bn, from_network(bn), cover


def _construction_order(rng: np.random.Generator, names: tuple[str, ...]) -> list[str]:
    return ["h", *random_order(rng, tuple(n for n in names if n != "h"))]


def _assert_cells_match_the_joint(sn, t, evidence):
    for j in range(len(sn.cover)):
        expected = posterior(condition(t, cell_event(sn, j)), "h", evidence).probabilities
        alphas = compute_alphas(sn, evidence).cell(j)
        assert set(alphas) == set(expected)
        for h, alpha in alphas.items():
            assert alpha == pytest.approx(expected[h], abs=1e-9)


def _assert_multinet_matches_the_joint(mn, t):
    m = from_multinet(mn)
    np.testing.assert_allclose(m.cells, t.marginal(m.names).cells, atol=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_positive_models_agree_with_the_joint(seed):
    rng, _, t, cover = _model(seed)
    assert strictly_positive(t)
    order = _construction_order(rng, t.names) if seed % 2 else None
    type1 = build_similarity_network(t, "h", cover, "type1", order)
    type2 = build_similarity_network(t, "h", cover, "type2", order)
    assert validate_similarity_network(type1).ok
    assert validate_similarity_network(type2).ok
    for a, b in zip(type1.locals, type2.locals, strict=True):
        assert set(b.variables) <= set(a.variables)

    truth = t.marginal(["h"]).cells
    np.testing.assert_allclose(recover_prior(type1).as_array(), truth, atol=1e-9)
    np.testing.assert_allclose(recover_prior(type2).as_array(), truth, atol=1e-9)

    first = convert(type1, _construction_order(rng, t.names))
    second = convert(type1, _construction_order(rng, t.names))
    _assert_multinet_matches_the_joint(first, t)
    _assert_multinet_matches_the_joint(second, t)

    for _ in range(EVIDENCE_SETS):
        evidence = random_evidence(rng, t, exclude="h")
        expected = posterior(t, "h", evidence).as_array()
        for sn in (type1, type2):
            np.testing.assert_allclose(
                infer_posterior_strict(sn, evidence).as_array(), expected, atol=1e-9
            )
            _assert_cells_match_the_joint(sn, t, evidence)
        via_first = infer_multinet(first, evidence).as_array()
        via_second = infer_multinet(second, evidence).as_array()
        np.testing.assert_allclose(via_first, expected, atol=1e-9)
        np.testing.assert_allclose(via_second, via_first, atol=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_multinet_tolerates_zero_probabilities(seed):
    rng, bn, t, cover = _model(10_000 + seed, with_zeros=True)
    assert 0.1 <= zero_fraction(bn) <= 0.3
    assert not strictly_positive(t)
    sn = build_similarity_network(t, "h", cover, "type1", _construction_order(rng, t.names))
    np.testing.assert_allclose(recover_prior(sn).as_array(), t.marginal(["h"]).cells, atol=1e-9)

    mn = convert(sn, _construction_order(rng, t.names))
    _assert_multinet_matches_the_joint(mn, t)
    eps_zero = get_settings().eps_zero
    checked = 0
    while checked < EVIDENCE_SETS:
        evidence = random_evidence(rng, t, exclude="h")
        if t.probability(evidence) <= eps_zero:
            continue
        checked += 1
        expected = posterior(t, "h", evidence).as_array()
        np.testing.assert_allclose(infer_multinet(mn, evidence).as_array(), expected, atol=1e-9)
        try:
            strict = infer_posterior_strict(sn, evidence)
        except PositivityError:
            continue
        np.testing.assert_allclose(strict.as_array(), expected, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_zero_share_stays_in_range(seed):
    rng = np.random.default_rng(seed)
    for rate in (0.0, 0.05, 0.2, 0.5):
        bn = structured_network(rng, n_hypotheses=3, n_variables=4, zero_rate=rate)
        share = zero_fraction(bn)
        if rate == 0.0:
            assert share == 0.0
        else:
            assert 0.1 <= share <= 0.3
        assert np.all(bn.cpts["h"].table > 0)
