import json
import logging

import numpy as np
import pytest

from simnet.cli import main, parse_cover
from simnet.fixtures import two_cell_prior
from simnet.io.files import dump_evidence, dump_model, load_model
from simnet.similarity.network import validate_similarity_network


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def evidence_file(tmp_path):
    def write(evidence):
        path = tmp_path / f"evidence-{len(list(tmp_path.iterdir()))}.json"
        dump_evidence(evidence, path)
        return str(path)

    return write


def _edited(tmp_path, fixture_dir, name, edit):
    payload = json.loads((fixture_dir / name).read_text())
    edit(payload)
    path = tmp_path / f"edited-{name}"
    path.write_text(json.dumps(payload))
    return str(path)


def test_parse_cover():
    assert parse_cover("a,b; b, c").cells == (("a", "b"), ("b", "c"))


# ---------- validate ----------


def test_validate_accepts_the_secured_building(capsys, fixture_dir):
    code, out, _ = run(capsys, "validate", str(fixture_dir / "sb.json"))
    assert code == 0
    assert out.strip().endswith("ok")


def test_validate_reports_a_disconnected_cover(capsys, tmp_path, fixture_dir):
    def split(payload):
        payload["variables"][0]["values"] = ["h1", "h2", "h3", "h4"]
        payload["cover"] = [["h1", "h2"], ["h3", "h4"]]
        second = payload["local_networks"][1]
        second["hypotheses"] = ["h3", "h4"]
        second["cpts"]["y"]["rows"] = {"h3": [0.4, 0.6], "h4": [0.5, 0.5]}

    path = _edited(tmp_path, fixture_dir, "toy3.json", split)
    code, out, _ = run(capsys, "--json", "validate", path)
    assert code == 1
    report = json.loads(out)
    assert [v["kind"] for v in report["violations"]] == ["connectivity"]
    assert "components" in report["violations"][0]["message"]


def test_validate_reports_an_unnormalized_row(capsys, tmp_path, fixture_dir):
    def shrink(payload):
        payload["local_networks"][0]["cpts"]["y"]["rows"]["h1"] = [0.7, 0.2]

    path = _edited(tmp_path, fixture_dir, "toy3.json", shrink)
    code, out, _ = run(capsys, "validate", path)
    assert code == 1
    assert "normalization" in out


def test_unreadable_model_is_an_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    code, _, err = run(capsys, "validate", str(path))
    assert code == 1
    assert err.startswith("error:")


# ---------- infer ----------


def test_sinet_refuses_a_non_positive_model(capsys, fixture_dir, evidence_file):
    code, _, err = run(
        capsys, "infer", str(fixture_dir / "toy3.json"), "--evidence", evidence_file({"y": "+y"})
    )
    assert code == 2
    assert "P is not strictly positive" in err


def test_multinet_handles_the_non_positive_model(capsys, fixture_dir, evidence_file):
    code, out, _ = run(
        capsys,
        "--json",
        "infer",
        str(fixture_dir / "toy3.json"),
        "--evidence",
        evidence_file({"y": "+y"}),
        "--mode",
        "multinet",
    )
    assert code == 0
    result = json.loads(out)
    assert result["mode"] == "multinet"
    probabilities = result["posterior"]["probabilities"]
    np.testing.assert_allclose(
        [probabilities[h] for h in ("h1", "h2", "h3")], [2 / 3, 0.0, 1 / 3], atol=1e-12
    )
    assert set(result["work"]) == {"h1", "h2", "h3"}


def _posterior(capsys, model, evidence, mode, *extra):
    code, out, _ = run(
        capsys, "--json", "infer", model, "--evidence", evidence, "--mode", mode, *extra
    )
    assert code == 0
    probabilities = json.loads(out)["posterior"]["probabilities"]
    return np.array(list(probabilities.values()))


def test_global_and_multinet_agree_on_the_secured_building(capsys, fixture_dir, evidence_file):
    model = str(fixture_dir / "sb.json")
    evidence = evidence_file({"b": "yes"})
    via_multinet = _posterior(capsys, model, evidence, "multinet", "--order", "h,g,b,l")
    via_global = _posterior(capsys, model, evidence, "global", "--order", "h,g,b,l")
    np.testing.assert_allclose(via_multinet, via_global, atol=1e-9)
    np.testing.assert_allclose(via_global, np.array([0.1, 0.0, 0.39, 0.156]) / 0.646, atol=1e-9)


def test_all_modes_agree_on_a_positive_model(capsys, fixture_dir, evidence_file):
    model = str(fixture_dir / "toy3p.json")
    evidence = evidence_file({"y": "-y"})
    modes = ("sinet", "multinet", "global")
    results = [_posterior(capsys, model, evidence, mode) for mode in modes]
    for other in results[1:]:
        np.testing.assert_allclose(other, results[0], atol=1e-9)


def test_infer_without_evidence_returns_the_prior(capsys, fixture_dir):
    model = str(fixture_dir / "sb.json")
    code, out, _ = run(capsys, "--json", "infer", model, "--mode", "multinet")
    assert code == 0
    probabilities = json.loads(out)["posterior"]["probabilities"]
    np.testing.assert_allclose(list(probabilities.values()), [0.1, 0.2, 0.5, 0.2], atol=1e-12)


@pytest.mark.parametrize("mode", ["sinet", "multinet", "global"])
def test_dropped_evidence_is_logged_once(capsys, caplog, tmp_path, evidence_file, mode):
    model = tmp_path / "two-cell.json"
    dump_model(two_cell_prior(), model)
    with caplog.at_level(logging.WARNING):
        code, out, _ = run(
            capsys,
            "--json",
            "infer",
            str(model),
            "--evidence",
            evidence_file({"y": "+y"}),
            "--mode",
            mode,
        )
    assert code == 0
    assert len(json.loads(out)["warnings"]) == 1
    assert sum("dropped" in r.getMessage() for r in caplog.records) == 1


def test_plain_output_is_a_table(capsys, fixture_dir, evidence_file):
    code, out, _ = run(
        capsys, "infer", str(fixture_dir / "toy3p.json"), "--evidence", evidence_file({"y": "+y"})
    )
    assert code == 0
    assert "probability" in out
    assert "h3" in out


# ---------- convert ----------


def test_convert_is_byte_reproducible(capsys, tmp_path, fixture_dir):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    model = str(fixture_dir / "sb.json")
    assert run(capsys, "convert", model, "--order", "h,g,b,l", "-o", str(first))[0] == 0
    assert run(capsys, "convert", model, "--order", "h,g,b,l", "-o", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    assert set(json.loads(first.read_text())["networks"]) == {
        "spy",
        "visitor",
        "worker",
        "executive",
    }


def test_convert_refuses_type2(capsys, tmp_path, fixture_dir):
    path = _edited(tmp_path, fixture_dir, "sb.json", lambda p: p.update(kind="type2"))
    code, _, err = run(capsys, "convert", path, "-o", str(tmp_path / "out.json"))
    assert code == 4
    assert "type-1" in err
    assert not (tmp_path / "out.json").exists()


def test_experimental_type2_conversion_runs(capsys, tmp_path, fixture_dir):
    path = _edited(tmp_path, fixture_dir, "sb.json", lambda p: p.update(kind="type2"))
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "convert", path, "-o", str(out), "--experimental-type2")
    assert code == 0
    assert out.exists()


# ---------- build ----------


SB_COVER = "spy,visitor;visitor,worker;worker,executive"


def _build(capsys, tmp_path, fixture_dir, joint, hypothesis, cover, kind):
    out = tmp_path / f"built-{kind}.json"
    code, _, _ = run(
        capsys,
        "build",
        str(fixture_dir / joint),
        "--hypothesis",
        hypothesis,
        "--cover",
        cover,
        "--type",
        kind,
        "-o",
        str(out),
    )
    assert code == 0
    sn = load_model(out)
    assert validate_similarity_network(sn).ok
    return sn


def test_build_type1_from_the_secured_building_joint(capsys, tmp_path, fixture_dir):
    sn = _build(capsys, tmp_path, fixture_dir, "sb-joint.json", "h", SB_COVER, "1")
    assert sn.kind == "type1"
    assert set(sn.locals[2].network.names) == {"h", "l"}


def test_build_type2_depicts_no_more_than_type1(capsys, tmp_path, fixture_dir):
    type1 = _build(capsys, tmp_path, fixture_dir, "sb-joint.json", "h", SB_COVER, "1")
    type2 = _build(capsys, tmp_path, fixture_dir, "sb-joint.json", "h", SB_COVER, "2")
    for a, b in zip(type1.locals, type2.locals, strict=True):
        assert set(b.network.names) <= set(a.network.names)


def test_build_single_cell_on_the_chain(capsys, tmp_path, fixture_dir):
    sn = _build(capsys, tmp_path, fixture_dir, "mc3-joint.json", "x", "x0,x1", "1")
    assert len(sn.cover) == 1
    assert "y" in sn.locals[0].network.names


def test_build_respects_the_cell_budget(capsys, tmp_path, fixture_dir):
    code, _, err = run(
        capsys,
        "--cell-budget",
        "8",
        "build",
        str(fixture_dir / "sb-joint.json"),
        "--hypothesis",
        "h",
        "--cover",
        SB_COVER,
        "-o",
        str(tmp_path / "out.json"),
    )
    assert code == 1
    assert "budget" in err


# ---------- check, fixtures, bench ----------


def test_check_passes_a_consistent_model(capsys, fixture_dir):
    code, out, _ = run(capsys, "check", str(fixture_dir / "sb.json"))
    assert code == 0
    assert "consistent" in out


def test_check_reports_ratio_discrepancies(capsys, tmp_path):
    payload = {
        "variables": [{"name": "h", "values": ["h1", "h2", "h3"]}],
        "hypothesis": "h",
        "cover": [["h1", "h2", "h3"], ["h2", "h3"]],
        "kind": "type1",
        "local_networks": [
            {
                "hypotheses": ["h1", "h2", "h3"],
                "nodes": ["h"],
                "cpts": {"h": {"rows": {"": [0.2, 0.2, 0.6]}}},
            },
            {
                "hypotheses": ["h2", "h3"],
                "nodes": ["h"],
                "cpts": {"h": {"rows": {"": [0.5, 0.5]}}},
            },
        ],
    }
    path = tmp_path / "inconsistent.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "--json", "check", str(path))
    assert code == 1
    (violation,) = json.loads(out)["violations"]
    assert violation["pair"] == ["h2", "h3"]
    assert violation["discrepancy"] == pytest.approx(np.log(3.0), abs=1e-12)


def test_fixtures_command_writes_the_set(capsys, tmp_path):
    code, _, _ = run(capsys, "fixtures", "-o", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "mc3-joint.json",
        "sb-joint.json",
        "sb.json",
        "toy3.json",
        "toy3p.json",
    ]


def test_bench_json(capsys):
    code, out, _ = run(
        capsys,
        "--json",
        "--seed",
        "3",
        "bench",
        "--hypotheses",
        "2",
        "--vars-per-local",
        "4",
        "--total",
        "4",
        "--repeats",
        "1",
    )
    assert code == 0
    rows = json.loads(out)
    assert [r["mode"] for r in rows] == ["sinet", "global"]
    assert rows[0]["cells_touched"] == rows[1]["cells_touched"] == 2 * 2**4
