import json

import numpy as np
import pytest

from mixcara.basis import MonomialBasis
from mixcara.cli import main
from mixcara.measures import MixtureMeasure
from mixcara.moments import MomentVector, mixture_moments


@pytest.fixture
def workspace(tmp_path):
    basis = MonomialBasis.full_degree(5)
    mixture = MixtureMeasure(
        kind="gaussian", weights=[0.5, 0.5], means=[[-1.0], [1.0]], sigmas=[0.3, 0.3]
    )
    s = mixture_moments(basis, mixture)
    paths = {
        "basis": tmp_path / "basis.json",
        "model": tmp_path / "model.json",
        "moments": tmp_path / "moments.json",
        "dir": tmp_path,
    }
    paths["basis"].write_text(json.dumps(basis.to_json()))
    paths["model"].write_text(json.dumps(mixture.to_json()))
    paths["moments"].write_text(json.dumps(s.to_json()))
    return paths


def read_json(path):
    return json.loads(path.read_text())


def test_moments_command(workspace, capsys):
    rc = main(["moments", "--model", str(workspace["model"]), "--basis", str(workspace["basis"])])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["values"][0] == pytest.approx(1.0)
    assert data["values"][2] == pytest.approx(1.09)  # 2 * 0.5 * (1 + 0.09)


def test_moments_command_dirac_model(workspace, capsys):
    model = workspace["dir"] / "atoms.json"
    model.write_text(json.dumps({"kind": "dirac", "components": [{"c": 1.0, "x": [2.0]}]}))
    rc = main(["moments", "--model", str(model), "--basis", str(workspace["basis"])])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["values"] == [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]


def test_classify_command(workspace, capsys):
    rc = main(["classify", "--moments", str(workspace["moments"])])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["status"] == "interior"


def test_recover_command(workspace, capsys):
    rc = main(["recover", "--moments", str(workspace["moments"]), "--engine", "shared-sigma"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["success"] is True
    assert data["model"]["kind"] == "gaussian"
    assert len(data["model"]["components"]) <= 3


def test_recover_homotopy_command(workspace, capsys, tmp_path):
    gap = MonomialBasis.univariate([0, 2, 3, 5, 6])
    mix = MixtureMeasure(
        kind="gaussian", weights=[1.0, 1.0, 1.0], means=[[-1.2], [0.1], [1.3]],
        sigmas=[0.05, 0.05, 0.05],
    )
    s = mixture_moments(gap, mix)
    path = tmp_path / "gap_moments.json"
    path.write_text(json.dumps(s.to_json()))
    rc = main(["recover", "--moments", str(path), "--engine", "homotopy", "--k", "3"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["success"] is True


def test_recover_failure_exits_two(workspace, capsys, tmp_path):
    basis = MonomialBasis.full_degree(5)
    bad = MomentVector(values=np.array([1.0, 0, -1.0, 0, 1.0, 0]), basis=basis)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad.to_json()))
    rc = main(["recover", "--moments", str(path), "--engine", "shared-sigma"])
    assert rc == 2


def test_reduce_command(workspace, capsys, tmp_path):
    basis = MonomialBasis.full_degree(2)
    basis_path = tmp_path / "b2.json"
    basis_path.write_text(json.dumps(basis.to_json()))
    model = {"kind": "dirac", "components": [{"c": 0.25, "x": [float(x)]} for x in (-1, 0, 1, 2)]}
    model_path = tmp_path / "atoms4.json"
    model_path.write_text(json.dumps(model))
    rc = main(["reduce", "--basis", str(basis_path), "--model", str(model_path)])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["preservation"]["components_after"] <= 3
    assert data["preservation"]["max_abs_moment_drift"] <= 1e-10


def test_rank_command(workspace, capsys):
    rc = main([
        "rank", "--basis", str(workspace["basis"]), "--kind", "gaussian",
        "--max-k", "4", "--trials", "10", "--seed", "7",
    ])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["value"] == 2
    assert "frequencies" in data


def test_prescribe_command(workspace, capsys):
    rc = main([
        "prescribe", "--moments", str(workspace["moments"]), "--x0", "5", "--sigma0", "0.3",
    ])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert any(
        c["xi"][0] == pytest.approx(5.0) and c["sigma"] == pytest.approx(0.3)
        for c in data["components"]
    )


def test_verify_bounds_command(tmp_path, capsys):
    config = {"experiment": "na-table", "trials": 5, "seed": 1}
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps(config))
    out_dir = tmp_path / "reports"
    rc = main(["verify-bounds", "--config", str(cfg_path), "--out", str(out_dir)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["aggregate"]["bound_held"] is True
    assert (out_dir / "na-table.csv").exists()
    assert (out_dir / "na-table.json").exists()


def test_verify_bounds_flag_overrides(tmp_path, capsys):
    config = {"experiment": "reduction-stress", "trials": 99, "seed": 0}
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps(config))
    rc = main(["verify-bounds", "--config", str(cfg_path), "--trials", "3", "--seed", "4"])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["aggregate"]["trials"] == 3


def test_bad_config_exits_one(tmp_path, capsys):
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps({"experiment": "unknown"}))
    assert main(["verify-bounds", "--config", str(cfg_path)]) == 1


def test_missing_file_exits_one(tmp_path):
    assert main(["classify", "--moments", str(tmp_path / "nope.json")]) == 1


def test_out_flag_writes_file(workspace, tmp_path):
    out = tmp_path / "result.json"
    rc = main([
        "moments", "--model", str(workspace["model"]), "--basis", str(workspace["basis"]),
        "--out", str(out),
    ])
    assert rc == 0
    assert "values" in read_json(out)
