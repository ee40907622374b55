import json
import os

import pytest

from reference_systems import config_path, matrix

from decentviab.cli import main
from decentviab.grid import GridBox, GridSet
from decentviab.grid.gridio import read_grid, write_grid


def read_json(path):
    with open(path) as f:
        return json.load(f)


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def decoupled(tmp_path):
    inf_ball = {"type": "ball", "center": [0.0, 0.0], "radius": 0.8,
                "norm": "inf"}
    square = {"lower": [-1.0, -1.0], "upper": [1.0, 1.0], "nodes": [9, 9]}
    return write_config(tmp_path, {
        "version": 1,
        "system": {"A": matrix([[0.0, 1.0, 0.0, 0.0],
                                [0.2, -0.5, 0.0, 0.0],
                                [0.0, 0.0, -0.5, 1.0],
                                [0.0, 0.0, 0.0, -0.3]]),
                   "B": matrix([[0.0, 0.0], [1.0, 0.0],
                                [0.0, 0.0], [0.0, 1.0]])},
        "split": 2,
        "transform": "standard",
        "horizon": 1.0,
        "steps": 4,
        "grids": {"upper": square, "lower": square},
        "constraint": {"upper": inf_ball, "lower": inf_ball},
        "inputs": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
    })


#
# Test for usage errors
#

@pytest.mark.parametrize("argv", [
    [],
    ["simulate", "--out", "x"],
    ["kernel", "--config", "c.json"],
    ["pipeline", "--config", "c.json", "--out", "x", "--delta", "many"],
])
def test_usage_errors_exit_with_one(argv, capsys):
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert json.loads(err.strip().splitlines()[-1])["kind"] == "parameter"


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert capsys.readouterr().out.strip()


def test_malformed_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json")
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", str(path), "--out", out]) == 1
    manifest = read_json(os.path.join(out, "manifest.json"))
    assert manifest["status"] == "parameter"


def test_missing_config(tmp_path):
    out = str(tmp_path / "out")
    assert main(["decompose", "--config", str(tmp_path / "none.json"),
                 "--out", out]) == 1


def test_zero_steps(tmp_path):
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", config_path("unstable1d.json"),
                 "--out", out, "--steps", "0"]) == 1


#
# Test for the kernel command
#

def test_unstable_kernel_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", config_path("unstable1d.json"),
                 "--out", out]) == 0
    report = read_json(os.path.join(out, "report.json"))
    assert report["mode"] == "viab"
    assert report["analytic"]["within_tolerance"]
    assert len(report["trace_counts"]) == 3
    kernel = read_grid(os.path.join(out, "kernel.grid"))
    assert kernel.count == report["kernel_nodes"]
    assert os.path.isfile(os.path.join(out, "trace", "index.json"))
    manifest = read_json(os.path.join(out, "manifest.json"))
    assert manifest["status"] == "ok"
    assert manifest["command"] == "kernel"
    assert "viab" in manifest["stages"]


def test_drift_invariance_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", config_path("drift1d.json"),
                 "--out", out, "--threads", "2"]) == 0
    report = read_json(os.path.join(out, "report.json"))
    assert report["mode"] == "inv"
    assert len(report["shrinkage"]) == 50
    assert report["analytic"]["within_tolerance"]


def test_counterexample_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", config_path("counterexample.json"),
                 "--out", out, "--seed", "7"]) == 0
    report = read_json(os.path.join(out, "report.json"))
    assert report["certify"]["viable"] is False
    assert report["certify"]["in_kernel"] is False
    assert read_json(os.path.join(out, "manifest.json"))["seed"] == 7


def test_empty_constraint_exits_with_two(tmp_path, capsys):
    obj = read_json(config_path("unstable1d.json"))
    obj["constraint"] = {"type": "box", "lower": [0.005], "upper": [0.015]}
    out = str(tmp_path / "out")
    assert main(["kernel", "--config", write_config(tmp_path, obj),
                 "--out", out]) == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["kind"] == "empty-set"
    assert read_json(os.path.join(out, "manifest.json"))["status"] == \
        "empty-set"


#
# Test for the decompose and pipeline commands
#

def test_decompose_cart(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["decompose", "--config", config_path("cart.json"),
                 "--out", out]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["delta"] == 100.0
    dec = read_json(os.path.join(out, "decomposition.json"))
    assert dec["kind"] == "modified"
    assert dec["k"] == 2
    assert not os.path.exists(os.path.join(out, "delta_sweep.csv"))


def test_decompose_sixd(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["decompose", "--config", config_path("sixd.json"),
                 "--out", out]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["delta"] == -25.0
    dec = read_json(os.path.join(out, "decomposition.json"))
    assert dec["k"] == 3


@pytest.mark.slow
def test_decompose_ex4d_searches_delta(tmp_path):
    out = str(tmp_path / "out")
    assert main(["decompose", "--config", config_path("ex4d.json"),
                 "--out", out]) == 0
    assert os.path.exists(os.path.join(out, "delta_sweep.csv"))


def test_pipeline_with_comparison(tmp_path):
    out = str(tmp_path / "out")
    assert main(["pipeline", "--config", decoupled(tmp_path), "--out", out,
                 "--compare"]) == 0
    for name in ("decomposition.json", "product.grid", "centralized.grid",
                 "backmap.csv", "backmap_cells.csv", "report.json"):
        assert os.path.isfile(os.path.join(out, name)), name
    assert os.path.isfile(os.path.join(out, "vtrace", "index.json"))
    assert os.path.isfile(os.path.join(out, "ctrace", "index.json"))
    report = read_json(os.path.join(out, "report.json"))
    assert report["comparison"]["contained"]
    assert report["comparison"]["coverage"] == 1.0
    assert report["monotone"]
    assert read_grid(os.path.join(out, "product.grid")) == \
        read_grid(os.path.join(out, "centralized.grid"))


def test_pipeline_without_comparison(tmp_path):
    out = str(tmp_path / "out")
    assert main(["pipeline", "--config", decoupled(tmp_path), "--out", out,
                 "--steps", "2"]) == 0
    report = read_json(os.path.join(out, "report.json"))
    assert "comparison" not in report
    assert len(report["v_trace"]) == 3
    assert not os.path.exists(os.path.join(out, "centralized.grid"))


#
# Test for the plot command
#

def test_plot_of_an_empty_set(tmp_path):
    dump = str(tmp_path / "empty.grid")
    write_grid(dump, GridSet.empty(GridBox([-1.0, -1.0], [1.0, 1.0],
                                           [5, 5])))
    out = str(tmp_path / "fig")
    assert main(["plot", "--grid", dump, "--out", out]) == 0
    assert os.path.isfile(os.path.join(out, "empty.svg"))
    with open(os.path.join(out, "empty_outline.csv")) as f:
        assert f.read().splitlines() == ["x,y"]


def test_plot_of_a_trace(tmp_path):
    out = str(tmp_path / "run")
    assert main(["kernel", "--config", config_path("counterexample.json"),
                 "--out", out, "--steps", "2"]) == 0
    fig = str(tmp_path / "fig")
    assert main(["plot", "--grid", os.path.join(out, "trace"),
                 os.path.join(out, "kernel.grid"), "--out", fig]) == 0
    assert os.path.isfile(os.path.join(fig, "trace.svg"))
    assert os.path.isfile(os.path.join(fig, "kernel.svg"))


def test_plot_of_a_sweep(tmp_path):
    sweep = tmp_path / "sweep.csv"
    sweep.write_text("delta,feasible,f,upper_bound,gamma_norm\n"
                     "-100,1,2.5,3.0,2.0\n"
                     "-1,0,nan,nan,2.0\n"
                     "10,0,nan,nan,2.0\n"
                     "50,1,1.9,2.4,2.0\n"
                     "1000,1,2.01,2.1,2.0\n")
    out = str(tmp_path / "fig")
    assert main(["plot", "--sweep", str(sweep), "--out", out]) == 0
    assert os.path.isfile(os.path.join(out, "delta_sweep.svg"))


def test_plot_needs_input(tmp_path):
    assert main(["plot", "--out", str(tmp_path / "fig")]) == 1


def test_plot_rejects_bad_slices(tmp_path):
    dump = str(tmp_path / "full.grid")
    write_grid(dump, GridSet.full(GridBox([-1.0, -1.0], [1.0, 1.0],
                                          [5, 5])))
    assert main(["plot", "--grid", dump, "--out", str(tmp_path / "fig"),
                 "--slice", "0,5"]) == 1
