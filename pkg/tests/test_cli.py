"""Command line interface tests: report shapes, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from strata.cli import main
from strata.constructions import build_recipe
from strata.filtered_complex import FilteredComplex

STRATA_ONE = '{"strata": [{"level": 0, "id": 0, "value": 1}, ' \
             '{"level": 0, "id": 1, "value": 1}]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    report = json.loads(out)
    assert report["schema"] == "strata/1"
    return report


# ---------------------------------------------------------------------------
# make


def test_make_emits_a_valid_complex(capsys):
    report = run_json(capsys, "make", "--recipe", "cone(rp2)")
    rebuilt = FilteredComplex.from_json(report)
    assert rebuilt.dumps() == build_recipe("cone(rp2)").dumps()
    assert report["summary"]["formal_dim"] == 3
    assert any(not st["regular"] for st in report["summary"]["strata"])


def test_make_writes_output_file(capsys, tmp_path):
    target = tmp_path / "space.json"
    code, out, _ = run(capsys, "make", "--recipe", "sphere(2)",
                       "-o", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert data["formal_dim"] == 2


def test_made_file_feeds_back_into_space_flag(capsys, tmp_path):
    target = tmp_path / "srp3.json"
    run(capsys, "make", "--recipe", "sigma_rp3", "-o", str(target))
    report = run_json(capsys, "homology", "--space", str(target),
                      "--perversity", "zero", "--ring", "Z")
    assert report["groups"][0]["group"] == "Z"


# ---------------------------------------------------------------------------
# homology and blowup


def test_homology_tame_suspension_groups(capsys):
    report = run_json(capsys, "homology", "--space", "sigma_rp2",
                      "--perversity", "zero", "--ring", "Z", "--tame")
    assert [g["group"] for g in report["groups"]] == ["Z", "Z/2", "0", "0"]
    assert report["variant"] == "tame"


def test_homology_defaults_to_classical(capsys):
    report = run_json(capsys, "homology", "--space", "sigma_rp2",
                      "--perversity", "zero", "--ring", "Z")
    assert report["variant"] == "classical"


def test_homology_dump_basis_triplets(capsys):
    report = run_json(capsys, "homology", "--space", "torus",
                      "--perversity", "zero", "--ring", "Z", "--dump-basis")
    basis = report["basis"]
    assert set(basis) == {"0", "1", "2"}
    for triplets in basis.values():
        for row, col, value in triplets:
            assert isinstance(row, int) and isinstance(col, int)
            assert value != 0
    degree_one_cols = {col for _, col, _ in basis["1"]}
    assert len(degree_one_cols) >= 2


def test_blowup_reports_cohomology(capsys):
    report = run_json(capsys, "blowup", "--space", "sigma_rp2",
                      "--perversity", "1", "--ring", "F2")
    assert [g["group"] for g in report["groups"]] == ["Z", "Z", "0", "Z"]
    assert report["ring"] == "F2"


# ---------------------------------------------------------------------------
# duality, pairing, pair


def test_duality_reports_iso_per_degree(capsys):
    report = run_json(capsys, "duality", "--space", "sigma_rp3",
                      "--perversity", STRATA_ONE, "--ring", "Z")
    assert report["iso"] is True
    by_degree = {d["degree"]: d for d in report["degrees"]}
    assert by_degree[3]["target"] == "Z/2"
    assert by_degree[0]["matrix"] in ([[1]], [[-1]])
    assert all(d["iso"] for d in report["degrees"])


def test_duality_math_failure_exits_two(capsys, monkeypatch):
    import strata.cli as cli

    class Fake:
        iso = False
        degrees = []

    monkeypatch.setattr(cli, "duality", lambda *a, **k: Fake())
    code, out, _ = run(capsys, "duality", "--space", "sphere(2)",
                       "--perversity", "zero")
    assert code == 2
    assert json.loads(out)["iso"] is False


def test_pairing_sphere_is_unimodular(capsys):
    report = run_json(capsys, "pairing", "--space", "sphere(2)",
                      "--p", "zero", "--k", "0", "--ring", "Z")
    assert report["matrix"] in ([[1]], [[-1]])
    assert report["unimodular"] is True
    assert report["nondegenerate"] is True


def test_pair_with_explicit_perversities(capsys):
    report = run_json(capsys, "pair", "--space", "sigma_rp3",
                      "--p", "1", "--q", "1", "--k", "0", "--ring", "Q")
    assert report["command"] == "pair"
    assert report["q"] == "1"
    assert report["degree"] == 0 and report["codegree"] == 4


def test_pair_never_exits_two_on_degeneracy(capsys):
    code, out, _ = run(capsys, "pair", "--space", "sigma_rp3",
                       "--p", "-2", "--q", "-2", "--k", "1", "--ring", "Q")
    assert code == 0
    assert json.loads(out)["schema"] == "strata/1"


# ---------------------------------------------------------------------------
# check-products and sweep


def test_check_products_runs_all_identities(capsys):
    report = run_json(capsys, "check-products", "--space", "torus",
                      "--trials", "25", "--seed", "3")
    assert report["failures"] == 0
    assert all(c["runs"] == 25 for c in report["checks"].values())


def test_sweep_sequential_and_parallel_agree(capsys):
    code, seq, _ = run(capsys, "sweep", "--space", "sigma_rp2",
                       "--rings", "Z,F2")
    assert code == 0
    code, par, _ = run(capsys, "sweep", "--space", "sigma_rp2",
                       "--rings", "Z,F2", "--jobs", "3")
    assert code == 0
    assert seq == par
    report = json.loads(seq)
    assert report["ok"] is True
    assert report["counts"]["failed"] == 0
    assert report["counts"]["non_orientable"] == report["counts"]["iso"] > 0
    statuses = {(json.dumps(c["perversity"]), c["ring"]): c["status"]
                for c in report["cases"]}
    assert all(v == "non_orientable" for (_, ring), v in statuses.items()
               if ring == "Z")


def test_sweep_on_a_manifold_has_one_empty_assignment(capsys):
    report = run_json(capsys, "sweep", "--space", "torus",
                      "--rings", "Z")
    assert report["strata"] == []
    assert len(report["cases"]) == 1
    assert report["cases"][0]["perversity"] == {}
    assert report["cases"][0]["status"] == "iso"


# ---------------------------------------------------------------------------
# exit codes and determinism


@pytest.mark.parametrize("argv", [
    ("homology", "--space", "nosuch.json", "--perversity", "zero"),
    ("homology", "--space", "torus", "--perversity", "bogus{"),
    ("homology", "--space", "torus", "--perversity", "zero",
     "--ring", "F9"),
    ("duality", "--space", "sigma_rp2", "--perversity", "5",
     "--ring", "Z"),
    ("no-such-command",),
    (),
])
def test_validation_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_reports_are_byte_identical(capsys):
    argv = ("duality", "--space", "sigma_rp3", "--perversity", "1",
            "--ring", "Q", "--seed", "11", "--check-representatives")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_module_entry_point_runs_as_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "strata.cli", "pairing", "--space",
         "sphere(1)", "--p", "zero", "--k", "0"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["unimodular"] is True
