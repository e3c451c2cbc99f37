import json

import pytest

from hermikron.bundles import BundleDescriptor, realize
from hermikron.canonical import hkcf_to_json, random_congruence_sample
from hermikron.cli import main
from hermikron.pencil import pencil_to_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_text_and_csv(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--n", "4")
    assert code == 0 and out.startswith("9 generic bundles")
    code, out, _ = run_cli(capsys, "enumerate", "--n", "5", "--r", "3", "--csv")
    lines = out.splitlines()
    assert lines[0] == "n,r,c,d,alpha,s,codim_orbit,codim_bundle,pos,neg,zero"
    assert len(lines) == 1 + 6
    assert lines[1].split(",")[6:8] == ["23", "20"]


def test_enumerate_json(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--n", "6", "--r", "4", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == obj["countFormula"] == 9


def test_codim_desc_and_hkcf(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "codim", "--desc", "4,2,1,0", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["ok"] and obj["orbit"] == 18 and obj["bundle"] == 16
    path = tmp_path / "h.json"
    path.write_text(json.dumps(hkcf_to_json(realize(BundleDescriptor(3, 3, 1, 1)))))
    code, out, _ = run_cli(capsys, "codim", "--hkcf", str(path), "--float")
    assert code == 0 and json.loads(out)["orbit"] == 3


def test_codim_tables(capsys):
    code, out, _ = run_cli(capsys, "codim", "--verify-tables", "--kmax", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_codim_needs_input(capsys):
    code, _, err = run_cli(capsys, "codim")
    assert code == 1 and "error" in err


def test_perturb(capsys, tmp_path):
    out_file = tmp_path / "p.json"
    code, _, _ = run_cli(capsys, "perturb", "--family", "finiteJordan",
                         "--params", "k=3,a=0.5,sign=-1,eps=0.01,m=10", "--verify",
                         "--out", str(out_file))
    obj = json.loads(out_file.read_text())
    assert code == 0 and obj["ok"]
    code, out, _ = run_cli(capsys, "perturb", "--family", "singularAbsorb",
                           "--params", "k=1,d=1,mu=1+2i,eps=0.001", "--verify")
    assert code == 0 and json.loads(out)["ok"]
    code, _, err = run_cli(capsys, "perturb", "--family", "finiteJordan", "--params", "k=1")
    assert code == 1


def test_infer_match(capsys, tmp_path):
    desc = BundleDescriptor(5, 3, 1, 1)
    path = tmp_path / "pencil.json"
    path.write_text(json.dumps(pencil_to_json(random_congruence_sample(realize(desc), seed=4))))
    code, out, _ = run_cli(capsys, "infer", "--pencil", str(path), "--match", "5,3,1,1")
    assert code == 0 and json.loads(out)["match"]
    code, out, _ = run_cli(capsys, "infer", "--pencil", str(path), "--match", "5,3,0,1")
    assert code == 2 and not json.loads(out)["match"]
    code, _, _ = run_cli(capsys, "infer", "--pencil", str(tmp_path / "missing.json"))
    assert code == 1


def test_experiment_csv_is_seeded(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, workers in ((a, "1"), (b, "3")):
        code, _, _ = run_cli(capsys, "experiment", "regular", "--n", "6", "--trials", "8",
                             "--seed", "5", "--workers", workers, "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "j,real_count,max_abs_imag"


def test_experiment_rank_verify(capsys):
    code, out, _ = run_cli(capsys, "experiment", "rank", "--n", "6", "--r", "4", "--trials", "5",
                           "--verify", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["config"]["generator"] == "g1"
    assert all(row["matched"] for row in obj["rows"])


def test_experiment_plotdata(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "experiment", "regular", "--n", "4", "--trials", "3",
                         "--plotdata", "--out", str(tmp_path / "r.csv"))
    assert code == 0 and (tmp_path / "r_plot.py").exists()


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        main(["nope"])
