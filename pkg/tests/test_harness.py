import csv
import hashlib
import io
import json
import math

import numpy as np
import pytest

from spectral_turan.cli import main
from spectral_turan.counting import find_clique, is_f_free, pattern
from spectral_turan.graph import (
    Graph,
    edit_count_labels,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_gnp,
    gen_star,
    gen_turan,
)
from spectral_turan.harness import (
    ExperimentConfig,
    anneal,
    bht_ceiling,
    certify,
    cmd_analyze,
    cmd_bht_search,
    cmd_corpus,
    cmd_k2t_experiment,
    cmd_stability_sweep,
    k2t_trial,
    run,
    to_csv,
    trial_seeds,
)
from spectral_turan.io import from_graph6, save_graph
from spectral_turan.stability import partition_search, perturb_preserving


def rows_named(res, name):
    return [r for r in res.rows if r.get("bound") == name]


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0] == "# spectral-turan csv v1"
    assert lines[1].startswith("# config ")
    return json.loads(lines[1][len("# config "):]), list(csv.DictReader(io.StringIO("\n".join(lines[2:]))))


# --- analyze ----------------------------------------------------------------


def test_analyze_turan_has_equality_row():
    res = cmd_analyze(ExperimentConfig("analyze", r=3), gen_turan(6, 3)[0])
    (row,) = rows_named(res, "nikiforov_edge")
    assert row["equality"] and row["holds"]
    assert row["lhs"] == pytest.approx(4.0, abs=1e-9)  # T_{6,3} = K_{2,2,2}
    assert res.exit_code == 0


def test_analyze_c5():
    res = cmd_analyze(ExperimentConfig("analyze"), gen_cycle(5))
    summary = res.rows[0]
    assert summary["triangle_free"] and summary["clique_number"] == 2
    (row,) = rows_named(res, "nosal")
    assert row["lhs"] == pytest.approx(2.0) and row["rhs"] == pytest.approx(math.sqrt(5))
    assert row["holds"] and not row["equality"]


def test_analyze_star():
    res = cmd_analyze(ExperimentConfig("analyze"), gen_star(50))
    summary = res.rows[0]
    assert summary["lambda"] == pytest.approx(math.sqrt(50), abs=1e-9)
    assert summary["c4_free"]
    (row,) = rows_named(res, "nosal")
    assert row["equality"]


def test_analyze_rows_carry_provenance():
    cfg = ExperimentConfig("analyze", seed=7, tol=1e-7)
    res = cmd_analyze(cfg, gen_complete(5))
    for row in res.rows:
        assert row["seed"] == 7 and row["numeric_tol"] == 1e-7


def test_analyze_forbidden_graph_row():
    cfg = ExperimentConfig("analyze", f="K4", eps=[0.1, 0.2])
    res = cmd_analyze(cfg, gen_turan(9, 3)[0])
    assert res.rows[0]["f_free"] is True
    assert len(rows_named(res, "edge_spectral_ess")) == 2


# --- corpus -----------------------------------------------------------------


def test_corpus_n7_has_no_violations(corpus7):
    res = cmd_corpus(ExperimentConfig("corpus"), corpus7)
    assert res.exit_code == 0 and res.summary["violations"] == []
    agg = res.summary["aggregate"]
    for key in ("nikiforov_edge[r=2]", "walk_bound[ell=4][r=2]", "sos_straus[ell=3]", "codegree_lower"):
        assert agg[key]["checked"] > 0 and agg[key]["violations"] == 0
    # triangle-free sharpness: stars meet sqrt(m) exactly
    assert agg["nosal"]["min_slack"] == pytest.approx(0, abs=1e-9)
    assert agg["nosal"]["equalities"] > 0


def test_corpus_reports_witness_on_violation():
    # a hair-trigger tolerance turns the equality cases into violations
    cfg = ExperimentConfig("corpus", tol=-1e-3)
    graphs = [gen_complete_bipartite(2, 3)[0], gen_cycle(5)]
    res = cmd_corpus(cfg, graphs)
    assert res.exit_code == 1
    keys = {k for k, _ in res.summary["violations"]}
    assert "nosal" in keys
    g6 = res.summary["aggregate"]["nosal"]["witness"]
    assert from_graph6(g6).m == 6


# --- K_{2,t} ----------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 7, 12])
def test_k2t_complete(n):
    row = k2t_trial(gen_complete(n), 0.05)
    assert row["above_sqrt_m"] and row["t"] == n - 2


@pytest.mark.parametrize("a", [3, 6])
def test_k2t_balanced_biclique_is_boundary(a):
    row = k2t_trial(gen_complete_bipartite(a, a)[0], 0.05)
    assert row["lambda"] == pytest.approx(a, abs=1e-9)
    assert not row["above_sqrt_m"]


def test_k2t_experiment_small():
    cfg = ExperimentConfig("k2t", n=40, eps=[0.05], trials=5, seed=3)
    res = cmd_k2t_experiment(cfg)
    trials = [r for r in res.rows if "trial" in r]
    assert len(trials) == 5
    hyp = [r for r in trials if r["above_sqrt_m"]]
    assert res.summary["above_sqrt_m"] == len(hyp)
    assert res.summary["c_fit"] == pytest.approx(max(math.sqrt(r["m"]) / 2 - r["t"] for r in hyp))
    for r, s in zip(trials, trial_seeds(3, 5)):
        assert r["m"] == gen_gnp(40, 0.55, s).m


def test_trial_seeds_are_prefix_stable():
    assert trial_seeds(5, 10)[:4] == trial_seeds(5, 4)
    assert len(set(trial_seeds(5, 50))) == 50


# --- BHT search -------------------------------------------------------------


def test_bht_ceilings():
    assert bht_ceiling(pattern("K3"), 12) == pytest.approx(math.sqrt(12))
    assert bht_ceiling(pattern("K4"), 12) == pytest.approx(4.0)
    assert bht_ceiling(pattern("K2,3"), 25) == pytest.approx(5.0)


def test_bht_triangle_m12():
    res = cmd_bht_search(ExperimentConfig("bht-search", f="K3", m=12, iterations=3000, restarts=4))
    assert res.exit_code == 0
    assert res.summary["best_lambda"] == pytest.approx(math.sqrt(12), abs=1e-3)
    g = from_graph6(res.artifact)
    assert g.m == 12 and find_clique(g, 3) is None


def test_bht_k4_m12():
    res = cmd_bht_search(ExperimentConfig("bht-search", f="K4", m=12, iterations=3000, restarts=8))
    assert res.summary["best_lambda"] == pytest.approx(4.0, abs=1e-3)
    assert res.summary["best_is_f_free"]


@pytest.mark.slow
def test_bht_k23_m25():
    res = cmd_bht_search(ExperimentConfig("bht-search", f="K2,3", m=25, iterations=20000, restarts=2))
    assert res.summary["best_lambda"] >= 5 - 1e-9
    assert is_f_free(from_graph6(res.artifact), pattern("K2,3"))[0]


def test_bht_infeasible():
    # 5 vertices hold at most 6 triangle-free edges
    res = cmd_bht_search(ExperimentConfig("bht-search", f="K3", m=8, vertices=5, iterations=10, restarts=2))
    assert res.exit_code == 2 and not res.summary["feasible"]


def test_anneal_states_stay_feasible():
    f = pattern("K3")
    st, ok = anneal(f, 10, 400, seed=1)
    assert ok
    lams = [mv[3] for mv in st.moves]
    assert lams == sorted(lams)
    assert st.best.m == 10 and st.current.m == 10
    assert find_clique(st.best, 3) is None and find_clique(st.current, 3) is None


# --- stability sweep and certify --------------------------------------------


def test_sweep_unperturbed_rows_are_exact():
    cfg = ExperimentConfig("stability-sweep", family="turan", size=12, perturb=[0.0], eps=[0.1, 0.2], trials=2)
    res = cmd_stability_sweep(cfg)
    trials = [r for r in res.rows if "trial" in r]
    assert trials and all(r["edit_count"] == 0 for r in trials)
    assert all(c["mean_edit_fraction"] == 0 for c in res.summary["cells"])


def test_sweep_one_percent_turan_30():
    cfg = ExperimentConfig("stability-sweep", family="turan", size=30, perturb=[0.01], eps=[0.1], trials=5)
    res = cmd_stability_sweep(cfg)
    base = gen_turan(30, 3)
    for r in (r for r in res.rows if "trial" in r):
        assert r["edit_fraction"] <= 0.1
        # the original template costs exactly the flips made, bounding the optimum
        g, done = perturb_preserving(base[0], pattern("K4"), r["edits"], r["trial_seed"])
        assert r["edit_count"] <= edit_count_labels(g, base[1].labels(30)) == done
        # exact oracle on a 12-vertex subsample
        rng = np.random.default_rng(r["trial_seed"])
        sub = sorted(rng.choice(30, size=12, replace=False).tolist())
        h, _ = g.induced(sub)
        _, best = partition_search(h, range(12), 3, "exact")
        assert best <= edit_count_labels(h, base[1].labels(30)[sub])


def test_sweep_heavy_perturbation_is_negative_control():
    cfg = ExperimentConfig("stability-sweep", family="turan", size=30, perturb=[0.3], eps=[0.1], trials=3)
    (cell,) = cmd_stability_sweep(cfg).summary["cells"]
    assert cell["hypothesis_rate"] == 0 and cell["pass_rate"] == 0


def test_certify_helper():
    cert = certify(gen_complete_bipartite(4, 5)[0], pattern("K3"), 0.1)
    assert cert.kind == "biclique" and cert.edit_count == 0


# --- CSV and CLI ------------------------------------------------------------


def test_csv_header_and_float_format():
    cfg = ExperimentConfig("analyze")
    text = to_csv([{"a": 1 / 3, "b": True, "c": None}, {"d": [1, 2]}], cfg)
    conf, rows = parse_csv(text)
    assert conf["command"] == "analyze"
    assert rows[0] == {"a": "0.333333333333", "b": "true", "c": "", "d": ""}
    assert rows[1]["d"] == "1;2"


@pytest.fixture
def files(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECTRAL_TURAN_CACHE", str(tmp_path / "cache"))
    save_graph(gen_turan(6, 3)[0], tmp_path / "t63.txt")
    save_graph(gen_cycle(5), tmp_path / "c5.txt")
    (tmp_path / "bad.txt").write_text("0 1\n1 x\n")
    return tmp_path


def test_cli_analyze_ok(files, capsys):
    assert main(["analyze", "--input", str(files / "t63.txt"), "--r", "3"]) == 0
    _, rows = parse_csv(capsys.readouterr().out)
    assert any(r["bound"] == "nikiforov_edge" and r["equality"] == "true" for r in rows)


def test_cli_exit_codes(files, capsys):
    assert main(["analyze", "--input", str(files / "missing.txt")]) == 2
    assert main(["analyze", "--input", str(files / "bad.txt")]) == 2
    assert main(["analyze"]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["analyze", "--input", str(files / "c5.txt"), "--eps", "x"]) == 2
    # a negative tolerance flags exact equalities as violations
    assert main(["analyze", "--input", str(files / "t63.txt"), "--r", "3", "--tol=-1e-3"]) == 1
    assert "violation" in capsys.readouterr().err


def test_cli_certify_writes_certificate(files):
    out = files / "cert.csv"
    assert main(["certify", "--input", str(files / "t63.txt"), "--f", "K4", "--eps", "0.1", "--out", str(out)]) == 0
    text = (files / "cert.cert").read_text()
    assert text.startswith("spectral-turan certificate v1") and "edit_count 0" in text


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.mark.parametrize("argv", [
    ["corpus", "--max-n", "5"],
    ["k2t", "--n", "30", "--trials", "3", "--seed", "4"],
    ["bht-search", "--f", "K3", "--m", "6", "--iterations", "200", "--restarts", "2"],
    ["stability-sweep", "--size", "9", "--trials", "2", "--perturb", "0,0.05"],
])
def test_cli_rerun_is_byte_identical(files, argv):
    out = files / "run.csv"
    assert main(argv + ["--out", str(out)]) == 0
    first = digest(out)
    assert main(argv + ["--out", str(out)]) == 0
    assert digest(out) == first


def test_run_dispatch():
    res = run(ExperimentConfig("k2t", n=20, trials=2))
    assert res.summary["trials"] == 2
