"""Experiment drivers behind the command line: corpus sweeps, random models,
extremal search and stability sweeps.  Everything writes plain CSV rows."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds as B
from .counting import (
    chromatic_number,
    clique_number,
    codegree_data,
    find_clique,
    find_k2t,
    find_subgraph_through_edge,
    is_f_free,
    pattern,
)
from .graph import Graph, gen_complete_bipartite, gen_gnp, gen_turan, norm_edge
from .io import exhaustive_corpus, load_graph, load_graphs, to_graph6
from .spectral import perron
from .stability import (
    StabilityCertificate,
    bipartite_like_certificate,
    perturb_preserving,
    turan_certificate,
)

CSV_HEADER = "# spectral-turan csv v1"
EPS_SWEEP = (0.0, 0.01, 0.05, 0.1)


@dataclass
class ExperimentConfig:
    command: str
    input: str | None = None
    format: str = "edge-list"
    f: str | None = None
    r: int | None = None
    eps: list[float] = field(default_factory=lambda: [0.1])
    delta: float | None = None
    seed: int = 0
    trials: int = 10
    out: str | None = None
    tol: float = B.NUMERIC_TOL
    equality_tol: float = B.EQUALITY_TOL
    mode: str = "auto"
    n: int = 200
    p: float | None = None
    m: int = 12
    iterations: int = 3000
    restarts: int = 8
    vertices: int | None = None
    max_n: int = 7
    ell_max: int = 4
    family: str = "turan"
    size: int = 30
    perturb: list[float] = field(default_factory=lambda: [0.0, 0.01, 0.02, 0.05, 0.3])

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class RunResult:
    rows: list[dict]
    summary: dict
    exit_code: int = 0
    artifact: str | None = None


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    return str(v)


def to_csv(rows: list[dict], config: ExperimentConfig | None = None) -> str:
    """Versioned CSV; columns are the union of row keys in first-seen order."""
    cols: list[str] = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    buf = _io.StringIO()
    buf.write(CSV_HEADER + "\n")
    if config is not None:
        buf.write("# config " + config.to_json() + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def _provenance(cfg: ExperimentConfig) -> dict:
    return {"seed": cfg.seed, "numeric_tol": cfg.tol, "equality_tol": cfg.equality_tol}


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Independent per-trial seeds spawned from the master seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


# --- analyze ----------------------------------------------------------------


def _reports_for(g: Graph, cfg: ExperimentConfig, r_values=None, ell_max: int = 4,
                 omega: int | None = None) -> list[B.BoundReport]:
    """All bound checks that apply to g."""
    tol, etol = cfg.tol, cfg.equality_tol
    if g.m == 0:
        return []
    p = perron(g)
    w = clique_number(g) if omega is None else omega
    out = [B.check_stanley(g, p, tol, etol), *B.check_rayleigh_range(g, p, tol, etol),
           B.check_codegree_lower(g, p, tol, etol), B.check_max_degree(g, p, tol, etol)]
    if r_values is None:
        r_values = [cfg.r] if cfg.r else [max(2, w)]
    for r in r_values:
        if r < w:
            continue
        out.append(B.check_nikiforov_edge(g, r, p, tol, etol))
        for ell in range(1, ell_max + 1):
            out.append(B.check_walk_bound(g, r, ell, p=p, tol=tol, eq_tol=etol))
    for ell in range(max(2, w), max(2, w, ell_max) + 1):
        if ell <= 8:
            out.append(B.check_clique_poly(g, ell, p, tol, etol))
    if w <= 8:
        out.append(B.check_sos_straus(g, max(1, w), tol, etol))
    if w <= 2:
        out.append(B.check_nosal(g, p, tol, etol))
    if w <= 3:
        out.append(B.check_k3_stability(g, 0.005, p=p, tol=tol, eq_tol=etol))
    return out


def _graph_summary(g: Graph) -> dict:
    row = {"n": g.n, "m": g.m}
    if g.m == 0:
        return row
    p = perron(g)
    cd = codegree_data(g)
    row.update({
        "lambda": p.lam,
        "lambda_over_sqrt_m": p.lam / math.sqrt(g.m),
        "perron_residual": p.residual,
        "perron_iterations": p.iterations,
        "perron_tie": p.tie,
        "clique_number": clique_number(g),
        "triangle_free": find_clique(g, 3) is None,
        "c4_free": cd.t <= 1,
        "max_codegree": cd.t,
    })
    return row


def cmd_analyze(cfg: ExperimentConfig, g: Graph | None = None) -> RunResult:
    if g is None:
        g = load_graph(cfg.input, cfg.format)
    prov = _provenance(cfg)
    summary = {"bound": "summary", **_graph_summary(g), **prov}
    rows = [summary]
    reports = _reports_for(g, cfg, ell_max=cfg.ell_max)
    if cfg.f:
        f = pattern(cfg.f)
        free, _ = is_f_free(g, f)
        summary["f"] = cfg.f
        summary["f_free"] = free
        if free and chromatic_number(f) >= 3 and g.m:
            for eps in cfg.eps:
                reports.append(B.check_edge_spectral_ess(g, f, eps, tol=cfg.tol,
                                                         eq_tol=cfg.equality_tol, assume_free=True))
    for rep in reports:
        rows.append({**rep.as_row(), **prov})
    bad = [r for r in reports if r.violated]
    return RunResult(rows, {"violations": len(bad), "bounds": len(reports)}, 1 if bad else 0)


# --- corpus -----------------------------------------------------------------


def corpus_graphs(cfg: ExperimentConfig) -> list[Graph]:
    if cfg.input:
        return load_graphs(cfg.input, "graph6")
    return exhaustive_corpus(cfg.max_n)


def cmd_corpus(cfg: ExperimentConfig, graphs: list[Graph] | None = None) -> RunResult:
    """Every bound on every graph; the fold keeps the minimum slack per bound."""
    if graphs is None:
        graphs = corpus_graphs(cfg)
    prov = _provenance(cfg)
    rows: list[dict] = []
    agg: dict[str, dict] = {}
    violations = []
    for idx, g in enumerate(graphs):
        if g.m == 0:
            continue
        w = clique_number(g)
        g6 = to_graph6(g)
        for rep in _reports_for(g, cfg, r_values=[r for r in (2, 3, 4) if r >= w],
                                ell_max=cfg.ell_max, omega=w):
            key = rep.name if "ell" not in rep.params else f"{rep.name}[ell={rep.params['ell']}]"
            if "r" in rep.params:
                key += f"[r={rep.params['r']}]"
            rows.append({"graph": idx, "graph6": g6, **rep.as_row(), **prov})
            a = agg.setdefault(key, {"bound": key, "checked": 0, "min_slack": math.inf,
                                     "equalities": 0, "violations": 0, "witness": ""})
            a["checked"] += 1
            a["equalities"] += rep.equality_flag
            if rep.slack < a["min_slack"]:
                a["min_slack"], a["argmin_graph6"] = rep.slack, g6
            if rep.violated:
                a["violations"] += 1
                a["witness"] = a["witness"] or g6
                violations.append((key, g6))
    agg_rows = [{"aggregate": True, **agg[k], **prov} for k in sorted(agg)]
    return RunResult(rows + agg_rows,
                     {"graphs": len(graphs), "violations": violations, "aggregate": agg},
                     1 if violations else 0)


# --- K_{2,t} experiment -----------------------------------------------------


def k2t_trial(g: Graph, eps: float) -> dict:
    n, m = g.n, g.m
    lam = perron(g).lam if m else 0.0
    u, v, t, _ = find_k2t(g) if m else (0, 0, 0, frozenset())
    sm = math.sqrt(m) if m else 0.0
    return {
        "n": n, "m": m, "lambda": lam,
        "lambda_over_sqrt_m": lam / sm if m else 0.0,
        # strict, with slack so that K_{a,a} (lambda = sqrt(m) exactly) stays out
        "above_sqrt_m": lam > sm + B.NUMERIC_TOL,
        "t": t, "t_over_sqrt_m": t / sm if m else 0.0,
        "pair_u": u, "pair_v": v,
        "event_edges": m >= (0.5 + eps / 2) * math.comb(n, 2),
        "event_codegree": t <= (0.5 + 2 * eps) ** 2 * n,
    }


def cmd_k2t_experiment(cfg: ExperimentConfig) -> RunResult:
    """K_{2,t} sizes in G(n, 1/2 + eps).

    Also fits c, the smallest constant with t >= sqrt(m)/2 - c over the
    trials with lambda > sqrt(m).
    """
    eps = cfg.eps[0]
    p = cfg.p if cfg.p is not None else 0.5 + eps
    rows = []
    for i, s in enumerate(trial_seeds(cfg.seed, cfg.trials)):
        g = gen_gnp(cfg.n, p, s)
        rows.append({"trial": i, "trial_seed": s, "p": p, "eps": eps, **k2t_trial(g, eps),
                     **_provenance(cfg)})
    hyp = [r for r in rows if r["above_sqrt_m"]]
    c_fit = max((math.sqrt(r["m"]) / 2 - r["t"] for r in hyp), default=math.nan)
    summary = {
        "trials": len(rows),
        "above_sqrt_m": len(hyp),
        "c_fit": c_fit,
        "min_t_over_sqrt_m": min((r["t_over_sqrt_m"] for r in hyp), default=math.nan),
        "max_t_over_sqrt_m": max((r["t_over_sqrt_m"] for r in hyp), default=math.nan),
        "freq_events": float(np.mean([r["event_edges"] and r["event_codegree"] for r in rows])) if rows else math.nan,
        "freq_event_edges": float(np.mean([r["event_edges"] for r in rows])) if rows else math.nan,
        "freq_event_codegree": float(np.mean([r["event_codegree"] for r in rows])) if rows else math.nan,
    }
    rows.append({"aggregate": True, **summary, **_provenance(cfg)})
    return RunResult(rows, summary, 0)


# --- Brualdi-Hoffman-Turan annealer -----------------------------------------


@dataclass
class SearchState:
    current: Graph
    lam: float
    best: Graph
    best_lambda: float
    temperature: float
    moves: list[tuple] = field(default_factory=list)


def bht_ceiling(f: Graph, m: int) -> float:
    """sqrt((1 - 1/r) 2m) for chi(f) = r + 1 >= 3; sqrt(m) otherwise."""
    chi = chromatic_number(f)
    if chi >= 3:
        return math.sqrt((1 - 1 / (chi - 1)) * 2 * m)
    return math.sqrt(m)


def _lam_dense(g: Graph) -> float:
    return float(np.linalg.eigvalsh(g.adjacency_matrix())[-1]) if g.m else 0.0


def _random_f_free(f: Graph, nv: int, m: int, rng: np.random.Generator, tries: int = 20) -> Graph | None:
    for _ in range(tries):
        pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
        rng.shuffle(pairs)
        g = Graph(nv, ())
        for u, v in pairs:
            if g.m == m:
                return g
            h = g.add_edges([(u, v)])
            if find_subgraph_through_edge(h, f, u, v) is None:
                g = h
        if g.m == m:
            return g
    return None


def anneal(f: Graph, m: int, iterations: int, seed: int, vertices: int | None = None,
           t0: float = 0.2, cooling: float = 0.999) -> tuple[SearchState, bool]:
    """One annealing run over m-edge f-free graphs on ``vertices`` vertices.

    A move drops a random edge and adds a random non-edge; f appearing
    through the new edge rejects it.  Returns (state, feasible).
    """
    nv = vertices if vertices is not None else m + 1
    rng = np.random.default_rng(seed)
    g = _random_f_free(f, nv, m, rng)
    if g is None:
        return SearchState(Graph(nv, ()), 0.0, Graph(nv, ()), 0.0, t0), False
    lam = _lam_dense(g)
    st = SearchState(g, lam, g, lam, t0)
    for step in range(iterations):
        cur = st.current
        out = cur.edges[int(rng.integers(cur.m))]
        u, v = (int(a) for a in rng.choice(nv, size=2, replace=False))
        add = norm_edge(u, v)
        if add == out or cur.has_edge(*add):
            st.temperature *= cooling
            continue
        cand = cur.remove_edges([out]).add_edges([add])
        if find_subgraph_through_edge(cand, f, *add) is not None:
            st.temperature *= cooling
            continue
        lam_c = _lam_dense(cand)
        d = lam_c - st.lam
        ok = d >= 0 or rng.random() < math.exp(d / max(st.temperature, 1e-12))
        if ok:
            st.current, st.lam = cand, lam_c
            if lam_c > st.best_lambda:
                st.best, st.best_lambda = cand, lam_c
                st.moves.append((step, out, add, lam_c))
        st.temperature *= cooling
    return st, True


def cmd_bht_search(cfg: ExperimentConfig) -> RunResult:
    f = pattern(cfg.f or "K3")
    m = cfg.m
    ceiling = bht_ceiling(f, m)
    rows = []
    best: SearchState | None = None
    feasible_any = False
    for i, s in enumerate(trial_seeds(cfg.seed, cfg.restarts)):
        st, ok = anneal(f, m, cfg.iterations, s, cfg.vertices)
        feasible_any |= ok
        rows.append({"restart": i, "restart_seed": s, "feasible": ok, "best_lambda": st.best_lambda,
                     "gap": ceiling - st.best_lambda, "improvements": len(st.moves),
                     "f": cfg.f or "K3", "m": m, "iterations": cfg.iterations, **_provenance(cfg)})
        if ok and (best is None or st.best_lambda > best.best_lambda):
            best = st
    if best is None:
        summary = {"feasible": False, "ceiling": ceiling}
        rows.append({"aggregate": True, **summary})
        return RunResult(rows, summary, 2)
    free, _ = is_f_free(best.best, f)
    g6 = to_graph6(best.best.strip_isolated()[0]) if best.best.n <= 63 else ""
    summary = {"feasible": True, "best_lambda": best.best_lambda, "ceiling": ceiling,
               "gap": ceiling - best.best_lambda, "best_graph6": g6, "best_is_f_free": free,
               "best_m": best.best.m}
    rows.append({"aggregate": True, **summary, **_provenance(cfg)})
    return RunResult(rows, summary, 0 if free else 1, artifact=g6)


# --- stability sweep --------------------------------------------------------


def _family(cfg: ExperimentConfig) -> tuple[Graph, Graph]:
    if cfg.family == "turan":
        r = cfg.r or 3
        g, _ = gen_turan(cfg.size, r)
        return g, pattern(f"K{r + 1}")
    if cfg.family == "biclique":
        a = cfg.size // 2
        g, _ = gen_complete_bipartite(a, cfg.size - a)
        return g, pattern("K3")
    raise ValueError(f"unknown family {cfg.family!r}")


def certify_graph(g: Graph, f: Graph, eps: float, cfg: ExperimentConfig, seed: int = 0) -> StabilityCertificate:
    if chromatic_number(f) <= 3:
        return bipartite_like_certificate(g, f, eps)
    return turan_certificate(g, f, eps, delta=cfg.delta, mode=cfg.mode, seed=seed)


def cmd_stability_sweep(cfg: ExperimentConfig) -> RunResult:
    base, f = _family(cfg)
    rows = []
    cells = []
    for frac in cfg.perturb:
        edits = int(round(frac * base.m))
        seeds = trial_seeds(cfg.seed + int(round(frac * 1e6)), cfg.trials)
        for eps in cfg.eps:
            fracs, hyps, passes = [], [], []
            for i, s in enumerate(seeds):
                g, done = perturb_preserving(base, f, edits, s)
                cert = certify_graph(g, f, eps, cfg, seed=s)
                fracs.append(cert.edit_fraction)
                hyps.append(cert.hypothesis_met)
                passes.append(cert.edit_fraction <= eps)
                rows.append({"family": cfg.family, "size": cfg.size, "perturb": frac, "edits": done,
                             "eps": eps, "trial": i, "trial_seed": s, "m": g.m,
                             "edit_count": cert.edit_count, "edit_fraction": cert.edit_fraction,
                             "hypothesis_met": cert.hypothesis_met, "within_eps": cert.edit_fraction <= eps,
                             "delta_used": cert.delta_used, **_provenance(cfg)})
            cells.append({"aggregate": True, "family": cfg.family, "size": cfg.size, "perturb": frac,
                          "eps": eps, "mean_edit_fraction": float(np.mean(fracs)),
                          "hypothesis_rate": float(np.mean(hyps)), "pass_rate": float(np.mean(passes)),
                          **_provenance(cfg)})
    return RunResult(rows + cells, {"cells": cells}, 0)


def cmd_certify(cfg: ExperimentConfig, g: Graph | None = None) -> RunResult:
    """Certificate for one graph; exit 1 if the hypothesis holds but eps is missed."""
    if g is None:
        g = load_graph(cfg.input, cfg.format)
    f = pattern(cfg.f or f"K{(cfg.r or 2) + 1}")
    eps = cfg.eps[0]
    cert = certify_graph(g, f, eps, cfg, seed=cfg.seed)
    row = {"kind": cert.kind, "n": g.n, "m": g.m, "edit_count": cert.edit_count,
           "edit_fraction": cert.edit_fraction, "eps": eps, "hypothesis_met": cert.hypothesis_met,
           "delta_used": cert.delta_used, **_provenance(cfg)}
    bad = cert.hypothesis_met and cert.edit_fraction > eps
    return RunResult([row], {"certificate": cert}, 1 if bad else 0, artifact=cert.to_text())


def certify(g: Graph, f: Graph, eps: float, **kw) -> StabilityCertificate:
    cfg = ExperimentConfig("certify", eps=[eps], **kw)
    return certify_graph(g, f, eps, cfg, seed=cfg.seed)


COMMANDS = {
    "analyze": cmd_analyze,
    "corpus": cmd_corpus,
    "k2t": cmd_k2t_experiment,
    "bht-search": cmd_bht_search,
    "stability-sweep": cmd_stability_sweep,
    "certify": cmd_certify,
}


def run(cfg: ExperimentConfig) -> RunResult:
    return COMMANDS[cfg.command](cfg)
