# The experiment drivers behind the command line.
from spectral_turan.harness import ExperimentConfig, run, to_csv

# %% K_{2,t} sizes in G(n, 0.55)
res = run(ExperimentConfig("k2t", n=120, eps=[0.05], trials=5, seed=0))
print({k: res.summary[k] for k in ("above_sqrt_m", "c_fit", "min_t_over_sqrt_m", "max_t_over_sqrt_m")})

# %% annealing for the largest lambda among triangle-free graphs with 12 edges
res = run(ExperimentConfig("bht-search", f="K3", m=12, iterations=2000, restarts=4))
print(res.summary["best_lambda"], "ceiling", res.summary["ceiling"], res.artifact)

# %% a small stability sweep, written as CSV
res = run(ExperimentConfig("stability-sweep", size=15, perturb=[0.0, 0.05], eps=[0.1], trials=3))
print(to_csv(res.summary["cells"]))
