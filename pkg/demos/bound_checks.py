# Edge-spectral inequalities as slack reports.
from spectral_turan.graph import gen_turan, gen_cycle, gen_gnp
from spectral_turan.bounds import (
    check_nikiforov_edge, check_walk_bound, check_sos_straus, check_nosal,
    motzkin_straus_opt, motzkin_straus_bound,
)

# %% T_{6,3} sits exactly on the r = 3 clique bound
rep = check_nikiforov_edge(gen_turan(6, 3)[0], 3)
print(rep.name, f"slack={rep.slack:.2e}", "equality" if rep.equality_flag else "")

# %% the triangle-free bound on C_5 holds with room to spare
print(check_nosal(gen_cycle(5)).as_row())

# %% walk and chain bounds on a random graph
g = gen_gnp(20, 0.3, seed=1)
for ell in (1, 2, 3, 4):
    r = check_walk_bound(g, 4, ell)
    print(f"walk ell={ell}: lhs={r.lhs:.4f} rhs={r.rhs:.4f} holds={r.holds}")
print(check_sos_straus(g, 3).holds)

# %% replicator dynamics climb to (1 - 1/omega)/2
val, w = motzkin_straus_opt(gen_turan(12, 4)[0], iters=3000)
print(f"{val:.9f} vs {motzkin_straus_bound(4):.9f}")
