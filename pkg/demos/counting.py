# Cliques, codegrees and forbidden subgraphs.
from spectral_turan.graph import gen_turan, gen_complete, gen_gnp
from spectral_turan.counting import clique_profile, find_k2t, is_f_free, pattern

# %% clique profile of T_{9,3}
prof = clique_profile(gen_turan(9, 3)[0])
print("k_1..k_4:", prof.counts, "omega:", prof.clique_number)

# %% the largest K_{2,t} in K_6 has t = 4
u, v, t, common = find_k2t(gen_complete(6))
print(f"pair ({u}, {v}) shares {t} neighbours")

# %% freeness checks return a witness when they fail
g = gen_gnp(12, 0.5, seed=3)
for name in ("K3", "K4", "C4", "K2,3"):
    free, emb = is_f_free(g, pattern(name))
    print(name, "free" if free else f"found at {emb}")
