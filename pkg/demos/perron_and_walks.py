# Perron eigenpairs and walk counts.
import math

from spectral_turan.graph import gen_complete_bipartite, gen_star, gen_cycle
from spectral_turan.spectral import perron, walk_table

# %% K_{3,4}: lambda equals sqrt(m)
g, _ = gen_complete_bipartite(3, 4)
p = perron(g)
print(f"lambda={p.lam:.12f} sqrt(m)={math.sqrt(g.m):.12f} residual={p.residual:.1e}")

# %% star: the hub carries half the weight
p = perron(gen_star(9))
print("hub entry^2:", round(p.x[0] ** 2, 12))

# %% exact walk counts on C_5 (every vertex has degree 2)
print([walk_table(gen_cycle(5), ell).total for ell in range(1, 7)])  # 5, 10, 20, ...
