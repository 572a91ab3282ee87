# Certificates that a near-extremal graph is close to a Turan graph or biclique.
from spectral_turan.graph import gen_turan, gen_complete_bipartite
from spectral_turan.counting import pattern
from spectral_turan.stability import (
    turan_certificate, bipartite_like_certificate, perturb_preserving, StabilityCertificate,
)

K3, K4 = pattern("K3"), pattern("K4")

# %% a few K4-free flips of T_{30,3}
g, done = perturb_preserving(gen_turan(30, 3)[0], K4, 4, seed=2)
cert = turan_certificate(g, K4, eps=0.15)
print(f"{done} flips -> {cert.edit_count} edits ({cert.edit_fraction:.3f} of m)")
for step in cert.pipeline_log:
    print(f"  {step.stage:12s} removed={step.edges_removed:3d} {step.note}")

# %% the text record round-trips
assert StabilityCertificate.from_text(cert.to_text()) == cert

# %% triangle-free side
h, _ = perturb_preserving(gen_complete_bipartite(12, 14)[0], K3, 3, seed=5)
bc = bipartite_like_certificate(h, K3, eps=0.1)
print(bc.parts.sizes, bc.edit_count, "hypothesis met:", bc.hypothesis_met)
