"""Two invertibility preservers that no Frobenius automorphism extends.

A Frobenius automorphism is M -> P M Q or M -> P M^T Q.  Restricting one to
a subspace always gives a map preserving invertibility; these two maps show
the converse fails on certain large subspaces.
"""

import numpy as np

from linpres import matrix as mx
from linpres import preserver as pr
from linpres.action import frobenius_table
from linpres.field import GF2

print("distinct Frobenius automorphisms of M_3(GF(2)):", len(frobenius_table(3, GF2)))

# %% the map on H_3: add the middle diagonal entry to the top-right corner
phi = pr.phi_counterexample(3, GF2)
print("\nPhi strong preserver:", pr.is_strong_preserver(phi))
m, r, s = pr.rank_witness(phi)
print("but it changes rank:", mx.format_matrix(m), f"has rank {r}, its image rank {s}")
print("Frobenius extension:", pr.frobenius_extension(phi))

# %% the map on V1: perturb the corner block by alpha(L) + beta(C)
f = pr.alphabeta_counterexample()
print("\nalpha/beta map preserves det:", pr.is_det_preserver(f))
print("adjugate identity violations:", pr.alphabeta_identity())
print("Frobenius extension:", pr.frobenius_extension(f))
x = f.domain.elements()[77].reshape(3, 3)
print("example:", mx.format_matrix(x), "->", mx.format_matrix(f(x)),
      "det", mx.det(GF2, x), mx.det(GF2, f(x)))
