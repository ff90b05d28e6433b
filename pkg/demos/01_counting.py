"""Counting invertible matrices in the three hyperplane types of M_3(GF(2)).

Every hyperplane of M_3(GF(2)) is the trace-orthogonal of a single nonzero
matrix, and its equivalence class depends only on that matrix's rank.
"""

from collections import Counter

from linpres import catalog
from linpres import matrix as mx
from linpres.action import hyperplane_orbit
from linpres.field import GF2
from linpres.subspace import count_nonsingular, enumerate_subspaces, rank_profile

F = GF2

# %% one representative per rank
reps = {"V1": catalog.V1_F2(), "V2": catalog.V2_F2(), "sl3": catalog.sl(3, F)}
for name, V in reps.items():
    print(f"{name:4s} orthogonal rank {hyperplane_orbit(V)}  invertible elements {count_nonsingular(V)}"
          f"  rank profile {rank_profile(V)}")

# V2 and sl3 have different numbers of invertible elements, so no linear
# bijection between them can preserve invertibility.

# %% how the 80 invertible trace-zero matrices split by characteristic polynomial
split = Counter()
for m in catalog.sl(3, F).elements().reshape(-1, 3, 3):
    if mx.det(F, m):
        split[tuple(mx.char_poly(F, m))] += 1
for coeffs, n in sorted(split.items()):
    print("char poly (low degree first)", coeffs, "->", n)

# %% all 511 hyperplanes, grouped by orbit
sizes = Counter(hyperplane_orbit(V) for V in enumerate_subspaces(9, 8, F, shape=(3, 3)))
print("hyperplanes per orthogonal rank:", dict(sorted(sizes.items())))
