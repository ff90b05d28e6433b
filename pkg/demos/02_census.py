"""Enumerate all 3,309,747 five-dimensional subspaces of M_3(GF(2)).

The singular ones fall into four kinds: inside some M_D, inside some M^D,
equivalent to R(1,1), or equivalent to J_3.  Runs in a few seconds.
"""

import time

from linpres import catalog
from linpres.classify import Kind, census_5dim_singular, census_inside, intersection_dim_table

t = time.perf_counter()
tally = census_5dim_singular()
print(f"scanned {tally.subspaces} subspaces in {time.perf_counter() - t:.1f} s")
print("singular:", tally.singular)
for k in Kind:
    print(f"  {k.value:13s} {tally.kinds.get(k, 0)}")

# %% the same question inside V2(GF(2))
found = census_inside(catalog.V2_F2(), 5)
print("\nsingular 5-dim subspaces of V2:", len(found))
for S, v in found:
    if v.kind in (Kind.FIRST, Kind.SECOND):
        print(v.kind.value, [" ".join(map(str, b)) for b in S.basis])

# %% pairwise intersection dimensions
table = intersection_dim_table([S for S, _ in found])
print("\nintersection dimensions (rows in census order):")
print(table)
