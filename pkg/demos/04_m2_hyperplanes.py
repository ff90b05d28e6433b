"""Exhaustive search of weak invertibility preservers on hyperplanes of M_2.

Over GF(2) and GF(3) the upper triangular matrices admit weak preservers
with no Frobenius extension; the trace-zero hyperplane does not.  Over
GF(4) both behave.
"""

import time

from linpres import catalog
from linpres import preserver as pr
from linpres.field import make_field


def report(V, q, predicate="weak"):
    t = time.perf_counter()
    scan = pr.scan_embeddings(V, 2, predicate)
    idx = pr.ExtensionIndex(V)
    ext = sum(idx.extends(h) for h in scan.hits)
    print(f"  q={q} {predicate}: {scan.candidates} injective maps, {len(scan.hits)} hits, "
          f"{len(scan.hits) - ext} without extension ({time.perf_counter() - t:.1f} s)")
    return scan, idx


for q in (2, 3, 4):
    F = make_field(q)
    print(f"GF({q})")
    print(" upper triangular")
    scan, idx = report(catalog.T_upper(2, F), q)
    bad = next((f for f in scan.maps() if not idx.extends(pr.mx.encode(F, f.images))), None)
    if bad is not None:
        print("   first non-extendable map:\n   " + pr.format_map(bad).replace("\n", "\n   "))
    print(" trace zero")
    report(catalog.sl(2, F), q)
