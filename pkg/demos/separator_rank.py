"""
Separator rank of finite graphs
===============================

Edgeless graphs have rank 0. A graph has rank at most mu when deleting
a small separator S (here at most k vertices) leaves components that all
have smaller rank. With unbounded S every finite graph would have rank
at most 1, so the bound k is what makes the numbers say something.
"""

from itertools import combinations

from unfriendly import EDGELESS, BaseFamily, FiniteGraph, bounded_rank

def path(n):
    vs = [f"p{i}" for i in range(n)]
    return FiniteGraph.build(vs, zip(vs, vs[1:]))

# paths: halving each time, so the rank grows like log2
for n in (1, 3, 7, 15):
    print(f"P{n}: rank {bounded_rank(path(n), EDGELESS, 1).rank}")

# cliques lose one vertex per level
for n in range(2, 6):
    vs = [f"v{i}" for i in range(n)]
    kn = FiniteGraph.build(vs, combinations(vs, 2))
    print(f"K{n}: rank {bounded_rank(kn, EDGELESS, 1).rank}")

# The witness tree of P7
def show(result, indent=""):
    if result.witness is None:
        return
    print(f"{indent}remove {list(result.witness.separator)} (rank {result.rank})")
    for comp, child in result.witness.children:
        print(f"{indent}  component {sorted(comp)}: rank {child.rank}")
        show(child, indent + "    ")

show(bounded_rank(path(7), EDGELESS, 1))

# A roomier base family makes ranks drop
for base in ("edgeless", "maxdeg<=1", "maxdeg<=2", "all-finite"):
    print(f"P7 over {base}: {bounded_rank(path(7), BaseFamily.parse(base), 1).rank}")
