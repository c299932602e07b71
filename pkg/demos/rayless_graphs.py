"""
Infinite rayless graphs from finite recipes
===========================================

A presentation describes a countable rayless graph as a finite separator
S with families of copies hanging off it; each family has a finite
multiplicity or countably many copies. The symbolic solver colours S,
picks a default colouring per family, and checks everybody is happy:
vertices of infinite degree need infinitely many opponents, which one
opponent per copy of an infinite family supplies.
"""

from unfriendly import check_symbolic, cross_validate, degree_atlas, minimal_separator, solve_unfriendly, structural_rank
from unfriendly.corpus import build_corpus, t2
from unfriendly.graph import dumps

# T2: a vertex s joined to the centres of countably many infinite stars
p = t2()
atlas = degree_atlas(p)
for addr, entry in atlas.entries.items():
    print(f"{addr:12s} degree {entry.degree!s:6s} V*? {entry.in_v_star}")
print("|V*| =", atlas.v_star_size, " structural rank", structural_rank(p), " minimal S", set(minimal_separator(p)))

sigma, state = solve_unfriendly(p)
print("\nsolution:", dumps(sigma.to_json()), end="")
print("residual unhappy set F:", state.F)

report = check_symbolic(p, sigma)
for addr, c in report.positions.items():
    print(f"  {addr:12s} {c.opponents!s:>6s} opponents of {c.degree}")

# Cut the infinite families down to n copies and count again
xv = cross_validate(p, sigma, range(1, 7))
print("\nopponents of s for n = 1..6:", [o.opponents for o in xv.verdicts["S:s"].observations])
print("cross-validation passed:", xv.passed)

# The whole bundled corpus
print()
for name, q in build_corpus().items():
    s, st = solve_unfriendly(q)
    ok = check_symbolic(q, s).ok and cross_validate(q, s, range(1, 5)).passed
    print(f"{name:20s} rank {structural_rank(q)}  S0={st.s0} S1={st.s1}  ok={ok}")
