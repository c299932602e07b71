"""
Unfriendly partitions of finite graphs
======================================

Every finite graph can be split so that each vertex has at least as many
neighbours on the other side as on its own. A maximum cut does it, and
so does plain local search: flip any unhappy vertex, and the number of
cross edges goes up by at least one.
"""

from itertools import combinations

from unfriendly import (
    FiniteGraph,
    Partition,
    exact_max_cut_extension,
    extend_pre_partition,
    flip_cascade,
    happiness,
    unfriendly_partition,
)

# K4 from the all-0 seed: three flips would overshoot, two are enough
k4 = FiniteGraph.build("abcd", combinations("abcd", 2))
pi, trace = unfriendly_partition(k4)
print("K4 partition:", pi.assignments)
for step in trace.steps:
    print("  flipped", step.flipped, "-> cross edges", step.potential)

for v, r in sorted(happiness(k4, pi).records.items()):
    print(f"  {v}: {r.opponents} opponents, {r.friends} friends")

# Pre-partitions: fix some vertices, make the rest happy.
# The fixed ones may stay unhappy; nobody promised them anything.
c6 = FiniteGraph.build("abcdef", ["ab", "bc", "cd", "de", "ef", "fa"])
fixed = Partition({"a": 0, "b": 0, "d": 1})
ext, trace = extend_pre_partition(c6, fixed)
print("\nC6 with a, b, d fixed:", dict(sorted(ext.assignments.items())), f"({trace.flips} flips)")
print("  unhappy:", happiness(c6, ext).unhappy)

# Flip cascades. Start from a partition that is best possible on the free
# vertices, flip a set F by force, and let the free vertices repair
# themselves. The repair never needs more than 2k flips, k being the
# number of cross edges at F before the forced flip.
g = FiniteGraph.build("abcdefg", ["ab", "ac", "ad", "bc", "be", "cf", "dg", "ef", "fg"])
start = exact_max_cut_extension(g, Partition({"a": 0}))
after, trace = flip_cascade(g, start, {"a"}, "bcdefg")
k = sum(start[x] != start[y] for x, y in g.edges if "a" in (x, y))
print(f"\ncascade after flipping a: {trace.flips} flips, budget 2k = {2 * k}")
print("  a still happy?", "a" not in trace.unhappy_fixed)
