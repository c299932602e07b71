"""Bundled presentations used by the demos and the test-suite.

Every entry has depth at most 3, separators of at most 3 vertices, leaf
graphs of at most 6 vertices and at most 3 families per node.
"""

from __future__ import annotations

from .graph import FiniteGraph
from .presentation import OMEGA, CopyFamily, Glue, Leaf, Presentation


def graph(vertices: str | list[str], edges: str = "") -> FiniteGraph:
    """``graph("abc", "ab bc")`` builds a graph from compact strings."""
    vs = list(vertices.split() if isinstance(vertices, str) and " " in vertices else vertices)
    return FiniteGraph.build(vs, [tuple(e) if len(e) == 2 else tuple(e.split("-")) for e in edges.split()])


def leaf(vertices, edges: str = "") -> Leaf:
    return Leaf(graph(vertices, edges))


def glue(s_vertices, s_edges: str = "", *families: CopyFamily) -> Glue:
    return Glue(graph(s_vertices, s_edges), tuple(families))


def family(child: Presentation, multiplicity, attachment: str) -> CopyFamily:
    """``attachment`` lists ``parent-child`` pairs, e.g. ``"c-x s-y"``."""
    pairs = [tuple(pair.split("-")) for pair in attachment.split()]
    return CopyFamily.build(child, OMEGA if multiplicity == "omega" else multiplicity, pairs)


def omega_star() -> Glue:
    return glue("c", "", family(leaf("x"), "omega", "c-x"))


def t2() -> Glue:
    """Vertex ``s`` joined to the centres of countably many omega-stars."""
    return glue("s", "", family(omega_star(), "omega", "s-c"))


def t3() -> Glue:
    return glue("r", "", family(t2(), "omega", "r-s"))


def omega_star_pendant() -> Glue:
    """Omega-star whose leaf ``a`` carries one pendant vertex; ``a`` is put in S."""
    return glue("ca", "ca", family(leaf("x"), "omega", "c-x"), family(leaf("p"), 1, "a-p"))


def build_corpus() -> dict[str, Presentation]:
    triangle = leaf("xyz", "xy yz xz")
    c = {
        "omega_star": omega_star(),
        "t2": t2(),
        "t3": t3(),
        "omega_star_pendant": omega_star_pendant(),
        "friendship": glue("c", "", family(leaf("xy", "xy"), "omega", "c-x c-y")),
        "omega_paths": glue("c", "", family(leaf("xyz", "xy yz"), "omega", "c-x")),
        "k2_omega": glue("st", "", family(leaf("x"), "omega", "s-x t-x")),
        "k2_omega_joined": glue("st", "st", family(leaf("x"), "omega", "s-x t-x")),
        "mixed_finite": glue("st", "st", family(leaf("x"), "omega", "s-x"), family(leaf("y"), 3, "t-y")),
        "triangle_hub": glue(
            "abc", "ab bc ac",
            family(leaf("x"), "omega", "a-x"),
            family(leaf("x"), "omega", "b-x"),
            family(leaf("x"), "omega", "c-x"),
        ),
        "omega_triangles": glue("c", "", family(triangle, "omega", "c-x")),
        "omega_k4": glue("c", "", family(leaf("wxyz", "wx wy wz xy xz yz"), "omega", "c-w c-x")),
        "bipartite_double": glue("st", "", family(leaf("xy", "xy"), "omega", "s-x t-y")),
        "path_separator": glue(
            "abc", "ab bc",
            family(leaf("x"), "omega", "a-x"),
            family(leaf("y"), 2, "b-y"),
        ),
        "star_of_cliques": glue("c", "", family(triangle, "omega", "c-x c-y c-z")),
        "omega_cycles": glue("c", "", family(leaf("wxyz", "wx xy yz wz"), "omega", "c-w c-x c-y c-z")),
        "t2_mixed": glue(
            "s", "",
            family(omega_star(), "omega", "s-c"),
            family(leaf("xyz", "xy yz"), 2, "s-x s-z"),
        ),
        "deep_mixed": glue(
            "r", "",
            family(glue("md", "md", family(omega_star(), 2, "m-c"), family(leaf("y"), "omega", "d-y")),
                   "omega", "r-m"),
        ),
        "double_level": glue(
            "st", "st",
            family(omega_star(), "omega", "s-c t-c"),
            family(leaf("x"), "omega", "t-x"),
        ),
        "finite_glue": glue("s", "", family(leaf("xy", "xy"), 3, "s-x s-y")),
        "shared_leaf_pair": glue("uv", "", family(leaf("x"), 2, "u-x v-x"), family(leaf("y"), "omega", "u-y v-y")),
        "omega_of_k23": glue("ab", "", family(glue("pq", "", family(leaf("x"), 3, "p-x q-x")), "omega", "a-p b-q")),
        "t2_with_tail": glue(
            "s", "",
            family(glue("c", "", family(leaf("xy", "xy"), "omega", "c-x")), "omega", "s-c"),
            family(leaf("abcdef", "ab bc cd de ef"), 1, "s-a s-f"),
        ),
        "leaf_triangle": triangle,
        "leaf_c5": leaf("abcde", "ab bc cd de ae"),
        "leaf_k4": leaf("abcd", "ab ac ad bc bd cd"),
    }
    return c
