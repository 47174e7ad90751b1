"""Moment graphs of small Bruhat intervals, their section spaces, and the adjacency span.

Run: python demos/gkm_sections.py
"""
from fractions import Fraction

from affine_descent import affine as af
from affine_descent import gkm
from affine_descent.rootdata import build_root_datum

a1 = build_root_datum("A1")
for w in ["s0", "s0s1"]:
    g = gkm.build_moment_graph(af.interval_from_word(a1, w))
    print(f"interval {w}: vertices {[af.format_element(v) for v in g.vertices]}")
    for e in g.edges:
        src, tgt = g.vertices[e.source], g.vertices[e.target]
        # in formal mode the last variable is hbar
        print("   edge", af.format_element(src), "--", af.format_element(tgt), "label", e.label(gkm.FORMAL))
    dims = [gkm.section_dimension(g, k, gkm.FORMAL) for k in range(5)]
    free = [gkm.freeness_prediction(g, k) for k in range(5)]
    print("   formal section dims", dims, "free-module prediction", free)

    rep = gkm.kernel_equality_report(g, 4)
    print("   at hbar = 1 (adjacency, kernel):", [(r.dim_adjacency, r.dim_kernel) for r in rep.rows],
          "saturation", rep.saturation_degree, "lag", rep.max_lag)

# Length-two intervals in A1 never close the gap degree by degree: the extra
# sections are reached only one degree later, which is what the lag column shows.

# The averaging section at the affine wall point of A1.
g = gkm.build_moment_graph(af.bruhat_ideal(af.extended_stabilizer(a1, (1,))))
print("beta at x = 1:", gkm.verify_beta_section((1,), g).checks)

# Simply connected A1: the length-zero element separates from e at 1/2, the adjoint pair does not.
sc = build_root_datum("A1", "simply_connected")
om = af.parse_element(sc, "t[1] w[1]")
print("sc pair separates at 1/2:", gkm.separates(af.identity(sc), om, (Fraction(1, 2),)))
