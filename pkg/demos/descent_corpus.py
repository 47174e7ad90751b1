"""Check derived isotropy against parabolic descent on the built-in module corpus.

Run: python demos/descent_corpus.py
"""
from affine_descent import descent as ds
from affine_descent.rootdata import build_root_datum

for label in ("A1", "A2"):
    d = build_root_datum(label)
    rep = ds.equivalence_witness(d, ds.corpus(), ds.default_points(d))
    print(f"-- {label}")
    print(rep.to_csv(), end="")

# The skyscraper at 0: the naive isotropy test sees nothing wrong, but its
# Koszul resolution has a term on which the reflection acts by -1.
d = build_root_datum("A1")
grp = ds.group_at_point(d, (0,))
sky = {r.name: r for r in ds.corpus()}["skyscraper_trivial"].restrict(grp)
print("naive:", ds.naive_isotropy_trivial(sky).to_json())
print("derived:", ds.derived_isotropy_trivial(sky).to_json())

# Invariant theory of the finite Weyl groups.
for label in ("A1", "A2", "B2", "G2"):
    w = ds.finite_weyl_group(build_root_datum(label))
    rep = ds.cst_check(w)
    print(label, "Molien", ds.molien_series(w, 8), "degrees", rep.fundamental_degrees,
          "coinvariant dim", rep.coinvariant_dim, "=", w.order)
