"""Walk through the affine Weyl group of A2: folding, lengths, and point stabilizers.

Run: python demos/alcoves_and_stabilizers.py
"""
from fractions import Fraction

from affine_descent import affine as af
from affine_descent.rootdata import build_root_datum

d = build_root_datum("A2")
print("simple affine reflections:", af.simple_names(d))
print("fundamental point of A0:", af.point_json(af.fundamental_point(d)))

# A translation by a root, folded back into a reduced word.
t = af.translation(d, d.weight_coords((1, 1)))
print("t_theta =", af.format_element(t), "has length", af.length(t),
      "and reduced word", af.format_affine_word(d, t))

# Stabilizers grow as the point moves onto more walls.
for x in [(Fraction(1, 3), Fraction(1, 3)), (Fraction(1, 2), 0), (0, 0), (1, 0)]:
    c = af.stabilizer(d, x)
    print(f"x = {af.point_json(x)}: |Gamma^x| = {c.order}, Phi_x of type {c.phi_x_type},"
          f" parabolic on walls {[af.simple_names(d)[j] for j in c.parabolic_type]},"
          f" {c.alcove_count} alcoves touch x, certificate ok: {not c.check()}")

# A complex point: the imaginary part cuts the stabilizer down to the roots it is orthogonal to.
c = af.stabilizer(d, (0, 0), (1, -1))
print("x = 0 + i(1,-1): order", c.order, "roots", c.phi_x_full)

# Crossing walls from A0 to the opposite alcove around the origin.
far = max(af.alcoves_at_point(d, (0, 0)), key=lambda a: af.length(a.element))
walk = af.alcove_walk(d, af.Alcove(af.identity(d)), far, (0, 0))
print("walk across", len(walk), "walls to", af.format_element(far.element), ":",
      [f"{r.root}@{r.level}" for r in walk])
