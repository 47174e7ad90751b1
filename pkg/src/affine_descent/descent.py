"""Equivariant modules over finite stabilizers, invariant theory, and descent checks.

Conventions
-----------
A finite group Gamma fixes a center point x; everything is written in the
centered coordinates u = y - x, where Gamma acts linearly through its
finite parts.  A free graded module has generators e_1..e_n and, for each
gamma, an action matrix A_gamma with polynomial entries:

    gamma . (f e_j) = (f o gamma^-1) * sum_i (A_gamma)_ij e_i.

The cocycle rule is A_{gamma delta} = A_gamma * gamma(A_delta), where
gamma(A) = A o gamma^-1 entrywise.  The comodule tuple of v is
m(v)_gamma = gamma^-1 . v (left actions read as right coactions).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import affine as af
from . import linalg
from .poly import Poly, monomials_of_degree, monomials_up_to
from .rootdata import RootDatum, build_root_datum

Matrix = list  # list of rows of Poly


class DescentError(ValueError):
    pass


# -- polynomial matrices -----------------------------------------------------------

def pm_identity(n: int, nv: int) -> Matrix:
    return [[Poly.const(nv, int(i == j)) for j in range(n)] for i in range(n)]


def pm_mul(a: Matrix, b: Matrix, nv: int) -> Matrix:
    if not a or not b:
        return [[Poly(nv) for _ in range(len(b[0]) if b else 0)] for _ in a]
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = Poly(nv)
            for k, x in enumerate(row):
                if x and b[k][j]:
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def pm_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def pm_substitute(a: Matrix, images: Sequence[Poly]) -> Matrix:
    return [[x.substitute(images) if x.degree() > 0 else Poly(images[0].nvars, x.terms) for x in row]
            for row in a]


def pm_const(rows: Sequence[Sequence], nv: int) -> Matrix:
    return [[Poly.const(nv, v) for v in row] for row in rows]


def pm_to_sparse(a: Matrix) -> list:
    return [[x.to_sparse() for x in row] for row in a]


def pm_from_sparse(data, nv: int, where: str) -> Matrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise DescentError(f"{where}: matrix must be a list of rows")
    try:
        return [[Poly.from_sparse(nv, x) for x in row] for row in data]
    except (ValueError, TypeError) as exc:
        raise DescentError(f"{where}: {exc}") from None


# -- finite groups about a point ----------------------------------------------------

@dataclass
class FiniteReflectionGroup:
    """A finite group of affine maps fixing center; acts linearly on u = y - center."""

    datum: RootDatum
    center: tuple
    elements: list

    def __post_init__(self):
        self.center = af.as_point(self.center)
        bad = [g for g in self.elements if af.act(g, self.center) != self.center]
        if bad:
            raise DescentError(f"{af.format_element(bad[0])} does not fix the center")
        self._inv = {g: af.invert(g) for g in self.elements}
        self._images = {}

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def reflections(self) -> list:
        r = self.rank
        out = []
        for g in self.elements:
            m = g.finite.matrix
            if linalg.rank([[m[i][j] - (i == j) for j in range(r)] for i in range(r)]) == 1:
                out.append(g)
        return out

    def is_reflection_group(self) -> bool:
        return set(af.group_closure(self.reflections, self.datum)) == set(self.elements)

    def linear(self, g) -> tuple:
        return g.finite.matrix

    def inverse(self, g):
        return self._inv[g]

    def images(self, g) -> list[Poly]:
        """Coordinates of g(u) (linear) in the centered frame."""
        if g not in self._images:
            m = g.finite.matrix
            n = self.rank
            self._images[g] = [Poly(n, {tuple(int(j == k) for k in range(n)): m[i][j] for j in range(n)})
                               for i in range(n)]
        return self._images[g]

    def pull(self, f: Poly, g) -> Poly:
        """f o g^{-1}."""
        return f.substitute(self.images(self._inv[g]))

    def twist(self, a: Matrix, g) -> Matrix:
        return pm_substitute(a, self.images(self._inv[g]))

    def fixed_substitution(self, g) -> list[Poly]:
        """Parametrization of fix(g) = ker(W - 1) by its free coordinates."""
        n = self.rank
        m = g.finite.matrix
        red, piv = linalg.rref([[m[i][j] - (i == j) for j in range(n)] for i in range(n)], n)
        images = [Poly.var(n, i) for i in range(n)]
        for row, p in zip(red, piv):
            expr = Poly(n)
            for j in range(n):
                if j != p and row[j]:
                    expr = expr - Poly.var(n, j) * Fraction(row[j], row[p])
            images[p] = expr
        return images

    def fixed_forms(self, g) -> list[Poly]:
        """Linear forms generating the ideal of fix(g)."""
        n = self.rank
        m = g.finite.matrix
        red, _ = linalg.rref([[m[i][j] - (i == j) for j in range(n)] for i in range(n)], n)
        return [Poly.linear(row) for row in red]

    def to_centered(self, f: Poly) -> Poly:
        """Rewrite a polynomial in y as a polynomial in u = y - center."""
        n = self.rank
        return f.substitute([Poly.var(n, i) + self.center[i] for i in range(n)])


def group_at_point(datum: RootDatum, x: Sequence, im: Sequence | None = None) -> FiniteReflectionGroup:
    cert = af.stabilizer(datum, x, im)
    return FiniteReflectionGroup(datum, cert.re, cert.elements)


def finite_weyl_group(datum: RootDatum) -> FiniteReflectionGroup:
    return group_at_point(datum, (0,) * datum.rank)


# -- invariant theory ---------------------------------------------------------------------

def _series_inverse(p: list[Fraction], d: int) -> list[Fraction]:
    out = [Fraction(0)] * (d + 1)
    out[0] = 1 / p[0]
    for k in range(1, d + 1):
        s = sum(p[j] * out[k - j] for j in range(1, min(k, len(p) - 1) + 1))
        out[k] = -s / p[0]
    return out


def _det_one_minus_t(m) -> list[Fraction]:
    """Coefficients of det(1 - t M) via Faddeev-LeVerrier."""
    n = len(m)
    mf = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = linalg.mat_mul(mf, [[mk[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)])
        c = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs   # det(lambda - M) = sum coeffs[k] lambda^{n-k}; det(1 - tM) has the same list


def molien_series(group: FiniteReflectionGroup, d: int) -> list[int]:
    """Hilbert series coefficients of the invariant ring, degrees 0..d."""
    total = [Fraction(0)] * (d + 1)
    for g in group.elements:
        inv = _series_inverse(_det_one_minus_t(group.linear(g)), d)
        total = [a + b for a, b in zip(total, inv)]
    out = [v / group.order for v in total]
    if any(v.denominator != 1 or v < 0 for v in out):
        raise DescentError("Molien coefficients are not nonnegative integers")
    return [int(v) for v in out]


def reynolds(group: FiniteReflectionGroup, f: Poly) -> Poly:
    acc = Poly(f.nvars)
    for g in group.elements:
        acc = acc + f.substitute(group.images(g))
    return acc / group.order


def invariants_of_degree(group: FiniteReflectionGroup, k: int) -> list[Poly]:
    n = group.rank
    mons = monomials_of_degree(n, k)
    index = {m: i for i, m in enumerate(mons)}
    sb = linalg.SpanBuilder(len(mons))
    for m in mons:
        sb.add(reynolds(group, Poly.monomial(m)).vector(index, len(mons)))
    return [Poly(n, {m: c for m, c in zip(mons, row) if c}) for row in sb.basis()]


def invariant_dimensions(group: FiniteReflectionGroup, d: int) -> list[int]:
    """Reynolds-averaging oracle for the Molien coefficients."""
    return [len(invariants_of_degree(group, k)) for k in range(d + 1)]


def free_algebra_series(degrees: Sequence[int], d: int) -> list[int]:
    """Coefficients of prod 1/(1 - t^e) through degree d."""
    out = [1] + [0] * d
    for e in degrees:
        for k in range(e, d + 1):
            out[k] += out[k - e]
    return out


@dataclass
class InvariantReport:
    order: int
    reflections: int
    applicable: bool
    molien: list
    fundamental_degrees: list
    coinvariant_hilbert: list
    coinvariant_dim: int
    complete: bool   # the ideal swallowed everything in the top checked degree

    @property
    def ok(self) -> bool:
        return self.applicable and self.complete and self.coinvariant_dim == self.order

    def to_json(self) -> dict:
        return {"order": self.order, "reflections": self.reflections, "applicable": self.applicable,
                "molien": self.molien, "fundamental_degrees": self.fundamental_degrees,
                "coinvariant_hilbert": self.coinvariant_hilbert, "coinvariant_dim": self.coinvariant_dim,
                "complete": self.complete, "ok": self.ok}


def cst_check(group: FiniteReflectionGroup, d: int | None = None) -> InvariantReport:
    """Coinvariant algebra dimension by exact elimination through degree N + 1 (N = #reflections)."""
    n = group.rank
    nref = len(group.reflections)
    applicable = group.is_reflection_group()
    top = nref + 1
    molien = molien_series(group, d if d is not None else top)
    invs = {k: invariants_of_degree(group, k) for k in range(1, top + 1)}
    ideal = {}       # degree -> SpanBuilder of the degree-k part of the ideal
    fundamental = []
    hilb = []
    for k in range(0, top + 1):
        mons = monomials_of_degree(n, k)
        index = {m: i for i, m in enumerate(mons)}
        sb = linalg.SpanBuilder(len(mons))
        for j in range(1, k):
            for f in invs[j]:
                for m in monomials_of_degree(n, k - j):
                    sb.add((f * Poly.monomial(m)).vector(index, len(mons)))
        if k >= 1:
            # invariants not generated by lower ones are fundamental
            low = linalg.SpanBuilder(len(mons))
            for row in sb.basis():
                p = Poly(n, {m: c for m, c in zip(mons, row) if c})
                low.add(reynolds(group, p).vector(index, len(mons)))
            new = 0
            for f in invs[k]:
                if low.add(f.vector(index, len(mons))):
                    new += 1
            fundamental.extend([k] * new)
            for f in invs[k]:
                sb.add(f.vector(index, len(mons)))
        ideal[k] = sb
        hilb.append(len(mons) - sb.rank)
    complete = hilb[-1] == 0
    return InvariantReport(group.order, nref, applicable, molien, fundamental, hilb[:-1] if complete else hilb,
                           sum(hilb), complete)


# -- equivariant modules ---------------------------------------------------------------------

@dataclass
class Resolution:
    terms: list          # free EquivariantModules F_0, F_1, ...
    differentials: list  # D_i : F_i -> F_{i-1}, matrices with rows indexed by F_{i-1} generators


@dataclass
class EquivariantModule:
    group: FiniteReflectionGroup
    degrees: list
    actions: dict                    # element -> Matrix (centered coordinates)
    resolution: Resolution | None = None
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def nvars(self) -> int:
        return self.group.rank

    @property
    def is_free(self) -> bool:
        return self.resolution is None

    def action(self, g) -> Matrix:
        return self.actions[g]

    def act(self, g, v: Sequence[Poly]) -> list[Poly]:
        """g . v for v given by its coefficient list in the generators."""
        a = self.actions[g]
        pulled = [self.group.pull(p, g) for p in v]
        return [sum((a[i][j] * pulled[j] for j in range(self.rank) if pulled[j] and a[i][j]), Poly(self.nvars))
                for i in range(self.rank)]

    def cocycle_failure(self):
        """First (g, h) with A_{gh} != A_g g(A_h), or None."""
        n, nv = self.rank, self.nvars
        e = af.identity(self.group.datum)
        if self.actions.get(e) != pm_identity(n, nv):
            return (e, e)
        for g in self.group.elements:
            for h in self.group.elements:
                gh = af.compose(g, h)
                if pm_mul(self.actions[g], self.group.twist(self.actions[h], g), nv) != self.actions[gh]:
                    return (g, h)
        return None

    def resolution_failure(self):
        """First problem with the attached resolution (as text), or None."""
        if self.resolution is None:
            return None
        res = self.resolution
        nv = self.nvars
        for i, t in enumerate(res.terms):
            bad = t.cocycle_failure()
            if bad:
                return f"term F{i} violates the cocycle rule"
        for i, dmat in enumerate(res.differentials, start=1):
            src, tgt = res.terms[i], res.terms[i - 1]
            for g in self.group.elements:
                lhs = pm_mul(tgt.actions[g], self.group.twist(dmat, g), nv)
                if lhs != pm_mul(dmat, src.actions[g], nv):
                    return f"differential D{i} is not equivariant for {af.format_element(g)}"
        for i in range(1, len(res.differentials)):
            prod = pm_mul(res.differentials[i - 1], res.differentials[i], nv)
            if any(x for row in prod for x in row):
                return f"D{i} * D{i + 1} is not zero"
        return None

    def to_json(self) -> dict:
        out = {"generator_degrees": list(self.degrees),
               "actions": {af.format_element(g): pm_to_sparse(self.actions[g]) for g in self.group.elements}}
        if self.resolution is not None:
            out["resolution"] = {"terms": [t.to_json() for t in self.resolution.terms],
                                 "differentials": [pm_to_sparse(d) for d in self.resolution.differentials]}
        return out


def _vectors(module: EquivariantModule, d: int):
    """(degree, generator index, monomial) for m * e_j of total degree <= d, degree-major."""
    n = module.nvars
    for k in range(d + 1):
        for j, dj in enumerate(module.degrees):
            if dj > k:
                continue
            for m in monomials_of_degree(n, k - dj):
                yield k, j, m


def _unit(module: EquivariantModule, j: int, m) -> list[Poly]:
    n = module.nvars
    return [Poly.monomial(m) if i == j else Poly(n) for i in range(module.rank)]


@dataclass
class Verdict:
    ok: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "witness": self.witness}


def _vanishes(v: Sequence[Poly], images) -> bool:
    return all(p.substitute(images).is_zero() for p in v)


def isotropy_trivial(module: EquivariantModule, d: int | None = None) -> Verdict:
    """(A_g - id)(M) lies in I_fix(g) M for every g, through degree d (free modules only)."""
    if not module.is_free:
        raise DescentError("isotropy_trivial needs a free module; check the resolution terms instead")
    d = default_degree(module) if d is None else d
    grp = module.group
    subs = {g: grp.fixed_substitution(g) for g in grp.elements}
    for k, j, m in _vectors(module, d):
        v = _unit(module, j, m)
        for g in grp.elements:
            diff = [a - b for a, b in zip(module.act(g, v), v)]
            if not _vanishes(diff, subs[g]):
                return Verdict(False, {"element": af.format_element(g), "generator": j, "degree": k})
    return Verdict(True)


def descends_free(module: EquivariantModule, d: int | None = None) -> Verdict:
    """Edge congruences m(v)_g = m(v)_{g s} modulo I_fix(s), every reflection s and every g."""
    d = default_degree(module) if d is None else d
    grp = module.group
    refl = grp.reflections
    subs = {s: grp.fixed_substitution(s) for s in refl}
    for k, j, m in _vectors(module, d):
        v = _unit(module, j, m)
        tup = {g: module.act(grp.inverse(g), v) for g in grp.elements}
        for s in refl:
            for g in grp.elements:
                gs = af.compose(g, s)
                diff = [a - b for a, b in zip(tup[g], tup[gs])]
                if not _vanishes(diff, subs[s]):
                    return Verdict(False, {"reflection": af.format_element(s), "element": af.format_element(g),
                                           "generator": j, "degree": k})
    return Verdict(True)


def descends(module: EquivariantModule, d: int | None = None) -> Verdict:
    """Descent along V -> V//Gamma; for a presented module every resolution term must pass."""
    if module.is_free:
        return descends_free(module, d)
    for i, t in enumerate(module.resolution.terms):
        v = descends_free(t, d)
        if not v.ok:
            return Verdict(False, dict(v.witness, term=f"F{i}"))
    return Verdict(True)


def derived_isotropy_trivial(module: EquivariantModule, d: int | None = None) -> Verdict:
    """Trivial isotropy on every term of the attached flat resolution (or on M itself)."""
    if module.is_free:
        return isotropy_trivial(module, d)
    for i, t in enumerate(module.resolution.terms):
        v = isotropy_trivial(t, d)
        if not v.ok:
            return Verdict(False, dict(v.witness, term=f"F{i}"))
    return Verdict(True)


def naive_isotropy_trivial(module: EquivariantModule, d: int | None = None) -> Verdict:
    """Isotropy check on the presented quotient F0 / D1(F1) itself.

    Membership (A_g - 1) v in I_fix(g) F0 + D1(F1) is tested in the
    truncation by degree <= d + 1 of the submodule (everything is
    homogeneous in centered coordinates for the corpus presentations).
    """
    if module.is_free:
        return isotropy_trivial(module, d)
    d = default_degree(module) if d is None else d
    f0 = module.resolution.terms[0]
    grp = module.group
    n = grp.rank
    dmat = module.resolution.differentials[0] if module.resolution.differentials else []
    top = d + 1
    mons = monomials_up_to(n, top)
    index = {m: i for i, m in enumerate(mons)}
    size = len(mons)

    def flat(v):
        out = []
        for p in v:
            out.extend(p.vector(index, size))
        return out

    image_rows = []
    if dmat:
        f1 = module.resolution.terms[1]
        for j, dj in enumerate(f1.degrees):
            col = [dmat[i][j] for i in range(f0.rank)]
            for k in range(top + 1):
                for m in monomials_of_degree(n, k):
                    w = [c * Poly.monomial(m) for c in col]
                    if max(p.degree() for p in w) <= top:
                        image_rows.append(flat(w))
    for g in grp.elements:
        sb = linalg.SpanBuilder(size * f0.rank)
        for r in image_rows:
            sb.add(r)
        for form in grp.fixed_forms(g):
            for i in range(f0.rank):
                for m in monomials_up_to(n, top - 1):
                    w = [form * Poly.monomial(m) if t == i else Poly(n) for t in range(f0.rank)]
                    sb.add(flat(w))
        for k, j, m in _vectors(f0, d):
            v = _unit(f0, j, m)
            diff = [a - b for a, b in zip(f0.act(g, v), v)]
            if not sb.contains(flat(diff)):
                return Verdict(False, {"element": af.format_element(g), "generator": j, "degree": k})
    return Verdict(True)


def default_degree(module: EquivariantModule) -> int:
    return len(module.group.reflections) + max(module.degrees, default=0) + 2


def lift_action(group: FiniteReflectionGroup, target: EquivariantModule, dmat: Matrix,
                degrees: Sequence[int], bound: int = 2) -> dict:
    """Solve A_g g(D) = D B_g for the action B on the source of D (exact, polynomial B).

    D must be injective, so the lift is unique when it exists; the
    solution is searched among matrices with entries of degree <= bound.
    """
    n = group.rank
    nv = n
    rows_t = len(dmat)
    cols = len(dmat[0])
    mons = monomials_up_to(n, bound)
    out = {}
    for g in group.elements:
        rhs = pm_mul(target.actions[g], group.twist(dmat, g), nv)
        b = []
        for j in range(cols):
            # unknown column c_j: D * c_j = rhs[:, j]
            unknowns = [(k, m) for k in range(cols) for m in mons]
            eqs = {}
            for ui, (k, m) in enumerate(unknowns):
                for i in range(rows_t):
                    for e, c in (dmat[i][k] * Poly.monomial(m)).terms.items():
                        eqs.setdefault((i, e), {})[ui] = c
            targets = {(i, e): c for i in range(rows_t) for e, c in rhs[i][j].terms.items()}
            keys = sorted(set(eqs) | set(targets))
            a = [[eqs.get(key, {}).get(u, 0) for u in range(len(unknowns))] for key in keys]
            sol = linalg.solve(a, [targets.get(key, 0) for key in keys], len(unknowns))
            if sol is None:
                raise DescentError(f"no equivariant lift for {af.format_element(g)}")
            colp = [Poly(nv) for _ in range(cols)]
            for ui, (k, m) in enumerate(unknowns):
                if sol[ui]:
                    colp[k] = colp[k] + Poly.monomial(m, sol[ui])
            b.append(colp)
        out[g] = [[b[j][i] for j in range(cols)] for i in range(cols)]
    return out


# -- module recipes over W^aff (restricted to a point) --------------------------------------

@dataclass
class ModuleRecipe:
    """A W^aff-equivariant module given by rules; restrict() localizes it at a point."""

    name: str
    build: Callable  # (group) -> EquivariantModule

    def restrict(self, group: FiniteReflectionGroup) -> EquivariantModule:
        m = self.build(group)
        m.name = self.name
        return m


def _from_rule(group, degrees, rule) -> EquivariantModule:
    """rule(g) gives A_g in y-coordinates; converted to the centered frame."""
    acts = {}
    for g in group.elements:
        a = rule(g)
        acts[g] = [[group.to_centered(x) for x in row] for row in a]
    return EquivariantModule(group, list(degrees), acts)


def structure_sheaf() -> ModuleRecipe:
    return ModuleRecipe("structure_sheaf", lambda grp: _from_rule(grp, [0], lambda g: pm_const([[1]], grp.rank)))


def sign_twist() -> ModuleRecipe:
    return ModuleRecipe("sign_twist", lambda grp: _from_rule(
        grp, [0], lambda g: pm_const([[g.finite.determinant()]], grp.rank)))


def regular_representation() -> ModuleRecipe:
    def build(grp):
        ws = list(grp.datum._weyl_elements)
        pos = {w: i for i, w in enumerate(ws)}

        def rule(g):
            n = len(ws)
            m = [[0] * n for _ in range(n)]
            for i, w in enumerate(ws):
                m[pos[g.finite * w]][i] = 1
            return pm_const(m, grp.rank)
        return _from_rule(grp, [0] * len(ws), rule)
    return ModuleRecipe("regular_representation", build)


def extension() -> ModuleRecipe:
    """O e1 + O e2 with A_g = [[1, y1 - y1 o g^-1], [0, 1]]: a coboundary-twisted extension of O by O."""
    def build(grp):
        n = grp.rank
        y1 = Poly.var(n, 0)

        def rule(g):
            ginv = af.invert(g)
            pulled = y1.substitute(_affine_images_y(ginv))
            return [[Poly.const(n, 1), y1 - pulled], [Poly(n), Poly.const(n, 1)]]
        return _from_rule(grp, [0, 0], rule)
    return ModuleRecipe("extension", build)


def _affine_images_y(g) -> list[Poly]:
    n = g.datum.rank
    m = g.finite.matrix
    return [Poly(n, {tuple(int(j == k) for k in range(n)): m[i][j] for j in range(n)}) + g.translation[i]
            for i in range(n)]


def skyscraper(character: str = "trivial") -> ModuleRecipe:
    """Skyscraper along the W^aff-orbit of 0 (= the root lattice), with a character of W.

    Near a point x of the orbit it is k_x, resolved by the Koszul complex of
    the coordinate forms u_i; elsewhere the restriction is the zero module.
    """
    if character not in ("trivial", "sign"):
        raise DescentError("character must be 'trivial' or 'sign'")

    def build(grp):
        n = grp.rank
        datum = grp.datum
        x = grp.center
        if not (all(v.denominator == 1 for v in x) and datum.in_root_lattice(x)):
            return EquivariantModule(grp, [], {g: [] for g in grp.elements}, None)
        eps = {g: (g.finite.determinant() if character == "sign" else 1) for g in grp.elements}
        terms, diffs = [], []
        from itertools import combinations
        subsets = [list(combinations(range(n), k)) for k in range(n + 1)]
        for k, basis in enumerate(subsets):
            acts = {}
            for g in grp.elements:
                winv = linalg.inverse(g.finite.matrix)
                # exterior power of (W^-1)^T on the Koszul generators e_S
                mat = [[Fraction(0)] * len(basis) for _ in basis]
                for c, s_col in enumerate(basis):
                    for r_, s_row in enumerate(basis):
                        sub = [[winv[j][i] for j in s_col] for i in s_row]
                        mat[r_][c] = linalg.determinant(sub) if sub else Fraction(1)
                acts[g] = pm_const([[eps[g] * v for v in row] for row in mat], n)
            terms.append(EquivariantModule(grp, [k] * len(basis), acts))
            if k:
                prev = subsets[k - 1]
                idx = {s: i for i, s in enumerate(prev)}
                dm = [[Poly(n) for _ in basis] for _ in prev]
                for c, s in enumerate(basis):
                    for t, i in enumerate(s):
                        rest = s[:t] + s[t + 1:]
                        dm[idx[rest]][c] = dm[idx[rest]][c] + Poly.var(n, i) * (-1) ** t
                diffs.append(dm)
        f0 = terms[0]
        return EquivariantModule(grp, f0.degrees, f0.actions, Resolution(terms, diffs))
    return ModuleRecipe(f"skyscraper_{character}", build)


def corpus() -> list[ModuleRecipe]:
    return [structure_sheaf(), sign_twist(), regular_representation(),
            skyscraper("trivial"), skyscraper("sign"), extension()]


# -- comparison report ---------------------------------------------------------------------

@dataclass
class EquivalenceRow:
    module: str
    point: tuple
    group_order: int
    descends: Verdict
    derived_isotropy: Verdict
    naive_isotropy: Verdict

    @property
    def agree(self) -> bool:
        return self.descends.ok == self.derived_isotropy.ok


@dataclass
class EquivalenceReport:
    type_label: str
    rows: list

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows)

    def to_csv(self) -> str:
        import csv
        import io
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["module", "point", "group_order", "descends", "derived_isotropy", "naive_isotropy", "agree"])
        for r in self.rows:
            w.writerow([r.module, ";".join(map(str, r.point)), r.group_order, str(r.descends.ok).lower(),
                        str(r.derived_isotropy.ok).lower(), str(r.naive_isotropy.ok).lower(),
                        str(r.agree).lower()])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"type": self.type_label, "all_agree": self.all_agree, "rows": [
            {"module": r.module, "point": af.point_json(r.point), "group_order": r.group_order,
             "descends": r.descends.to_json(), "derived_isotropy": r.derived_isotropy.to_json(),
             "naive_isotropy": r.naive_isotropy.to_json(), "agree": r.agree} for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "EquivalenceReport":
        def verdict(v):
            return Verdict(v["ok"], v["witness"])
        rows = [EquivalenceRow(r["module"], tuple(Fraction(c) for c in r["point"]), r["group_order"],
                               verdict(r["descends"]), verdict(r["derived_isotropy"]),
                               verdict(r["naive_isotropy"])) for r in data["rows"]]
        return cls(data["type"], rows)


def equivalence_witness(datum: RootDatum, recipes: Sequence[ModuleRecipe], points: Sequence,
                        d: int | None = None) -> EquivalenceReport:
    rows = []
    for x in points:
        grp = group_at_point(datum, x)
        for rec in recipes:
            m = rec.restrict(grp)
            for problem in (m.cocycle_failure(),):
                if problem:
                    raise DescentError(f"{rec.name}: cocycle rule fails at {x}")
            if m.resolution_failure():
                raise DescentError(f"{rec.name}: {m.resolution_failure()}")
            rows.append(EquivalenceRow(rec.name, grp.center, grp.order, descends(m, d),
                                       derived_isotropy_trivial(m, d), naive_isotropy_trivial(m, d)))
    return EquivalenceReport(datum.type_label, rows)


def default_points(datum: RootDatum) -> list:
    """0, a regular point of A0, and the midpoint of the affine wall's face."""
    p = af.fundamental_point(datum)
    thetas = datum.highest_coroot_roots()
    # midpoint of the vertices of A0 lying on the affine wall of the first component
    comp = datum.components[0]
    cv = datum.coroot(thetas[0])
    verts = []
    for i in comp:
        v = [Fraction(0)] * datum.rank
        v[i] = Fraction(1, cv[i])
        verts.append(v)
    mid = tuple(sum(v[j] for v in verts) / len(verts) for j in range(datum.rank))
    return [tuple(Fraction(0) for _ in range(datum.rank)), p, mid]


# -- coinduction to the extended group --------------------------------------------------------

@dataclass
class CoinducedModule:
    """Underlying module: one copy of M per pi_1 class c, indexed via omega_c."""

    datum: RootDatum
    classes: list
    omegas: dict
    base_rank: int
    nvars: int
    rule: Callable     # W~-element -> A (y-coordinates), valid on all of W~

    def action(self, g: af.AffineElement) -> Matrix:
        n = self.base_rank
        size = n * len(self.classes)
        out = [[Poly(self.nvars) for _ in range(size)] for _ in range(size)]
        pos = {c: i for i, c in enumerate(self.classes)}
        pg = af.pi1_of(g)
        for c in self.classes:
            c2 = self.datum.pi1_add(c, pg)
            u = af.compose(af.compose(af.invert(self.omegas[c2]), g), self.omegas[c])
            block = _twist_y(self.rule(u), self.omegas[c2])
            for i in range(n):
                for j in range(n):
                    out[pos[c2] * n + i][pos[c] * n + j] = block[i][j]
        return out

    @property
    def rank(self) -> int:
        return self.base_rank * len(self.classes)


def _twist_y(a: Matrix, g: af.AffineElement) -> Matrix:
    """g(A) = A o g^-1 in y-coordinates."""
    if not a:
        return a
    return pm_substitute(a, _affine_images_y(af.invert(g)))


def coinduce_extended(rule: Callable, base_rank: int, datum: RootDatum) -> CoinducedModule:
    om = af.length_zero_elements(datum)
    return CoinducedModule(datum, list(om), om, base_rank, datum.rank, rule)


def recipe_rule(name: str, datum: RootDatum) -> tuple[Callable, int]:
    """Action rules valid on the whole extended group (for coinduction tests)."""
    n = datum.rank
    if name == "structure_sheaf":
        return (lambda g: pm_const([[1]], n)), 1
    if name == "sign_twist":
        return (lambda g: pm_const([[g.finite.determinant()]], n)), 1
    if name == "extension":
        y1 = Poly.var(n, 0)
        return (lambda g: [[Poly.const(n, 1), y1 - y1.substitute(_affine_images_y(af.invert(g)))],
                           [Poly(n), Poly.const(n, 1)]]), 2
    if name == "regular_representation":
        ws = list(datum._weyl_elements)
        pos = {w: i for i, w in enumerate(ws)}

        def rule(g):
            m = [[0] * len(ws) for _ in ws]
            for i, w in enumerate(ws):
                m[pos[g.finite * w]][i] = 1
            return pm_const(m, n)
        return rule, len(ws)
    raise DescentError(f"no global rule for module {name!r}")


@dataclass
class CoinductionReport:
    rank: int
    base_rank: int
    pi1_order: int
    cocycle_ok: bool
    restriction_ok: bool      # Res(Coind M) block c = T_c^-1 A_g g(T_c), T_c = A_{omega_c}
    permutation_ok: bool      # pi_1 acts by equivariant endomorphisms E_sigma with E_s E_t = E_{s+t}

    @property
    def ok(self) -> bool:
        return self.cocycle_ok and self.restriction_ok and self.permutation_ok


def verify_coinduction(rule: Callable, base_rank: int, datum: RootDatum, samples: Sequence[af.AffineElement]) -> CoinductionReport:
    co = coinduce_extended(rule, base_rank, datum)
    nv = datum.rank
    n = base_rank
    pos = {c: i for i, c in enumerate(co.classes)}
    cocycle_ok = True
    for g in samples:
        for h in samples:
            lhs = co.action(af.compose(g, h))
            rhs = pm_mul(co.action(g), _twist_y(co.action(h), g), nv)
            if lhs != rhs:
                cocycle_ok = False
    restriction_ok = True
    T = {c: rule(co.omegas[c]) for c in co.classes}
    Tinv = {c: _twist_y(rule(af.invert(co.omegas[c])), co.omegas[c]) for c in co.classes}
    for c in co.classes:
        if pm_mul(T[c], Tinv[c], nv) != pm_identity(n, nv):
            restriction_ok = False
    waff = [g for g in samples if not any(af.pi1_of(g))]
    for g in waff:
        big = co.action(g)
        for c in co.classes:
            k = pos[c]
            block = [row[k * n:(k + 1) * n] for row in big[k * n:(k + 1) * n]]
            want = pm_mul(pm_mul(Tinv[c], rule(g), nv), _twist_y(T[c], g), nv)
            if block != want:
                restriction_ok = False
    permutation_ok = True
    size = co.rank

    def endo(sigma):
        e = [[Poly(nv) for _ in range(size)] for _ in range(size)]
        for c in co.classes:
            c2 = datum.pi1_add(c, sigma)
            blk = pm_mul(Tinv[c2], T[c], nv)
            for i in range(n):
                for j in range(n):
                    e[pos[c2] * n + i][pos[c] * n + j] = blk[i][j]
        return e
    E = {s: endo(s) for s in co.classes}
    for s in co.classes:
        for g in waff:
            if pm_mul(co.action(g), _twist_y(E[s], g), nv) != pm_mul(E[s], co.action(g), nv):
                permutation_ok = False
        for t in co.classes:
            if pm_mul(E[s], E[t], nv) != E[datum.pi1_add(s, t)]:
                permutation_ok = False
    return CoinductionReport(co.rank, base_rank, len(co.classes), cocycle_ok, restriction_ok, permutation_ok)


# -- JSON module specs ------------------------------------------------------------------------

def _action_from_words(datum: RootDatum, gen_actions: dict, g: af.AffineElement, nv: int, n: int) -> Matrix:
    omega, word = af.decompose(g)
    if not omega.is_identity:
        raise DescentError("module specs describe W^aff-modules; element has a length-zero part")
    names = af.simple_names(datum)
    simple = af.affine_simple_reflections(datum)
    acc = pm_identity(n, nv)
    prefix = af.identity(datum)
    for i in word:
        if names[i] not in gen_actions:
            raise DescentError(f"module spec has no action for {names[i]}")
        acc = pm_mul(acc, _twist_y(gen_actions[names[i]], prefix), nv)
        prefix = af.compose(prefix, simple[i])
    return acc


def _term_from_json(datum: RootDatum, data: dict, where: str):
    nv = datum.rank
    if not isinstance(data, dict):
        raise DescentError(f"{where}: expected an object")
    if "generator_degrees" not in data:
        raise DescentError(f"{where}: missing field 'generator_degrees'")
    degs = data["generator_degrees"]
    if not isinstance(degs, list) or not all(isinstance(v, int) for v in degs):
        raise DescentError(f"{where}.generator_degrees: expected a list of integers")
    acts = data.get("actions")
    if not isinstance(acts, dict):
        raise DescentError(f"{where}: missing field 'actions'")
    names = set(af.simple_names(datum))
    out = {}
    for k, v in acts.items():
        if k not in names:
            raise DescentError(f"{where}.actions: unknown generator {k!r} (expected one of {sorted(names)})")
        mat = pm_from_sparse(v, nv, f"{where}.actions.{k}")
        if len(mat) != len(degs) or any(len(r) != len(degs) for r in mat):
            raise DescentError(f"{where}.actions.{k}: expected a {len(degs)}x{len(degs)} matrix")
        out[k] = mat
    return degs, out


def recipe_from_json(datum: RootDatum, data: dict, name: str = "module") -> ModuleRecipe:
    """Module spec: generator degrees and generator actions for the simple affine reflections."""
    if not isinstance(data, dict):
        raise DescentError("module spec must be a JSON object")
    if "resolution" in data:
        res = data["resolution"]
        if not isinstance(res, dict) or "terms" not in res or "differentials" not in res:
            raise DescentError("resolution: needs 'terms' and 'differentials'")
        terms = [_term_from_json(datum, t, f"resolution.terms[{i}]") for i, t in enumerate(res["terms"])]
        diffs = []
        for i, dm in enumerate(res["differentials"], start=1):
            if i >= len(terms):
                raise DescentError(f"resolution.differentials[{i - 1}]: no source term")
            mat = pm_from_sparse(dm, datum.rank, f"resolution.differentials[{i - 1}]")
            if len(mat) != len(terms[i - 1][0]) or any(len(r) != len(terms[i][0]) for r in mat):
                raise DescentError(f"resolution.differentials[{i - 1}]: wrong shape")
            diffs.append(mat)
    else:
        terms = [_term_from_json(datum, data, "module")]
        diffs = None

    def build(grp):
        built = []
        for degs, acts in terms:
            rule = {}
            for g in grp.elements:
                rule[g] = [[grp.to_centered(x) for x in row]
                           for row in _action_from_words(datum, acts, g, datum.rank, len(degs))]
            built.append(EquivariantModule(grp, list(degs), rule))
        if diffs is None:
            return built[0]
        cd = [[[grp.to_centered(x) for x in row] for row in dm] for dm in diffs]
        return EquivariantModule(grp, built[0].degrees, built[0].actions, Resolution(built, cd))
    return ModuleRecipe(name, build)


def load_module_spec(path) -> tuple[RootDatum, ModuleRecipe]:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescentError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "type" not in data:
        raise DescentError(f"{path}: missing field 'type'")
    datum = build_root_datum(data["type"], data.get("isogeny", "adjoint"))
    return datum, recipe_from_json(datum, data, name=str(data.get("name", "module")))


def recipe_to_json(datum: RootDatum, name: str) -> dict:
    """JSON spec (generator actions) for the rank-1/rank-2 corpus entries that have one."""
    simple = af.affine_simple_reflections(datum)
    names = af.simple_names(datum)
    n = datum.rank
    if name == "skyscraper_trivial" or name == "skyscraper_sign":
        if n != 1:
            raise DescentError("JSON skyscraper specs are provided for rank 1 only")
        sgn = -1 if name.endswith("sign") else 1

        def const(c):
            return [[Poly.const(1, c).to_sparse()]]
        return {"type": datum.type_label, "name": name, "resolution": {
            "terms": [{"generator_degrees": [0], "actions": {"s1": const(sgn)}},
                      {"generator_degrees": [1], "actions": {"s1": const(-sgn)}}],
            "differentials": [[[Poly.var(1, 0).to_sparse()]]]}}
    rule, rank = recipe_rule(name, datum)
    return {"type": datum.type_label, "name": name, "generator_degrees": [0] * rank,
            "actions": {nm: pm_to_sparse(rule(s)) for nm, s in zip(names, simple)}}
