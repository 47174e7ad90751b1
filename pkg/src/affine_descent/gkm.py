"""Moment graphs of Bruhat truncations and their GKM section spaces.

A truncation Omega is a finite set of affine elements, closed downward
inside each coset of W^aff.  Each gamma carries the graph
{(gamma^hbar(y), y, hbar)}; two vertices gamma, gamma*s (s an affine
reflection of W^aff) are joined by an edge whose label <y, alpha^vee> - k*hbar
cuts out the fixed locus of s in the source variable y.

Polynomials live in the coordinates y_1..y_r (coroot pairings) and, in
formal mode, a last variable hbar.  With hbar set to 1 the variable is
dropped and the action becomes affine.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import affine as af
from . import linalg
from .poly import Poly, affine_images, count_monomials, monomials_of_degree, monomials_up_to
from .rootdata import RootDatum

FORMAL = "formal"
HBAR_ONE = "1"


class GKMError(ValueError):
    pass


def _check_mode(mode: str) -> str:
    mode = str(mode)
    if mode not in (FORMAL, HBAR_ONE):
        raise GKMError(f"hbar mode must be 'formal' or '1', got {mode!r}")
    return mode


def nvars(datum: RootDatum, mode: str) -> int:
    return datum.rank + (1 if _check_mode(mode) == FORMAL else 0)


def coordinate_images(g: af.AffineElement, mode: str) -> list[Poly]:
    """Coordinates of gamma^hbar(y) as polynomials in (y, [hbar])."""
    d = g.datum
    n = nvars(d, mode)
    if mode == FORMAL:
        hbar = Poly.var(n, d.rank)
        shift = [hbar * t for t in g.translation]
    else:
        shift = list(g.translation)
    return affine_images(g.finite.matrix, shift, nvars=n)


@dataclass(frozen=True)
class GraphLocus:
    element: af.AffineElement
    mode: str = FORMAL

    def parametrization(self) -> tuple[list[Poly], list[Poly], Poly | None]:
        """(gamma^hbar(y), y, hbar) as coordinate polynomials in (y, hbar)."""
        d = self.element.datum
        n = nvars(d, self.mode)
        ys = [Poly.var(n, i) for i in range(d.rank)]
        hbar = Poly.var(n, d.rank) if self.mode == FORMAL else None
        return coordinate_images(self.element, self.mode), ys, hbar

    def check(self, samples: Sequence[tuple]) -> bool:
        """First coordinate agrees with act(gamma, y, hbar) at the given (y, hbar) samples."""
        head, _, _ = self.parametrization()
        for y, h in samples:
            pt = list(y) + ([h] if self.mode == FORMAL else [])
            want = af.act(self.element, y, h if self.mode == FORMAL else 1)
            if tuple(p.evaluate(pt) for p in head) != want:
                return False
        return True


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    reflection: af.AffineReflection

    def label(self, mode: str) -> Poly:
        return edge_label(self.reflection, mode)


def edge_label(refl: af.AffineReflection, mode: str) -> Poly:
    d = refl.element.datum
    n = nvars(d, mode)
    cv = d.coroot(refl.root)
    lin = Poly.linear(list(cv) + ([0] if mode == FORMAL else []))
    if mode == FORMAL:
        return lin - Poly.var(n, d.rank) * refl.level
    return lin - refl.level


def _hyperplane_substitution(refl: af.AffineReflection, mode: str) -> tuple[int, list[Poly]]:
    """Solve <y, alpha^vee> = k*hbar for the first variable with nonzero coefficient."""
    d = refl.element.datum
    n = nvars(d, mode)
    cv = d.coroot(refl.root)
    piv = next(i for i, c in enumerate(cv) if c)
    rhs = Poly.var(n, d.rank) * refl.level if mode == FORMAL else Poly.const(n, refl.level)
    for j, c in enumerate(cv):
        if j != piv and c:
            rhs = rhs - Poly.var(n, j) * c
    images = [Poly.var(n, i) for i in range(n)]
    images[piv] = rhs / cv[piv]
    return piv, images


def vanishes_on_fixed_locus(p: Poly, refl: af.AffineReflection, mode: str) -> bool:
    _, images = _hyperplane_substitution(refl, mode)
    return p.substitute(images).is_zero()


@dataclass
class MomentGraph:
    datum: RootDatum
    vertices: list
    edges: list = field(default_factory=list)

    def index(self, g: af.AffineElement) -> int:
        return self._index[g]

    def __post_init__(self):
        self._index = {g: i for i, g in enumerate(self.vertices)}

    def degree(self, g: af.AffineElement) -> int:
        i = self._index[g]
        return sum(1 for e in self.edges if i in (e.source, e.target))

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a
        for e in self.edges:
            parent[find(e.source)] = find(e.target)
        return len({find(i) for i in range(len(self.vertices))})

    def to_json(self, mode: str = FORMAL) -> dict:
        return {
            "type": self.datum.type_label,
            "vertices": [af.format_element(g) for g in self.vertices],
            "edges": [{"source": e.source, "target": e.target,
                       "reflection": af.refl_json(e.reflection),
                       "label": e.label(mode).to_sparse()} for e in self.edges],
        }


def _check_closed(vertices: Sequence[af.AffineElement]):
    s = set(vertices)
    for g in vertices:
        missing = [h for h in af.bruhat_interval(g) if h not in s]
        if missing:
            raise GKMError(f"vertex set is not downward closed: {af.format_element(missing[0])} "
                           f"<= {af.format_element(g)} is missing")


def build_moment_graph(vertices: Sequence[af.AffineElement], datum: RootDatum | None = None,
                       check: bool = True) -> MomentGraph:
    """Edges gamma -- gamma*s over affine reflections s in W^aff with both ends in Omega."""
    vertices = list(vertices)
    if not vertices:
        raise GKMError("empty vertex set")
    datum = datum or vertices[0].datum
    if len(set(vertices)) != len(vertices):
        raise GKMError("repeated vertex")
    if check:
        _check_closed(vertices)
    vertices = af._canon_order(vertices)
    edges = []
    for i, g in enumerate(vertices):
        gi = af.invert(g)
        for j in range(i + 1, len(vertices)):
            h = vertices[j]
            if af.pi1_of(g) != af.pi1_of(h):
                continue
            refl = af.as_reflection(af.compose(gi, h))
            if refl is not None and refl.level.denominator == 1:
                edges.append(Edge(i, j, refl))
    return MomentGraph(datum, vertices, edges)


def brute_force_edges(graph: MomentGraph, max_level: int) -> set[tuple[int, int]]:
    """Edge pairs found by trying every reflection s_{alpha,k}, |k| <= max_level."""
    d = graph.datum
    idx = {g: i for i, g in enumerate(graph.vertices)}
    out = set()
    for b in d.positive_roots:
        for k in range(-max_level, max_level + 1):
            s = af.affine_reflection(d, b, k).element
            for g, i in idx.items():
                j = idx.get(af.compose(g, s))
                if j is not None:
                    out.add((min(i, j), max(i, j)))
    return out


# -- sections -----------------------------------------------------------------------

SectionTuple = list  # one Poly per vertex


def is_section(t: Sequence[Poly], graph: MomentGraph, mode: str = FORMAL):
    """(True, None) if every edge difference vanishes on the edge's fixed locus, else (False, edge)."""
    mode = _check_mode(mode)
    if len(t) != len(graph.vertices):
        raise GKMError(f"section has {len(t)} entries for {len(graph.vertices)} vertices")
    for e in graph.edges:
        if not vanishes_on_fixed_locus(t[e.source] - t[e.target], e.reflection, mode):
            return False, e
    return True, None


def _monomial_basis(datum: RootDatum, d: int, mode: str):
    n = nvars(datum, mode)
    return monomials_of_degree(n, d) if mode == FORMAL else monomials_up_to(n, d)


def _constraint_rows(graph: MomentGraph, d: int, mode: str) -> tuple[list, list]:
    """Linear conditions on the stacked coefficient vector of a degree-d tuple."""
    basis = _monomial_basis(graph.datum, d, mode)
    nb = len(basis)
    rows = []
    for e in graph.edges:
        _, images = _hyperplane_substitution(e.reflection, mode)
        subs = [Poly.monomial(m).substitute(images) for m in basis]
        targets = sorted({x for p in subs for x in p.terms})
        for t in targets:
            row = [Fraction(0)] * (nb * len(graph.vertices))
            for k, p in enumerate(subs):
                c = p.terms.get(t)
                if c:
                    row[e.source * nb + k] += c
                    row[e.target * nb + k] -= c
            rows.append(row)
    return rows, list(basis)


@dataclass
class GradedSubspace:
    """Per degree d: a basis (rows of stacked coefficient vectors) and its monomial basis."""

    mode: str
    nvertices: int
    pieces: dict = field(default_factory=dict)  # d -> (monomial basis, basis rows)

    def dim(self, d: int) -> int:
        return len(self.pieces[d][1])

    def dims(self) -> list[int]:
        return [self.dim(d) for d in sorted(self.pieces)]

    def tuples(self, d: int, nv: int) -> list[list[Poly]]:
        basis, rows = self.pieces[d]
        nb = len(basis)
        out = []
        for row in rows:
            out.append([Poly(nv, {m: row[i * nb + k] for k, m in enumerate(basis) if row[i * nb + k]})
                        for i in range(self.nvertices)])
        return out


def section_space(graph: MomentGraph, d: int, mode: str = FORMAL, degrees: Sequence[int] | None = None) -> GradedSubspace:
    """Exact nullspaces of the edge conditions, for each degree 0..d.

    Formal mode: homogeneous tuples of exact degree k in (y, hbar).
    hbar = 1: tuples of degree <= k in y.
    """
    mode = _check_mode(mode)
    out = GradedSubspace(mode, len(graph.vertices))
    for k in (degrees if degrees is not None else range(d + 1)):
        rows, basis = _constraint_rows(graph, k, mode)
        ncols = len(basis) * len(graph.vertices)
        null = linalg.nullspace(rows, ncols) if rows else [
            [Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
        out.pieces[k] = (basis, null)
    return out


def section_dimension(graph: MomentGraph, d: int, mode: str = FORMAL) -> int:
    rows, basis = _constraint_rows(graph, d, mode)
    return len(basis) * len(graph.vertices) - linalg.rank(rows, len(basis) * len(graph.vertices))


def freeness_prediction(graph: MomentGraph, d: int) -> int:
    """sum over gamma of dim of degree-(d - l(gamma)) forms in rank+1 variables."""
    n = graph.datum.rank + 1
    return sum(count_monomials(n, d - af.length(g)) for g in graph.vertices)


# -- the adjacency subalgebra ---------------------------------------------------------

def _classes(graph: MomentGraph) -> list:
    return sorted({af.pi1_of(g) for g in graph.vertices})


def generator_tuples(graph: MomentGraph, mode: str = HBAR_ONE) -> dict[str, list[Poly]]:
    """t#(y_i), s#(y_i), (hbar), and one class idempotent per pi_1 class present."""
    mode = _check_mode(mode)
    d = graph.datum
    n = nvars(d, mode)
    gens = {}
    for i in range(d.rank):
        gens[f"t#y{i + 1}"] = [Poly.var(n, i)] * len(graph.vertices)
    imgs = [coordinate_images(g, mode) for g in graph.vertices]
    for i in range(d.rank):
        gens[f"s#y{i + 1}"] = [im[i] for im in imgs]
    if mode == FORMAL:
        gens["hbar"] = [Poly.var(n, d.rank)] * len(graph.vertices)
    for c in _classes(graph):
        gens[f"e{list(c)}"] = [Poly.const(n, int(af.pi1_of(g) == c)) for g in graph.vertices]
    return gens


def _flatten(t: Sequence[Poly], index: dict, size: int) -> list[Fraction]:
    out = []
    for p in t:
        out.extend(p.vector(index, size))
    return out


class _AdjacencySpan:
    """Incremental span of products of generators, extended one degree at a time."""

    def __init__(self, graph: MomentGraph, mode: str, maxdeg: int):
        self.graph, self.mode, self.maxdeg = graph, mode, maxdeg
        d = graph.datum
        self.n = nvars(d, mode)
        allmons = (monomials_up_to(self.n, maxdeg))
        self.index = {m: i for i, m in enumerate(allmons)}
        self.size = len(allmons)
        self.span = linalg.SpanBuilder(self.size * len(graph.vertices))
        gens = generator_tuples(graph, mode)
        self.linear = [v for k, v in gens.items() if not k.startswith("e")]
        self.idempotent_masks = [[bool(p) for p in v] for k, v in gens.items() if k.startswith("e")]
        self.layer = {(): [Poly.const(self.n, 1)] * len(graph.vertices)}
        self.degree = -1
        self.dims = []

    def _add(self, t):
        for mask in self.idempotent_masks:
            self.span.add(_flatten([p if m else Poly(self.n) for p, m in zip(t, mask)], self.index, self.size))

    def extend(self):
        self.degree += 1
        if self.degree > 0:
            nxt = {}
            for key, t in self.layer.items():
                last = key[-1] if key else 0
                for j in range(last, len(self.linear)):
                    nxt[key + (j,)] = [a * b for a, b in zip(t, self.linear[j])]
            self.layer = nxt
        for t in self.layer.values():
            self._add(t)
        self.dims.append(self.span.rank)


def adjacency_subalgebra(graph: MomentGraph, d: int, mode: str = HBAR_ONE) -> list[int]:
    """Dimensions of the degree <= k parts (k = 0..d) of the algebra generated by s#, t#, idempotents."""
    mode = _check_mode(mode)
    sp = _AdjacencySpan(graph, mode, d)
    for _ in range(d + 1):
        sp.extend()
    return sp.dims


def adjacency_basis(graph: MomentGraph, d: int, mode: str = HBAR_ONE) -> list[list[Poly]]:
    sp = _AdjacencySpan(graph, mode, d)
    for _ in range(d + 1):
        sp.extend()
    mons = list(sp.index)
    nb = sp.size
    out = []
    for row in sp.span.basis():
        out.append([Poly(sp.n, {m: row[i * nb + k] for k, m in enumerate(mons) if row[i * nb + k]})
                    for i in range(len(graph.vertices))])
    return out


@dataclass
class ReportRow:
    degree: int
    dim_adjacency: int
    dim_kernel: int
    equal: bool
    included: bool
    lag: int | None = None   # least e - d with kernel(<= d) inside adjacency(<= e)


@dataclass
class KernelReport:
    type_label: str
    vertices: list
    mode: str
    rows: list

    @property
    def saturation_degree(self):
        """Smallest d0 with equality at every reported d >= d0 (None if never)."""
        sat = None
        for row in reversed(self.rows):
            if not row.equal:
                break
            sat = row.degree
        return sat

    @property
    def inclusion_holds(self) -> bool:
        return all(r.included for r in self.rows)

    @property
    def max_lag(self):
        lags = [r.lag for r in self.rows]
        return None if any(v is None for v in lags) else max(lags, default=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "dim_adjacency", "dim_kernel", "equal"])
        for r in self.rows:
            w.writerow([r.degree, r.dim_adjacency, r.dim_kernel, str(r.equal).lower()])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "vertices": self.vertices,
            "hbar": self.mode,
            "rows": [{"degree": r.degree, "dim_adjacency": r.dim_adjacency, "dim_kernel": r.dim_kernel,
                      "equal": r.equal, "included": r.included, "lag": r.lag} for r in self.rows],
            "saturation_degree": self.saturation_degree,
            "inclusion": self.inclusion_holds,
        }

    @classmethod
    def from_json(cls, data: dict) -> "KernelReport":
        rows = [ReportRow(r["degree"], r["dim_adjacency"], r["dim_kernel"], r["equal"], r["included"],
                          r.get("lag")) for r in data["rows"]]
        return cls(data["type"], data["vertices"], data["hbar"], rows)


def kernel_equality_report(graph: MomentGraph, d_max: int, mode: str = HBAR_ONE,
                           lag_slack: int = 2) -> KernelReport:
    """Per degree: dim of the adjacency span, dim of the section space, equality and inclusion.

    In formal mode the section space is graded by exact degree, so the
    kernel column reports cumulative dimensions through degree d.  At
    hbar = 1 each row also records the generation lag: how many extra
    degrees of products are needed before the adjacency span swallows the
    degree <= d kernel (searched up to d_max + lag_slack).
    """
    mode = _check_mode(mode)
    top = d_max + (lag_slack if mode == HBAR_ONE else 0)
    sp = _AdjacencySpan(graph, mode, top)
    rows = []
    pending = []   # (row, kernel vectors in the adjacency coordinates)
    cumulative = 0
    for k in range(top + 1):
        sp.extend()
        if k <= d_max:
            if mode == FORMAL:
                cumulative += section_dimension(graph, k, mode)
                kdim = cumulative
                cons, basis = _constraint_rows_upto(graph, k)
            else:
                kdim = section_dimension(graph, k, mode)
                cons, basis = _constraint_rows(graph, k, mode)
            included = _span_in_kernel(sp, cons, basis, len(graph.vertices))
            row = ReportRow(k, sp.dims[-1], kdim, sp.dims[-1] == kdim, included)
            rows.append(row)
            if mode == HBAR_ONE:
                pending.append((row, _kernel_in_adjacency_coords(graph, k, sp)))
        for row, vecs in pending:
            if row.lag is None and all(sp.span.contains(v) for v in vecs):
                row.lag = k - row.degree
    return KernelReport(graph.datum.type_label, [af.format_element(g) for g in graph.vertices], mode, rows)


def _kernel_in_adjacency_coords(graph: MomentGraph, d: int, sp: "_AdjacencySpan") -> list:
    space = section_space(graph, d, HBAR_ONE, degrees=[d])
    basis, null = space.pieces[d]
    nb = len(basis)
    out = []
    for vec in null:
        v = [Fraction(0)] * (sp.size * len(graph.vertices))
        for i in range(len(graph.vertices)):
            for k, m in enumerate(basis):
                if vec[i * nb + k]:
                    v[i * sp.size + sp.index[m]] = vec[i * nb + k]
        out.append(v)
    return out


def _constraint_rows_upto(graph: MomentGraph, d: int):
    """Formal-mode conditions on tuples of degree <= d (homogeneous pieces are independent)."""
    n = nvars(graph.datum, FORMAL)
    basis = list(monomials_up_to(n, d))
    pos = {m: i for i, m in enumerate(basis)}
    nb = len(basis)
    nv = len(graph.vertices)
    rows = []
    for k in range(d + 1):
        krows, kbasis = _constraint_rows(graph, k, FORMAL)
        kb = len(kbasis)
        for r in krows:
            row = [Fraction(0)] * (nb * nv)
            for v in range(nv):
                for j, m in enumerate(kbasis):
                    if r[v * kb + j]:
                        row[v * nb + pos[m]] = r[v * kb + j]
            rows.append(row)
    return rows, basis


def _span_in_kernel(sp: _AdjacencySpan, cons, basis, nv) -> bool:
    pos = {m: i for i, m in enumerate(basis)}
    nb = len(basis)
    order = list(sp.index)
    for vec in sp.span.basis():
        v = [0] * (nb * nv)
        for i in range(nv):
            for k, m in enumerate(order):
                c = vec[i * sp.size + k]
                if c:
                    if m not in pos:
                        return False
                    v[i * nb + pos[m]] = c
        if any(sum(a * b for a, b in zip(row, v)) for row in cons):
            return False
    return True


def restriction_surjective(graph: MomentGraph, d: int, mode: str = HBAR_ONE) -> dict:
    """For each vertex: does the adjacency span restricted to that factor reach all degree <= d polynomials?"""
    sp = _AdjacencySpan(graph, mode, d)
    for _ in range(d + 1):
        sp.extend()
    basis = sp.span.basis()
    out = {}
    for i, g in enumerate(graph.vertices):
        proj = [row[i * sp.size:(i + 1) * sp.size] for row in basis]
        out[af.format_element(g)] = linalg.rank(proj, sp.size) == sp.size
    return out


# -- averaging section ---------------------------------------------------------------------

@dataclass
class BetaReport:
    point: tuple
    stabilizer: list
    checks: dict
    witnesses: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"point": af.point_json(self.point), "stabilizer": [af.format_element(g) for g in self.stabilizer],
                "checks": self.checks, "witnesses": self.witnesses, "ok": self.ok}


def beta(xi: Sequence[Poly], graph: MomentGraph, stab: Sequence[af.AffineElement]) -> Poly:
    """Average of the source-side components xi_gamma over the (extended) stabilizer."""
    idx = {g: i for i, g in enumerate(graph.vertices)}
    total = Poly(xi[0].nvars)
    for g in stab:
        total = total + xi[idx[g]]
    return total / len(stab)


def verify_beta_section(x: Sequence, graph: MomentGraph, degree: int = 3) -> BetaReport:
    """Check the averaging map over the stabilizer of x is a t#-linear section (hbar = 1).

    (a) beta(t# f) = f;  (b) beta(t#(f) * xi) = f * beta(xi) for section
    basis elements xi;  (c) beta(s# f) is invariant under the stabilizer,
    i.e. its pullbacks along head and tail agree on every graph Gamma_gamma
    with gamma in the stabilizer.  f runs over all monomials of degree <= degree.
    """
    d = graph.datum
    x = af.as_point(x)
    stab = af.extended_stabilizer(d, x)
    verts = set(graph.vertices)
    missing = [g for g in stab if g not in verts]
    if missing:
        raise GKMError(f"stabilizer element {af.format_element(missing[0])} is not a vertex")
    n = d.rank
    mons = [Poly.monomial(m) for m in monomials_up_to(n, degree)]
    nv = len(graph.vertices)
    checks, witnesses = {}, {}

    bad = next((f for f in mons if beta([f] * nv, graph, stab) != f), None)
    checks["retraction"] = bad is None
    if bad is not None:
        witnesses["retraction"] = bad.to_str()

    sec = section_space(graph, max(1, degree - 1), HBAR_ONE, degrees=[max(1, degree - 1)])
    xis = sec.tuples(max(1, degree - 1), n)
    bad = None
    for f in (f for f in mons if f.degree() <= 1):
        for xi in xis:
            if beta([f * p for p in xi], graph, stab) != f * beta(xi, graph, stab):
                bad = f
                break
        if bad is not None:
            break
    checks["t_linear"] = bad is None
    if bad is not None:
        witnesses["t_linear"] = bad.to_str()

    imgs = {g: coordinate_images(g, HBAR_ONE) for g in graph.vertices}
    bad = None
    for f in mons:
        z = beta([f.substitute(imgs[g]) for g in graph.vertices], graph, stab)
        for g in stab:
            if z.substitute(imgs[g]) != z:
                bad = (f, g)
                break
        if bad:
            break
    checks["head_tail_agree"] = bad is None
    if bad is not None:
        witnesses["head_tail_agree"] = [bad[0].to_str(), af.format_element(bad[1])]
    return BetaReport(x, stab, checks, witnesses)


# -- separation by adjacency functions ------------------------------------------------------

def separates(g: af.AffineElement, h: af.AffineElement, y: Sequence) -> bool:
    """Whether some adjacency function distinguishes (g, y) from (h, y), given g(y) = h(y)."""
    y = af.as_point(y)
    if af.act(g, y) != af.act(h, y):
        raise GKMError("precondition failed: the two elements send y to different points")
    return af.pi1_of(g) != af.pi1_of(h)


def separates_by_evaluation(g: af.AffineElement, h: af.AffineElement, y: Sequence) -> bool:
    """Same question answered by evaluating every generator tuple on the graph {g, h}."""
    y = af.as_point(y)
    verts = [g] if g == h else [g, h]
    graph = MomentGraph(g.datum, verts, [])
    for t in generator_tuples(graph, HBAR_ONE).values():
        vals = {p.evaluate(y) for p in t}
        if len(vals) > 1:
            return True
    return False


# -- serialization -------------------------------------------------------------------------

def section_to_json(t: Sequence[Poly], graph: MomentGraph) -> dict:
    return {af.format_element(g): p.to_sparse() for g, p in zip(graph.vertices, t)}


def section_from_json(data: dict, graph: MomentGraph, mode: str = FORMAL) -> list[Poly]:
    n = nvars(graph.datum, mode)
    out = []
    for g in graph.vertices:
        key = af.format_element(g)
        if key not in data:
            raise GKMError(f"section has no entry for vertex {key}")
        out.append(Poly.from_sparse(n, data[key]))
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
