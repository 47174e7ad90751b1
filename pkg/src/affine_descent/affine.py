"""Extended affine Weyl group L # W acting on t*, alcoves and stabilizers.

An element t_lam w acts by x -> w(x) + lam; its hbar-deformation acts by
x -> w(x) + hbar*lam.  Alcoves are components of the complement of the
hyperplanes <x, alpha^vee> = k (k integer); the fundamental alcove A0 is
cut out by the simple roots and, per irreducible component, by the root
theta whose coroot is highest.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Sequence

from . import linalg
from .rootdata import FiniteWeylElement, RootDataError, RootDatum, enumerate_weyl, root_system_type

Point = tuple


class AffineError(ValueError):
    pass


class NonRegularPointError(AffineError):
    def __init__(self, root, level):
        self.root, self.level = tuple(root), level
        super().__init__(f"non-regular point: lies on the hyperplane <x, {self.root}^vee> = {level}")


def _datum_key(d: RootDatum):
    return (d.type_label, d.char_lattice)


def as_point(x: Iterable) -> Point:
    return tuple(Fraction(v) for v in x)


@dataclass(frozen=True, eq=False)
class AffineElement:
    """t_lam * w, with lam in weight coordinates (integral, in L)."""

    datum: RootDatum
    translation: tuple[int, ...]
    finite: FiniteWeylElement

    def __eq__(self, other):
        return (isinstance(other, AffineElement) and self.translation == other.translation
                and self.finite.matrix == other.finite.matrix
                and (self.datum is other.datum or _datum_key(self.datum) == _datum_key(other.datum)))

    def __hash__(self):
        return hash((self.datum.type_label, self.translation, self.finite.matrix))

    def __repr__(self):
        return f"AffineElement({format_element(self)})"

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return compose(self, other)

    def __call__(self, x, hbar=1) -> Point:
        return act(self, x, hbar)

    @property
    def key(self):
        return (self.translation, self.finite.matrix)

    def inverse(self) -> "AffineElement":
        return invert(self)

    @property
    def is_identity(self) -> bool:
        return not any(self.translation) and self.finite.is_identity

    def reflection_data(self):
        """(positive root, level) if this is an affine reflection, else None."""
        return _reflection_data(self)


def make_element(datum: RootDatum, translation: Sequence = None,
                 finite: FiniteWeylElement | None = None) -> AffineElement:
    r = datum.rank
    lam = tuple(Fraction(v) for v in (translation if translation is not None else (0,) * r))
    if any(v.denominator != 1 for v in lam) or not datum.in_lattice(lam):
        raise AffineError(f"translation {tuple(str(v) for v in lam)} is not in the character lattice")
    w = datum.identity_element if finite is None else datum.weyl_element(finite.matrix)
    return AffineElement(datum, tuple(int(v) for v in lam), w)


def identity(datum: RootDatum) -> AffineElement:
    return AffineElement(datum, (0,) * datum.rank, datum.identity_element)


def translation(datum: RootDatum, lam: Sequence) -> AffineElement:
    return make_element(datum, lam)


def compose(g: AffineElement, h: AffineElement) -> AffineElement:
    if g.datum is not h.datum and _datum_key(g.datum) != _datum_key(h.datum):
        raise AffineError("cannot compose elements of different root data")
    wl = g.finite(h.translation)
    lam = tuple(a + b for a, b in zip(g.translation, wl))
    w = g.datum.weyl_element(linalg.mat_mul(g.finite.matrix, h.finite.matrix))
    return AffineElement(g.datum, tuple(int(v) for v in lam), w)


def invert(g: AffineElement) -> AffineElement:
    winv = g.datum.weyl_element(linalg.inverse(g.finite.matrix))
    lam = winv(g.translation)
    return AffineElement(g.datum, tuple(-int(v) for v in lam), winv)


def act(g: AffineElement, x: Sequence, hbar=1) -> Point:
    """hbar-deformed action x -> w(x) + hbar * lam."""
    hbar = Fraction(hbar)
    wx = g.finite(as_point(x))
    return tuple(a + hbar * b for a, b in zip(wx, g.translation))


def _reflection_data(g: AffineElement):
    d = g.datum
    m = g.finite.matrix
    r = d.rank
    diff = [[m[i][j] - (i == j) for j in range(r)] for i in range(r)]
    if linalg.rank(diff) != 1:
        return None
    if any(sum(m[i][k] * m[k][j] for k in range(r)) != (i == j) for i in range(r) for j in range(r)):
        return None
    for b in d.positive_roots:
        if d.reflection_of(b).matrix == m:
            aw = d.weight_coords(b)
            # translation must be k * alpha
            idx = next(i for i, v in enumerate(aw) if v != 0)
            k = Fraction(g.translation[idx]) / aw[idx]
            if all(Fraction(t) == k * a for t, a in zip(g.translation, aw)):
                return b, k
            return None
    return None


# -- affine reflections ---------------------------------------------------------

@dataclass(frozen=True)
class AffineReflection:
    root: tuple[int, ...]
    level: Fraction
    element: AffineElement

    def fixes(self, x, hbar=1) -> bool:
        return self.element.datum.pairing(x, self.root) == self.level * Fraction(hbar)

    def label(self) -> str:
        return f"s[{','.join(map(str, self.root))};{self.level}]"


def affine_reflection(datum: RootDatum, root: Sequence, level=0) -> AffineReflection:
    """s_{root,level}: x -> x - (<x,root^vee> - level) root, normalized to a positive root."""
    root = tuple(root)
    if not datum.is_root(root):
        raise RootDataError(f"{root} is not a root of {datum.type_label}")
    level = Fraction(level)
    if sum(root) < 0:
        root, level = tuple(-v for v in root), -level
    aw = datum.weight_coords(root)
    lam = tuple(level * a for a in aw)
    el = make_element(datum, lam, datum.reflection_of(root))
    return AffineReflection(root, level, el)


def as_reflection(g: AffineElement) -> AffineReflection | None:
    data = _reflection_data(g)
    if data is None:
        return None
    return AffineReflection(data[0], data[1], g)


# -- the fundamental alcove --------------------------------------------------------

@lru_cache(maxsize=None)
def _alcove_data(datum: RootDatum):
    thetas = datum.highest_coroot_roots()
    r = datum.rank
    p = [Fraction(0)] * r
    for comp, th in zip(datum.components, thetas):
        h = sum(datum.coroot(th))
        for i in comp:
            p[i] = Fraction(1) / (h + 1)
    simple = [AffineElement(datum, (0,) * r, datum.simple_reflection(i)) for i in range(r)]
    for th in thetas:
        simple.append(affine_reflection(datum, th, 1).element)
    names = [f"s{i + 1}" for i in range(r)]
    if len(thetas) == 1:
        names.append("s0")
    else:
        names.extend(f"s0_{c + 1}" for c in range(len(thetas)))
    return tuple(thetas), tuple(p), tuple(simple), tuple(names)


def affine_simple_reflections(datum: RootDatum) -> tuple[AffineElement, ...]:
    """Reflections in the walls of A0: s1..sr, then one s0 per component."""
    return _alcove_data(datum)[2]


def simple_names(datum: RootDatum) -> tuple[str, ...]:
    return _alcove_data(datum)[3]


def fundamental_point(datum: RootDatum) -> Point:
    return _alcove_data(datum)[1]


def _wall_values(datum: RootDatum, x: Point):
    """Signed wall functionals: positive exactly on the open alcove A0."""
    thetas = _alcove_data(datum)[0]
    vals = list(x)
    vals.extend(1 - datum.pairing(x, th) for th in thetas)
    return vals


def in_fundamental_alcove(datum: RootDatum, x: Sequence, closed: bool = False) -> bool:
    vals = _wall_values(datum, as_point(x))
    return all(v >= 0 for v in vals) if closed else all(v > 0 for v in vals)


def singular_hyperplane(datum: RootDatum, x: Sequence):
    """First (positive root, level) with <x, root^vee> integral, or None."""
    for b in datum.positive_roots:
        c = datum.pairing(x, b)
        if c.denominator == 1:
            return b, int(c)
    return None


def fold(datum: RootDatum, x: Sequence) -> tuple[list[int], Point]:
    """Fold a regular point into A0 across violated walls (lowest index first).

    Returns (indices i_1..i_k, folded point) with s_{i_k}...s_{i_1} x in A0.
    Each fold crosses exactly one separating hyperplane, so the loop runs
    exactly (number of hyperplanes separating x from A0) times.
    """
    simple = affine_simple_reflections(datum)
    x = as_point(x)
    word = []
    while True:
        vals = _wall_values(datum, x)
        bad = next((i for i, v in enumerate(vals) if v < 0), None)
        if bad is None:
            if any(v == 0 for v in vals):
                raise NonRegularPointError(*singular_hyperplane(datum, x))
            return word, x
        word.append(bad)
        x = act(simple[bad], x)


# -- lengths, reduced words, Bruhat order ----------------------------------------------

def length_by_walls(g: AffineElement) -> int:
    """Number of affine hyperplanes separating A0 from g(A0)."""
    d = g.datum
    q = act(g, fundamental_point(d))
    return sum(abs(floor(d.pairing(q, b))) for b in d.positive_roots)


@lru_cache(maxsize=200000)
def decompose(g: AffineElement) -> tuple[AffineElement, tuple[int, ...]]:
    """g = omega * s_{w[0]} ... s_{w[-1]} with omega of length zero and the word reduced."""
    d = g.datum
    simple = affine_simple_reflections(d)
    ginv = invert(g)
    word, _ = fold(d, act(ginv, fundamental_point(d)))
    u = ginv
    for i in word:
        u = compose(simple[i], u)
    omega = invert(u)
    return omega, tuple(reversed(word))


def length(g: AffineElement) -> int:
    return len(decompose(g)[1])


def reduced_word(g: AffineElement) -> tuple[int, ...]:
    return decompose(g)[1]


def length_zero_part(g: AffineElement) -> AffineElement:
    return decompose(g)[0]


def from_word(datum: RootDatum, word: Sequence[int], omega: AffineElement | None = None) -> AffineElement:
    simple = affine_simple_reflections(datum)
    g = omega if omega is not None else identity(datum)
    for i in word:
        g = compose(g, simple[i])
    return g


@lru_cache(maxsize=None)
def length_zero_elements(datum: RootDatum) -> dict:
    """pi_1 class -> the unique element of that class stabilizing A0."""
    out = {}
    for c, lam in datum.pi1_representatives.items():
        out[c] = decompose(translation(datum, lam))[0]
    return dict(sorted(out.items()))


def pi1_of(g: AffineElement) -> tuple[int, ...]:
    return g.datum.pi1_class(g.translation)


def _canon_order(elems: Iterable[AffineElement]) -> list[AffineElement]:
    return sorted(set(elems), key=lambda g: (length(g), pi1_of(g), format_element(g)))


def bruhat_interval(w: AffineElement) -> list[AffineElement]:
    """Lower interval {omega v : v <= u} for w = omega u (subword products)."""
    omega, word = decompose(w)
    simple = affine_simple_reflections(w.datum)
    elems = {identity(w.datum)}
    for i in word:
        elems |= {compose(x, simple[i]) for x in elems}
    return _canon_order(compose(omega, x) for x in elems)


def bruhat_ideal(elements: Iterable[AffineElement]) -> list[AffineElement]:
    out = set()
    for g in elements:
        out.update(bruhat_interval(g))
    return _canon_order(out)


def bruhat_leq(a: AffineElement, b: AffineElement) -> bool:
    return a in set(bruhat_interval(b))


def is_downward_closed(elements: Iterable[AffineElement]) -> bool:
    s = set(elements)
    return all(set(bruhat_interval(g)) <= s for g in s)


def interval_from_word(datum: RootDatum, text: str) -> list[AffineElement]:
    w = parse_affine_word(datum, text)
    if length(w) != len(_WORD_RE.findall(text.replace(" ", ""))):
        raise AffineError(f"{text!r} is not a reduced word")
    return bruhat_interval(w)


def enumerate_ideals(datum: RootDatum, max_size: int) -> list[list[AffineElement]]:
    """All Bruhat order ideals of W^aff containing e with at most max_size elements."""
    simple = affine_simple_reflections(datum)
    e = identity(datum)
    start = frozenset([e])
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for ideal in frontier:
            if len(ideal) >= max_size:
                continue
            cands = set()
            for x in ideal:
                lx = length(x)
                for s in simple:
                    y = compose(x, s)
                    if y not in ideal and length(y) == lx + 1:
                        cands.add(y)
            for y in cands:
                if set(bruhat_interval(y)) - {y} <= ideal:
                    new = ideal | {y}
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
        frontier = nxt
    ideals = [_canon_order(i) for i in seen]
    return sorted(ideals, key=lambda I: (len(I), [format_element(g) for g in I]))


# -- alcoves -------------------------------------------------------------------------

@dataclass(frozen=True)
class Alcove:
    """The alcove u(A0), u in W^aff."""

    element: AffineElement

    def contains(self, x) -> bool:
        return in_fundamental_alcove(self.element.datum, act(invert(self.element), x))

    def closure_contains(self, x) -> bool:
        return in_fundamental_alcove(self.element.datum, act(invert(self.element), x), closed=True)

    def wall_reflections(self) -> list[tuple[int, AffineElement]]:
        u = self.element
        ui = invert(u)
        return [(i, compose(compose(u, s), ui)) for i, s in enumerate(affine_simple_reflections(u.datum))]

    def neighbor(self, i: int) -> "Alcove":
        return Alcove(compose(self.element, affine_simple_reflections(self.element.datum)[i]))


def locate_alcove(datum: RootDatum, x: Sequence) -> Alcove:
    """The alcove containing a regular point x."""
    x = as_point(x)
    hit = singular_hyperplane(datum, x)
    if hit is not None:
        raise NonRegularPointError(*hit)
    word, _ = fold(datum, x)
    return Alcove(from_word(datum, word))


def _closure_box_radius(datum: RootDatum) -> Fraction:
    thetas = _alcove_data(datum)[0]
    verts = [tuple(Fraction(0) for _ in range(datum.rank))]
    for comp, th in zip(datum.components, thetas):
        cv = datum.coroot(th)
        for i in comp:
            v = [Fraction(0)] * datum.rank
            v[i] = 1 / cv[i]
            verts.append(tuple(v))
    # closure of A0 is the convex hull of these vertices (per component product)
    corners = [tuple(Fraction(0) for _ in range(datum.rank))]
    for comp in datum.components:
        corners = [tuple(c[j] + (v[j] if j in comp else 0) for j in range(datum.rank))
                   for c in corners for v in verts if all(v[j] == 0 for j in range(datum.rank) if j not in comp)]
    return max(abs(x) for w in enumerate_weyl(datum) for c in corners for x in w(c))


def alcoves_at_point(datum: RootDatum, x: Sequence) -> list[Alcove]:
    """Alcoves whose closure contains x, found by brute force over a bounding box."""
    x = as_point(x)
    rad = _closure_box_radius(datum)
    r = datum.rank
    ranges = [range(floor(x[j] - rad) - 1, floor(x[j] + rad) + 2) for j in range(r)]
    found = []
    lams = [()]
    for rg in ranges:
        lams = [l + (v,) for l in lams for v in rg]
    for lam in lams:
        if not datum.in_root_lattice(lam):
            continue
        shifted = tuple(a - b for a, b in zip(x, lam))
        for w in enumerate_weyl(datum):
            winv = datum.weyl_element(linalg.inverse(w.matrix))
            if in_fundamental_alcove(datum, winv(shifted), closed=True):
                found.append(Alcove(AffineElement(datum, tuple(lam), w)))
    return found


# -- stabilizers ------------------------------------------------------------------------

def group_closure(generators: Iterable[AffineElement], datum: RootDatum | None = None,
                  budget: int = 10000) -> list[AffineElement]:
    gens = list(generators)
    if datum is None:
        if not gens:
            raise AffineError("need a datum for the trivial group")
        datum = gens[0].datum
    e = identity(datum)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > budget:
                        raise AffineError("group enumeration budget exceeded")
        frontier = nxt
    return _canon_order(seen)


def stabilizer_brute_force(datum: RootDatum, re_part: Sequence, im_part: Sequence | None = None,
                           extended: bool = False) -> list[AffineElement]:
    """{t_{x - w x} w} over all w in W, keeping translations in Q (or L if extended)."""
    x = as_point(re_part)
    im = as_point(im_part) if im_part is not None else None
    out = []
    for w in enumerate_weyl(datum):
        lam = tuple(a - b for a, b in zip(x, w(x)))
        if any(v.denominator != 1 for v in lam):
            continue
        ok = datum.in_lattice(lam) if extended else datum.in_root_lattice(lam)
        if not ok:
            continue
        if im is not None and tuple(w(im)) != im:
            continue
        out.append(AffineElement(datum, tuple(int(v) for v in lam), w))
    return _canon_order(out)


def extended_stabilizer(datum: RootDatum, x: Sequence) -> list[AffineElement]:
    return stabilizer_brute_force(datum, x, extended=True)


def reflections_through(datum: RootDatum, x: Sequence) -> list[AffineReflection]:
    out = []
    for b in datum.positive_roots:
        c = datum.pairing(x, b)
        if c.denominator == 1:
            out.append(affine_reflection(datum, b, c))
    return out


@dataclass
class StabilizerCertificate:
    re: Point
    im: Point
    generators: list            # AffineReflections through Re whose finite part fixes Im
    re_generators: list         # all AffineReflections through Re
    elements: list              # Gamma^x
    re_elements: list           # Gamma^{Re x}
    adjacent_alcove: Alcove     # alcove P with Re in its closure and Gamma^x parabolic for P
    wall_generators: list       # walls of P generating Gamma^x
    re_wall_generators: list    # walls of P through Re, generating Gamma^{Re x}
    parabolic_type: list        # simple indices J with Gamma^x = u <s_j : j in J> u^-1
    w_image: list
    phi_x: list                 # roots alpha with <Re, alpha^vee> integral
    phi_x_type: str
    phi_x_full: list            # ... and <Im, alpha^vee> = 0
    v_x: list                   # basis of the fixed space of pi(Gamma^{Re x})
    alcove_count: int           # alcoves containing Re in their closure (box search)

    @property
    def order(self) -> int:
        return len(self.elements)

    def check(self) -> list[str]:
        """Names of violated certificate invariants (empty list = certificate valid)."""
        failures = []
        datum = self.adjacent_alcove.element.datum
        for g in self.generators:
            if act(g.element, self.re) != self.re or g.element.finite(self.im) != self.im:
                failures.append("generator does not fix x")
        if len({g.finite.matrix for g in self.elements}) != len(self.elements):
            failures.append("pi not injective")
        if set(group_closure([g for g in self.wall_generators], datum)) != set(self.elements):
            failures.append("wall generators do not generate Gamma^x")
        if set(group_closure(self.re_wall_generators, datum)) != set(self.re_elements):
            failures.append("walls through Re do not generate Gamma^{Re}")
        if set(group_closure([g.element for g in self.generators], datum)) != set(self.elements):
            failures.append("reflections through x do not generate Gamma^x")
        if set(stabilizer_brute_force(datum, self.re, self.im)) != set(self.elements):
            failures.append("brute-force stabilizer differs")
        if set(stabilizer_brute_force(datum, self.re)) != set(self.re_elements):
            failures.append("brute-force stabilizer of Re differs")
        roots = set(self.phi_x)
        for a in roots:
            if tuple(-v for v in a) not in roots:
                failures.append("phi_x not closed under negation")
                break
            sa = datum.reflection_of(a) if sum(a) > 0 else datum.reflection_of(tuple(-v for v in a))
            if any(datum.act_on_root(sa, b) not in roots for b in roots):
                failures.append("phi_x not closed under its reflections")
                break
        if self.alcove_count != len(self.re_elements):
            failures.append("alcove count differs from |Gamma^{Re}|")
        if not self.adjacent_alcove.closure_contains(self.re):
            failures.append("adjacent alcove does not contain Re in its closure")
        return failures

    def to_json(self) -> dict:
        fmt = format_element
        return {
            "re": [str(v) for v in self.re],
            "im": [str(v) for v in self.im],
            "order": self.order,
            "re_order": len(self.re_elements),
            "elements": [fmt(g) for g in self.elements],
            "generators": [refl_json(g) for g in self.generators],
            "adjacent_alcove": fmt(self.adjacent_alcove.element),
            "wall_generators": [fmt(g) for g in self.wall_generators],
            "parabolic_type": [simple_names(self.adjacent_alcove.element.datum)[j] for j in self.parabolic_type],
            "w_image": [[i + 1 for i in w.word] for w in self.w_image],
            "phi_x": [list(b) for b in self.phi_x],
            "phi_x_type": self.phi_x_type,
            "v_x": [[str(v) for v in row] for row in self.v_x],
            "alcove_count": self.alcove_count,
        }


def refl_json(r: AffineReflection) -> dict:
    return {"root": list(r.root), "level": str(r.level), "element": format_element(r.element)}


def _nearby_regular_point(datum: RootDatum, x: Point) -> Point:
    r = datum.rank
    rho = (Fraction(1),) * r
    eps = None
    for b in datum.positive_roots:
        h = datum.pairing(rho, b)
        c = datum.pairing(x, b)
        dist = c - floor(c)
        dist = min(dist, 1 - dist) if dist else Fraction(1)
        cand = dist / (2 * h)
        eps = cand if eps is None else min(eps, cand)
    return tuple(v + eps * p for v, p in zip(x, rho))


def stabilizer(datum: RootDatum, re_part: Sequence, im_part: Sequence | None = None) -> StabilizerCertificate:
    """Stabilizer of x = Re + i Im in W^aff, with a parabolicity certificate."""
    x = as_point(re_part)
    im = as_point(im_part) if im_part is not None else tuple(Fraction(0) for _ in x)
    if len(x) != datum.rank or len(im) != datum.rank:
        raise AffineError(f"point must have {datum.rank} coordinates")
    re_gens = reflections_through(datum, x)
    gens = [g for g in re_gens if datum.pairing(im, g.root) == 0]
    re_elements = group_closure([g.element for g in re_gens], datum)
    elements = group_closure([g.element for g in gens], datum)

    base = locate_alcove(datum, _nearby_regular_point(datum, x))
    re_walls = [g for _, g in base.wall_reflections() if act(g, x) == x]

    chosen = None
    for h in re_elements:
        cand = Alcove(compose(h, base.element))
        walls = [(i, g) for i, g in cand.wall_reflections()
                 if act(g, x) == x and g.finite(im) == im]
        if set(group_closure([g for _, g in walls], datum)) == set(elements):
            chosen = (cand, walls)
            break
    if chosen is None:
        raise AffineError("no adjacent alcove realizes the stabilizer as a parabolic subgroup")
    cand, walls = chosen

    phi = [b for b in datum.all_roots if datum.pairing(x, b).denominator == 1]
    phi_full = [b for b in phi if datum.pairing(im, b) == 0]
    r = datum.rank
    rows = []
    for g in re_gens:
        m = g.element.finite.matrix
        rows.extend([[m[i][j] - (i == j) for j in range(r)] for i in range(r)])
    v_x = linalg.nullspace(rows, r) if rows else [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]

    return StabilizerCertificate(
        re=x, im=im,
        generators=gens, re_generators=re_gens,
        elements=elements, re_elements=re_elements,
        adjacent_alcove=cand,
        wall_generators=[g for _, g in walls],
        re_wall_generators=re_walls,
        parabolic_type=[i for i, _ in walls],
        w_image=[g.finite for g in elements],
        phi_x=phi, phi_x_type=root_system_type(datum, phi),
        phi_x_full=phi_full,
        v_x=v_x,
        alcove_count=len(alcoves_at_point(datum, x)),
    )


def alcove_walk(datum: RootDatum, start: Alcove, end: Alcove, x: Sequence) -> list[AffineReflection]:
    """Gallery from start to end through alcoves containing x in their closure.

    Returns reflections r_1..r_n with r_n ... r_1 (start) = end; each r_j is
    the reflection in the wall shared by consecutive alcoves, and that wall
    passes through x.
    """
    x = as_point(x)
    if not start.closure_contains(x) or not end.closure_contains(x):
        raise AffineError("x is not in the closure of both alcoves")
    prev = {start.element: None}
    queue = deque([start.element])
    while queue:
        u = queue.popleft()
        if u == end.element:
            break
        for i, g in Alcove(u).wall_reflections():
            if act(g, x) != x:
                continue
            v = compose(u, affine_simple_reflections(datum)[i])
            if v not in prev:
                prev[v] = (u, g)
                queue.append(v)
    if end.element not in prev:
        raise AffineError("no gallery found")
    path = []
    u = end.element
    while prev[u] is not None:
        u, g = prev[u]
        path.append(as_reflection(g))
    return list(reversed(path))


# -- notation -------------------------------------------------------------------------

_ELEMENT_RE = re.compile(r"^\s*t\[([^\]]*)\]\s*w\[([^\]]*)\]\s*$")
_WORD_RE = re.compile(r"s(\d+)(?:_(\d+))?")


def format_element(g: AffineElement) -> str:
    """'t[l1,...,lr] w[i1,...,ik]': lattice coordinates of lam, 1-based word of w."""
    lam = g.datum.lattice_coords(g.translation)
    word = g.datum.weyl_element(g.finite.matrix).word
    return f"t[{','.join(map(str, lam))}] w[{','.join(str(i + 1) for i in word)}]"


def parse_element(datum: RootDatum, text: str) -> AffineElement:
    text = text.strip()
    if text == "e":
        return identity(datum)
    m = _ELEMENT_RE.match(text)
    if not m:
        raise AffineError(f"cannot parse element {text!r}; expected 't[...] w[...]'")
    try:
        lam = [int(v) for v in m.group(1).split(",") if v.strip()]
        word = [int(v) - 1 for v in m.group(2).split(",") if v.strip()]
    except ValueError:
        raise AffineError(f"cannot parse element {text!r}: non-integer entry") from None
    if len(lam) != datum.rank:
        raise AffineError(f"translation needs {datum.rank} lattice coordinates")
    w = datum.weyl_from_word(word)
    return AffineElement(datum, tuple(int(v) for v in datum.lattice_vector(lam)), w)


def format_affine_word(datum: RootDatum, g: AffineElement) -> str:
    omega, word = decompose(g)
    names = simple_names(datum)
    body = "".join(names[i] for i in word) or "e"
    if omega.is_identity:
        return body
    return f"{format_element(omega)} {body}"


def parse_affine_word(datum: RootDatum, text: str) -> AffineElement:
    """Parse a word like 's0s1s2' (or 'e') in the affine simple reflections."""
    text = text.replace(" ", "")
    if text in ("", "e"):
        return identity(datum)
    names = simple_names(datum)
    index = {n: i for i, n in enumerate(names)}
    pos, word = 0, []
    for m in _WORD_RE.finditer(text):
        if m.start() != pos:
            break
        name = m.group(0)
        if name not in index:
            raise AffineError(f"unknown simple reflection {name!r} for type {datum.type_label}")
        word.append(index[name])
        pos = m.end()
    if pos != len(text):
        raise AffineError(f"cannot parse affine word {text!r}")
    return from_word(datum, word)


def point_json(x: Sequence) -> list[str]:
    return [str(Fraction(v)) for v in x]
