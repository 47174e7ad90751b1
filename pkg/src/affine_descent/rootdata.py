"""Finite root systems, Weyl groups and character lattices, exactly.

Points of t* are stored in the fundamental-weight basis: coordinate i of
x is the pairing <x, alpha_i^vee>.  Roots are kept both in root-lattice
coordinates (integer coefficients on the simple roots) and in weight
coordinates.  The character lattice L sits between the root lattice Q
and the weight lattice P; pi_1 of the dual group is L/Q.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

from . import linalg

Vector = tuple  # tuple of Fractions / ints


class RootDataError(ValueError):
    pass


# Cartan matrices with A[i][j] = <alpha_j, alpha_i^vee>.
def _cartan_irreducible(kind: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if kind in "ABCD":
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
    if kind == "B" and n >= 2:
        a[n - 2][n - 1], a[n - 1][n - 2] = -1, -2
    elif kind == "C" and n >= 2:
        a[n - 2][n - 1], a[n - 1][n - 2] = -2, -1
    elif kind == "D":
        if n < 4:
            raise RootDataError(f"D{n} is not supported (need n >= 4)")
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif kind == "G":
        if n != 2:
            raise RootDataError("G only exists in rank 2")
        a = [[2, -3], [-1, 2]]
    return a


_CLASSICAL_COUNT = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "G": lambda n: 12,
}

_COMPONENT_RE = re.compile(r"^([ABCDG])(\d)$")


def parse_type_label(label: str) -> list[tuple[str, int]]:
    comps = []
    for part in label.replace("×", "x").split("x"):
        m = _COMPONENT_RE.match(part.strip())
        if not m:
            raise RootDataError(f"unsupported type label {label!r}")
        kind, n = m.group(1), int(m.group(2))
        if n < 1 or (kind in "BC" and n < 2) or (kind == "G" and n != 2) or (kind == "D" and n < 4):
            raise RootDataError(f"unsupported type label {label!r}")
        comps.append((kind, n))
    return comps


@dataclass(frozen=True, eq=False)
class FiniteWeylElement:
    """Element of W, stored as its integer matrix on weight coordinates."""

    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __eq__(self, other):
        return isinstance(other, FiniteWeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __call__(self, x: Sequence) -> Vector:
        return tuple(sum(m * v for m, v in zip(row, x)) for row in self.matrix)

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        return FiniteWeylElement(self.word + other.word,
                                 _freeze(linalg.mat_mul(self.matrix, other.matrix)))

    @property
    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (i == j) for i in range(len(self.matrix))
                   for j in range(len(self.matrix)))

    def determinant(self) -> int:
        return int(linalg.determinant(self.matrix))


def _freeze(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True, eq=False)
class RootDatum:
    type_label: str
    isogeny: str
    cartan_matrix: tuple[tuple[int, ...], ...]
    char_lattice: tuple[tuple[Fraction, ...], ...]   # rows: basis of L in root coordinates
    components: tuple[tuple[int, ...], ...] = field(default=())

    # -- basic data -----------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def _norms(self) -> tuple[Fraction, ...]:
        """(alpha_i, alpha_i) for a W-invariant form, normalized per component."""
        a, n = self.cartan_matrix, self.rank
        norms: list[Fraction | None] = [None] * n
        for comp in self.components:
            norms[comp[0]] = Fraction(2)
            stack = [comp[0]]
            while stack:
                i = stack.pop()
                for j in comp:
                    if norms[j] is None and a[i][j] != 0:
                        norms[j] = Fraction(a[i][j]) * norms[i] / a[j][i]
                        stack.append(j)
            shortest = min(norms[j] for j in comp)
            for j in comp:
                norms[j] = norms[j] * 2 / shortest
        return tuple(norms)

    def inner(self, b1: Sequence, b2: Sequence) -> Fraction:
        """Invariant form on root coordinates."""
        a, d = self.cartan_matrix, self._norms
        return sum((Fraction(a[i][j]) * d[i] / 2 * b1[i] * b2[j]
                    for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    @cached_property
    def all_roots(self) -> tuple[tuple[int, ...], ...]:
        """All roots in root coordinates: positives by height, then negatives."""
        found = set(self.simple_roots)
        frontier = list(found)
        while frontier:
            nxt = []
            for b in frontier:
                for i in range(self.rank):
                    c = self.simple_reflect_root(b, i)
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
            frontier = nxt
        pos = sorted((b for b in found if sum(b) > 0), key=lambda b: (sum(b), tuple(-x for x in b)))
        neg = [tuple(-x for x in b) for b in pos]
        return tuple(pos + neg)

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return self.all_roots[: len(self.all_roots) // 2]

    @cached_property
    def _root_index(self) -> dict:
        return {b: i for i, b in enumerate(self.all_roots)}

    def is_root(self, b: Sequence) -> bool:
        return tuple(b) in self._root_index

    def root_index(self, b: Sequence) -> int:
        try:
            return self._root_index[tuple(b)]
        except KeyError:
            raise RootDataError(f"{tuple(b)} is not a root of {self.type_label}") from None

    def simple_reflect_root(self, b: Sequence, i: int) -> tuple[int, ...]:
        p = sum(b[j] * self.cartan_matrix[i][j] for j in range(self.rank))
        return tuple(b[j] - (p if j == i else 0) for j in range(self.rank))

    def weight_coords(self, b: Sequence) -> Vector:
        """Root-lattice coordinates -> weight coordinates (exact)."""
        a = self.cartan_matrix
        return tuple(sum(Fraction(a[j][k]) * b[k] for k in range(self.rank)) for j in range(self.rank))

    @cached_property
    def _cartan_inverse(self):
        return linalg.inverse(self.cartan_matrix)

    def root_coords(self, x: Sequence) -> Vector:
        inv = self._cartan_inverse
        return tuple(sum(inv[j][k] * Fraction(x[k]) for k in range(self.rank)) for j in range(self.rank))

    @cached_property
    def _coroot_table(self) -> dict:
        out = {}
        for b in self.all_roots:
            nb = self.inner(b, b)
            out[b] = tuple(Fraction(b[j]) * self._norms[j] / nb for j in range(self.rank))
        return out

    def coroot(self, b: Sequence) -> Vector:
        """Coefficients of beta^vee on the simple coroots."""
        try:
            return self._coroot_table[tuple(b)]
        except KeyError:
            raise RootDataError(f"{tuple(b)} is not a root of {self.type_label}") from None

    def pairing(self, x: Sequence, b: Sequence) -> Fraction:
        """<x, beta^vee> for x in weight coordinates and a root beta."""
        return sum((c * Fraction(v) for c, v in zip(self.coroot(b), x)), Fraction(0))

    def root_pairing(self, b1: Sequence, b2: Sequence) -> Fraction:
        """<beta1, beta2^vee>."""
        return self.pairing(self.weight_coords(b1), b2)

    @cached_property
    def coroot_pairing(self) -> tuple[tuple[Fraction, ...], ...]:
        """Rows: simple-coroot coefficients of each root's coroot (root order)."""
        return tuple(self.coroot(b) for b in self.all_roots)

    def highest_coroot_roots(self) -> list[tuple[int, ...]]:
        """Per irreducible component, the positive root whose coroot is highest."""
        out = []
        for comp in self.components:
            best = None
            for b in self.positive_roots:
                if any(b[j] for j in range(self.rank) if j not in comp):
                    continue
                h = sum(self.coroot(b))
                if best is None or h > best[0]:
                    best = (h, b)
            out.append(best[1])
        return out

    # -- Weyl group ----------------------------------------------------
    @cached_property
    def simple_reflection_matrices(self) -> tuple:
        a, n = self.cartan_matrix, self.rank
        mats = []
        for i in range(n):
            m = [[int(j == k) - (a[j][i] if k == i else 0) for k in range(n)] for j in range(n)]
            mats.append(_freeze(m))
        return tuple(mats)

    def simple_reflection(self, i: int) -> FiniteWeylElement:
        return FiniteWeylElement((i,), self.simple_reflection_matrices[i])

    @property
    def identity_element(self) -> FiniteWeylElement:
        return FiniteWeylElement((), _freeze(linalg.identity(self.rank)))

    def act_on_root(self, w: FiniteWeylElement, b: Sequence) -> tuple[int, ...]:
        img = self.root_coords(w(self.weight_coords(b)))
        return tuple(int(v) for v in img)

    @cached_property
    def _weyl_elements(self) -> tuple[FiniteWeylElement, ...]:
        e = self.identity_element
        seen = {e.matrix: e}
        order = [e]
        frontier = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(self.rank):
                    v = w * self.simple_reflection(i)
                    if v.matrix not in seen:
                        seen[v.matrix] = v
                        order.append(v)
                        nxt.append(v)
            frontier = nxt
        return tuple(order)

    @cached_property
    def _weyl_lookup(self) -> dict:
        return {w.matrix: w for w in self._weyl_elements}

    def weyl_element(self, matrix) -> FiniteWeylElement:
        """Canonical (shortlex reduced-word) element with the given matrix."""
        try:
            return self._weyl_lookup[_freeze(matrix)]
        except KeyError:
            raise RootDataError("matrix is not an element of the Weyl group") from None

    def weyl_from_word(self, word: Sequence[int]) -> FiniteWeylElement:
        w = self.identity_element
        for i in word:
            if not 0 <= i < self.rank:
                raise RootDataError(f"simple reflection index {i + 1} out of range")
            w = w * self.simple_reflection(i)
        return self.weyl_element(w.matrix)

    def reflection_of(self, b: Sequence) -> FiniteWeylElement:
        """Linear reflection s_beta as a Weyl element."""
        aw = self.weight_coords(b)
        cv = self.coroot(b)
        n = self.rank
        m = [[int(j == k) - aw[j] * cv[k] for k in range(n)] for j in range(n)]
        return self.weyl_element(m)

    # -- character lattice and pi_1 ------------------------------------------
    @cached_property
    def _lattice_weight_basis(self):
        return [self.weight_coords(row) for row in self.char_lattice]

    @cached_property
    def _lattice_inverse(self):
        return linalg.inverse(self.char_lattice)

    def lattice_coords(self, lam: Sequence) -> tuple[int, ...]:
        """Coordinates of lam (weight coords) on the basis of L; raises if lam not in L."""
        r = self.root_coords(lam)
        inv = self._lattice_inverse
        coords = [sum(r[j] * inv[j][k] for j in range(self.rank)) for k in range(self.rank)]
        if any(Fraction(c).denominator != 1 for c in coords):
            raise RootDataError(f"{tuple(str(Fraction(v)) for v in lam)} is not in the character lattice")
        return tuple(int(c) for c in coords)

    def in_lattice(self, lam: Sequence) -> bool:
        try:
            self.lattice_coords(lam)
        except RootDataError:
            return False
        return True

    def in_root_lattice(self, lam: Sequence) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.root_coords(lam))

    def lattice_vector(self, coords: Sequence[int]) -> Vector:
        """Weight coordinates of sum coords[k] * (k-th basis vector of L)."""
        basis = self._lattice_weight_basis
        return tuple(sum((Fraction(coords[k]) * basis[k][j] for k in range(self.rank)), Fraction(0))
                     for j in range(self.rank))

    @cached_property
    def _pi1_snf(self):
        q_in_l = [[int(v) for v in row] for row in self._lattice_inverse]
        return linalg.smith_normal_form(q_in_l)

    @cached_property
    def pi1_moduli(self) -> tuple[int, ...]:
        _, d, _ = self._pi1_snf
        return tuple(d[i][i] for i in range(self.rank) if d[i][i] != 1)

    @property
    def pi1_order(self) -> int:
        out = 1
        for m in self.pi1_moduli:
            out *= m
        return out

    def pi1_class(self, lam: Sequence) -> tuple[int, ...]:
        """Class of lam in L/Q, as residues modulo the invariant factors."""
        ell = self.lattice_coords(lam)
        _, d, v = self._pi1_snf
        img = [sum(ell[i] * v[i][j] for i in range(self.rank)) for j in range(self.rank)]
        return tuple(img[j] % d[j][j] for j in range(self.rank) if d[j][j] != 1)

    def pi1_elements(self) -> list[tuple[int, ...]]:
        out = [()]
        for m in self.pi1_moduli:
            out = [c + (k,) for c in out for k in range(m)]
        return out

    def pi1_add(self, c1: Sequence[int], c2: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(c1, c2, self.pi1_moduli))

    @cached_property
    def pi1_representatives(self) -> dict:
        """Class -> a short lattice vector (weight coords) representing it."""
        reps = {self.pi1_class((0,) * self.rank): (Fraction(0),) * self.rank}
        frontier = list(reps.values())
        basis = self._lattice_weight_basis
        while frontier and len(reps) < self.pi1_order:
            nxt = []
            for lam in frontier:
                for b in basis:
                    mu = tuple(x + y for x, y in zip(lam, b))
                    c = self.pi1_class(mu)
                    if c not in reps:
                        reps[c] = mu
                        nxt.append(mu)
            frontier = nxt
        return reps

    # -- misc ---------------------------------------------------------------
    def describe(self) -> dict:
        return {
            "type": self.type_label,
            "isogeny": self.isogeny,
            "rank": self.rank,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "num_roots": len(self.all_roots),
            "positive_roots": [list(b) for b in self.positive_roots],
            "char_lattice": [[str(v) for v in row] for row in self.char_lattice],
            "pi1_moduli": list(self.pi1_moduli),
            "pi1_order": self.pi1_order,
            "weyl_order": len(enumerate_weyl(self)),
        }


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    comps = []
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        comps.append(tuple(range(off, off + k)))
        off += k
    return out, tuple(comps)


def build_root_datum(type_label: str, isogeny="adjoint") -> RootDatum:
    """Root datum of the given type.

    ``isogeny`` is "adjoint" (L = Q), "simply_connected" (L = P), or an
    explicit basis of L: rows of rationals in root-lattice coordinates.
    """
    comps = parse_type_label(type_label)
    cartan, components = _block_diag([_cartan_irreducible(k, n) for k, n in comps])
    r = len(cartan)
    if isinstance(isogeny, str):
        if isogeny == "adjoint":
            basis = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
        elif isogeny in ("simply_connected", "sc"):
            inv = linalg.inverse(cartan)
            basis = [[inv[j][i] for j in range(r)] for i in range(r)]
            isogeny = "simply_connected"
        else:
            raise RootDataError(f"unknown isogeny {isogeny!r}")
        label = isogeny
    else:
        basis = [[Fraction(str(v)) if not isinstance(v, Fraction) else v for v in row] for row in isogeny]
        label = "lattice_basis"
        if len(basis) != r or any(len(row) != r for row in basis):
            raise RootDataError(f"lattice basis must be {r} rows of {r} rationals")
        if linalg.determinant(basis) == 0:
            raise RootDataError("lattice basis is degenerate")
        q_in_l = linalg.inverse(basis)
        if any(v.denominator != 1 for row in q_in_l for v in row):
            raise RootDataError("lattice does not contain the root lattice")
        for row in basis:
            w = [sum(Fraction(cartan[j][k]) * row[k] for k in range(r)) for j in range(r)]
            if any(v.denominator != 1 for v in w):
                raise RootDataError("lattice is not contained in the weight lattice")
    datum = RootDatum(
        type_label="x".join(f"{k}{n}" for k, n in comps),
        isogeny=label,
        cartan_matrix=_freeze(cartan),
        char_lattice=tuple(tuple(Fraction(v) for v in row) for row in basis),
        components=components,
    )
    expected = sum(_CLASSICAL_COUNT[k](n) for k, n in comps)
    if len(datum.all_roots) != expected:
        raise RootDataError(f"root closure produced {len(datum.all_roots)} roots, expected {expected}")
    return datum


def load_lattice_basis(path) -> list[list[Fraction]]:
    """Read a lattice basis (JSON list of rows of rationals) from a file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RootDataError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("basis")
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise RootDataError(f"{path}: field 'basis' must be a list of rows")
    try:
        return [[Fraction(str(v)) for v in row] for row in data]
    except (ValueError, ZeroDivisionError) as exc:
        raise RootDataError(f"{path}: bad rational entry ({exc})") from None


def reflect(datum: RootDatum, x: Sequence, root: Sequence, k=0) -> Vector:
    """Affine reflection s_{root,k}: x -> x - (<x, root^vee> - k) root."""
    root = tuple(root)
    if not datum.is_root(root):
        raise RootDataError(f"{root} is not a root of {datum.type_label}")
    c = datum.pairing(x, root) - Fraction(k)
    aw = datum.weight_coords(root)
    return tuple(Fraction(v) - c * a for v, a in zip(x, aw))


def pi1_class(datum: RootDatum, lam: Sequence) -> tuple[int, ...]:
    return datum.pi1_class(lam)


def enumerate_weyl(datum: RootDatum, max_rank: int = 4) -> tuple[FiniteWeylElement, ...]:
    """All elements of W, each with a shortlex reduced word (0-based indices)."""
    if datum.rank > max_rank:
        raise RootDataError(f"rank {datum.rank} exceeds the enumeration budget ({max_rank})")
    return datum._weyl_elements


def root_system_type(datum: RootDatum, roots: Sequence[Sequence[int]]) -> str:
    """Cartan type of a root subsystem given as a list of roots (root coords)."""
    roots = {tuple(b) for b in roots}
    if not roots:
        return "trivial"
    pos = [b for b in datum.positive_roots if b in roots]
    posset = set(pos)
    simple = [b for b in pos
              if not any(tuple(x - y for x, y in zip(b, c)) in posset for c in pos)]
    n = len(simple)
    cart = [[int(datum.root_pairing(simple[j], simple[i])) for j in range(n)] for i in range(n)]
    # connected components of the Dynkin diagram
    seen, parts = set(), []
    for i in range(n):
        if i in seen:
            continue
        comp, stack = [], [i]
        seen.add(i)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(n):
                if b not in seen and cart[a][b] != 0:
                    seen.add(b)
                    stack.append(b)
        parts.append(sorted(comp))
    labels = []
    for comp in parts:
        k = len(comp)
        nroots = _span_count([simple[c] for c in comp], roots)
        if k == 1:
            labels.append("A1")
        elif k == 2:
            prod = cart[comp[0]][comp[1]] * cart[comp[1]][comp[0]]
            labels.append({1: "A2", 2: "B2", 3: "G2"}[prod])
        else:
            if nroots == k * (k + 1):
                labels.append(f"A{k}")
            elif nroots == 2 * k * k:
                labels.append(f"B{k}" if _has_more_long(datum, comp, simple) else f"C{k}")
            elif nroots == 2 * k * (k - 1):
                labels.append(f"D{k}")
            else:
                labels.append(f"?{k}")
    return "x".join(sorted(labels, key=lambda s: (s[0], int(s[1:]) if s[1:].isdigit() else 0)))


def _span_count(simples, roots) -> int:
    """Number of roots of ``roots`` lying in the rational span of ``simples``."""
    if not simples:
        return 0
    basis = [list(s) for s in simples]
    r = linalg.rank(basis)
    return sum(1 for b in roots if linalg.rank(basis + [list(b)]) == r)


def _has_more_long(datum, comp, simple) -> bool:
    lens = [datum.inner(simple[c], simple[c]) for c in comp]
    longest = max(lens)
    return sum(1 for v in lens if v == longest) > 1
