"""Sparse multivariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    clean[tuple(e)] = Fraction(c)
        self.terms: dict[tuple, Fraction] = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "Poly":
        n = len(coeffs)
        t = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            t[tuple(e)] = c
        return cls(n, t)

    # basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"y{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in rings of different rank")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        t: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.nvars, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return Poly(self.nvars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # structure ----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose: replace variable i by ``images[i]`` (all in one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        n = images[0].nvars
        out = Poly(n)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        for e, c in self.terms.items():
            term = Poly.const(n, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def vector(self, basis_index: Mapping[tuple, int], size: int) -> list[Fraction]:
        v = [Fraction(0)] * size
        for e, c in self.terms.items():
            try:
                v[basis_index[e]] = c
            except KeyError:
                raise ValueError(f"monomial {e} outside the given basis") from None
        return v

    # serialization ------------------------------------------------------
    def to_sparse(self) -> list:
        return [[list(e), str(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_sparse(cls, nvars: int, data: Iterable) -> "Poly":
        terms: dict[tuple, Fraction] = {}
        for item in data:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ValueError(f"term {item!r} is not an [exponents, coefficient] pair")
            e, c = item
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent vector {list(e)} has length {len(e)}, expected {nvars}")
            terms[e] = terms.get(e, 0) + Fraction(str(c))
        return cls(nvars, terms)


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of exact degree d, in a fixed graded order."""
    if d < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def monomials_up_to(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(e for k in range(d + 1) for e in monomials_of_degree(nvars, k))


def count_monomials(nvars: int, d: int) -> int:
    """Dimension of the space of degree-d forms in nvars variables."""
    if d < 0:
        return 0
    from math import comb
    return comb(d + nvars - 1, nvars - 1) if nvars else int(d == 0)


def affine_images(matrix: Sequence[Sequence], shift: Sequence, nvars: int | None = None,
                  extra: int = 0) -> list[Poly]:
    """Coordinate polynomials of y -> M y + shift, as Polys in len(y)+extra vars.

    ``shift`` entries may themselves be Polys (used for the hbar-scaled
    translation in the formal-hbar ring).
    """
    r = len(matrix)
    n = nvars if nvars is not None else r + extra
    out = []
    for i in range(r):
        p = Poly(n, {tuple(int(j == k) for k in range(n)): matrix[i][j] for j in range(r)})
        s = shift[i]
        out.append(p + s if isinstance(s, Poly) else p + Poly.const(n, s))
    return out
