"""Exact linear algebra over the rationals.

Everything here works on lists of ``Fraction``/``int`` rows.  Rows are
cleared of denominators and kept primitive (content divided out), and
elimination uses only integer cross-multiplication, so no intermediate
rational reconstruction is ever needed.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_row(row: Iterable) -> list[int]:
    """Scale a rational row to a primitive integer row (same span)."""
    row = list(row)
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = _lcm(den, v.denominator)
    out = [int(v * den) if isinstance(v, Fraction) else int(v) * den for v in row]
    return _primitive(out)


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        row = [v // g for v in row]
    return row


class SpanBuilder:
    """Incrementally maintained reduced echelon basis of a row space.

    ``add`` returns True when the new row enlarges the span.  Rows are
    stored fully reduced against each other (Gauss-Jordan form), as
    primitive integer vectors keyed by pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Sequence) -> list[int]:
        r = integer_row(row)
        if len(r) != self.ncols:
            raise ValueError(f"row has {len(r)} entries, expected {self.ncols}")
        for c in sorted(self.rows):
            a = r[c]
            if a:
                p = self.rows[c]
                pc = p[c]
                r = _primitive([pc * x - a * y for x, y in zip(r, p)])
        return r

    def add(self, row: Sequence) -> bool:
        r = self.reduce(row)
        piv = next((i for i, v in enumerate(r) if v), None)
        if piv is None:
            return False
        if r[piv] < 0:
            r = [-v for v in r]
        for c, p in list(self.rows.items()):
            a = p[piv]
            if a:
                self.rows[c] = _primitive([r[piv] * x - a * y for x, y in zip(p, r)])
                if self.rows[c][c] < 0:
                    self.rows[c] = [-v for v in self.rows[c]]
        self.rows[piv] = r
        return True

    def contains(self, row: Sequence) -> bool:
        return not any(self.reduce(row))

    def basis(self) -> list[list[int]]:
        return [self.rows[c] for c in sorted(self.rows)]


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    sb = SpanBuilder(ncols if ncols is not None else len(rows[0]))
    for r in rows:
        sb.add(r)
    return sb.rank


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form: (primitive rows, pivot columns)."""
    sb = SpanBuilder(ncols)
    for r in rows:
        sb.add(r)
    pivots = sorted(sb.rows)
    return [sb.rows[c] for c in pivots], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            if r[f]:
                v[p] = Fraction(-r[f], r[p])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of A x = b (free variables set to zero), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(red, pivots):
        x[p] = Fraction(r[ncols], r[p])
    return x


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def determinant(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return (U, D, V) with U*M*V = D diagonal, U and V unimodular.

    Square integer input only (all uses here are lattice inclusions of
    equal rank).
    """
    n = len(m)
    a = [list(map(int, row)) for row in m]
    u = identity(n)
    v = identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(n):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
            if not nz:
                return u, a, v
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, n):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
            u[t] = [x + y for x, y in zip(u[t], u[bad[0]])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v
