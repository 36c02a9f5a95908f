"""Exact elimination on sparse matrices.

``fraction_free_rank`` clears denominators and eliminates over the integers
with Markowitz pivoting, dividing each updated row by its content to keep
entries small. ``gauss_jordan`` works over any ``FieldSpec`` and is what
kernels are read off from.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Tuple

from ..fields import FieldSpec

SparseRow = Dict[int, object]


def _integer_rows(rows: List[SparseRow]) -> List[Dict[int, int]]:
    out = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            den = lcm(den, Fraction(v).denominator)
        irow = {c: int(Fraction(v) * den) for c, v in row.items() if v}
        if irow:
            out.append(irow)
    return out


def _content(row: Dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def fraction_free_rank(rows: List[SparseRow]) -> int:
    """Rank over QQ of the matrix whose rows are given as sparse dicts."""
    active: Dict[int, Dict[int, int]] = dict(enumerate(_integer_rows(rows)))
    col_rows: Dict[int, set] = {}
    for i, row in active.items():
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    rank = 0
    while active:
        # Markowitz cost (r-1)(c-1), ties broken by lowest (row, col).
        best = None
        for i in sorted(active, key=lambda k: (len(active[k]), k))[:8]:
            ri = len(active[i]) - 1
            for c in active[i]:
                cost = (ri * (len(col_rows[c]) - 1), i, c)
                if best is None or cost < best:
                    best = cost
        _, pr, pc = best
        prow = active.pop(pr)
        for c in prow:
            col_rows[c].discard(pr)
        pval = prow[pc]
        for i in sorted(col_rows[pc]):
            row = active[i]
            a = row[pc]
            g = gcd(a, pval)
            mul_row, mul_piv = pval // g, a // g
            new: Dict[int, int] = {c: v * mul_row for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - mul_piv * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            for c in row:
                if c not in new:
                    col_rows[c].discard(i)
            for c in new:
                if c not in row:
                    col_rows.setdefault(c, set()).add(i)
            if new:
                cg = _content(new)
                if cg > 1:
                    new = {c: v // cg for c, v in new.items()}
                active[i] = new
            else:
                del active[i]
        rank += 1
    return rank


def gauss_jordan(rows: List[SparseRow], fld: FieldSpec) -> Tuple[List[Dict[int, object]], List[int]]:
    """Reduced row echelon form over ``fld``; returns (pivot rows, pivot columns).

    Pivot row ``k`` has a 1 in column ``pivots[k]`` and zeros in every other
    pivot column.
    """
    p = fld.prime
    work = []
    for row in rows:
        r = {c: fld(v) for c, v in row.items()}
        r = {c: v for c, v in r.items() if v}
        if r:
            work.append(r)
    reduced: List[Dict[int, object]] = []
    pivots: List[int] = []
    pivot_pos: Dict[int, int] = {}
    for row in work:
        # pivot rows are zero in every other pivot column, so one pass suffices
        for c in [c for c in row if c in pivot_pos]:
            a = row[c]
            for cc, v in reduced[pivot_pos[c]].items():
                nv = row.get(cc, 0) - a * v
                if p is not None:
                    nv %= p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        if not row:
            continue
        pc = min(row)
        inv = fld.inv(row[pc])
        row = {c: (v * inv if p is None else v * inv % p) for c, v in row.items()}
        # back-substitute into earlier pivot rows
        for k, prow in enumerate(reduced):
            a = prow.get(pc)
            if a:
                for cc, v in row.items():
                    nv = prow.get(cc, 0) - a * v
                    if p is not None:
                        nv %= p
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivot_pos[pc] = len(reduced)
        reduced.append(row)
        pivots.append(pc)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [reduced[k] for k in order], [pivots[k] for k in order]


def kernel_from_rref(reduced: List[Dict[int, object]], pivots: List[int], ncols: int, fld: FieldSpec) -> List[Dict[int, object]]:
    """Right-kernel basis (sparse column vectors) of a matrix in RREF."""
    p = fld.prime
    pivset = set(pivots)
    # column -> list of (pivot row index, value)
    by_col: Dict[int, List[Tuple[int, object]]] = {}
    for k, row in enumerate(reduced):
        for c, v in row.items():
            if c not in pivset:
                by_col.setdefault(c, []).append((k, v))
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: fld.one}
        for k, v in by_col.get(free, []):
            vec[pivots[k]] = -v if p is None else (-v) % p
        basis.append(vec)
    return basis


class Echelon:
    """Incrementally maintained reduced basis of a span of sparse vectors."""

    def __init__(self, fld: FieldSpec):
        self.fld = fld
        self.rows: Dict[int, Dict[int, object]] = {}  # pivot column -> row

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec) -> Dict[int, object]:
        p = self.fld.prime
        row = {c: self.fld(v) for c, v in vec.items()}
        row = {c: v for c, v in row.items() if v}
        while True:
            hits = [c for c in row if c in self.rows]
            if not hits:
                return row
            c = min(hits)
            a = row[c]
            for cc, v in self.rows[c].items():
                nv = row.get(cc, 0) - a * v
                if p is not None:
                    nv %= p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)

    def add(self, vec) -> bool:
        """Insert ``vec``; return False if it already lies in the span."""
        row = self.reduce(vec)
        if not row:
            return False
        p = self.fld.prime
        pc = min(row)
        inv = self.fld.inv(row[pc])
        self.rows[pc] = {c: (v * inv if p is None else v * inv % p) for c, v in row.items()}
        return True
