"""Polynomial differential forms on affine space.

A p-form is stored as ``{(i1 < ... < ip): coefficient}``; wedge signs are
resolved when components are inserted, so each form has a single canonical
representation. The grading is ``deg(h dx_I) = deg(h) + |I|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, Mapping, Tuple

from .poly import ContextMismatch, HomPoly, RingCtx, partial

Index = Tuple[int, ...]


def merge_sign(a: Index, b: Index) -> int:
    """Sign of sorting the concatenation ``a + b``; 0 if they share an index."""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True, eq=False)
class PolyForm:
    ctx: RingCtx
    formdeg: int
    coeffdeg: int
    components: Mapping[Index, HomPoly] = field(default_factory=dict)

    @classmethod
    def build(cls, ctx: RingCtx, formdeg: int, coeffdeg: int, comps: Mapping[Index, HomPoly]) -> "PolyForm":
        out: Dict[Index, HomPoly] = {}
        for idx, h in comps.items():
            if h.is_zero():
                continue
            if h.ctx != ctx:
                raise ContextMismatch("component lives in a different ring")
            if h.degree != coeffdeg:
                raise ValueError(f"component degree {h.degree} differs from {coeffdeg}")
            idx = tuple(idx)
            if len(idx) != formdeg or list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} is not strictly increasing of length {formdeg}")
            out[idx] = h
        return cls(ctx, formdeg, coeffdeg, out)

    @property
    def degree(self) -> int:
        return self.coeffdeg + self.formdeg

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.ctx != other.ctx:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return (self.formdeg, self.coeffdeg) == (other.formdeg, other.coeffdeg) and dict(
            self.components
        ) == dict(other.components)

    def __hash__(self):
        return hash((self.formdeg, frozenset(self.components.items())))

    def __repr__(self):
        from .poly import render

        if not self.components:
            return f"PolyForm(0, formdeg={self.formdeg})"
        names = self.ctx.varnames
        parts = [
            f"({render(h)})*" + "^".join(f"d{names[i]}" for i in idx) if idx else f"({render(h)})"
            for idx, h in sorted(self.components.items())
        ]
        return "PolyForm(" + " + ".join(parts) + ")"

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if self.ctx != other.ctx:
            raise ContextMismatch("forms live in different rings")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (self.formdeg, self.coeffdeg) != (other.formdeg, other.coeffdeg):
            raise ValueError("cannot add forms of different bidegree")
        out = dict(self.components)
        for idx, h in other.components.items():
            s = out[idx] + h if idx in out else h
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return PolyForm(self.ctx, self.formdeg, self.coeffdeg, out)

    def __neg__(self) -> "PolyForm":
        return self.scale(-1)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        return PolyForm.build(
            self.ctx, self.formdeg, self.coeffdeg, {i: h.scale(c) for i, h in self.components.items()}
        )

    def mul_poly(self, g: HomPoly) -> "PolyForm":
        return PolyForm.build(
            self.ctx, self.formdeg, self.coeffdeg + g.degree, {i: g * h for i, h in self.components.items()}
        )

    def items(self) -> Iterator[Tuple[Index, HomPoly]]:
        return iter(sorted(self.components.items()))


def zero_form(ctx: RingCtx, formdeg: int, coeffdeg: int) -> PolyForm:
    return PolyForm(ctx, formdeg, coeffdeg, {})


def basis_form(ctx: RingCtx, idx: Index, coeff: HomPoly | None = None) -> PolyForm:
    """``coeff * dx_{i1} ^ ... ^ dx_{ip}`` for an arbitrary index sequence."""
    coeff = ctx.const(1) if coeff is None else coeff
    order = sorted(range(len(idx)), key=lambda k: idx[k])
    srt = tuple(idx[k] for k in order)
    if len(set(srt)) != len(srt):
        return zero_form(ctx, len(idx), coeff.degree)
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    h = coeff if inversions % 2 == 0 else -coeff
    return PolyForm.build(ctx, len(idx), coeff.degree, {srt: h})


def function_form(f: HomPoly) -> PolyForm:
    return PolyForm.build(f.ctx, 0, f.degree, {(): f})


def differential(f: HomPoly) -> PolyForm:
    """``df = sum_i f_i dx_i``."""
    ctx = f.ctx
    return PolyForm.build(ctx, 1, max(f.degree - 1, 0), {(i,): partial(f, i) for i in range(ctx.nvars)})


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.ctx != b.ctx:
        raise ContextMismatch("forms live in different rings")
    ctx = a.ctx
    p = a.formdeg + b.formdeg
    cdeg = a.coeffdeg + b.coeffdeg
    if p > ctx.nvars:
        return zero_form(ctx, p, cdeg)
    out: Dict[Index, HomPoly] = {}
    for ia, ha in a.components.items():
        for ib, hb in b.components.items():
            s = merge_sign(ia, ib)
            if not s:
                continue
            idx = tuple(sorted(ia + ib))
            term = ha * hb
            if s < 0:
                term = -term
            out[idx] = out[idx] + term if idx in out else term
    return PolyForm.build(ctx, p, cdeg, out)


def exterior_d(a: PolyForm) -> PolyForm:
    """Exterior derivative; raises form degree by one, keeps total degree."""
    ctx = a.ctx
    cdeg = a.coeffdeg - 1
    if cdeg < 0 or a.formdeg >= ctx.nvars:
        return zero_form(ctx, a.formdeg + 1, max(cdeg, 0))
    out: Dict[Index, HomPoly] = {}
    for idx, h in a.components.items():
        for i in range(ctx.nvars):
            if i in idx:
                continue
            dh = partial(h, i)
            if dh.is_zero():
                continue
            s = merge_sign((i,), idx)
            new = tuple(sorted((i,) + idx))
            term = dh if s > 0 else -dh
            out[new] = out[new] + term if new in out else term
    return PolyForm.build(ctx, a.formdeg + 1, cdeg, out)


def euler_contract(a: PolyForm) -> PolyForm:
    """Contraction with the Euler field ``sum_i x_i d/dx_i``."""
    ctx = a.ctx
    if a.formdeg < 1:
        raise ValueError("contraction needs a form of degree at least 1")
    out: Dict[Index, HomPoly] = {}
    for idx, h in a.components.items():
        for pos, i in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1:]
            term = ctx.var(i) * h
            if pos % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return PolyForm.build(ctx, a.formdeg - 1, a.coeffdeg + 1, out)


def volume_form(ctx: RingCtx) -> PolyForm:
    return basis_form(ctx, tuple(range(ctx.nvars)))


def form_basis(ctx: RingCtx, formdeg: int, total_degree: int):
    """Ordered basis ``(I, monomial)`` of the degree-``total_degree`` piece of p-forms."""
    from .poly import monomial_basis

    cdeg = total_degree - formdeg
    if cdeg < 0 or formdeg < 0 or formdeg > ctx.nvars:
        return []
    monos = monomial_basis(ctx, cdeg)
    return [(idx, m) for idx in combinations(range(ctx.nvars), formdeg) for m in monos]
