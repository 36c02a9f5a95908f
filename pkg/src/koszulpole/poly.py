"""Sparse homogeneous polynomials in a fixed graded ring.

A ``HomPoly`` maps exponent tuples to nonzero field elements. Every term has
the same total degree, and the zero polynomial still carries a degree so
that graded maps stay total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .fields import QQ, FieldSpec, Scalar

Monomial = Tuple[int, ...]


class ContextMismatch(ValueError):
    pass


class WrongArity(ValueError):
    pass


class ZeroPoint(ValueError):
    pass


class NotExactDivision(ValueError):
    pass


def default_varnames(nvars: int) -> Tuple[str, ...]:
    if nvars == 3:
        return ("x", "y", "z")
    if nvars == 4:
        return ("x", "y", "z", "w")
    return tuple(f"x{i}" for i in range(nvars))


@dataclass(frozen=True)
class RingCtx:
    nvars: int
    varnames: Tuple[str, ...] = ()
    field: FieldSpec = QQ

    def __post_init__(self):
        if self.nvars < 2:
            raise ValueError("need at least two variables")
        if not self.varnames:
            object.__setattr__(self, "varnames", default_varnames(self.nvars))
        else:
            object.__setattr__(self, "varnames", tuple(self.varnames))
        if len(self.varnames) != self.nvars:
            raise ValueError("varnames length must equal nvars")
        if len(set(self.varnames)) != self.nvars:
            raise ValueError("variable names must be unique")

    def with_field(self, fld: FieldSpec) -> "RingCtx":
        return RingCtx(self.nvars, self.varnames, fld)

    def var(self, i: int) -> "HomPoly":
        e = [0] * self.nvars
        e[i] = 1
        return HomPoly(self, 1, {tuple(e): self.field.one})

    def const(self, c) -> "HomPoly":
        return HomPoly.from_terms(self, 0, {(0,) * self.nvars: c})

    def zero(self, degree: int) -> "HomPoly":
        return HomPoly(self, degree, {})


@lru_cache(maxsize=None)
def _basis(nvars: int, k: int) -> Tuple[Monomial, ...]:
    if nvars == 1:
        return ((k,),)
    out = []
    for a in range(k, -1, -1):
        for rest in _basis(nvars - 1, k - a):
            out.append((a,) + rest)
    return tuple(out)


def monomial_basis(ctx_or_nvars, k: int) -> Tuple[Monomial, ...]:
    """All degree-``k`` monomials, largest first in graded-lex order."""
    nvars = ctx_or_nvars if isinstance(ctx_or_nvars, int) else ctx_or_nvars.nvars
    if k < 0:
        return ()
    return _basis(nvars, k)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, k: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(nvars, k))}


def dim_S(nvars: int, k: int) -> int:
    if k < 0:
        return 0
    return comb(k + nvars - 1, nvars - 1)


@dataclass(frozen=True, eq=False)
class HomPoly:
    ctx: RingCtx
    degree: int
    terms: Mapping[Monomial, Scalar] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, ctx: RingCtx, degree: int, terms: Mapping[Monomial, object]) -> "HomPoly":
        """Coerce coefficients into the field and drop zeros."""
        out = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != ctx.nvars or sum(m) != degree or min(m) < 0:
                raise ValueError(f"monomial {m} is not of degree {degree} in {ctx.nvars} variables")
            c = ctx.field(c)
            if c:
                out[m] = c
        return cls(ctx, degree, out)

    # -- basic protocol -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.ctx != other.ctx:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.ctx, self.degree if self.terms else None, frozenset(self.terms.items())))

    def __repr__(self):
        return f"HomPoly({render(self)!r}, degree={self.degree})"

    def _check(self, other: "HomPoly"):
        if self.ctx != other.ctx:
            raise ContextMismatch("polynomials live in different rings")

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        p = self.ctx.field.prime
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return HomPoly(self.ctx, self.degree, out)

    def __neg__(self) -> "HomPoly":
        return self.scale(-1)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def scale(self, c) -> "HomPoly":
        c = self.ctx.field(c)
        if not c:
            return HomPoly(self.ctx, self.degree, {})
        p = self.ctx.field.prime
        if p is None:
            return HomPoly(self.ctx, self.degree, {m: v * c for m, v in self.terms.items()})
        return HomPoly(self.ctx, self.degree, {m: v * c % p for m, v in self.terms.items()})

    def __mul__(self, other) -> "HomPoly":
        if not isinstance(other, HomPoly):
            return self.scale(other)
        self._check(other)
        deg = self.degree + other.degree
        out: Dict[Monomial, Scalar] = {}
        p = self.ctx.field.prime
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(a + b for a, b in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        if p is None:
            out = {m: c for m, c in out.items() if c}
        else:
            out = {m: c % p for m, c in out.items() if c % p}
        return HomPoly(self.ctx, deg, out)

    __rmul__ = scale

    def __pow__(self, e: int) -> "HomPoly":
        result = self.ctx.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mul_monomial(self, mono: Monomial) -> "HomPoly":
        return HomPoly(
            self.ctx,
            self.degree + sum(mono),
            {tuple(a + b for a, b in zip(m, mono)): c for m, c in self.terms.items()},
        )

    def __call__(self, point: Sequence) -> Scalar:
        return evaluate(self, point)


def _lex_lead(p: HomPoly) -> Monomial:
    return max(p.terms)


def divide_exact(a: HomPoly, b: HomPoly) -> HomPoly:
    """Quotient ``a / b``; raises NotExactDivision if b does not divide a."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    fld = a.ctx.field
    qdeg = a.degree - b.degree
    if a.is_zero():
        return a.ctx.zero(max(qdeg, 0))
    if qdeg < 0:
        raise NotExactDivision("divisor has larger degree")
    lb = _lex_lead(b)
    inv_lc = fld.inv(b.terms[lb])
    q: Dict[Monomial, Scalar] = {}
    rem = a
    while rem.terms:
        lr = _lex_lead(rem)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if min(shift) < 0:
            raise NotExactDivision("remainder is nonzero")
        c = fld(rem.terms[lr] * inv_lc)
        q[shift] = c
        rem = rem - b.mul_monomial(shift).scale(c)
    return HomPoly(a.ctx, qdeg, q)


def partial(f: HomPoly, i: int) -> HomPoly:
    """Derivative with respect to variable ``i``; degree drops by one."""
    if not 0 <= i < f.ctx.nvars:
        raise IndexError(f"variable index {i} out of range")
    out = {}
    for m, c in f.terms.items():
        if m[i]:
            e = list(m)
            e[i] -= 1
            out[tuple(e)] = m[i] * c
    return HomPoly.from_terms(f.ctx, max(f.degree - 1, 0), out)


def gradient(f: HomPoly) -> Tuple[HomPoly, ...]:
    return tuple(partial(f, i) for i in range(f.ctx.nvars))


def evaluate(f: HomPoly, point: Sequence) -> Scalar:
    fld = f.ctx.field
    pt = [fld(v) for v in point]
    if len(pt) != f.ctx.nvars:
        raise ValueError("point has the wrong number of coordinates")
    p = fld.prime
    total = fld.zero
    for m, c in f.terms.items():
        v = c
        for x, e in zip(pt, m):
            if e:
                v = v * (x**e if p is None else pow(x, e, p))
        total += v
    return fld(total)


def hessian(f: HomPoly, point: Sequence) -> list:
    """Matrix of second partials of ``f`` evaluated at ``point``."""
    fld = f.ctx.field
    if all(fld(v) == 0 for v in point):
        raise ZeroPoint("the zero vector is not a projective point")
    grad = gradient(f)
    n = f.ctx.nvars
    H = [[fld.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = evaluate(partial(grad[i], j), point)
            H[i][j] = H[j][i] = v
    return H


def jac3(a: HomPoly, b: HomPoly, c: HomPoly) -> HomPoly:
    """Jacobian determinant of three polynomials in three variables."""
    if a.ctx.nvars != 3:
        raise WrongArity("Jacobian determinant needs exactly three variables")
    a._check(b)
    a._check(c)
    ga, gb, gc = gradient(a), gradient(b), gradient(c)
    deg = a.degree + b.degree + c.degree - 3
    out = a.ctx.zero(max(deg, 0))
    for (i, j, k), sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                            ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        term = ga[i] * gb[j] * gc[k]
        if term:
            out = out + (term if sign > 0 else -term)
    if out.is_zero():
        return a.ctx.zero(max(deg, 0))
    return out


def linear_substitution(f: HomPoly, matrix: Sequence[Sequence]) -> HomPoly:
    """Return ``f(A x)``: variable ``i`` is replaced by ``sum_j A[i][j] x_j``."""
    ctx = f.ctx
    forms = [
        HomPoly.from_terms(ctx, 1, {tuple(int(k == j) for k in range(ctx.nvars)): row[j] for j in range(ctx.nvars)})
        for row in matrix
    ]
    powers: Dict[Tuple[int, int], HomPoly] = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = forms[i] ** e
        return powers[key]

    out = ctx.zero(f.degree)
    for m, c in f.terms.items():
        term = ctx.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def reduce_poly(f: HomPoly, fld: FieldSpec) -> HomPoly:
    """Image of a polynomial over a different field (e.g. QQ -> GF(p))."""
    return HomPoly.from_terms(f.ctx.with_field(fld), f.degree, dict(f.terms))


def product(polys: Iterable[HomPoly], ctx: RingCtx) -> HomPoly:
    out = ctx.const(1)
    for p in polys:
        out = out * p
    return out


def _fmt_coeff(c) -> str:
    return str(c)


def render(f: HomPoly) -> str:
    """Text form accepted back by ``parse_poly``."""
    if not f.terms:
        return "0"
    names = f.ctx.varnames
    parts = []
    for m in sorted(f.terms, reverse=True):
        c = f.terms[m]
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        neg = c < 0 if f.ctx.field.prime is None else False
        mag = -c if neg else c
        if factors and mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coeff(mag)] + factors)
        parts.append(("-" if neg else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
