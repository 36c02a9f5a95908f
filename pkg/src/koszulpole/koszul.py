"""Milnor algebra dimensions, Koszul cohomology and syzygies of df.

For ``f`` of degree ``N`` in ``n + 1`` variables the Koszul complex is the
complex of polynomial forms with differential ``df ^ -``, graded so that
``deg(h dx_I) = deg h + |I|``. Its top cohomology in degree ``k + n + 1`` is
the Milnor algebra ``M(f)_k``; the next one down measures syzygies among
the partial derivatives modulo the trivial (Koszul) relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import FieldSpec
from .forms import PolyForm, differential, euler_contract, merge_sign, volume_form, wedge
from .linalg import DegreeMatrix, Solver, kernel_basis
from .linalg.exact import Echelon
from .poly import (
    HomPoly,
    dim_S,
    divide_exact,
    gradient,
    jac3,
    monomial_basis,
    monomial_index,
    product,
)


class NotStabilized(RuntimeError):
    """Milnor dimensions differ at T+1 and T+2: singularities are probably not isolated."""


class InconsistentEuler(RuntimeError):
    """Direct Koszul cohomology disagrees with the Euler-characteristic formula."""


class InconsistentThreshold(RuntimeError):
    """mdr found by kernel search disagrees with ct - N + 2."""


class FactorProductMismatch(ValueError):
    pass


class WedgeNotZero(RuntimeError):
    pass


@dataclass(frozen=True)
class Hypersurface:
    """A reduced homogeneous ``f`` plus optional user-asserted data.

    ``factors`` are the irreducible components (only used for plane curves),
    ``genera`` the geometric genera of those components, ``nodes`` a
    ``PointSet`` of asserted nodes.
    """

    f: HomPoly
    factors: Tuple[HomPoly, ...] = ()
    genera: Tuple[int, ...] = ()
    nodes: object = None

    def __post_init__(self):
        if self.f.degree < 2 or self.f.is_zero():
            raise ValueError("need a nonzero polynomial of degree at least 2")
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "genera", tuple(self.genera))
        if self.factors:
            check_factors(self.f, self.factors)
        if self.genera and len(self.genera) != len(self.factors):
            raise ValueError("one genus per factor is required")

    @property
    def N(self) -> int:
        return self.f.degree

    @property
    def n(self) -> int:
        return self.f.ctx.nvars - 1

    @property
    def T(self) -> int:
        return (self.n + 1) * (self.N - 2)

    @property
    def r(self) -> Optional[int]:
        return len(self.factors) or None


def check_factors(f: HomPoly, factors: Sequence[HomPoly]):
    """Return ``c`` with ``prod(factors) = c * f``; raise if there is none."""
    if len(set(factors)) != len(factors):
        raise FactorProductMismatch("factor list has repetitions")
    prod = product(factors, f.ctx)
    if prod.degree != f.degree:
        raise FactorProductMismatch(f"factors multiply to degree {prod.degree}, f has degree {f.degree}")
    m = max(f.terms)
    if m not in prod.terms:
        raise FactorProductMismatch("product of factors is not a multiple of f")
    c = f.ctx.field(prod.terms[m] * f.ctx.field.inv(f.terms[m]))
    if prod != f.scale(c):
        raise FactorProductMismatch("product of factors is not a constant multiple of f")
    return c


@dataclass
class DimTable:
    """Dimensions indexed by degree ``0..bound`` with a certified constant tail."""

    dims: List[int]
    tail: int
    tail_from: int

    @property
    def bound(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, k: int) -> int:
        if k < 0:
            return 0
        if k < len(self.dims):
            return self.dims[k]
        return self.tail

    def series(self) -> str:
        return ",".join(map(str, self.dims)) + f" tail={self.tail} from={self.tail_from}"


def _tail_start(dims: Sequence[int]) -> int:
    k = len(dims) - 1
    while k > 0 and dims[k - 1] == dims[-1]:
        k -= 1
    return k


# ----------------------------------------------------------------------
# matrices of graded pieces


def jacobian_matrix(f: HomPoly, k: int) -> DegreeMatrix:
    """Columns ``x^a * f_i`` (``|a| = k - N + 1``) in the degree-``k`` monomial basis."""
    ctx = f.ctx
    grad = gradient(f)
    rows = monomial_index(ctx.nvars, k)
    shifts = monomial_basis(ctx, k - f.degree + 1)
    entries = []
    col = 0
    for g in grad:
        for a in shifts:
            for m, c in g.terms.items():
                entries.append((rows[tuple(x + y for x, y in zip(m, a))], col, c))
            col += 1
    return DegreeMatrix.from_entries(len(rows), col, entries, ctx.field, f"Jacobian multiplication, target degree {k}")


def _form_offsets(nvars: int, p: int, cdeg: int):
    idxs = list(combinations(range(nvars), p))
    size = dim_S(nvars, cdeg)
    return {I: k * size for k, I in enumerate(idxs)}, len(idxs) * size


def form_space_dim(nvars: int, p: int, j: int) -> int:
    if p < 0 or p > nvars:
        return 0
    return comb(nvars, p) * dim_S(nvars, j - p)


def koszul_matrix(f: HomPoly, p: int, j: int) -> DegreeMatrix:
    """Matrix of ``df ^ - : Omega^p_j -> Omega^{p+1}_{j+N}`` in monomial bases."""
    ctx = f.ctx
    nv = ctx.nvars
    N = f.degree
    grad = gradient(f)
    src_c, tgt_c = j - p, j + N - p - 1
    if p < 0 or p >= nv or src_c < 0:
        return DegreeMatrix(form_space_dim(nv, p + 1, j + N), max(form_space_dim(nv, p, j), 0), {}, ctx.field)
    src_off, ncols = _form_offsets(nv, p, src_c)
    tgt_off, nrows = _form_offsets(nv, p + 1, tgt_c)
    src_monos = monomial_basis(ctx, src_c)
    tgt_index = monomial_index(nv, tgt_c)
    entries = []
    for I, off in src_off.items():
        for a_pos, a in enumerate(src_monos):
            col = off + a_pos
            for i in range(nv):
                if i in I:
                    continue
                s = merge_sign((i,), I)
                row_off = tgt_off[tuple(sorted((i,) + I))]
                for m, c in grad[i].terms.items():
                    entries.append((row_off + tgt_index[tuple(x + y for x, y in zip(m, a))], col, c if s > 0 else -c))
    return DegreeMatrix.from_entries(nrows, ncols, entries, ctx.field, f"df^ on {p}-forms of degree {j}")


def exterior_d_matrix(ctx, p: int, j: int) -> DegreeMatrix:
    """Matrix of the exterior derivative ``Omega^p_j -> Omega^{p+1}_j``."""
    nv = ctx.nvars
    src_c = j - p
    if p < 0 or p >= nv or src_c < 0:
        return DegreeMatrix(form_space_dim(nv, p + 1, j), max(form_space_dim(nv, p, j), 0), {}, ctx.field)
    src_off, ncols = _form_offsets(nv, p, src_c)
    tgt_off, nrows = _form_offsets(nv, p + 1, src_c - 1)
    tgt_index = monomial_index(nv, src_c - 1) if src_c >= 1 else {}
    entries = []
    for I, off in src_off.items():
        for a_pos, a in enumerate(monomial_basis(ctx, src_c)):
            for i in range(nv):
                if i in I or not a[i]:
                    continue
                s = merge_sign((i,), I)
                e = list(a)
                e[i] -= 1
                row = tgt_off[tuple(sorted((i,) + I))] + tgt_index[tuple(e)]
                entries.append((row, off + a_pos, a[i] if s > 0 else -a[i]))
    return DegreeMatrix.from_entries(nrows, ncols, entries, ctx.field, f"d on {p}-forms of degree {j}")


def vector_to_form(ctx, p: int, j: int, vec) -> PolyForm:
    cdeg = j - p
    monos = monomial_basis(ctx, cdeg)
    size = len(monos)
    idxs = list(combinations(range(ctx.nvars), p))
    comps: Dict[tuple, Dict] = {}
    for pos, v in vec.items():
        I = idxs[pos // size]
        comps.setdefault(I, {})[monos[pos % size]] = v
    return PolyForm.build(ctx, p, cdeg, {I: HomPoly.from_terms(ctx, cdeg, t) for I, t in comps.items()})


def form_to_vector(form: PolyForm) -> Dict[int, object]:
    ctx = form.ctx
    off, _ = _form_offsets(ctx.nvars, form.formdeg, form.coeffdeg)
    index = monomial_index(ctx.nvars, form.coeffdeg)
    out = {}
    for I, h in form.components.items():
        for m, c in h.terms.items():
            out[off[I] + index[m]] = c
    return out


# ----------------------------------------------------------------------
# dimension tables


def smooth_series(n: int, N: int, bound: int) -> DimTable:
    """Coefficients of ``(1 + t + ... + t^(N-2))^(n+1)`` up to ``bound``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    coeffs = [1]
    for _ in range(n + 1):
        new = [0] * (len(coeffs) + N - 2)
        for i, c in enumerate(coeffs):
            for k in range(N - 1):
                new[i + k] += c
        coeffs = new
    dims = [coeffs[k] if k < len(coeffs) else 0 for k in range(bound + 1)]
    T = (n + 1) * (N - 2)
    return DimTable(dims, 0, T + 1)


def milnor_dims(hs: Hypersurface, bound: Optional[int] = None, solver: Optional[Solver] = None) -> DimTable:
    """``dim M(f)_k`` for ``k = 0..bound`` (default ``T + 2``), with certified tail."""
    solver = solver or Solver()
    T = hs.T
    bound = T + 2 if bound is None else bound
    if bound < T + 2:
        raise ValueError("bound must be at least T + 2")
    nv = hs.f.ctx.nvars
    dims = []
    for k in range(bound + 1):
        if k < hs.N - 1:
            dims.append(dim_S(nv, k))
            continue
        r = solver.rank(jacobian_matrix(hs.f, k), key=(hs.f, "jac", k))
        dims.append(dim_S(nv, k) - r)
    if dims[T + 1] != dims[T + 2]:
        raise NotStabilized(f"dim M(f)_{T + 1} = {dims[T + 1]} but dim M(f)_{T + 2} = {dims[T + 2]}")
    return DimTable(dims, dims[-1], _tail_start(dims))


def koszul_hn_dim_direct(hs: Hypersurface, j: int, solver: Optional[Solver] = None, degree: Optional[int] = None) -> int:
    """``dim H^n(K*(f))_j`` by ranks of ``df ^`` on (n-1)- and n-forms.

    ``degree`` selects another cohomological degree ``q`` instead of ``n``.
    """
    solver = solver or Solver()
    f = hs.f
    q = hs.n if degree is None else degree
    nv = f.ctx.nvars
    dim = form_space_dim(nv, q, j)
    if dim == 0:
        return 0
    out_rank = solver.rank(koszul_matrix(f, q, j), key=(f, "kos", q, j))
    in_rank = 0
    if j - hs.N >= q - 1 >= 0:
        in_rank = solver.rank(koszul_matrix(f, q - 1, j - hs.N), key=(f, "kos", q - 1, j - hs.N))
    return dim - out_rank - in_rank


@dataclass
class KoszulReport:
    N: int
    n: int
    T: int
    milnor: DimTable
    smooth: DimTable
    hn: DimTable
    tau: int
    ct: Optional[int]
    st: int
    mdr: Optional[int]
    certification: str = "exact"
    checked_direct: Tuple[int, ...] = ()
    nodes_match_tau: Optional[bool] = None

    def records(self):
        """Flat ``(quantity, index, value)`` triples for structured output."""
        out = [("N", None, self.N), ("n", None, self.n), ("T", None, self.T), ("tau", None, self.tau),
               ("ct", None, self.ct), ("st", None, self.st), ("mdr", None, self.mdr)]
        out += [("milnor", k, v) for k, v in enumerate(self.milnor.dims)]
        out += [("milnor_tail", self.milnor.tail_from, self.milnor.tail)]
        out += [("hn", j, v) for j, v in enumerate(self.hn.dims)]
        return out


def hn_from_euler(milnor: DimTable, smooth: DimTable, N: int, n: int, upto: int) -> List[int]:
    return [milnor[j + N - n - 1] - smooth[j + N - n - 1] for j in range(upto + 1)]


def find_mdr(hs: Hypersurface, solver: Solver, limit: int) -> Optional[int]:
    """Smallest relation degree ``m`` with ``H^n(K*(f))_{m+n} != 0``, by ascending search."""
    for m in range(limit + 1):
        if koszul_hn_dim_direct(hs, m + hs.n, solver):
            return m
    return None


def analyze(hs: Hypersurface, solver: Optional[Solver] = None, direct_upto: Optional[int] = None,
            bound: Optional[int] = None) -> KoszulReport:
    """All thresholds and dimension tables, each cross-checked two ways."""
    solver = solver or Solver()
    N, n, T = hs.N, hs.n, hs.T
    milnor = milnor_dims(hs, bound, solver)
    bound = milnor.bound
    smooth = smooth_series(n, N, bound)
    tau = milnor.tail
    st = milnor.tail_from

    ct = None
    for k in range(bound + 1):
        if milnor.dims[k] != smooth.dims[k]:
            ct = k - 1
            break
    if ct is None and tau != 0:
        raise InconsistentThreshold("nonzero tail but no disagreement with the smooth series")

    hn_upto = bound - N + n + 1
    hn_dims = hn_from_euler(milnor, smooth, N, n, hn_upto)
    hn = DimTable(hn_dims, tau, _tail_start(hn_dims) if hn_dims else 0)

    direct_upto = 2 * N if direct_upto is None else direct_upto
    checked = []
    for j in range(direct_upto + 1):
        d = koszul_hn_dim_direct(hs, j, solver)
        e = milnor[j + N - n - 1] - smooth[j + N - n - 1]
        if d != e:
            raise InconsistentEuler(f"H^{n}(K*)_{j}: direct {d}, Euler formula {e}")
        checked.append(j)

    mdr = find_mdr(hs, solver, limit=hn_upto - n) if tau else None
    if tau and mdr is None:
        raise InconsistentThreshold("no nontrivial syzygy found although tau > 0")
    if ct is not None and mdr != ct - N + 2:
        raise InconsistentThreshold(f"mdr = {mdr} by kernel search but ct - N + 2 = {ct - N + 2}")

    nodes_match = None
    if hs.nodes is not None:
        nodes_match = len(hs.nodes) == tau
    return KoszulReport(N, n, T, milnor, smooth, hn, tau, ct, st, mdr, solver.certification, tuple(checked), nodes_match)


def genus_formula_holds(hs: Hypersurface, report: KoszulReport) -> bool:
    """``dim M(f)_{2N-3} = tau + sum of component genera`` for nodal plane curves."""
    if hs.n != 2 or not hs.genera:
        raise ValueError("needs a plane curve with component genera")
    return report.milnor[2 * hs.N - 3] == report.tau + sum(hs.genera)


# ----------------------------------------------------------------------
# syzygies


@dataclass
class SyzygyBasis:
    degree: int
    representatives: List[PolyForm]
    quotient_dim: int


def relation_to_form(ctx, coeffs: Sequence[HomPoly]) -> PolyForm:
    """``(a_0..a_n) -> sum_i (-1)^i a_i dx_0^..^dx_i-hat^..^dx_n``; then df ^ it = (sum a_i f_i) vol."""
    nv = ctx.nvars
    comps = {}
    for i, a in enumerate(coeffs):
        idx = tuple(k for k in range(nv) if k != i)
        comps[idx] = a if i % 2 == 0 else -a
    return PolyForm.build(ctx, nv - 1, coeffs[0].degree, comps)


def form_to_relation(form: PolyForm) -> List[HomPoly]:
    ctx = form.ctx
    nv = ctx.nvars
    out = []
    for i in range(nv):
        idx = tuple(k for k in range(nv) if k != i)
        h = form.components.get(idx, ctx.zero(form.coeffdeg))
        out.append(h if i % 2 == 0 else -h)
    return out


def trivial_relation_span(hs: Hypersurface, j: int) -> List[Dict[int, object]]:
    """Columns of ``df ^`` on (n-1)-forms of degree ``j - N``, as vectors in n-forms of degree ``j``."""
    if j - hs.N < hs.n - 1:
        return []
    return koszul_matrix(hs.f, hs.n - 1, j - hs.N).sparse_columns()


def syzygy_space(hs: Hypersurface, m: int) -> SyzygyBasis:
    """Relations of degree ``m`` among the partials, modulo the trivial ones."""
    ctx = hs.f.ctx
    n = hs.n
    j = m + n
    K = koszul_matrix(hs.f, n, j)
    ker = kernel_basis(K)
    ech = Echelon(ctx.field)
    for v in trivial_relation_span(hs, j):
        ech.add(v)
    reps = []
    for v in ker:
        if ech.add(v):
            reps.append(vector_to_form(ctx, n, j, v))
    return SyzygyBasis(m, reps, len(reps))


def thm5_basis(hs: Hypersurface) -> SyzygyBasis:
    """Explicit basis of the degree ``N - 2`` syzygies of a plane curve from its components.

    ``gamma_j = -(prod_{k != j, r} f_k) df_j ^ df_r + h_j sigma`` with
    ``sigma`` the Euler contraction of the volume form and
    ``h_j = sum_{k != j, r} (F / (f_k f_j f_r)) Jac(f_k, f_j, f_r) / N``.
    """
    if hs.n != 2:
        raise ValueError("only defined for plane curves")
    r = len(hs.factors)
    if r < 2:
        raise ValueError("needs at least two components")
    ctx = hs.f.ctx
    fld = ctx.field
    N = hs.N
    sigma = euler_contract(volume_form(ctx))
    df = differential(hs.f)
    fr = hs.factors[-1]
    gammas = []
    for j, h in enumerate(thm5_h(hs)):
        fj = hs.factors[j]
        others = [hs.factors[k] for k in range(r - 1) if k != j]
        beta = wedge(differential(fj), differential(fr)).mul_poly(product(others, ctx)).scale(-1)
        gamma = beta + sigma.mul_poly(h) if not h.is_zero() else beta
        if not wedge(df, gamma).is_zero():
            raise WedgeNotZero(f"df ^ gamma_{j + 1} != 0: factors or f are not as assumed")
        gammas.append(gamma)
    ech = Echelon(fld)
    for v in trivial_relation_span(hs, N):
        ech.add(v)
    for g in gammas:
        if not ech.add(form_to_vector(g)):
            raise WedgeNotZero("gamma classes are dependent modulo trivial relations")
    return SyzygyBasis(N - 2, gammas, len(gammas))


def thm5_h(hs: Hypersurface) -> List[HomPoly]:
    """The correction coefficients ``h_j`` (zero when r = 2)."""
    ctx = hs.f.ctx
    fld = ctx.field
    F = product(hs.factors, ctx)
    r = len(hs.factors)
    fr = hs.factors[-1]
    out = []
    for j in range(r - 1):
        fj = hs.factors[j]
        h = ctx.zero(hs.N - 3)
        for k in range(r - 1):
            if k == j:
                continue
            fk = hs.factors[k]
            h = h + divide_exact(F, fk * fj * fr) * jac3(fk, fj, fr)
        out.append(h.scale(fld.inv(fld(hs.N))))
    return out
