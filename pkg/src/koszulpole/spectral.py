"""Pole order spectral sequence tables and filtration reports.

For isolated singularities the first page lives on two lines. Line L holds
``E_1^{n-t,t} = M(f)_{(t+1)N-n-1}``; line L' holds
``E_1^{n-1-t,t} = H^n(K*(f))_{(t+1)N}``. The differential ``d_1`` from L'
to L is induced by the exterior derivative on forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional

import numpy as np

from .koszul import (
    Hypersurface,
    KoszulReport,
    analyze,
    exterior_d_matrix,
    koszul_matrix,
)
from .linalg import (
    EXACT,
    DegreeMatrix,
    Solver,
    Uncertified,
    dense_rank_mod_p,
    kernel_basis,
    kernel_basis_mod_p,
)
from .linalg.exact import fraction_free_rank, gauss_jordan
from .points import NodeStatus, defect, verify_nodes
from .poly import reduce_poly


class WellDefinednessFailure(RuntimeError):
    pass


class DegeneracyViolation(RuntimeError):
    pass


class NotDegenerate(ValueError):
    pass


class NodalHypothesisViolated(RuntimeError):
    pass


class UnsupportedDimension(ValueError):
    pass


@dataclass
class E1Table:
    N: int
    n: int
    lineL: List[int]
    lineLp: List[int]
    cutoff: int


def table_cutoff(report: KoszulReport) -> int:
    return -(-(report.T + 2) // report.N)


def e1_table(report: KoszulReport) -> E1Table:
    N, n = report.N, report.n
    cutoff = table_cutoff(report)
    lineL = [report.milnor[(t + 1) * N - n - 1] for t in range(cutoff + 1)]
    lineLp = [report.hn[(t + 1) * N] for t in range(cutoff + 1)]
    return E1Table(N, n, lineL, lineLp, cutoff)


# ----------------------------------------------------------------------
# d_1


def _d1_exact(hs: Hypersurface, t: int) -> int:
    f = hs.f
    ctx = f.ctx
    n, N = hs.n, hs.N
    j = (t + 1) * N
    ker = kernel_basis(koszul_matrix(f, n, j))
    D = exterior_d_matrix(ctx, n, j)
    modulo = koszul_matrix(f, n, t * N).sparse_columns() if t * N >= n else []
    images = [D.apply(v) for v in ker]
    trivial = koszul_matrix(f, n - 1, t * N).sparse_columns() if t * N >= n - 1 else []
    d_trivial = [D.apply(v) for v in trivial]

    def rk(vectors):
        if ctx.field.prime is None:
            return fraction_free_rank(vectors)
        return len(gauss_jordan(vectors, ctx.field)[1])

    base = rk(modulo)
    if rk(modulo + d_trivial) != base:
        raise WellDefinednessFailure(f"d of trivial relations leaves the Jacobian image (t={t})")
    return rk(modulo + images) - base


def _dense_mod(m: DegreeMatrix, p: int) -> np.ndarray:
    return m.to_dense_mod(p)


def _sparse_apply(D: DegreeMatrix, X: np.ndarray, p: int) -> np.ndarray:
    """``D @ X mod p`` for sparse ``D`` with small integer entries."""
    out = np.zeros((D.rows, X.shape[1]), dtype=np.int64)
    if not X.size:
        return out
    for (r, c), v in D.entries.items():
        out[r] = (out[r] + int(v) * X[c]) % p
    return out


def _d1_mod_p(hs: Hypersurface, t: int, p: int) -> int:
    f = hs.f
    ctx = f.ctx
    n, N = hs.n, hs.N
    j = (t + 1) * N
    K = kernel_basis_mod_p(koszul_matrix(f, n, j), p)
    D = exterior_d_matrix(ctx, n, j)
    M = _dense_mod(koszul_matrix(f, n, t * N), p) if t * N >= n else np.zeros((D.rows, 0), dtype=np.int64)
    T = _dense_mod(koszul_matrix(f, n - 1, t * N), p) if t * N >= n - 1 else np.zeros((D.cols, 0), dtype=np.int64)
    images = _sparse_apply(D, K.T, p)
    d_trivial = _sparse_apply(D, T, p)
    base = dense_rank_mod_p(M, p) if M.size else 0
    if d_trivial.size and dense_rank_mod_p(np.hstack([M, d_trivial]), p) != base:
        raise WellDefinednessFailure(f"d of trivial relations leaves the Jacobian image mod {p} (t={t})")
    if not images.size:
        return 0
    return dense_rank_mod_p(np.hstack([M, images]), p) - base


def d1_rank(hs: Hypersurface, t: int, solver: Optional[Solver] = None) -> int:
    """Rank of ``d_1 : E_1^{n-1-t,t} -> E_1^{n-t,t}``.

    Kernel representatives of ``df ^`` on n-forms of degree ``(t+1)N`` are
    pushed through the exterior derivative and ranked modulo the Jacobian
    image ``df ^ Omega^n_{tN}``. In modular mode the whole construction runs
    over each prime and the ranks must agree.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    solver = solver or Solver()
    f = hs.f
    if solver.mode == EXACT or f.ctx.field.prime is not None:
        return _d1_exact(hs, t)
    ranks = {}
    for p in solver.primes:
        g = reduce_poly(f, _gf(p))
        ranks[p] = _d1_mod_p(Hypersurface(g), t, p)
    if len(set(ranks.values())) == 1 and len(ranks) >= 2:
        return next(iter(ranks.values()))
    if not solver.escalate:
        solver.uncertified = True
        return min(ranks.values())
    solver.escalations += 1
    return _d1_exact(hs, t)


def _gf(p):
    from .fields import FieldSpec

    return FieldSpec(p)


@dataclass
class E2Table:
    e1: E1Table
    d1rank: List[int]
    lineL2: List[int]
    lineLp2: List[int]
    degenerate: bool
    limit: str  # "E_2" when E_2 = E_infinity is known, else "UNKNOWN"


def all_nodes_verified(hs: Hypersurface, report: KoszulReport) -> bool:
    if hs.nodes is None:
        return False
    statuses = verify_nodes(hs.f, hs.nodes)
    return all(s is NodeStatus.NODE for s in statuses) and len(hs.nodes) == report.tau


def e2_table(hs: Hypersurface, report: Optional[KoszulReport] = None, solver: Optional[Solver] = None,
             degenerate: Optional[bool] = None) -> E2Table:
    """Second page from ``d_1`` ranks.

    ``degenerate`` asserts weighted homogeneous singularities (so E_2 is the
    limit); if omitted it is set exactly when every singular point is a
    verified node.
    """
    solver = solver or Solver()
    report = report or analyze(hs, solver)
    e1 = e1_table(report)
    d1 = [d1_rank(hs, t, solver) for t in range(e1.cutoff + 1)]
    L2 = [a - b for a, b in zip(e1.lineL, d1)]
    Lp2 = [a - b for a, b in zip(e1.lineLp, d1)]
    if degenerate is None:
        degenerate = all_nodes_verified(hs, report)
    if degenerate:
        n = hs.n
        bad = [t for t in range(n, e1.cutoff + 1) if Lp2[t] != 0]
        if bad:
            raise DegeneracyViolation(f"d_1 is not bijective at t = {bad}")
        if n - 1 <= e1.cutoff and d1[n - 1] != e1.lineLp[n - 1]:
            raise DegeneracyViolation(f"d_1 is not injective at t = {n - 1}")
    return E2Table(e1, d1, L2, Lp2, degenerate, "E_2" if degenerate else "UNKNOWN")


# ----------------------------------------------------------------------
# closed formulas and filtration reports


def hodge_reference(n: int, N: int) -> Dict[str, int]:
    """Hodge numbers of a smooth degree-``N`` curve (n=2) or surface (n=3)."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if n == 2:
        return {"g": (N - 1) * (N - 2) // 2}
    if n == 3:
        num = (N - 1) ** 4 - 1
        if num % N:
            raise ArithmeticError("(N-1)^4 - 1 is not divisible by N")
        b2 = num // N + 2
        pg = comb(N - 1, 3)
        return {"p_g": pg, "b2": b2, "h11": b2 - 2 * pg}
    raise UnsupportedDimension(f"filtration reports exist for n = 2, 3 only, not n = {n}")


@dataclass
class CurveFiltrationReport:
    g: int
    r: int
    dimH1: int
    dimH2: int
    grP: Dict[int, int]
    dimP2: int
    milnor_2N_3: int
    tau: int
    corB1_check: bool
    sum_rule: bool


def curve_report(hs: Hypersurface, r: int, e2: Optional[E2Table] = None, report: Optional[KoszulReport] = None,
                 solver: Optional[Solver] = None, degenerate: Optional[bool] = None) -> CurveFiltrationReport:
    if hs.n != 2:
        raise UnsupportedDimension("curve report needs a plane curve")
    solver = solver or Solver()
    report = report or analyze(hs, solver)
    e2 = e2 or e2_table(hs, report, solver, degenerate)
    if not e2.degenerate:
        raise NotDegenerate("the filtration is only read off E_2 when the sequence degenerates there")
    N = hs.N
    g = hodge_reference(2, N)["g"]
    grP = {2 - t: v for t, v in enumerate(e2.lineL2) if v}
    dimP2 = e2.lineL2[0]
    m = report.milnor[2 * N - 3]
    dimH2 = 2 * g + r - 1 - report.tau
    corB1 = m + dimP2 == 2 * g + r - 1 and sum(e2.lineL2) == dimH2
    sum_rule = sum(e2.lineL2) + (r - 1) == dimH2 + (r - 1) and sum(e2.lineLp2) == r - 1
    return CurveFiltrationReport(g, r, r - 1, dimH2, grP, dimP2, m, report.tau, corB1, sum_rule)


@dataclass
class SurfaceFiltrationReport:
    N: int
    nodes: int
    p_g: int
    b2: int
    h11: int
    grP2: int
    grF2: int
    p3: int
    equalPF: bool
    defect_N_4: int
    defect_2N_4: int
    checks: Dict[str, bool] = field(default_factory=dict)


def surface_report(hs: Hypersurface, report: Optional[KoszulReport] = None, solver: Optional[Solver] = None,
                   e2: Optional[E2Table] = None) -> SurfaceFiltrationReport:
    """Pole and Hodge filtration dimensions on H^3 of a nodal surface complement."""
    if hs.n != 3:
        raise UnsupportedDimension("surface report needs a surface in P^3")
    if hs.nodes is None:
        raise NodalHypothesisViolated("surface report needs the node set")
    solver = solver or Solver()
    report = report or analyze(hs, solver)
    statuses = verify_nodes(hs.f, hs.nodes)
    if not all(s is NodeStatus.NODE for s in statuses):
        raise NodalHypothesisViolated(f"not every supplied point is a node: {[s.value for s in statuses]}")
    if len(hs.nodes) != report.tau:
        raise NodalHypothesisViolated(f"{len(hs.nodes)} nodes supplied but tau = {report.tau}")
    N = hs.N
    ref = hodge_reference(3, N)
    size = len(hs.nodes)
    dN4 = defect(hs.nodes, N - 4, solver)
    d2N4 = defect(hs.nodes, 2 * N - 4, solver)
    grP2 = ref["h11"] - 1 - dN4
    grF2 = ref["h11"] - 1 - size
    e2 = e2 or e2_table(hs, report, solver, degenerate=True)
    e1 = e2.e1
    checks = {
        "defect S_{2N-4} = 0": d2N4 == 0,
        "E1 line L' head = defect S_{2N-4}": e1.lineLp[0] == d2N4,
        "E1 line L' at t=1 = defect S_{N-4}": e1.lineLp[1] == dN4,
        "d1 injective at t=1": e2.d1rank[1] == e1.lineLp[1],
        "dim M(f)_{2N-4} = h11 - 1 + defect S_{2N-4}": report.milnor[2 * N - 4] == ref["h11"] - 1 + d2N4,
        "smooth dim M_{2N-4} = h11 - 1": report.smooth[2 * N - 4] == ref["h11"] - 1,
        "E2 Gr_P^2 matches closed formula": e2.lineL2[1] == grP2,
        "E2 P^3 = p_g": e2.lineL2[0] == ref["p_g"],
    }
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise NodalHypothesisViolated("failed cross-checks: " + "; ".join(failed))
    return SurfaceFiltrationReport(
        N, size, ref["p_g"], ref["b2"], ref["h11"], grP2, grF2, ref["p_g"], size == 0 or N < 4, dN4, d2N4, checks
    )
