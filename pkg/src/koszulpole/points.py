"""Finite point sets in projective space, node checks and defects.

The defect of a point set in degree ``k`` is the failure of the points to
impose independent conditions on degree-``k`` forms: ``|points|`` minus the
rank of the evaluation matrix of the degree-``k`` monomials.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import QQ, FieldSpec, GF
from .koszul import Hypersurface, KoszulReport, analyze
from .linalg import DegreeMatrix, Solver, Uncertified
from .poly import HomPoly, RingCtx, evaluate, gradient, hessian, monomial_basis, reduce_poly


class MismatchedTheorem(RuntimeError):
    """A nodal-hypersurface identity failed on the supplied data."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


def _normalize(point: Sequence, fld: FieldSpec) -> Tuple:
    pt = [fld(v) for v in point]
    nz = [i for i, v in enumerate(pt) if v]
    if not nz:
        raise ValueError("the zero vector is not a projective point")
    inv = fld.inv(pt[nz[-1]])
    return tuple(fld(v * inv) for v in pt)


@dataclass(frozen=True)
class PointSet:
    ctx: RingCtx
    points: Tuple[Tuple, ...]
    labels: Tuple[str, ...] = ()

    @classmethod
    def build(cls, ctx: RingCtx, points: Sequence[Sequence], labels: Sequence[str] = ()) -> "PointSet":
        normed = []
        for p in points:
            if len(p) != ctx.nvars:
                raise ValueError(f"point ({', '.join(map(str, p))}) needs {ctx.nvars} coordinates")
            q = _normalize(p, ctx.field)
            if q in normed:
                raise ValueError(f"point ({', '.join(map(str, p))}) is listed twice")
            normed.append(q)
        return cls(ctx, tuple(normed), tuple(labels))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def field(self) -> FieldSpec:
        return self.ctx.field


def parse_points(text: str, nvars: int, varnames: Sequence[str] = ()) -> PointSet:
    """Point file: one point per line, ``#`` comments, optional ``prime: p`` header."""
    fld = QQ
    pts = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"prime\s*:\s*(\d+)", line)
        if m:
            if pts:
                raise ValueError("the prime header must precede the points")
            fld = GF(int(m.group(1)))
            continue
        tokens = [t for t in re.split(r"[\s,:()]+", line) if t]
        pts.append([Fraction(t) for t in tokens])
    ctx = RingCtx(nvars, tuple(varnames), fld)
    return PointSet.build(ctx, pts)


def render_points(pts: PointSet) -> str:
    lines = []
    if pts.field.prime is not None:
        lines.append(f"prime: {pts.field.prime}")
    for p in pts:
        lines.append(" ".join(str(v) for v in p))
    return "\n".join(lines) + "\n"


class NodeStatus(enum.Enum):
    NODE = "Node"
    NOT_ON_HYPERSURFACE = "NotOnHypersurface"
    NOT_SINGULAR = "NotSingular"
    DEGENERATE = "DegenerateSingularity"


def _matrix_rank(rows: List[List], fld: FieldSpec) -> int:
    m = DegreeMatrix.from_dense(rows, fld) if rows else DegreeMatrix(0, 0, {}, fld)
    return Solver("exact").rank(m)


def _on_field(f: HomPoly, pts: PointSet) -> HomPoly:
    if f.ctx.field == pts.field:
        return f
    if not f.ctx.field.is_exact_rational:
        raise ValueError("polynomial and points live over different prime fields")
    return reduce_poly(f, pts.field)


def verify_nodes(f: HomPoly, pts: PointSet) -> List[NodeStatus]:
    """Classify each point: node, smooth point, off the hypersurface, or worse singularity."""
    if f.degree < 2:
        raise ValueError("degree must be at least 2")
    g = _on_field(f, pts)
    grad = gradient(g)
    out = []
    for p in pts:
        if evaluate(g, p):
            out.append(NodeStatus.NOT_ON_HYPERSURFACE)
        elif any(evaluate(gi, p) for gi in grad):
            out.append(NodeStatus.NOT_SINGULAR)
        elif _matrix_rank(hessian(g, p), g.ctx.field) == g.ctx.nvars - 1:
            out.append(NodeStatus.NODE)
        else:
            out.append(NodeStatus.DEGENERATE)
    return out


def evaluation_matrix(pts: PointSet, k: int) -> DegreeMatrix:
    monos = monomial_basis(pts.ctx, k)
    fld = pts.field
    rows = []
    for p in pts:
        row = []
        for m in monos:
            v = fld.one
            for x, e in zip(p, m):
                if e:
                    v = v * (x**e if fld.prime is None else pow(x, e, fld.prime))
            row.append(fld(v))
        rows.append(row)
    return DegreeMatrix.from_dense(rows, fld, f"evaluation of degree-{k} monomials") if rows else DegreeMatrix(0, len(monos), {}, fld)


def defect(pts: PointSet, k: int, solver: Optional[Solver] = None) -> int:
    """``|pts| - rank`` of the degree-``k`` evaluation matrix; ``|pts|`` for ``k = -1``."""
    if k < -1:
        raise ValueError("degree must be at least -1")
    if k == -1 or not len(pts):
        return len(pts)
    solver = solver or Solver()
    return len(pts) - solver.rank(evaluation_matrix(pts, k))


def defect_table(pts: PointSet, bound: int, solver: Optional[Solver] = None) -> List[int]:
    return [defect(pts, k, solver) for k in range(bound + 1)]


def certified_defect(point_sets: Sequence[PointSet], k: int) -> int:
    """Defect of one configuration given by residues over two or more primes.

    All images must agree; used for configurations with irrational coordinates.
    """
    if len({ps.field.prime for ps in point_sets}) < 2:
        raise ValueError("need images of the configuration over at least two distinct primes")
    values = {ps.field.prime: defect(ps, k) for ps in point_sets}
    if len(set(values.values())) != 1:
        raise Uncertified(values)
    return next(iter(values.values()))


@dataclass
class CheckLine:
    label: str
    expected: int
    observed: int

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


@dataclass
class CheckReport:
    name: str
    lines: List[CheckLine] = field(default_factory=list)
    statuses: List[NodeStatus] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(l.ok for l in self.lines) and all(s is NodeStatus.NODE for s in self.statuses)

    def add(self, label, expected, observed):
        self.lines.append(CheckLine(label, expected, observed))

    def summary(self) -> str:
        out = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for s_i, s in enumerate(self.statuses):
            if s is not NodeStatus.NODE:
                out.append(f"  point {s_i}: {s.value}")
        for l in self.lines:
            out.append(f"  {'ok  ' if l.ok else 'FAIL'} {l.label}: expected {l.expected}, got {l.observed}")
        return "\n".join(out)


def cb_check(hs: Hypersurface, report: Optional[KoszulReport] = None, solver: Optional[Solver] = None,
             strict: bool = True) -> CheckReport:
    """Compare syzygy dimensions with node defects degree by degree.

    For a nodal hypersurface with complete node list ``P``:
    ``dim H^n(K*)_{nN-n-1-k} = defect_k(P)`` for ``0 <= k <= nN-2n-1``,
    ``dim H^n(K*)_j = |P|`` for ``j >= n(N-1)`` and ``dim M(f)_T = |P|``.
    A failure means a missing node, a worse singularity or a bug.
    """
    pts = hs.nodes
    if pts is None:
        raise ValueError("cb_check needs the node set")
    solver = solver or Solver()
    report = report or analyze(hs, solver)
    n, N = hs.n, hs.N
    out = CheckReport("cayley-bacharach")
    out.statuses = verify_nodes(hs.f, pts)
    size = len(pts)
    for k in range(0, n * N - 2 * n):
        j = n * N - n - 1 - k
        out.add(f"dim H^{n}_{j} = defect S_{k}", defect(pts, k, solver), report.hn[j])
    for j in range(n * (N - 1), report.hn.bound + 1):
        out.add(f"dim H^{n}_{j} = |nodes|", size, report.hn[j])
    out.add(f"dim M(f)_T (T={hs.T}) = |nodes|", size, report.milnor[hs.T])
    if strict and not out.passed:
        raise MismatchedTheorem(out.summary(), out)
    return out


def corC1_check(hs: Hypersurface, r: int, solver: Optional[Solver] = None, strict: bool = True) -> CheckReport:
    """Nodal plane curve with ``r`` components: defects vanish above ``N-3`` and equal ``r-1`` at ``N-3``."""
    if hs.n != 2:
        raise ValueError("only for plane curves")
    pts = hs.nodes
    N = hs.N
    solver = solver or Solver()
    out = CheckReport("node-position")
    out.statuses = verify_nodes(hs.f, pts)
    out.add(f"defect S_{N - 3} = r - 1", r - 1, defect(pts, N - 3, solver))
    for k in range(N - 2, max(N - 2, len(pts)) + 1):
        out.add(f"defect S_{k} = 0", 0, defect(pts, k, solver))
    if strict and not out.passed:
        raise MismatchedTheorem(out.summary(), out)
    return out
