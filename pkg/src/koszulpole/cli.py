"""Command-line front end.

Every report is a stream of records ``{quantity, index, value,
certification}``; ``--json`` prints one JSON object per line, otherwise
indexed records of the same quantity are joined into a comma list.

Exit codes: 0 success, 2 input error, 3 uncertified result or a violated
identity.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .fields import is_prime
from .koszul import (
    FactorProductMismatch,
    Hypersurface,
    InconsistentEuler,
    InconsistentThreshold,
    NotStabilized,
    WedgeNotZero,
    analyze,
    genus_formula_holds,
    milnor_dims,
    smooth_series,
    syzygy_space,
    thm5_basis,
)
from .linalg import DEFAULT_PRIMES, EXACT, MODULAR, KernelCheckFailed, Solver, Uncertified
from .parse import NotHomogeneous, PolySyntaxError, UnknownVariable, parse_poly
from .points import MismatchedTheorem, PointSet, cb_check, certified_defect, corC1_check, defect, parse_points
from .poly import RingCtx, render
from .spectral import (
    DegeneracyViolation,
    NodalHypothesisViolated,
    NotDegenerate,
    UnsupportedDimension,
    WellDefinednessFailure,
    curve_report,
    e2_table,
    surface_report,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VIOLATION = 3

INPUT_ERRORS = (PolySyntaxError, NotHomogeneous, UnknownVariable, FactorProductMismatch, UnsupportedDimension,
                NotDegenerate, OSError, ValueError)
VIOLATIONS = (MismatchedTheorem, NodalHypothesisViolated, DegeneracyViolation, WellDefinednessFailure,
              InconsistentEuler, InconsistentThreshold, NotStabilized, Uncertified, KernelCheckFailed, WedgeNotZero)

COMMANDS = ("analyze", "hp", "syzygy", "defects", "spectral", "surface", "verify-corpus")


class JobError(ValueError):
    """Inconsistent job description."""


@dataclass
class JobSpec:
    command: str
    poly: Optional[str] = None
    nvars: int = 3
    exact: bool = False
    primes: Tuple[int, ...] = DEFAULT_PRIMES
    bound: Optional[int] = None
    nodes: Tuple[str, ...] = ()  # point-file contents
    factors: Tuple[str, ...] = ()
    r: Optional[int] = None
    genera: Tuple[int, ...] = ()
    degenerate: Optional[bool] = None
    degree: Optional[int] = None
    smooth: Optional[Tuple[int, int]] = None
    basis: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise JobError(f"unknown command {self.command!r}")
        if self.nvars < 2:
            raise JobError("need at least two variables")
        if not self.exact:
            if len(set(self.primes)) < 2:
                raise JobError("modular mode needs two distinct primes")
            for p in self.primes:
                if p <= 2**30 or not is_prime(p):
                    raise JobError(f"{p} is not a prime above 2^30")
        needs_poly = self.command in ("analyze", "syzygy", "spectral", "surface") or (
            self.command == "hp" and self.smooth is None)
        if needs_poly and not self.poly:
            raise JobError(f"{self.command} needs a polynomial")
        if self.command == "defects" and not self.nodes:
            raise JobError("defects needs --nodes")
        if self.command == "surface" and (self.nvars != 4 or not self.nodes):
            raise JobError("surface needs --nvars 4 and --nodes")
        if self.genera and len(self.genera) != len(self.factors):
            raise JobError("one genus per factor is required")


@dataclass
class Record:
    quantity: str
    index: Optional[int]
    value: object
    certification: str

    def as_dict(self):
        return {"quantity": self.quantity, "index": self.index, "value": self.value,
                "certification": self.certification}


@dataclass
class RunResult:
    status: int
    records: List[Record] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)


def _ctx(job: JobSpec) -> RingCtx:
    return RingCtx(job.nvars)


def _solver(job: JobSpec) -> Solver:
    return Solver(EXACT if job.exact else MODULAR, job.primes)


def _point_sets(job: JobSpec) -> List[PointSet]:
    ctx = _ctx(job)
    return [parse_points(text, job.nvars, ctx.varnames) for text in job.nodes]


def _hypersurface(job: JobSpec) -> Hypersurface:
    ctx = _ctx(job)
    f = parse_poly(job.poly, ctx)
    factors = tuple(parse_poly(t, ctx) for t in job.factors)
    sets = _point_sets(job)
    nodes = sets[0] if sets else None
    return Hypersurface(f, factors, tuple(job.genera), nodes)


def _r(job: JobSpec, hs: Hypersurface) -> Optional[int]:
    if job.r is not None:
        return job.r
    return hs.r


class _Out:
    def __init__(self, cert: str):
        self.cert = cert
        self.records: List[Record] = []

    def add(self, quantity, index, value, cert=None):
        self.records.append(Record(quantity, index, value, cert or self.cert))

    def table(self, quantity, table):
        for k, v in enumerate(table.dims):
            self.add(quantity, k, v)
        self.add(quantity + "_tail", table.tail_from, table.tail)

    def seq(self, quantity, values, start=0):
        for k, v in enumerate(values, start):
            self.add(quantity, k, v)


def _cmd_analyze(job, out: _Out, diags):
    hs = _hypersurface(job)
    solver = _solver(job)
    rep = analyze(hs, solver, bound=job.bound)
    out.cert = solver.certification
    for q, i, v in [("N", None, rep.N), ("n", None, rep.n), ("T", None, rep.T), ("tau", None, rep.tau),
                    ("st", None, rep.st), ("ct", None, rep.ct), ("mdr", None, rep.mdr)]:
        out.add(q, i, v)
    out.table("milnor", rep.milnor)
    out.table("smooth", rep.smooth)
    out.table("hn", rep.hn)
    out.add("euler_checked_upto", None, rep.checked_direct[-1] if rep.checked_direct else None)
    status = EXIT_OK
    if hs.genera:
        ok = genus_formula_holds(hs, rep)
        out.add("genus_formula", None, ok)
        status = status if ok else EXIT_VIOLATION
    if hs.nodes is not None:
        out.add("nodes_match_tau", None, rep.nodes_match_tau)
        cb = cb_check(hs, rep, solver, strict=False)
        out.add("cb_check", None, cb.passed)
        if not cb.passed:
            diags.append(cb.summary())
            status = EXIT_VIOLATION
        r = _r(job, hs)
        if hs.n == 2 and r is not None:
            c1 = corC1_check(hs, r, solver, strict=False)
            out.add("node_position_check", None, c1.passed)
            if not c1.passed:
                diags.append(c1.summary())
                status = EXIT_VIOLATION
    return status


def _cmd_hp(job, out: _Out, diags):
    if job.smooth is not None:
        n, N = job.smooth
        T = (n + 1) * (N - 2)
        out.cert = "exact"
        out.table("smooth", smooth_series(n, N, job.bound if job.bound is not None else T + 2))
        return EXIT_OK
    hs = _hypersurface(job)
    solver = _solver(job)
    table = milnor_dims(hs, job.bound, solver)
    out.cert = solver.certification
    out.table("milnor", table)
    return EXIT_OK


def _cmd_syzygy(job, out: _Out, diags):
    hs = _hypersurface(job)
    out.cert = "exact"
    degrees = [job.degree] if job.degree is not None else list(range(hs.N - 1))
    for m in degrees:
        sb = syzygy_space(hs, m)
        out.add("syzygy_quotient_dim", m, sb.quotient_dim)
        if job.basis:
            for k, form in enumerate(sb.representatives):
                out.add(f"syzygy_rep_{m}", k, _render_form(form))
    if len(hs.factors) >= 2 and hs.n == 2:
        basis = thm5_basis(hs)
        out.add("explicit_basis_size", hs.N - 2, basis.quotient_dim)
        if job.basis:
            for k, form in enumerate(basis.representatives):
                out.add("explicit_basis", k, _render_form(form))
    return EXIT_OK


def _render_form(form) -> str:
    names = form.ctx.varnames
    parts = []
    for idx, h in form.items():
        parts.append(f"({render(h)})*" + "^".join("d" + names[i] for i in idx))
    return " + ".join(parts) if parts else "0"


def _cmd_defects(job, out: _Out, diags):
    sets = _point_sets(job)
    size = len(sets[0])
    if any(len(s) != size for s in sets):
        raise JobError("node files list different numbers of points")
    solver = _solver(job)
    primes = sorted({s.field.prime for s in sets if s.field.prime is not None})
    if len(sets) >= 2:
        cert = "modular(" + ",".join(map(str, primes)) + ")"
        value = lambda k: certified_defect(sets, k)
    elif primes:
        cert = f"exact-GF({primes[0]})"
        value = lambda k: defect(sets[0], k, solver)
    else:
        cert = solver.certification
        value = lambda k: defect(sets[0], k, solver)
    out.cert = cert
    out.add("points", None, size)
    k = 0
    while True:
        d = value(k)
        out.add("defect", k, d)
        # points always impose independent conditions in degree |P| - 1
        if (job.bound is None and d == 0) or (job.bound is not None and k >= job.bound) or k > size:
            break
        k += 1
    return EXIT_OK


def _cmd_spectral(job, out: _Out, diags):
    hs = _hypersurface(job)
    solver = _solver(job)
    rep = analyze(hs, solver, bound=job.bound)
    e2 = e2_table(hs, rep, solver, job.degenerate)
    out.cert = solver.certification
    out.seq("lineL", e2.e1.lineL)
    out.seq("lineLp", e2.e1.lineLp)
    out.seq("d1rank", e2.d1rank)
    out.seq("lineL2", e2.lineL2)
    out.seq("lineLp2", e2.lineLp2)
    out.add("degenerate", None, e2.degenerate)
    out.add("limit", None, e2.limit)
    r = _r(job, hs)
    if hs.n == 2 and r is not None and e2.degenerate:
        cr = curve_report(hs, r, e2, rep, solver)
        for q in ("g", "r", "dimH1", "dimH2", "dimP2", "tau"):
            out.add(q, None, getattr(cr, q))
        for s in sorted(cr.grP, reverse=True):
            out.add("grP", s, cr.grP[s])
        out.add("corB1_check", None, cr.corB1_check)
        out.add("sum_rule", None, cr.sum_rule)
        if not (cr.corB1_check and cr.sum_rule):
            diags.append("curve filtration identities fail")
            return EXIT_VIOLATION
    return EXIT_OK


def _cmd_surface(job, out: _Out, diags):
    hs = _hypersurface(job)
    solver = _solver(job)
    sr = surface_report(hs, solver=solver)
    out.cert = solver.certification
    for q in ("N", "nodes", "p_g", "b2", "h11", "grP2", "grF2", "p3", "equalPF", "defect_N_4", "defect_2N_4"):
        out.add(q, None, getattr(sr, q))
    return EXIT_OK


def _cmd_verify(job, out: _Out, diags):
    from .corpus import verify_corpus

    summary = verify_corpus()
    out.cert = "exact"
    for entry in summary.entries:
        out.add("corpus_entry", None, f"{entry.id}: {'PASS' if entry.passed else 'FAIL'} [{entry.citation}]")
        for nc in entry.not_computed:
            out.add("not_computed", None, f"{entry.id}: {nc['quantity']}[{nc['index']}] = {nc['value']} [{nc['source']}]")
        for line in entry.failures:
            diags.append(f"{entry.id}: {line}")
    return EXIT_OK if summary.passed else EXIT_VIOLATION


_DISPATCH = {
    "analyze": _cmd_analyze,
    "hp": _cmd_hp,
    "syzygy": _cmd_syzygy,
    "defects": _cmd_defects,
    "spectral": _cmd_spectral,
    "surface": _cmd_surface,
    "verify-corpus": _cmd_verify,
}


def run(job: JobSpec) -> RunResult:
    """Execute a job; never raises for bad input or failed checks."""
    out = _Out("exact")
    diags: List[str] = []
    try:
        job.validate()
        status = _DISPATCH[job.command](job, out, diags)
    except VIOLATIONS as exc:
        return RunResult(EXIT_VIOLATION, out.records, diags + [f"{type(exc).__name__}: {exc}"])
    except INPUT_ERRORS as exc:
        return RunResult(EXIT_INPUT, out.records, diags + [f"{type(exc).__name__}: {exc}"])
    if any(r.certification.startswith("UNCERTIFIED") for r in out.records):
        status = EXIT_VIOLATION
        diags.append("UNCERTIFIED: modular ranks disagreed and were not escalated")
    return RunResult(status, out.records, diags)


def format_text(records: Sequence[Record]) -> str:
    lines = []
    i = 0
    while i < len(records):
        rec = records[i]
        if rec.index is None:
            lines.append(f"{rec.quantity}: {_fmt(rec.value)}")
            i += 1
            continue
        j = i
        values = []
        while j < len(records) and records[j].quantity == rec.quantity and records[j].index is not None:
            values.append(records[j])
            j += 1
        tail = records[j] if j < len(records) and records[j].quantity == rec.quantity + "_tail" else None
        if isinstance(rec.value, str):
            lines.extend(f"{rec.quantity}[{v.index}]: {v.value}" for v in values)
        elif tail is not None:
            # print through the first tail degree; a zero tail is left to the marker
            keep = tail.index + 1 if tail.value else tail.index
            shown = ",".join(_fmt(v.value) for v in values[:max(keep, 1)])
            lines.append(f"{rec.quantity}: {shown} tail={tail.value} from={tail.index}")
            j += 1
        else:
            head = f"{rec.quantity}" + (f" (from {values[0].index})" if values[0].index != 0 else "")
            lines.append(f"{head}: " + ",".join(_fmt(v.value) for v in values))
        i = j
    if records:
        lines.append(f"certification: {records[-1].certification}")
    return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "PASS" if v else "FAIL"
    return str(v)


def format_json(records: Sequence[Record]) -> str:
    return "\n".join(json.dumps(r.as_dict(), sort_keys=True) for r in records)


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nvars", type=int, default=3, help="number of homogeneous variables (default 3)")
    common.add_argument("--exact", action="store_true", help="exact rational elimination instead of two primes")
    common.add_argument("--primes", type=_int_list, default=DEFAULT_PRIMES, help="comma-separated primes above 2^30")
    common.add_argument("--bound", type=int, help="last degree to report")
    common.add_argument("--nodes", action="append", default=[], metavar="FILE",
                        help="point file; repeat with residues over different primes to certify defects")
    common.add_argument("--factors", help="irreducible factors separated by ';'")
    common.add_argument("--r", type=int, help="number of irreducible components")
    common.add_argument("--genera", type=_int_list, default=(), help="component genera, comma-separated")
    common.add_argument("--degenerate", action="store_true", default=None,
                        help="assert weighted homogeneous singularities (E_2 is the limit)")
    common.add_argument("--json", action="store_true", help="line-delimited JSON records")

    parser = argparse.ArgumentParser(prog="koszulpole", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "syzygy", "spectral", "surface"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("poly", help="homogeneous polynomial, or @FILE")
        if name == "syzygy":
            p.add_argument("--degree", type=int, help="relation degree m (default 0..N-2)")
            p.add_argument("--basis", action="store_true", help="print representatives")
    p = sub.add_parser("hp", parents=[common])
    p.add_argument("poly", nargs="?", help="homogeneous polynomial, or @FILE")
    p.add_argument("--smooth", nargs=2, type=int, metavar=("n", "N"), help="smooth reference series")
    sub.add_parser("defects", parents=[common])
    sub.add_parser("verify-corpus", parents=[common])
    return parser


def _read_poly(arg: Optional[str]) -> Optional[str]:
    if arg and arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    return JobSpec(
        command=ns.command,
        poly=_read_poly(getattr(ns, "poly", None)),
        nvars=ns.nvars,
        exact=ns.exact,
        primes=tuple(ns.primes),
        bound=ns.bound,
        nodes=tuple(Path(p).read_text() for p in ns.nodes),
        factors=tuple(t.strip() for t in ns.factors.split(";")) if ns.factors else (),
        r=ns.r,
        genera=tuple(ns.genera),
        degenerate=ns.degenerate,
        degree=getattr(ns, "degree", None),
        smooth=tuple(ns.smooth) if getattr(ns, "smooth", None) else None,
        basis=getattr(ns, "basis", False),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        job = job_from_args(ns)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = run(job)
    text = format_json(result.records) if ns.json else format_text(result.records)
    if text:
        print(text)
    for d in result.diagnostics:
        print(("error: " if result.status else "note: ") + d, file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
