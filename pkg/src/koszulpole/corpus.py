"""Golden corpus of worked examples.

Each JSON file under ``corpus/`` holds one example: a job (polynomial,
asserted nodes, components) and a list of checks ``{quantity, index, value,
source}``. Values reported in the literature but outside what this package
computes sit under ``reported_not_computed`` and are never compared.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Dict, List, Optional

from .fields import GF, QQ
from .koszul import Hypersurface, analyze, syzygy_space, thm5_basis
from .linalg import Solver
from .points import MismatchedTheorem, PointSet, cb_check, certified_defect, corC1_check, defect
from .parse import parse_poly
from .poly import RingCtx
from .spectral import curve_report, e2_table, surface_report


def corpus_files() -> List[str]:
    root = resources.files(__package__) / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus() -> List[dict]:
    root = resources.files(__package__) / "corpus"
    return [json.loads((root / name).read_text()) for name in corpus_files()]


def _point_sets(spec: dict) -> List[PointSet]:
    nvars = spec["nvars"]
    out = []
    for block in spec.get("nodes") or []:
        fld = GF(block["prime"]) if "prime" in block else QQ
        ctx = RingCtx(nvars, field=fld)
        out.append(PointSet.build(ctx, [[Fraction(v) for v in pt] for pt in block["points"]]))
    return out


def hypersurface_from_spec(spec: dict) -> Hypersurface:
    ctx = RingCtx(spec["nvars"])
    f = parse_poly(spec["poly"], ctx)
    factors = tuple(parse_poly(t, ctx) for t in spec.get("factors", ()))
    sets = _point_sets(spec)
    return Hypersurface(f, factors, tuple(spec.get("genera", ())), sets[0] if sets else None)


class _Observed:
    """Lazily computed quantities for one corpus job."""

    def __init__(self, entry: dict):
        self.entry = entry
        self.spec = entry["job"]
        self.solver = Solver()
        self.hs = hypersurface_from_spec(self.spec)

    @cached_property
    def report(self):
        return analyze(self.hs, self.solver)

    @cached_property
    def e2(self):
        return e2_table(self.hs, self.report, self.solver, self.spec.get("degenerate"))

    @cached_property
    def curve(self):
        return curve_report(self.hs, self.spec["r"], self.e2, self.report, self.solver)

    @cached_property
    def surface(self):
        return surface_report(self.hs, self.report, self.solver)

    def value(self, quantity: str, index: Optional[int]):
        rep = self.report if quantity in ("milnor", "milnor_tail", "st", "ct", "mdr", "tau", "hn") else None
        if quantity == "milnor":
            return rep.milnor[index]
        if quantity == "milnor_tail":
            return rep.milnor.tail
        if quantity in ("st", "ct", "mdr", "tau"):
            return getattr(rep, quantity)
        if quantity == "hn":
            return rep.hn[index]
        if quantity in ("lineL", "lineLp"):
            return getattr(self.e2.e1, quantity)[index]
        if quantity in ("d1rank", "lineL2", "lineLp2"):
            return getattr(self.e2, quantity)[index]
        if quantity == "limit":
            return self.e2.limit
        if quantity == "corB1_lhs":
            return self.curve.milnor_2N_3 + self.curve.dimP2
        if quantity in ("corB1_check", "sum_rule"):
            return getattr(self.curve, quantity)
        if quantity in ("p_g", "b2", "h11", "grP2", "grF2", "equalPF", "defect_2N_4"):
            return getattr(self.surface, quantity)
        if quantity == "defect":
            sets = _point_sets(self.spec)
            return certified_defect(sets, index) if len(sets) > 1 else defect(sets[0], index)
        if quantity == "cb_check":
            return cb_check(self.hs, self.report, self.solver, strict=False).passed
        if quantity == "cb_check_error":
            try:
                cb_check(self.hs, self.report, self.solver)
            except MismatchedTheorem as exc:
                return type(exc).__name__
            return None
        if quantity == "node_position_check":
            return corC1_check(self.hs, self.spec["r"], self.solver, strict=False).passed
        if quantity == "syzygy_quotient_dim":
            return syzygy_space(self.hs, index).quotient_dim
        if quantity == "explicit_basis_size":
            return thm5_basis(self.hs).quotient_dim
        if quantity == "series_equal":
            other = hypersurface_from_spec(self.entry["compare_with"])
            mine = self.report
            theirs = analyze(other, self.solver)
            return (mine.milnor.dims, mine.milnor.tail, mine.milnor.tail_from) == (
                theirs.milnor.dims, theirs.milnor.tail, theirs.milnor.tail_from)
        raise KeyError(f"unknown corpus quantity {quantity!r}")


@dataclass
class EntryResult:
    id: str
    citation: str
    failures: List[str] = field(default_factory=list)
    checked: int = 0
    not_computed: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class CorpusSummary:
    entries: List[EntryResult]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def lines(self) -> List[str]:
        out = []
        for e in self.entries:
            out.append(f"{'PASS' if e.passed else 'FAIL'} {e.id} ({e.checked} checks) [{e.citation}]")
            out.extend("    " + f for f in e.failures)
            for nc in e.not_computed:
                out.append(f"    not computed: {nc['quantity']}[{nc['index']}] = {nc['value']} [{nc['source']}]")
        return out


def run_entry(entry: dict) -> EntryResult:
    res = EntryResult(entry["id"], entry["citation"], not_computed=list(entry.get("reported_not_computed", [])))
    try:
        obs = _Observed(entry)
    except Exception as exc:  # report, never abort the whole corpus
        res.failures.append(f"setup failed: {type(exc).__name__}: {exc}")
        return res
    for check in entry["checks"]:
        q, idx, want = check["quantity"], check.get("index"), check["value"]
        try:
            got = obs.value(q, idx)
        except Exception as exc:
            got = f"{type(exc).__name__}: {exc}"
        res.checked += 1
        if got != want or type(got) is not type(want):
            label = q if idx is None else f"{q}[{idx}]"
            res.failures.append(f"{label}: expected {want!r}, got {got!r} [{check['source']}]")
    return res


def verify_corpus(entries: Optional[List[dict]] = None) -> CorpusSummary:
    entries = load_corpus() if entries is None else entries
    return CorpusSummary([run_entry(e) for e in entries])
