"""Exact and multi-prime linear algebra for graded pieces of polynomial maps.

The F_p elimination kernel is compiled (Cython) when the extension has been
built and falls back to a numpy implementation otherwise; ``BACKEND`` names
the one in use. Setting ``KOSZULPOLE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from ..fields import QQ, BadPrime, FieldSpec, reduce_mod
from . import _fallback
from .exact import fraction_free_rank, gauss_jordan, kernel_from_rref

if os.environ.get("KOSZULPOLE_PURE_PYTHON"):
    _kernels = _fallback
    BACKEND = "numpy"
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _kernels = _fallback
        BACKEND = "numpy"

# Two fixed primes just below 2^31.
DEFAULT_PRIMES: Tuple[int, int] = (2147483647, 2147483629)

EXACT = "exact"
MODULAR = "modular"


class Uncertified(RuntimeError):
    """Modular ranks disagree across primes."""

    def __init__(self, ranks: Mapping[int, int]):
        self.ranks = dict(ranks)
        super().__init__(f"modular ranks disagree: {self.ranks}")


class KernelCheckFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class DegreeMatrix:
    """Sparse matrix ``{(row, col): value}`` over ``field``; zeros are never stored."""

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], object]
    field: FieldSpec = QQ
    provenance: str = ""

    @classmethod
    def from_entries(cls, rows, cols, entries: Iterable[Tuple[int, int, object]], field: FieldSpec = QQ, provenance=""):
        out: Dict[Tuple[int, int], object] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = field(v)
            if (r, c) in out:
                v = field(out[(r, c)] + v)
            if v:
                out[(r, c)] = v
            else:
                out.pop((r, c), None)
        return cls(rows, cols, out, field, provenance)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]], field: FieldSpec = QQ, provenance=""):
        return cls.from_entries(
            rows, len(columns), ((r, c, v) for c, col in enumerate(columns) for r, v in col.items()), field, provenance
        )

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], field: FieldSpec = QQ, provenance=""):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(
            rows, cols, ((r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row) if v), field, provenance
        )

    def sparse_rows(self) -> List[Dict[int, object]]:
        out: List[Dict[int, object]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def sparse_columns(self) -> List[Dict[int, object]]:
        out: List[Dict[int, object]] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def transpose(self) -> "DegreeMatrix":
        return DegreeMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}, self.field, self.provenance)

    def hstack(self, other: "DegreeMatrix") -> "DegreeMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        if self.field != other.field:
            raise ValueError("fields differ")
        ent = dict(self.entries)
        ent.update({(r, c + self.cols): v for (r, c), v in other.entries.items()})
        return DegreeMatrix(self.rows, self.cols + other.cols, ent, self.field, self.provenance)

    def to_dense_mod(self, p: int) -> np.ndarray:
        A = np.zeros((self.rows, self.cols), dtype=np.int64)
        if self.field.prime is not None:
            if self.field.prime != p:
                raise ValueError("matrix already lives over a different prime field")
            for (r, c), v in self.entries.items():
                A[r, c] = v
        else:
            for (r, c), v in self.entries.items():
                A[r, c] = reduce_mod(v, p)
        return A

    def apply(self, vec: Mapping[int, object]) -> Dict[int, object]:
        """``M @ vec`` for a sparse column vector."""
        p = self.field.prime
        cols = self.sparse_columns()
        out: Dict[int, object] = {}
        for c, x in vec.items():
            for r, v in cols[c].items():
                out[r] = out.get(r, 0) + v * x
        if p is not None:
            out = {r: v % p for r, v in out.items()}
        return {r: v for r, v in out.items() if v}


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    mode: str
    primes: Tuple[int, ...] = ()
    agreement: bool = True

    @property
    def certified(self) -> bool:
        return self.agreement and (self.mode == EXACT or len(set(self.primes)) >= 2)

    def label(self) -> str:
        if self.mode == EXACT:
            return "exact"
        tag = "modular(" + ",".join(map(str, self.primes)) + ")"
        return tag if self.certified else "UNCERTIFIED " + tag


def rank_mod_p(m: DegreeMatrix, p: int) -> int:
    if m.rows == 0 or m.cols == 0 or not m.entries:
        return 0
    A = m.to_dense_mod(p)
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    return int(_kernels.rank_mod_p(A, p))


def rank(m: DegreeMatrix, mode: str = MODULAR, primes: Sequence[int] = DEFAULT_PRIMES) -> RankCertificate:
    """Rank of ``m`` over its field.

    Rational matrices in modular mode are reduced modulo each prime and the
    ranks must agree; disagreement raises ``Uncertified``. Matrices already
    over a prime field are reduced exactly in that field.
    """
    if m.field.prime is not None:
        return RankCertificate(rank_mod_p(m, m.field.prime), EXACT, (m.field.prime,))
    if mode == EXACT:
        return RankCertificate(fraction_free_rank(m.sparse_rows()), EXACT)
    if mode != MODULAR:
        raise ValueError(f"unknown mode {mode!r}")
    primes = tuple(primes)
    ranks = {p: rank_mod_p(m, p) for p in primes}
    agree = len(set(ranks.values())) == 1 and len(set(primes)) >= 2
    if not agree:
        raise Uncertified(ranks)
    return RankCertificate(ranks[primes[0]], MODULAR, primes, True)


def kernel_basis(m: DegreeMatrix, verify: bool = True) -> List[Dict[int, object]]:
    """Exact right-kernel basis over the matrix's field, as sparse column vectors."""
    reduced, pivots = gauss_jordan(m.sparse_rows(), m.field)
    basis = kernel_from_rref(reduced, pivots, m.cols, m.field)
    if verify:
        for v in basis:
            if m.apply(v):
                raise KernelCheckFailed("kernel vector does not annihilate the matrix")
    return basis


def kernel_basis_mod_p(m: DegreeMatrix, p: int) -> np.ndarray:
    """Kernel basis over F_p as the rows of a dense int64 array."""
    A = m.to_dense_mod(p)
    n = m.cols
    if m.rows == 0 or not m.entries:
        return np.eye(n, dtype=np.int64)
    pivots = _kernels.rref_mod_p(A, p)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    K = np.zeros((len(free), n), dtype=np.int64)
    R = A[: len(pivots)]
    for k, c in enumerate(free):
        K[k, c] = 1
        K[k, pivots] = (-R[:, c]) % p
    return K


def quotient_dim(ambient_dim: int, span: DegreeMatrix, mode: str = MODULAR, primes=DEFAULT_PRIMES) -> int:
    if span.rows != ambient_dim:
        raise ValueError("span must have ambient_dim rows")
    return ambient_dim - rank(span, mode, primes).rank


def relative_rank(vectors: DegreeMatrix, modulo: DegreeMatrix, mode: str = MODULAR, primes=DEFAULT_PRIMES) -> int:
    """Rank of the column span of ``vectors`` in the quotient by that of ``modulo``."""
    if vectors.rows != modulo.rows:
        raise ValueError("row counts differ")
    return rank(vectors.hstack(modulo), mode, primes).rank - rank(modulo, mode, primes).rank


def dense_rank_mod_p(A: np.ndarray, p: int) -> int:
    """Rank of an int64 residue array (copied)."""
    if A.size == 0:
        return 0
    A = np.array(A, dtype=np.int64, copy=True) % p
    if A.shape[0] > A.shape[1]:
        A = A.T
    return int(_kernels.rank_mod_p(np.ascontiguousarray(A), p))


class Solver:
    """Rank oracle shared by one computation.

    Modular disagreements are escalated to exact elimination when
    ``escalate`` is set; otherwise they are recorded and the result is
    flagged UNCERTIFIED. Ranks are memoised under caller-supplied keys.
    """

    def __init__(self, mode: str = MODULAR, primes: Sequence[int] = DEFAULT_PRIMES, escalate: bool = True):
        if mode not in (EXACT, MODULAR):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.primes = tuple(primes)
        self.escalate = escalate
        self.escalations = 0
        self.uncertified = False
        self._cache: Dict[object, int] = {}

    def rank(self, m: DegreeMatrix, key=None) -> int:
        if key is not None and key in self._cache:
            return self._cache[key]
        try:
            r = rank(m, self.mode, self.primes).rank
        except Uncertified as exc:
            if not self.escalate:
                self.uncertified = True
                r = min(exc.ranks.values())
            else:
                self.escalations += 1
                r = rank(m, EXACT).rank
        if key is not None:
            self._cache[key] = r
        return r

    def relative_rank(self, vectors: DegreeMatrix, modulo: DegreeMatrix) -> int:
        return self.rank(vectors.hstack(modulo)) - self.rank(modulo)

    @property
    def certification(self) -> str:
        if self.uncertified:
            return "UNCERTIFIED"
        if self.mode == EXACT:
            return "exact"
        return "modular(" + ",".join(map(str, self.primes)) + ")"


def to_fraction_vector(vec: Mapping[int, object]) -> Dict[int, Fraction]:
    return {k: Fraction(v) for k, v in vec.items()}


__all__ = [
    "BACKEND", "DEFAULT_PRIMES", "EXACT", "MODULAR", "BadPrime", "DegreeMatrix", "KernelCheckFailed",
    "RankCertificate", "Solver", "Uncertified", "dense_rank_mod_p", "kernel_basis", "kernel_basis_mod_p",
    "quotient_dim", "rank", "rank_mod_p", "relative_rank",
]
