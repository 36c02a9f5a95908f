import random
from fractions import Fraction

import numpy as np
import pytest

from koszulpole.fields import GF, QQ
from koszulpole.koszul import form_to_relation, jacobian_matrix, koszul_matrix, vector_to_form
from koszulpole.linalg import (
    BACKEND,
    DEFAULT_PRIMES,
    EXACT,
    MODULAR,
    DegreeMatrix,
    Solver,
    Uncertified,
    _fallback,
    kernel_basis,
    kernel_basis_mod_p,
    quotient_dim,
    rank,
    rank_mod_p,
    relative_rank,
)
from koszulpole.linalg.exact import Echelon, fraction_free_rank, gauss_jordan
from koszulpole.parse import parse_poly
from koszulpole.poly import RingCtx, dim_S


def dense_rank_oracle(rows):
    """Plain Gaussian elimination over Fractions, independent of the package."""
    m = [[Fraction(v) for v in row] for row in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                t = m[i][c] / m[r][c]
                m[i] = [a - t * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_rank_small_examples():
    eye = DegreeMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank(eye).rank == 3
    assert rank(eye, EXACT).rank == 3
    dep = DegreeMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    assert rank(dep).rank == 1
    assert rank(dep, EXACT).rank == 1


def test_random_matrix_exact_equals_modular():
    rng = random.Random(7)
    rows = [[rng.randint(-9, 9) if rng.random() < 0.4 else 0 for _ in range(40)] for _ in range(30)]
    rows[5] = [a + 2 * b for a, b in zip(rows[1], rows[2])]
    m = DegreeMatrix.from_dense(rows)
    cert = rank(m)
    assert cert.certified and cert.mode == MODULAR
    assert cert.rank == rank(m, EXACT).rank == dense_rank_oracle(rows) == 29


def test_certificate_labels():
    m = DegreeMatrix.from_dense([[1, 1]])
    assert rank(m).label() == "modular(2147483647,2147483629)"
    assert rank(m, EXACT).label() == "exact"
    with pytest.raises(Uncertified):
        rank(m, MODULAR, (DEFAULT_PRIMES[0],))


def test_modular_disagreement_escalates():
    # rank drops modulo the first prime only
    p = DEFAULT_PRIMES[0]
    m = DegreeMatrix.from_dense([[1, 1], [1, 1 + p]])
    with pytest.raises(Uncertified) as exc:
        rank(m)
    assert exc.value.ranks == {p: 1, DEFAULT_PRIMES[1]: 2}
    solver = Solver()
    assert solver.rank(m) == 2
    assert solver.escalations == 1
    quiet = Solver(escalate=False)
    quiet.rank(m)
    assert quiet.certification == "UNCERTIFIED"


def test_kernel_basis_examples():
    assert kernel_basis(DegreeMatrix.from_dense([[1, 0], [0, 1]])) == []
    (v,) = kernel_basis(DegreeMatrix.from_dense([[1, -1]]))
    assert v == {0: 1, 1: 1}


def test_kernel_contains_low_degree_relation():
    # x^p y^q + z^N has the degree-one relation q x f_x - p y f_y = 0
    ctx = RingCtx(3)
    f = parse_poly("x^2*y^3+z^5", ctx)
    K = koszul_matrix(f, 2, 3)
    ker = kernel_basis(K)
    assert len(ker) == 1
    rel = form_to_relation(vector_to_form(ctx, 2, 3, ker[0]))
    a = rel[0].terms[(1, 0, 0)]
    assert rel[0].scale(Fraction(3) / a) == parse_poly("3*x", ctx)
    assert rel[1].scale(Fraction(3) / a) == parse_poly("-2*y", ctx)
    assert rel[2].is_zero()


def test_quotient_dim_examples():
    assert quotient_dim(10, DegreeMatrix(10, 3, {})) == 10
    eye = DegreeMatrix.from_entries(10, 10, ((i, i, 1) for i in range(10)))
    assert quotient_dim(10, eye) == 0
    f = parse_poly("(x^3+y^3+z^3)*x", RingCtx(3))
    assert quotient_dim(dim_S(3, 6), jacobian_matrix(f, 6)) == 3


def test_relative_rank_examples():
    a = DegreeMatrix.from_dense([[1, 0], [0, 1], [0, 0]])
    b = DegreeMatrix.from_dense([[2], [3], [0]])
    assert relative_rank(b, a) == 0
    assert relative_rank(a, DegreeMatrix(3, 0, {})) == 2


def test_kernel_mod_p_annihilates():
    rng = random.Random(3)
    p = DEFAULT_PRIMES[1]
    rows = [[rng.randint(-5, 5) for _ in range(12)] for _ in range(7)]
    m = DegreeMatrix.from_dense(rows)
    K = kernel_basis_mod_p(m, p)
    assert K.shape == (12 - rank(m).rank, 12)
    A = m.to_dense_mod(p)
    prod = [[sum(int(A[i, k]) * int(K[j, k]) for k in range(12)) % p for j in range(K.shape[0])] for i in range(7)]
    assert all(v == 0 for row in prod for v in row)


def test_prime_field_matrix_is_ranked_in_its_field():
    p = DEFAULT_PRIMES[0]
    m = DegreeMatrix.from_dense([[1, 2], [3, 6]], GF(p))
    cert = rank(m)
    assert cert.rank == 1 and cert.mode == EXACT


def test_gauss_jordan_and_echelon():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {1: 1, 2: 1}]
    reduced, piv = gauss_jordan(rows, QQ)
    assert piv == [0, 1]
    assert reduced[0] == {0: 1, 2: -2}
    ech = Echelon(QQ)
    assert ech.add({0: 1, 1: 1})
    assert not ech.add({0: 3, 1: 3})
    assert ech.add({1: 1})
    assert len(ech) == 2


def test_fraction_free_rank_with_denominators():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 3, 1: 2}, {2: Fraction(5, 7)}]
    assert fraction_free_rank(rows) == 2


def test_backends_agree():
    rng = np.random.default_rng(11)
    p = DEFAULT_PRIMES[0]
    for shape in [(5, 9), (20, 20), (33, 17)]:
        A = rng.integers(0, 4, size=shape).astype(np.int64)
        A[:, 0] = A[:, 1]
        r_fb = _fallback.rank_mod_p(np.ascontiguousarray(A.copy()), p)
        m = DegreeMatrix.from_dense(A.tolist())
        assert r_fb == rank_mod_p(m, p) == dense_rank_oracle(A.tolist())
    assert BACKEND in ("cython", "numpy")
