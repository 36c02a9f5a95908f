"""Independent reference computations used only by the tests."""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb


def smooth_coefficient(n, N, k):
    """Coefficient of t^k in (1 - t^(N-1))^(n+1) / (1 - t)^(n+1)."""
    total = 0
    for i in range(n + 2):
        m = k - i * (N - 1)
        if m < 0:
            break
        total += (-1) ** i * comb(n + 1, i) * comb(m + n, n)
    return total


def monomials(nvars, k):
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def derivative(terms, i):
    out = {}
    for m, c in terms.items():
        if m[i]:
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = out.get(tuple(mm), 0) + c * m[i]
    return {m: c for m, c in out.items() if c}


def rank(rows):
    m = [list(r) for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                t = Fraction(m[i][c]) / m[r][c]
                m[i] = [a - t * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def milnor_dim(terms, nvars, N, k):
    """dim (S / J_f)_k by spanning monomial multiples of the partials."""
    target = monomials(nvars, k)
    if k < N - 1:
        return len(target)
    pos = {m: i for i, m in enumerate(target)}
    rows = []
    for i in range(nvars):
        g = derivative(terms, i)
        for mono in monomials(nvars, k - N + 1):
            row = [0] * len(target)
            for m, c in g.items():
                row[pos[tuple(a + b for a, b in zip(m, mono))]] += c
            rows.append(row)
    return len(target) - rank(rows)
