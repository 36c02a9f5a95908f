"""Compare the compiled and numpy F_p elimination kernels.

Run from the repository root after ``pip install -e . --no-build-isolation``::

    python benchmarks/bench_rank.py [--repeat 3] [--end-to-end]

Matrices are the Jacobian and Koszul maps of a septic plane curve and a
nodal quartic surface, reduced modulo the first default prime.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from koszulpole.koszul import jacobian_matrix, koszul_matrix
from koszulpole.linalg import BACKEND, DEFAULT_PRIMES, _fallback
from koszulpole.parse import parse_poly
from koszulpole.poly import RingCtx

SEPTIC = "x^3*z^4+x*y^5*z+x^7+y^7"
SURFACE = "(x^2+y^2+z^2)*w^2+x^4+y^4+z^4"


def cases():
    septic = parse_poly(SEPTIC, RingCtx(3))
    surface = parse_poly(SURFACE, RingCtx(4))
    yield "septic jacobian k=13", jacobian_matrix(septic, 13)
    yield "septic koszul p=2 j=21", koszul_matrix(septic, 2, 21)
    yield "surface jacobian k=8", jacobian_matrix(surface, 8)
    yield "surface koszul p=3 j=12", koszul_matrix(surface, 3, 12)


def best_time(fn, A, p, repeat):
    times = []
    for _ in range(repeat):
        B = np.ascontiguousarray(A.copy())
        t0 = time.perf_counter()
        r = fn(B, p)
        times.append(time.perf_counter() - t0)
    return min(times), int(r)


def end_to_end():
    cmd = [sys.executable, "-m", "koszulpole.cli", "spectral", SEPTIC]
    out = {}
    for label, extra in (("cython", {}), ("numpy", {"KOSZULPOLE_PURE_PYTHON": "1"})):
        env = dict(os.environ, **extra)
        t0 = time.perf_counter()
        subprocess.run(cmd, env=env, check=False, capture_output=True)
        out[label] = time.perf_counter() - t0
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true", help="also time a full CLI run under each backend")
    args = ap.parse_args(argv)
    p = DEFAULT_PRIMES[0]
    try:
        from koszulpole.linalg import _kernels as compiled  # type: ignore[attr-defined]
    except ImportError:
        compiled = None
    print(f"active backend: {BACKEND}; compiled kernel {'available' if compiled else 'not built'}")
    print(f"{'matrix':28} {'shape':>12} {'rank':>6} {'numpy ms':>9} {'cython ms':>9} {'speedup':>8}")
    for name, m in cases():
        A = m.to_dense_mod(p)
        if A.shape[0] > A.shape[1]:
            A = A.T
        t_np, r_np = best_time(_fallback.rank_mod_p, A, p, args.repeat)
        if compiled is not None and compiled is not _fallback:
            t_cy, r_cy = best_time(compiled.rank_mod_p, A, p, args.repeat)
            if r_cy != r_np:
                raise SystemExit(f"{name}: backends disagree ({r_cy} vs {r_np})")
            cy, speed = f"{1e3 * t_cy:9.3f}", f"{t_np / t_cy:7.1f}x"
        else:
            cy, speed = f"{'-':>9}", f"{'-':>8}"
        shape = f"{A.shape[0]}x{A.shape[1]}"
        print(f"{name:28} {shape:>12} {r_np:6d} {1e3 * t_np:9.3f} {cy} {speed}")
    if args.end_to_end:
        times = end_to_end()
        print("end-to-end spectral run: " + ", ".join(f"{k} {v:.2f}s" for k, v in times.items()))


if __name__ == "__main__":
    main()
