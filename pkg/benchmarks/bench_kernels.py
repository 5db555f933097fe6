#!/usr/bin/env python3
"""Benchmark the compiled CSR kernels against the numpy fallback.

Times raw sparse application (J_+ at a few chain lengths) and the
end-to-end basis construction, once per backend:

    python benchmarks/bench_kernels.py --n 12 --repeat 5
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import crchan._kernels as kernels
from crchan._kernels import fallback
from crchan.collective import build_collective_system
from crchan.structure import construct_irrep_basis

try:
    from crchan._kernels import _csr as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def backends():
    out = [("numpy", fallback)]
    if compiled is not None:
        out.insert(0, ("cython", compiled))
    return out


def bench_application(n: int, d: int, repeat: int, nvec: int = 64) -> None:
    system = build_collective_system(n, d)
    op = system.Jplus
    rng = np.random.default_rng(0)
    x = np.ascontiguousarray(rng.normal(size=op.ncols) + 1j * rng.normal(size=op.ncols))
    block = np.ascontiguousarray(
        rng.normal(size=(op.ncols, nvec)) + 1j * rng.normal(size=(op.ncols, nvec))
    )
    print(f"\nJ_+ application, n={n} d={d} (dim {system.dim}, nnz {op.nnz})")
    reference = {}
    for label, backend in backends():
        t_vec = best_of(lambda: backend.csr_matvec(op.indptr, op.indices, op.data, x), repeat)
        t_mat = best_of(lambda: backend.csr_matmat(op.indptr, op.indices, op.data, block), repeat)
        reference.setdefault("vec", t_vec)
        reference.setdefault("mat", t_mat)
        print(
            f"  {label:<7} matvec {t_vec * 1e6:9.1f} us ({t_vec / reference['vec']:.2f}x)"
            f"   matmat[{nvec}] {t_mat * 1e6:9.1f} us ({t_mat / reference['mat']:.2f}x)"
        )


def bench_construction(n: int, d: int, repeat: int) -> None:
    print(f"\nfull basis construction, n={n} d={d} (dim {d**n})")
    saved = (kernels.csr_matvec, kernels.csr_matmat)
    reference = None
    try:
        for label, backend in backends():
            kernels.csr_matvec = backend.csr_matvec
            kernels.csr_matmat = backend.csr_matmat
            system = build_collective_system(n, d)
            t = best_of(lambda: construct_irrep_basis(system), repeat)
            reference = reference or t
            print(f"  {label:<7} {t:8.3f} s ({t / reference:.2f}x)")
    finally:
        kernels.csr_matvec, kernels.csr_matmat = saved


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        print("compiled kernel not available; benchmarking the fallback only")
    for n in sorted({8, 10, args.n}):
        if n <= args.n:
            bench_application(n, args.d, args.repeat)
    bench_construction(args.n, args.d, max(1, args.repeat // 2))


if __name__ == "__main__":
    main()
