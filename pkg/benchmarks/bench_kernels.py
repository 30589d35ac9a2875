"""Compare the compiled kernels with the numpy fallback.

Run from the repository root after building::

    python benchmarks/bench_kernels.py --rings 32 --p 4

Per-kernel timings call both modules directly.  The full solve runs in a
subprocess per backend because the backend is chosen once at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qcspectral import _kernels_py
from qcspectral.eigsolver import FEData
from qcspectral.maps import parse_map
from qcspectral.mesh import mesh_disc, push_forward

try:
    from qcspectral import _kernels as _compiled
except ImportError:  # fallback only
    _compiled = None

SOLVE = """
import time
from qcspectral import BACKEND
from qcspectral.eigsolver import solve_domain
from qcspectral.maps import parse_map
t0 = time.perf_counter()
_, res = solve_domain(parse_map({record!r}), {p}, {rings})
print(BACKEND, time.perf_counter() - t0, res.mu, res.iterations)
"""


def kernel_calls(mod, fe, u, p):
    uq = mod.quad_values(u, fe.tri, fe.bary)
    return {
        "energy_grad": lambda: mod.energy_grad(u, fe.tri, fe.grads, fe.area, p),
        "mass_grad": lambda: mod.mass_grad(u, fe.tri, fe.area, fe.bary, fe.wq, p),
        "quad_values": lambda: mod.quad_values(u, fe.tri, fe.bary),
        "constraint": lambda: mod.constraint(uq, fe.W, 0.1, p),
    }


def best_of(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(record, rings, p, repeat):
    fe = FEData(push_forward(mesh_disc(rings), parse_map(record)))
    u = np.random.default_rng(0).standard_normal(fe.n)
    print(f"mesh: {record}, rings={rings}, {fe.n} vertices, {len(fe.tri)} triangles, p={p}")
    print(f"{'kernel':<12} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    py = kernel_calls(_kernels_py, fe, u, p)
    cy = kernel_calls(_compiled, fe, u, p) if _compiled else {}
    for name, fn in py.items():
        t_py = best_of(fn, repeat) * 1e3
        if name in cy:
            t_cy = best_of(cy[name], repeat) * 1e3
            print(f"{name:<12} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f}")
        else:
            print(f"{name:<12} {t_py:12.3f} {'n/a':>12}")


def bench_solve(record, rings, p):
    print(f"\nfull solve: {record}, rings={rings}, p={p}")
    for pure in ("1", "0"):
        env = dict(os.environ, QCSPECTRAL_PURE_PYTHON=pure)
        code = SOLVE.format(record=record, p=p, rings=rings)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        backend, secs, mu, its = out
        print(f"{backend:<8} {float(secs):8.2f} s  mu={float(mu):.10f}  iterations={its}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--map", default="rose-petal")
    ap.add_argument("--rings", type=int, default=32)
    ap.add_argument("--p", type=float, default=4.0)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-solve", action="store_true", help="skip the full solve comparison")
    args = ap.parse_args(argv)
    bench_kernels(args.map, args.rings, args.p, args.repeat)
    if not args.no_solve:
        bench_solve(args.map, args.rings, args.p)


if __name__ == "__main__":
    main()
