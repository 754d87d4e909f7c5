"""Compare the compiled and pure-Python term kernels.

    python benchmarks/bench_kernels.py [--trunc N] [--repeat R]

Times ``poly_mul`` on products of a(i,j)-expansions taken from the formal
group law, ``lattice_reduce`` against the integrality lattice, then the
whole ``verify`` run under each backend.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

from cobring import _pykernels
from cobring.exactpoly import Truncation
from cobring.lazard import fgl

try:
    from cobring import _kernels
except ImportError:  # extension not built
    _kernels = None


def workload(n):
    law = fgl(Truncation(n))
    polys = [law.a(i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)]
    return [p.terms for p in polys if len(p) > 1]


def bench_mul(mod, terms, repeat):
    def go():
        for a in terms:
            for b in terms:
                mod.poly_mul(a, b, {}, mod.NO_CAP, -1, mod.NO_CAP)
    return min(timeit.repeat(go, number=1, repeat=repeat))


def lattice_workload(n):
    from cobring.lazard import _weight_lattice_n

    lat = _weight_lattice_n(n, n)[-1]
    vecs = [[(7 * k + 3 * c) % 11 - 5 for c in range(lat.dim)] for k in range(200)]
    return lat, vecs


def bench_reduce(mod, lat, vecs, repeat):
    args = (lat._cols, lat._pivot_of_col, lat._rows, lat._combos, lat.ngens)

    def go():
        for v in vecs:
            mod.lattice_reduce(list(v), *args)
    return min(timeit.repeat(go, number=1, repeat=repeat))


def bench_verify(n, pure):
    env = dict(os.environ)
    if pure:
        env["COBRING_PURE"] = "1"
    start = time.perf_counter()
    subprocess.run([sys.executable, "-m", "cobring", "verify", "--trunc", str(n)],
                   env=env, check=True, capture_output=True)
    return time.perf_counter() - start


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trunc", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-verify", action="store_true")
    args = ap.parse_args(argv)

    terms = workload(args.trunc)
    print(f"poly_mul over {len(terms)}^2 products of a(i,j), N={args.trunc}")
    t_py = bench_mul(_pykernels, terms, args.repeat)
    print(f"  python  {t_py * 1e3:9.2f} ms")
    if _kernels is not None:
        t_cy = bench_mul(_kernels, terms, args.repeat)
        print(f"  cython  {t_cy * 1e3:9.2f} ms   speedup {t_py / t_cy:5.2f}x")
    else:
        print("  cython  (extension not built)")
    lat, vecs = lattice_workload(args.trunc)
    print(f"lattice_reduce of {len(vecs)} vectors, dim {lat.dim}, rank {lat.rank}")
    r_py = bench_reduce(_pykernels, lat, vecs, args.repeat)
    print(f"  python  {r_py * 1e3:9.2f} ms")
    if _kernels is not None:
        r_cy = bench_reduce(_kernels, lat, vecs, args.repeat)
        print(f"  cython  {r_cy * 1e3:9.2f} ms   speedup {r_py / r_cy:5.2f}x")
    if not args.skip_verify:
        print(f"verify --trunc {args.trunc}")
        v_py = bench_verify(args.trunc, pure=True)
        print(f"  python  {v_py:9.2f} s")
        if _kernels is not None:
            v_cy = bench_verify(args.trunc, pure=False)
            print(f"  cython  {v_cy:9.2f} s   speedup {v_py / v_cy:5.2f}x")


if __name__ == "__main__":
    main()
