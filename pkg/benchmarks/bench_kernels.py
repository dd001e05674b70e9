"""Compare the numba kernels with the pure-numpy fallback.

Both backends are imported directly, so one process times both.  The
package-wide switch is the environment variable ``LMRDCODES_NO_NUMBA=1``;
``--end-to-end`` runs the record-code verification in a subprocess under
each setting.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--end-to-end]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from lmrdcodes import kernels
from lmrdcodes.cdc import standard_lmrd
from lmrdcodes.gf import field_new
from lmrdcodes.linalg import matmul, pack_rows
from lmrdcodes.orbits import record_generator, record_universe


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    f2, f3 = field_new(2), field_new(3)
    lmrd = standard_lmrd(f2, 10, 6, 5).stack()
    rng = np.random.default_rng(0)
    probe = rng.integers(0, 2, size=(155, 5, 10), dtype=np.uint8)
    packed_lmrd = pack_rows(lmrd)
    packed_probe = pack_rows(probe)

    universe = record_universe()
    images = pack_rows(matmul(f2, universe, record_generator().data))

    gf3 = rng.integers(0, 3, size=(20000, 4, 8), dtype=np.uint8)
    tabs = f3.tables()

    yield "cross-min, 32768 LMRD words x 155 subspaces", lambda b: b.gf2_cross_min_rank(packed_lmrd, packed_probe, 10, False)
    yield "RREF of 384400 orbit images (GF(2), 5x10)", lambda b: b.gf2_rref_rows(images, 10)
    yield "rank of 20000 GF(3) 4x8 matrices", lambda b: b.rank_batch(gf3, *tabs)


def end_to_end() -> None:
    code = "import time;from lmrdcodes.orbits import build_record_code;from lmrdcodes.cdc import verify_cdc;" \
           "c=build_record_code('printed');t=time.perf_counter();r=verify_cdc(c);print(f'{time.perf_counter()-t:.2f}s d={r.min_distance}')"
    for flag in ("0", "1"):
        env = dict(os.environ, LMRDCODES_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        label = "numpy" if flag == "1" else "numba"
        print(f"  record-code verification ({label}): {out.stdout.strip()}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()

    nb, npb = kernels.numba_backend, kernels.numpy_backend
    print(f"default backend: {kernels.BACKEND}")
    for name, fn in cases():
        t_np = best_of(lambda: fn(npb), args.repeat)
        print(f"{name}")
        print(f"  numpy: {t_np * 1000:9.1f} ms")
        if nb is not None:
            fn(nb)  # compile outside the timing
            t_nb = best_of(lambda: fn(nb), args.repeat)
            same = np.array_equal(np.asarray(fn(nb)), np.asarray(fn(npb)))
            print(f"  numba: {t_nb * 1000:9.1f} ms  ({t_np / t_nb:5.1f}x, identical={same})")
    if args.end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
