"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--threads T]
"""
import argparse
import time

import numpy as np

from warpft import _backend, _fallback
from warpft.chirp import ChirpSpec, harmonize, synthesize
from warpft.warp import OddPolynomial


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    compiled = _backend.compiled
    if compiled is None:
        print("extension not built; only the fallback can be timed")
    impls = [("python", _fallback)] + ([("cython", compiled)] if compiled else [])

    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'size':>14}" + "".join(f"{n:>12}" for n, _ in impls) + f"{'speedup':>10}")
    for n_src, n_tgt in [(1024, 256), (1601, 1024), (4096, 1024)]:
        src = np.sort(rng.uniform(-12, 12, n_src))
        tgt = np.sort(rng.uniform(-6, 6, n_tgt))
        coef = rng.normal(size=n_src) + 1j * rng.normal(size=n_src)
        cases = {
            "oscillatory_sum": lambda impl: _backend.oscillatory_sum(
                src, tgt, coef, 1, threads=args.threads, impl=impl),
            "gaussian_sum": lambda impl: _backend.gaussian_sum(
                src, tgt, coef.real, 0.5, threads=args.threads, impl=impl),
        }
        for name, fn in cases.items():
            secs = [best_of(lambda: fn(impl), args.repeat) for _, impl in impls]
            speed = f"{secs[0] / secs[-1]:>9.1f}x" if len(secs) > 1 else ""
            print(f"{name:<28}{f'{n_src}x{n_tgt}':>14}" + "".join(f"{s:>11.4f}s" for s in secs) + speed)

    # end to end: one harmonization on the default grids with the active backend
    w = OddPolynomial((1.0, 0.1))
    S = synthesize(ChirpSpec(w))
    sec = best_of(lambda: harmonize(S, w, threads=args.threads), args.repeat)
    print(f"harmonize (backend={_backend.BACKEND}): {sec:.3f}s")


if __name__ == "__main__":
    main()
