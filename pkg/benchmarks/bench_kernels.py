"""Compare the numba-jitted kernels against the pure-numpy fallbacks.

Run with the default (jitted) path, then force the fallback:

    python3 benchmarks/bench_kernels.py
    DOCBOT_DISABLE_NUMBA=1 python3 benchmarks/bench_kernels.py

First jitted timings include compilation unless the cache is warm.
"""

import time

import numpy as np

from docbot.tensor import kernels


def bench(name, fn, repeats=5):
    fn()  # warm-up (and jit compilation on the numba path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    best = min(times) * 1e3
    print(f"{name:28s} {best:9.3f} ms   (best of {repeats})")


def main():
    rng = np.random.default_rng(0)
    path = "numba" if kernels.USE_NUMBA else "numpy fallback"
    print(f"active kernel path: {path}\n")

    x = rng.normal(size=(64, 2, 48, 48))
    w = rng.normal(size=(8, 2, 3, 3))
    gy = rng.normal(size=(64, 8, 46, 46))
    bench("conv2d forward", lambda: kernels.conv2d_forward(x, w))
    bench("conv2d backward", lambda: kernels.conv2d_backward(x, w, gy))

    px = rng.normal(size=(64, 8, 46, 46))
    _, arg = kernels.maxpool2d_forward(px, 3, 3, 3, 3)
    gp = rng.normal(size=(64, 8, 15, 15))
    bench("maxpool2d forward", lambda: kernels.maxpool2d_forward(px, 3, 3, 3, 3))
    bench("maxpool2d backward", lambda: kernels.maxpool2d_backward(gp, arg, 46, 46))

    p = rng.normal(size=(128, 24, 48))
    q = rng.normal(size=(128, 24, 48))
    v = rng.normal(size=48)
    gs = rng.normal(size=(128, 24, 24))
    bench("attention scores forward", lambda: kernels.attn_scores_forward(p, q, v))
    bench("attention scores backward", lambda: kernels.attn_scores_backward(p, q, v, gs))

    ids = rng.integers(0, 5000, size=(256, 48))
    g = rng.normal(size=(256, 48, 64))
    table = np.zeros((5000, 64))
    bench("embedding gradient", lambda: kernels.embedding_grad(ids, g, table))


if __name__ == "__main__":
    main()
