"""Compare the compiled and pure-Python cyclotomic kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call both implementations directly on the same inputs.  The
end-to-end row runs a batch of integration-identity checks in a subprocess,
once normally and once with ANTICYCLO_PURE=1.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from anticyclo import kernels
from anticyclo.cyclotomic import cyclo_context
from anticyclo.kernels import _pykernels as py
from anticyclo.padic import padic_context

E2E = """
import random, time
from anticyclo.characters import DirichletChar
from anticyclo.fixtures import random_series
from anticyclo.measures import integration_identity_check
from anticyclo.padic import padic_context
ctx = padic_context(5, 6)
rng = random.Random(0)
t = time.perf_counter()
for _ in range(10):
    Phi = random_series(ctx, 25, rng)
    for m in range(3):
        integration_identity_check(Phi, DirichletChar(5, 2, 3, 2), m)
print(time.perf_counter() - t)
"""


def cases(rng):
    for p, n, f, N in [(5, 1, 1, 6), (5, 2, 1, 6), (5, 2, 2, 5), (7, 2, 1, 5)]:
        W = cyclo_context(padic_context(p, N, f), n)
        m = p ** N
        args = (W.e, W.f, W.rel, W.hred, m)
        a = [rng.randrange(m) for _ in range(W.e * W.f)]
        b = [rng.randrange(m) for _ in range(W.e * W.f)]
        cs = [[rng.randrange(m) for _ in range(W.f)] for _ in range(25)]
        label = f"p={p} n={n} f={f} N={N}"
        yield label, "cyc_mul", lambda K, a=a, b=b, args=args: K.cyc_mul(a, b, *args)
        yield label, "cyc_pow", lambda K, a=a, args=args: K.cyc_pow(a, 1000, *args)
        yield label, "cyc_eval_scalar", lambda K, cs=cs, a=a, args=args: K.cyc_eval_scalar(cs, a, *args)
        yield label, "cyc_taylor", lambda K, cs=cs, a=a, b=b, args=args: K.cyc_taylor(cs[:10], a, b, *args)
    s1 = [rng.randrange(5 ** 6) for _ in range(200)]
    s2 = [rng.randrange(5 ** 6) for _ in range(200)]
    yield "L=200", "series_mul", lambda K: K.series_mul(s1, s2, 200, 5 ** 6)


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["ANTICYCLO_PURE"] = "1"
    else:
        env.pop("ANTICYCLO_PURE", None)
    out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True,
                         check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels._c is None:
        print("compiled kernels are not available; build the extension first")
        return 1
    rng = random.Random(0)
    print(f"{'case':22} {'kernel':16} {'python':>12} {'cython':>12} {'speedup':>8}")
    for label, name, fn in cases(rng):
        tp = best(lambda: fn(py), args.repeat)
        tc = best(lambda: fn(kernels._c), args.repeat)
        print(f"{label:22} {name:16} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.1f}x")
    tp, tc = end_to_end(True), end_to_end(False)
    print(f"{'30 identity checks':22} {'end-to-end':16} {tp:11.2f}s {tc:11.2f}s {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
