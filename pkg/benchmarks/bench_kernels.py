"""Time the double-precision kernels under both backends.

Run: python3 benchmarks/bench_kernels.py
Each backend runs in a fresh interpreter because the choice is made at import.
"""
from __future__ import annotations

import json
import os
import subprocess
import sys

CHILD = r"""
import json, time
import numpy as np
from parrylab import _kernels as K
from parrylab.exactpoly import gn
from parrylab.rootfinder import _float_roots

def best(fn, reps=5):
    fn()  # warm-up, includes jit compilation
    ts = []
    for _ in range(reps):
        t = time.perf_counter(); fn(); ts.append(time.perf_counter() - t)
    return min(ts)

rng = np.random.default_rng(0)
exps = np.sort(rng.choice(20000, 400, replace=False)).astype(np.int64)
vals = rng.integers(-1, 2, 400).astype(np.complex128)
pts = 0.99 * np.exp(2j * np.pi * np.arange(4096) / 4096)
coeffs = np.array([1.0, 0, 0, 1, -1] * 60, dtype=np.complex128)
print(json.dumps({
    "backend": K.BACKEND,
    "sparse_eval_400x4096": best(lambda: K.sparse_eval_d(exps, vals, pts)),
    "horner_300x4096": best(lambda: K.horner(coeffs, pts)),
    "winding_4096": best(lambda: K.winding(pts)),
    "aberth_G_400": best(lambda: _float_roots(gn(400)), reps=2),
}))
"""


def main() -> None:
    rows = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, PARRYLAB_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", CHILD], env=env, capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout))
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'kernel':24s} " + " ".join(f"{r['backend']:>10s}" for r in rows) + "   speedup")
    for k in keys:
        a, b = rows[0][k], rows[1][k]
        print(f"{k:24s} {a:10.4f} {b:10.4f}   {b / a:6.1f}x")


if __name__ == "__main__":
    main()
