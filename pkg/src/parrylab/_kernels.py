"""Double-precision hot loops with a numba backend and a pure-numpy fallback.

Set PARRYLAB_BACKEND=numpy to force the fallback; the default uses numba
when it imports cleanly.
"""
from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("PARRYLAB_BACKEND", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError("numpy backend requested")
    from numba import njit

    BACKEND = "numba"
except ImportError:
    BACKEND = "numpy"


# ---------------------------------------------------------------------------
# numpy versions (always defined, used as the fallback and as a test oracle)


def aberth_step_np(coeffs: np.ndarray, dcoeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, float]:
    """One Aberth-Ehrlich sweep. coeffs are highest degree first.

    For |z| > 1 the Newton ratio is taken from the reversed polynomial to
    avoid overflow: p/p' = z p*(y) / (d p*(y) - y p*'(y)) with y = 1/z.
    """
    d = len(coeffs) - 1
    rev = coeffs[::-1]
    drev = np.arange(d, 0, -1) * rev[:-1]
    out = np.abs(z) > 1
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        y = np.where(out, 1.0 / np.where(z == 0, 1, z), 0)
        p_in = np.polyval(coeffs, np.where(out, 0, z))
        dp_in = np.polyval(dcoeffs, np.where(out, 0, z))
        q = np.polyval(rev, y)
        dq = np.polyval(drev, y)
        ratio = np.where(out, z * q / (d * q - y * dq), p_in / dp_in)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = (1.0 / diff).sum(axis=1) - 1.0
        w = ratio / (1.0 - ratio * s)
    w = np.where(np.isfinite(w), w, 0.0)
    return z - w, float(np.max(np.abs(w))) if len(w) else 0.0


def horner_np(coeffs: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return np.polyval(coeffs, pts)


def sparse_eval_np(exps: np.ndarray, vals: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """sum_k vals[k] * pts**exps[k] at every point."""
    out = np.zeros(pts.shape, dtype=np.complex128)
    for e, v in zip(exps, vals):
        out += v * pts ** int(e)
    return out


def sparse_eval_d_np(exps: np.ndarray, vals: np.ndarray, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    f = np.zeros(pts.shape, dtype=np.complex128)
    df = np.zeros(pts.shape, dtype=np.complex128)
    for e, v in zip(exps, vals):
        e = int(e)
        f += v * pts**e
        if e:
            df += v * e * pts ** (e - 1)
    return f, df


def winding_np(vals: np.ndarray) -> float:
    """Total argument change of a closed sampled curve, in turns."""
    ang = np.angle(np.concatenate([vals, vals[:1]]))
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(d.sum() / (2 * np.pi))


def max_step_np(vals: np.ndarray) -> float:
    """Largest argument jump between consecutive samples (radians)."""
    ang = np.angle(np.concatenate([vals, vals[:1]]))
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(np.max(np.abs(d)))


# ---------------------------------------------------------------------------
# numba versions

if BACKEND == "numba":

    @njit(cache=True)
    def _aberth_step_nb(coeffs, dcoeffs, z):
        n = z.shape[0]
        d = coeffs.shape[0] - 1
        out = np.empty_like(z)
        big = 0.0
        for i in range(n):
            zi = z[i]
            num = 0j
            den = 0j
            if abs(zi) > 1.0:
                y = 1.0 / zi
                q = 0j
                dq = 0j
                for k in range(d, -1, -1):
                    dq = dq * y + q
                    q = q * y + coeffs[k]
                num = zi * q
                den = d * q - y * dq
            else:
                for c in coeffs:
                    num = num * zi + c
                for c in dcoeffs:
                    den = den * zi + c
            s = 0j
            for k in range(n):
                if k != i:
                    s += 1.0 / (zi - z[k])
            w = 0j
            if den != 0:
                ratio = num / den
                dd = 1.0 - ratio * s
                if dd != 0:
                    w = ratio / dd
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                w = 0j
            out[i] = zi - w
            a = abs(w)
            if a > big:
                big = a
        return out, big

    @njit(cache=True)
    def _horner_nb(coeffs, pts):
        out = np.empty(pts.shape[0], dtype=np.complex128)
        for i in range(pts.shape[0]):
            acc = 0j
            zi = pts[i]
            for c in coeffs:
                acc = acc * zi + c
            out[i] = acc
        return out

    @njit(cache=True)
    def _sparse_eval_d_nb(exps, vals, pts):
        m = pts.shape[0]
        f = np.zeros(m, dtype=np.complex128)
        df = np.zeros(m, dtype=np.complex128)
        for i in range(m):
            zi = pts[i]
            acc = 0j
            dacc = 0j
            # exps are increasing; advance powers incrementally
            pw = 1.0 + 0j
            e_prev = 0
            for k in range(exps.shape[0]):
                e = exps[k]
                step = e - e_prev
                if step > 0:
                    pw = pw * zi**step
                e_prev = e
                acc += vals[k] * pw
                if e > 0:
                    dacc += vals[k] * e * pw / zi
            f[i] = acc
            df[i] = dacc
        return f, df

    @njit(cache=True)
    def _winding_nb(vals):
        n = vals.shape[0]
        tot = 0.0
        for i in range(n):
            a = np.angle(vals[(i + 1) % n]) - np.angle(vals[i])
            a = (a + np.pi) % (2 * np.pi) - np.pi
            tot += a
        return tot / (2 * np.pi)

    def aberth_step(coeffs, dcoeffs, z):
        return _aberth_step_nb(coeffs, dcoeffs, z)

    def horner(coeffs, pts):
        return _horner_nb(coeffs.astype(np.complex128), pts.astype(np.complex128))

    def sparse_eval_d(exps, vals, pts):
        pts = pts.astype(np.complex128)
        if np.any(pts == 0):
            return sparse_eval_d_np(exps, vals, pts)
        return _sparse_eval_d_nb(exps.astype(np.int64), vals.astype(np.complex128), pts)

    def winding(vals):
        return float(_winding_nb(vals.astype(np.complex128)))

else:
    aberth_step = aberth_step_np
    horner = horner_np
    sparse_eval_d = sparse_eval_d_np
    winding = winding_np


def sparse_eval(exps, vals, pts):
    return sparse_eval_d(exps, vals, pts)[0]


max_step = max_step_np
