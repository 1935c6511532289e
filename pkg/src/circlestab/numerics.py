"""Vectorised one-dimensional refinement routines.

Every routine works on arrays of independent brackets at once, so a whole
grid scan is refined in a fixed number of numpy passes.
"""
import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(func, lo, hi, min_steps=60, xtol=1e-14, max_steps=200):
    """Refine sign-change brackets ``[lo, hi]`` by bisection.

    ``func(lo)`` and ``func(hi)`` must have opposite (nonzero) signs for
    every bracket. Stops once every bracket is narrower than ``xtol`` and at
    least ``min_steps`` halvings were done, or when floating point stalls.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if lo.size == 0:
        return lo
    slo = np.sign(func(lo))
    for step in range(max_steps):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        smid = np.sign(func(mid))
        exact = smid == 0
        keep_hi = (smid == slo) & ~exact
        lo = np.where(keep_hi | exact, mid, lo)
        hi = np.where(keep_hi, hi, mid)
        width = hi - lo
        if np.all(width < xtol) and step + 1 >= min_steps:
            break
    return 0.5 * (lo + hi)


def golden_max(func, lo, hi, xtol=1e-13):
    """Golden-section maximisation of ``func`` on each bracket.

    Returns ``(x, func(x))`` arrays. Brackets are treated as unimodal; callers
    combine the result with the grid value so a bad bracket cannot lower an
    estimate.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if lo.size == 0:
        return lo, lo.copy()
    width = float(np.max(hi - lo))
    n = 0 if width <= xtol else int(math.ceil(math.log(xtol / width) / math.log(INV_PHI)))
    for _ in range(n):
        span = hi - lo
        c = hi - INV_PHI * span
        d = lo + INV_PHI * span
        # one call per step; per-bracket parameters in func broadcast over the leading axis
        fc, fd = func(np.stack((c, d)))
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
    x = 0.5 * (lo + hi)
    return x, func(x)


def golden_min(func, lo, hi, xtol=1e-13):
    x, v = golden_max(lambda t: -func(t), lo, hi, xtol)
    return x, -v


def _local_extrema(values, cyclic):
    v = values
    if cyclic:
        left, right = np.roll(v, 1), np.roll(v, -1)
    else:
        left = np.concatenate(([-np.inf], v[:-1]))
        right = np.concatenate((v[1:], [-np.inf]))
    return np.flatnonzero((v >= left) & (v >= right))


def refined_max(func, xs, values=None, cyclic=True, max_candidates=16):
    """Maximum of ``func`` over a sample grid, sharpened near the best peaks.

    ``xs`` is a uniform grid. When ``cyclic`` the grid is taken to cover one
    period and neighbours wrap around. The returned value is never below the
    grid maximum.
    """
    xs = np.asarray(xs, dtype=float)
    if values is None:
        values = func(xs)
    best = float(np.max(values))
    idx = _local_extrema(values, cyclic)
    if idx.size == 0:
        return best
    idx = idx[np.argsort(-values[idx], kind="stable")][:max_candidates]
    step = xs[1] - xs[0] if xs.size > 1 else 0.0
    lo = xs[idx] - step
    hi = xs[idx] + step
    if not cyclic:
        lo = np.maximum(lo, xs[0])
        hi = np.minimum(hi, xs[-1])
    _, peak = golden_max(func, lo, hi)
    return max(best, float(np.max(peak)))


def refined_min(func, xs, values=None, cyclic=False, max_candidates=16):
    if values is None:
        values = func(np.asarray(xs, dtype=float))
    return -refined_max(lambda t: -func(t), xs, -np.asarray(values), cyclic, max_candidates)
