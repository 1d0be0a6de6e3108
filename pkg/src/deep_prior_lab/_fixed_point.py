"""Solver for the infinite-depth connected-kernel fixed point.

The equation k - log k = c with c = 1 + r^2/2 >= 1 has a unique root in
(0, 1], expressible through the principal Lambert branch as
k = -W0(-e^{-c}). The solver runs Halley iteration on
g(k) = k - log k - c starting from k0 = e^{-c}, with a bisection fallback
on the bracket [k0, 1] for any element whose residual stops halving
(near r = 0 the root sits at the branch point where curvature-aware
iteration is the only fast option, and bisection is the safety net).

Residuals are computed in double precision, so they cannot resolve below
about eps * c; the default tolerance 1e-12 is attainable for r up to
roughly 40. For c beyond the underflow point of e^{-c} the root itself is
below the double range and 0.0 is returned.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericsError

__all__ = ["solve_fixed_point", "fixed_point_from_r"]

_TINY = 1e-300
_STALL_WINDOW = 5


def _residual(k: np.ndarray, c: np.ndarray) -> np.ndarray:
    return k - np.log(k) - c


def _bisect_one(c: float, lo: float, tol: float, max_iter: int) -> float:
    """Bisection for the root of k - log k - c on [lo, 1]."""
    hi = 1.0
    g_lo = lo - np.log(lo) - c
    if g_lo < 0.0:
        # Can only happen through rounding right at the root.
        return lo
    mid = lo
    for _ in range(max(max_iter, 120)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g = mid - np.log(mid) - c
        if abs(g) <= tol:
            return mid
        if g > 0.0:
            lo = mid
        else:
            hi = mid
    g = mid - np.log(mid) - c
    if abs(g) <= tol:
        return mid
    raise NumericsError(
        f"fixed-point bisection stalled at residual {abs(g):.3e} (target {tol:.3e})"
    )


def solve_fixed_point(c, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Vectorized root of k - log k = c, elementwise over c (all >= 1)."""
    c_arr = np.asarray(c, dtype=np.float64)
    if c_arr.size and np.min(c_arr) < 1.0:
        raise ValueError(f"fixed-point equation needs c >= 1, got min {np.min(c_arr)}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    flat_c = np.atleast_1d(c_arr).reshape(-1)
    k = np.exp(-flat_c)
    out = np.empty_like(flat_c)

    exact = flat_c == 1.0
    under = k == 0.0
    out[exact] = 1.0
    out[under & ~exact] = 0.0
    active = ~(exact | under)

    if np.any(active):
        ka = k[active].copy()
        ca = flat_c[active]
        k0 = ka.copy()
        res = np.abs(_residual(ka, ca))
        history = [res]
        need_bisect = np.zeros(ka.shape, dtype=bool)
        for it in range(max_iter):
            live = (res > tol) & ~need_bisect
            if not np.any(live):
                break
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                g = _residual(ka, ca)
                gp = (ka - 1.0) / ka
                gpp = 1.0 / (ka * ka)
                denom = 2.0 * gp * gp - g * gpp
                step = np.where(denom != 0.0, 2.0 * g * gp / denom, 0.0)
                step = np.where(np.isfinite(step), step, 0.0)
            ka = np.where(live, np.clip(ka - step, _TINY, 1.0), ka)
            res = np.abs(_residual(ka, ca))
            history.append(res)
            if it + 1 >= _STALL_WINDOW:
                stalled = live & (res > tol) & (res > 0.5 * history[it + 1 - _STALL_WINDOW])
                need_bisect |= stalled
        unresolved = (res > tol) | need_bisect
        for idx in np.nonzero(unresolved)[0]:
            ka[idx] = _bisect_one(float(ca[idx]), float(k0[idx]), tol, max_iter)
        res = np.abs(_residual(ka, ca))
        if np.max(res) > tol:
            raise NumericsError(
                f"fixed-point iteration did not converge: residual {np.max(res):.3e} "
                f"after {max_iter} iterations (target {tol:.3e})"
            )
        out[active] = ka

    out = out.reshape(np.atleast_1d(c_arr).shape)
    return out if c_arr.ndim else out.reshape(())


def fixed_point_from_r(r, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Root of k - log k = 1 + r^2/2 for Euclidean distance(s) r >= 0."""
    r_arr = np.asarray(r, dtype=np.float64)
    if r_arr.size and np.min(r_arr) < 0.0:
        raise ValueError(f"distance must be nonnegative, got min {np.min(r_arr)}")
    return solve_fixed_point(1.0 + 0.5 * r_arr * r_arr, tol=tol, max_iter=max_iter)
