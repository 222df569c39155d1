"""Volterra kernel K_H writing fractional Brownian motion as a Wiener integral.

For Hurst index H in (0,1) the kernel has two regimes:

    H > 1/2:  K_H(t,s) = C_H * s^(1/2-H) * I1,
              I1 = integral_s^t (r-s)^(H-3/2) r^(H-1/2) dr
    H <= 1/2: K_H(t,s) = C_H * [ t^(H-1/2) s^(1/2-H) (t-s)^(H-1/2)
              + (1/2-H) s^(1/2-H) * I2 ],
              I2 = integral_s^t (r-s)^(H-1/2) r^(H-3/2) dr

Both integrands have an integrable power singularity at r = s.  Substituting
u = (r-s)^(H-1/2) (resp. u = (r-s)^(H+1/2)) absorbs it exactly:

    I1 = 1/(H-1/2) * integral_0^(t-s)^(H-1/2) (s + u^(1/(H-1/2)))^(H-1/2) du
    I2 = 1/(H+1/2) * integral_0^(t-s)^(H+1/2) (s + u^(1/(H+1/2)))^(H-3/2) du

leaving a smooth integrand that composite Gauss-Legendre handles to near
machine precision.  The normalisation C_H is not pinned down analytically
anywhere; we calibrate it so that Var W^H_1 = integral_0^1 K_H(1,s)^2 ds = 1,
which by self-similarity gives Var W^H_t = t^(2H) for every t.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

__all__ = [
    "eval_kernel",
    "eval_kernel_unscaled",
    "calibrate_kernel",
    "kernel_variance",
    "kernel_covariance",
    "KernelTable",
]

_GL_NODES = 32
_GL_PANELS = 3
_REL_TOL = 1e-8

# cache of (nodes, weights) per order, and of C_H per Hurst value
_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_norm_cache: dict[float, float] = {}


def _gl(n):
    if n not in _gl_cache:
        _gl_cache[n] = leggauss(n)
    return _gl_cache[n]


def _check_hurst(H):
    if not (0.0 < H < 1.0):
        raise ValueError(f"Hurst index must lie in (0,1), got {H}")


def _panel_sum(s, gap, upper, nu, expo, depth, n_nodes):
    """Composite GL over geometric panels [0, 2^-(depth-1), ..., 1] * upper.

    With u = upper*frac and upper = gap^nu, the inner power u^(1/nu) equals
    gap * frac^(1/nu); the fractional node positions are shared by every
    element, so only one power per (element, node) remains.
    """
    x, w = _gl(n_nodes)
    edges = np.concatenate(([0.0], 2.0 ** -np.arange(depth - 1, -1, -1.0)))
    total = np.zeros(s.shape)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half_f = 0.5 * (hi - lo)
        rel = (0.5 * (hi + lo) + half_f * x) ** (1.0 / nu)   # (n_nodes,)
        vals = (s[..., None] + gap[..., None] * rel) ** expo
        total = total + (half_f * upper) * (vals @ w)
    return total


def _substituted_integral(H, s, t, n_nodes=12, extra_depth=0):
    """Singular part of the kernel after the power substitution.

    Returns I1 for H > 1/2 and I2 for H < 1/2 (see module docstring),
    vectorised over broadcastable arrays s, t.  Panels are geometric toward
    u = 0; the integrand crosses over at u ~ s^nu, so the decomposition
    depth is set per element from log2((t-s)/s).
    """
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    shape = s.shape
    s = s.reshape(-1).astype(float)
    t = t.reshape(-1).astype(float)
    nu = H - 0.5 if H > 0.5 else H + 0.5          # substitution power
    expo = H - 0.5 if H > 0.5 else H - 1.5        # power of r in the integrand
    gap = t - s
    upper = gap ** nu
    depth = np.clip(
        np.ceil(nu * np.log2(np.maximum(gap / s, 1.0))).astype(int) + 6,
        6, 64,
    ) + extra_depth
    out = np.empty(s.size)
    for d in np.unique(depth):
        idx = depth == d
        out[idx] = _panel_sum(s[idx], gap[idx], upper[idx], nu, expo,
                              int(d), n_nodes)
    return (out / nu).reshape(shape)


def eval_kernel_unscaled(H, t, s):
    """Kernel without the C_H normalisation, vectorised over s and t."""
    _check_hurst(H)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s <= 0.0) or np.any(s >= t):
        raise ValueError("kernel requires 0 < s < t")
    if H == 0.5:
        return np.ones(np.broadcast(s, t).shape)
    core = _substituted_integral(H, s, t)
    if H > 0.5:
        return s ** (0.5 - H) * core
    boundary = t ** (H - 0.5) * s ** (0.5 - H) * (t - s) ** (H - 0.5)
    return boundary + (0.5 - H) * s ** (0.5 - H) * core


def calibrate_kernel(H):
    """Normalisation C_H such that integral_0^1 K_H(1,s)^2 ds = 1.

    The squared unscaled kernel behaves like s^(-2|H-1/2|) at s -> 0 and
    (1-s)^(2H-1) at s -> 1; both are fed to the quadrature as algebraic
    endpoint weights.  Raises if the quadrature cannot reach 1e-8 relative
    accuracy.
    """
    _check_hurst(H)
    if H in _norm_cache:
        return _norm_cache[H]
    if H == 0.5:
        _norm_cache[H] = 1.0
        return 1.0
    a0 = -2.0 * abs(H - 0.5)
    b0 = 2.0 * H - 1.0

    def smooth(r):
        r = min(max(r, 1e-13), 1.0 - 1e-13)
        k = float(eval_kernel_unscaled(H, 1.0, r))
        return k * k * r ** (-a0) * (1.0 - r) ** (-b0)

    val, err = quad(smooth, 0.0, 1.0, weight="alg", wvar=(a0, b0), limit=200)
    if not np.isfinite(val) or val <= 0.0 or err > _REL_TOL * abs(val) * 10:
        raise ArithmeticError(
            f"kernel normalisation quadrature failed for H={H}: value={val}, err={err}"
        )
    c = 1.0 / np.sqrt(val)
    _norm_cache[H] = c
    return c


def eval_kernel(H, t, s):
    """Calibrated Volterra kernel K_H(t, s) for 0 < s < t.

    Vectorised over broadcastable arrays t, s.
    """
    return calibrate_kernel(H) * eval_kernel_unscaled(H, t, s)


def _weighted_quad(H, f_full, lo, hi, sing_low, sing_high):
    """Integrate f_full on [lo,hi] with optional power endpoint behaviour."""
    a0 = sing_low if sing_low != 0.0 else 0.0
    b0 = sing_high if sing_high != 0.0 else 0.0
    pad = 1e-13 * (hi - lo)
    if a0 == 0.0 and b0 == 0.0:
        val, err = quad(lambda r: f_full(min(max(r, lo + pad), hi - pad)),
                        lo, hi, limit=200)
        return val
    def smooth(r):
        r = min(max(r, lo + pad), hi - pad)
        out = f_full(r)
        if a0 != 0.0:
            out = out * (r - lo) ** (-a0)
        if b0 != 0.0:
            out = out * (hi - r) ** (-b0)
        return out
    val, err = quad(smooth, lo, hi, weight="alg", wvar=(a0, b0), limit=200)
    return val


def kernel_variance(H, s, u, t):
    """integral_s^u K_H(t,r)^2 dr for 0 <= s < u <= t.

    This is the variance per component of the Gaussian increment
    E^u W^H_t - E^s W^H_t, and for s=0.. u=t the full t^(2H).
    """
    _check_hurst(H)
    if not (0.0 <= s < u <= t):
        raise ValueError("need 0 <= s < u <= t")
    c = calibrate_kernel(H)
    f = lambda r: float(eval_kernel_unscaled(H, t, r)) ** 2
    sing_low = -2.0 * abs(H - 0.5) if s == 0.0 else 0.0
    sing_high = 2.0 * H - 1.0 if u == t else 0.0
    val = _weighted_quad(H, f, s, u, sing_low, sing_high)
    return c * c * val


def kernel_covariance(H, s, t):
    """integral_0^min(s,t) K_H(t,r) K_H(s,r) dr.

    For the true fBm kernel this equals the closed-form covariance
    (s^2H + t^2H - |t-s|^2H)/2; comparing the two is the standing
    consistency check on kernel shape and calibration.
    """
    _check_hurst(H)
    if s <= 0 or t <= 0:
        raise ValueError("need s, t > 0")
    lo_t, hi_t = (s, t) if s <= t else (t, s)
    if lo_t == hi_t:
        return kernel_variance(H, 0.0, lo_t, lo_t)
    c = calibrate_kernel(H)
    f = lambda r: float(eval_kernel_unscaled(H, hi_t, r)) * float(
        eval_kernel_unscaled(H, lo_t, r)
    )
    val = _weighted_quad(H, f, 0.0, lo_t, -2.0 * abs(H - 0.5), H - 0.5)
    return c * c * val


class KernelTable:
    """Cached kernel values on a uniform grid, for Volterra path synthesis.

    Holds K_H(t_k, m_j) for output times t_k = k dt and increment midpoints
    m_j = (j + 1/2) dt, j < k.  Midpoint evaluation in the second argument
    keeps every entry finite for H < 1/2 where the r = t edge is singular.
    """

    def __init__(self, H, steps, horizon=1.0):
        _check_hurst(H)
        if steps < 1:
            raise ValueError("need at least one step")
        self.hurst = float(H)
        self.steps = int(steps)
        self.horizon = float(horizon)
        self.dt = self.horizon / self.steps
        self.normalization = calibrate_kernel(H)
        n = self.steps
        dt = self.dt
        mat = np.zeros((n + 1, n))
        mids = (np.arange(n) + 0.5) * dt
        # row k needs kernel values at (t_k, m_j), j < k; build row blocks to
        # keep peak memory modest for large n
        block = max(1, int(2e6 // max(n, 1)))
        for k0 in range(1, n + 1, block):
            k1 = min(n + 1, k0 + block)
            rows = np.arange(k0, k1)
            tfull = np.broadcast_to(rows[:, None] * dt, (len(rows), n))
            sfull = np.broadcast_to(mids[None, :], (len(rows), n))
            mask = sfull < tfull
            vals = np.zeros((len(rows), n))
            if np.any(mask):
                vals[mask] = eval_kernel_unscaled(H, tfull[mask], sfull[mask])
            mat[k0:k1, :] = vals
        self.values = self.normalization * mat

    def row(self, k):
        """Kernel row for output time t_k (zeros at j >= k)."""
        return self.values[k]

    def lower_bound_ratio(self, bands=(2, 16)):
        """min of K_H(t,s)(t-s)^(1/2-H) over fine vs coarse dyadic bands."""
        H = self.hurst
        mins = {}
        for expo in range(bands[0], bands[1] + 1):
            gap = 2.0 ** -expo
            svals = np.exp(np.linspace(np.log(1e-4), np.log(1.0 - gap), 24))
            kv = eval_kernel(H, svals + gap, svals)
            mins[expo] = float(np.min(kv * gap ** (0.5 - H)))
        return mins
