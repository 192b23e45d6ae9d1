"""Certified integration of u'' + K u = 0 and (v z')' + W v z = 0.

Both problems are driven as first-order systems in (value, flux), where
the flux is u' for the unweighted equation and v z' for the weighted one.
Working with the flux avoids differentiating v and keeps the singular
origin benign: v z' -> 0 as t -> 0+ for admissible pairs.

Every sign change of the dense output is bracketed by bisection into a
:class:`ZeroCertificate`; near-zeros without a sign change are reported
as suspects (they indicate numerical trouble, not geometry: a nontrivial
solution of a second-order linear ODE cannot have a double zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (InvalidParams, NonFiniteSample, SingularStartFailure,
                     ToleranceNotMet)
from .profiles import CurvatureProfile, DEFAULT_TOL, Profile, integrate

__all__ = [
    "ZeroCertificate",
    "Trajectory",
    "FirstZeroSearch",
    "solve_jacobi",
    "solve_radial",
    "locate_zeros",
    "extend_until_zero",
    "residual_max",
    "DEFAULT_ZERO_TOL",
    "JACOBI_START",
    "RADIAL_START",
]

DEFAULT_ZERO_TOL = 1e-8
JACOBI_START = 1e-8
RADIAL_START = 1e-6
_SUBSAMPLES = 8
_CHUNK_GROWTH = 2.0


@dataclass(frozen=True)
class ZeroCertificate:
    """A bracketed sign change: value(t_lo) * value(t_hi) < 0."""

    t_lo: float
    t_hi: float
    sign_before: int
    sign_after: int

    @property
    def location(self):
        return 0.5 * (self.t_lo + self.t_hi)

    @property
    def width(self):
        return self.t_hi - self.t_lo


@dataclass(frozen=True)
class _Chunk:
    lo: float
    hi: float
    sol: object  # scipy OdeSolution over [lo, hi]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Dense ODE solution with certified zero brackets.

    State convention: component 0 is the solution value, component 1 the
    flux (u' for 'jacobi', v z' for 'radial').
    """

    ts: np.ndarray
    values: np.ndarray
    fluxes: np.ndarray
    zeros: tuple
    suspects: tuple
    terminated_reason: str  # "horizon" | "zero_cap" | "step_underflow"
    t_start: float
    t_end: float
    kind: str  # "jacobi" | "radial"
    chunks: tuple = field(repr=False)
    weight: Optional[Profile] = field(default=None, repr=False)
    rhs: Optional[Callable] = field(default=None, repr=False)

    def state(self, t):
        """Dense state [(value, flux)] at scalar or array t."""
        if not self.chunks:
            raise InvalidParams("trajectory has no dense output "
                                f"(terminated: {self.terminated_reason})")
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((2, arr.size))
        his = np.array([c.hi for c in self.chunks])
        idx = np.searchsorted(his, arr, side="left")
        idx = np.clip(idx, 0, len(self.chunks) - 1)
        for i, chunk in enumerate(self.chunks):
            mask = idx == i
            if np.any(mask):
                out[:, mask] = chunk.sol(arr[mask])
        if np.ndim(t) == 0:
            return out[:, 0]
        return out

    def value(self, t):
        s = self.state(t)
        return s[0] if np.ndim(t) else float(s[0])

    def flux(self, t):
        s = self.state(t)
        return s[1] if np.ndim(t) else float(s[1])

    def derivative(self, t):
        s = self.state(t)
        d = s[1] / self.weight(t) if self.weight is not None else s[1]
        return d if np.ndim(t) else float(d)

    def __call__(self, t):
        return self.value(t), self.derivative(t)

    @property
    def derivatives(self):
        if self.weight is None:
            return self.fluxes
        return self.fluxes / self.weight(self.ts)

    @property
    def nodes(self):
        return list(zip(self.ts, self.values, self.derivatives))


def _refine_bracket(f, a, b, fa, fb, zero_tol):
    """Bisect a strict sign change down to width <= max(zero_tol, ~4 ulp)."""
    for _ in range(200):
        floor = max(zero_tol, 4.0 * np.spacing(max(abs(a), abs(b))))
        if (b - a) <= floor:
            break
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            m2 = np.nextafter(m, b)
            fm = f(m2)
            if fm == 0.0:
                break
            m = m2
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return a, b, fa, fb


def _scan_chunk(sol, zero_tol, start_after):
    """Bracketed sign changes of component 0 on one chunk's dense output."""
    ts = np.asarray(getattr(sol, "ts", []))
    if len(ts) < 2:
        return []
    pieces = [np.linspace(ts[i], ts[i + 1], _SUBSAMPLES + 1)[:-1]
              for i in range(len(ts) - 1)]
    grid = np.concatenate(pieces + [ts[-1:]])
    vals = sol(grid)[0]

    def f(x):
        return float(sol(x)[0])

    certs = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        if a < start_after:
            continue
        fa, fb = float(vals[i]), float(vals[i + 1])
        a, b, fa, fb = _refine_bracket(f, a, b, fa, fb, zero_tol)
        certs.append(ZeroCertificate(a, b, int(math.copysign(1, fa)),
                                     int(math.copysign(1, fb))))
    return certs


def _find_suspects(ts, vals, zero_tol):
    out = []
    if len(vals) < 3:
        return out
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        return out
    for i in range(1, len(vals) - 1):
        same = np.sign(vals[i - 1]) == np.sign(vals[i]) == np.sign(vals[i + 1])
        local_min = abs(vals[i]) <= abs(vals[i - 1]) and abs(vals[i]) <= abs(vals[i + 1])
        if same and local_min and 0 < abs(vals[i]) < 1e-9 * scale:
            out.append(float(ts[i]))
    return out


def _drive(rhs, t0, y0, horizon, rtol, atol, zero_tol, zero_cap, kind, weight):
    node_t = [float(t0)]
    node_y = [np.asarray(y0, dtype=float)]
    chunks = []
    zeros = []
    reason = "horizon"
    t = float(t0)
    y = np.asarray(y0, dtype=float)
    while True:
        t_next = min(float(horizon), max(t * _CHUNK_GROWTH, t + 1.0))
        sol = solve_ivp(rhs, (t, t_next), y, method="RK45",
                        dense_output=True, rtol=rtol, atol=atol)
        if len(sol.t) > 1:
            chunks.append(_Chunk(float(sol.t[0]), float(sol.t[-1]), sol.sol))
            node_t.extend(sol.t[1:].tolist())
            node_y.extend(sol.y[:, 1:].T)
            start_after = zeros[-1].t_hi if zeros else -math.inf
            for cert in _scan_chunk(sol.sol, zero_tol, start_after):
                zeros.append(cert)
                if zero_cap is not None and len(zeros) >= zero_cap:
                    reason = "zero_cap"
                    break
        if sol.status == -1 or not sol.success:
            reason = "step_underflow"
            break
        if reason == "zero_cap":
            break
        t_new = float(sol.t[-1])
        if t_new <= t:
            reason = "step_underflow"
            break
        t, y = t_new, sol.y[:, -1]
        if t >= horizon:
            reason = "horizon"
            break
    ts = np.array(node_t)
    ys = np.array(node_y).T if node_y else np.zeros((2, 0))
    suspects = _find_suspects(ts, ys[0], zero_tol)
    return Trajectory(ts=ts, values=ys[0], fluxes=ys[1], zeros=tuple(zeros),
                      suspects=tuple(suspects), terminated_reason=reason,
                      t_start=float(t0), t_end=float(ts[-1]), kind=kind,
                      chunks=tuple(chunks), weight=weight, rhs=rhs)


def solve_jacobi(k, horizon, tol=DEFAULT_TOL, zero_tol=DEFAULT_ZERO_TOL,
                 zero_cap=None, t_start=None, u0=None, du0=None):
    """Solve u'' + K u = 0 with the conjugate-point normalization.

    Default initial data is u(0) = 0, u'(0) = 1, realized by starting at a
    tiny offset with the first-order series u = t (the criteria only see
    zero positions, which are invariant under positive rescaling).
    Explicit (t_start, u0, du0) override the normalization, e.g. for
    Wronskian or Sturm-separation checks.
    """
    if horizon <= 0:
        raise InvalidParams("horizon must be positive")
    kp = k.k if isinstance(k, CurvatureProfile) else k
    if t_start is None:
        t0, y0 = JACOBI_START, (JACOBI_START, 1.0)
    else:
        if u0 is None or du0 is None:
            raise InvalidParams("explicit start needs u0 and du0")
        t0, y0 = float(t_start), (float(u0), float(du0))
    kev = kp.evaluator

    def rhs(t, y):
        return (y[1], -float(kev(np.float64(t))) * y[0])

    return _drive(rhs, t0, y0, horizon, rtol=tol,
                  atol=max(1e-14, tol * 1e-4), zero_tol=zero_tol,
                  zero_cap=zero_cap, kind="jacobi", weight=None)


def _singular_start(pair, z0, picard_tol=1e-10):
    """Initial data at t = RADIAL_START realizing the bounded-slope branch.

    One Picard step gives z'(eps) = -(1/v(eps)) * integral of W v z0 over
    (0, eps); a second sweep with the refined z must move the slope by
    less than picard_tol or the bootstrap is rejected.
    """
    eps = RADIAL_START
    v, wv = pair.v, pair.wv
    qtol = 1e-12

    def i1(x):
        return integrate(wv, 0.0, float(x), tol=qtol)

    def z_refined(u_arr):
        u_arr = np.atleast_1d(u_arr)
        out = np.empty(u_arr.shape)
        for j, u in enumerate(u_arr):
            def inner(x_arr):
                x_arr = np.atleast_1d(x_arr)
                return np.array([-z0 * i1(x) / float(v(float(x)))
                                 for x in x_arr])
            out[j] = z0 + integrate(inner, 0.0, float(u), tol=qtol)
        return out

    def wz(x_arr):
        x_arr = np.atleast_1d(x_arr)
        return np.asarray(wv(x_arr)) * z_refined(x_arr)

    try:
        slope1 = -z0 * i1(eps) / v(eps)
        slope2 = -integrate(wz, 0.0, eps, tol=qtol) / v(eps)
    except (NonFiniteSample, ToleranceNotMet) as exc:
        raise SingularStartFailure(
            f"Picard bootstrap diverged near the origin: {exc}") from exc
    if abs(slope2 - slope1) >= picard_tol * (1.0 + abs(slope1)):
        raise SingularStartFailure(
            f"Picard bootstrap did not settle at eps={eps:g}: "
            f"slope moved by {abs(slope2 - slope1):.3g}")
    return eps, (z0, float(v(eps)) * slope2)


def solve_radial(pair, z0, horizon, tol=DEFAULT_TOL, zero_tol=DEFAULT_ZERO_TOL,
                 zero_cap=None, dz0=None):
    """Solve (v z')' + W v z = 0 with z(0+) = z0 > 0.

    Pairs with ``t_start > 0`` are shifted problems with regular data
    z(t_start) = z0 and z'(t_start) = dz0 (default 0).  Pairs posed from
    the singular origin are bootstrapped per :func:`_singular_start`.
    """
    if z0 <= 0:
        raise InvalidParams("z0 must be positive")
    if horizon <= (pair.t_start or 0.0):
        raise InvalidParams("horizon must exceed the start abscissa")
    v, w = pair.v, pair.w
    if pair.t_start > 0:
        slope = 0.0 if dz0 is None else float(dz0)
        t0, y0 = pair.t_start, (float(z0), float(v(pair.t_start)) * slope)
    else:
        if dz0 is not None:
            raise InvalidParams("dz0 only applies to shifted (t_start > 0) pairs")
        t0, y0 = _singular_start(pair, float(z0))
    vev, wev = v.evaluator, w.evaluator

    def rhs(t, y):
        tt = np.float64(t)
        vt = float(vev(tt))
        return (y[1] / vt, -float(wev(tt)) * vt * y[0])

    return _drive(rhs, t0, y0, horizon, rtol=tol,
                  atol=max(1e-14, tol * 1e-4), zero_tol=zero_tol,
                  zero_cap=zero_cap, kind="radial", weight=v)


def locate_zeros(traj, zero_tol=DEFAULT_ZERO_TOL):
    """Re-scan a trajectory's dense output and certify every sign change.

    Returns fresh certificates at the requested bracket width; the
    trajectory's own certificates are untouched.
    """
    certs = []
    last_hi = -math.inf
    for chunk in traj.chunks:
        for cert in _scan_chunk(chunk.sol, zero_tol, last_hi):
            certs.append(cert)
            last_hi = cert.t_hi
    return certs


@dataclass(frozen=True)
class FirstZeroSearch:
    """Outcome of growing the horizon until a first zero is certified."""

    certificate: Optional[ZeroCertificate]
    horizon: float
    trajectory: Trajectory

    @property
    def found(self):
        return self.certificate is not None


def extend_until_zero(pair, z0, horizon_cap, tol=DEFAULT_TOL,
                      zero_tol=DEFAULT_ZERO_TOL):
    """Grow the integration horizon (doubling) until a first zero or the cap.

    The inconclusive outcome carries the final horizon and the
    sign-definite trajectory.
    """
    if horizon_cap < 1:
        raise InvalidParams("horizon_cap must be >= 1")
    traj = solve_radial(pair, z0, horizon=horizon_cap, tol=tol,
                        zero_tol=zero_tol, zero_cap=1)
    cert = traj.zeros[0] if traj.zeros else None
    return FirstZeroSearch(cert, traj.t_end, traj)


def residual_max(traj, n_checkpoints=64, rel_h=1e-5):
    """Largest scaled ODE residual reconstructed by differencing dense output.

    Differences the flux midway through interior solver steps and compares
    against the right-hand side; the result is scaled by (1 + |rhs|).
    """
    if traj.rhs is None or len(traj.ts) < 4:
        return 0.0
    ts = traj.ts
    steps = np.arange(1, len(ts) - 1)
    if len(steps) > n_checkpoints:
        steps = steps[np.linspace(0, len(steps) - 1, n_checkpoints).astype(int)]
    worst = 0.0
    for i in steps:
        width = ts[i + 1] - ts[i]
        if width <= 0:
            continue
        m = ts[i] + 0.5 * width
        h = max(rel_h * width, 8.0 * np.spacing(m))
        if m - h <= ts[i] or m + h >= ts[i + 1]:
            continue
        dflux = (traj.flux(m + h) - traj.flux(m - h)) / (2.0 * h)
        target = traj.rhs(m, traj.state(m))[1]
        worst = max(worst, abs(dflux - target) / (1.0 + abs(target)))
    return worst
