"""Rayleigh quotients, bottom-of-spectrum certificates, and index bounds.

Manifold data enters only radially: v(r) is the boundary-sphere volume
and W(r) the spherical mean of the potential, so the annulus integral of
the potential reduces to the integral of W v and every certificate
delegates to the first-zero and oscillation checkers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .criteria import (Conclusion, Status, Verdict, check_first_zero,
                       check_oscillation)
from .errors import HypothesisViolated, InvalidParams, NoZeroAtT2
from .profiles import (DEFAULT_TOL, integrate, multiply, reciprocal, scaled,
                       tail_integral, tail_integral_converges)
from .ode import Trajectory, solve_radial

__all__ = [
    "SpectralReport",
    "rayleigh_quotient",
    "lambda1_negative",
    "instability_at_infinity",
    "index_lower_bound",
    "spectral_report",
    "check_yamabe",
    "yamabe_constant",
]


def rayleigh_quotient(pair, traj, t2, t3, tol=1e-9):
    """Rayleigh quotient of the radial test function cut at a certified zero.

    The test function equals the solution on [0, t2] and vanishes beyond,
    so integrating by parts against the equation the quotient is zero up
    to discretization error -- this is the identity that turns a zero of
    the radial problem into a negative-spectrum certificate.
    """
    if t3 <= t2:
        raise InvalidParams("need t3 > t2")
    cert = None
    for z in traj.zeros:
        if abs(z.location - t2) <= max(10.0 * z.width, 1e-6 * (1.0 + abs(t2))):
            cert = z
            break
    if cert is None:
        raise NoZeroAtT2(f"no certified zero at t2 = {t2:g}")
    v = pair.v
    w = pair.w
    lo = traj.t_start

    def grad_term(t):
        return v(t) * traj.derivative(t) ** 2

    def pot_term(t):
        return w(t) * v(t) * traj.value(t) ** 2

    def mass_term(t):
        return v(t) * traj.value(t) ** 2

    cut = cert.location
    numerator = (integrate(grad_term, lo, cut, tol=tol)
                 - integrate(pot_term, lo, cut, tol=tol))
    denominator = integrate(mass_term, lo, cut, tol=tol)
    return numerator / denominator


def lambda1_negative(pair, a, b, tol=DEFAULT_TOL):
    """Negative bottom of the spectrum from the annulus-integral threshold.

    Delegates to the first-zero checker (the annulus integral of the
    potential is the integral of W v); a SATISFIED verdict certifies a
    negative bottom of the spectrum on the whole space.
    """
    inner = check_first_zero(pair, a, b, tol=tol)
    conclusion = (Conclusion.NEGATIVE_BOTTOM_SPECTRUM
                  if inner.satisfied else Conclusion.NONE)
    return Verdict("lambda1_negative", inner.status, conclusion,
                   dict(inner.witness), notes=inner.notes)


def instability_at_infinity(pair, R, horizon=1e4, tol=DEFAULT_TOL):
    """Instability at infinity (negative spectrum outside every ball).

    Delegates to the oscillation checker: oscillation puts zeros beyond
    every radius, so the bottom of the spectrum outside each ball is
    negative; in that case the operator also has infinite index.
    """
    inner = check_oscillation(pair, R, horizon=horizon, tol=tol)
    conclusion = (Conclusion.UNSTABLE_AT_INFINITY
                  if inner.satisfied else Conclusion.NONE)
    notes = inner.notes
    if inner.satisfied:
        extra = "oscillation implies instability at infinity and infinite index"
        notes = f"{notes}; {extra}" if notes else extra
    return Verdict("instability_at_infinity", inner.status, conclusion,
                   dict(inner.witness), notes=notes)


def index_lower_bound(pair, horizon, tol=DEFAULT_TOL, z0=1.0,
                      traj: Optional[Trajectory] = None):
    """Certified lower bound on the index from nodal intervals.

    The certified zeros t1 < t2 < ... < tk inside the horizon delimit
    k + 1 maximal nodal intervals; each interval past the first end
    supports a test function with nonpositive quotient, giving the count
    minus one, i.e. the number of certified zeros.
    """
    if horizon <= 0:
        raise InvalidParams("need horizon > 0")
    if traj is None:
        traj = solve_radial(pair, z0, horizon=horizon, tol=tol)
    return len([z for z in traj.zeros if z.location <= horizon])


@dataclass(frozen=True)
class SpectralReport:
    """Aggregated spectral evidence for one coefficient pair."""

    lambda1_sign: str  # "certified_negative" | "unknown"
    unstable_radii: tuple
    index_lower_bound: int
    rayleigh_values: tuple  # (t2, quotient) pairs
    notes: str = ""

    def to_dict(self):
        return {
            "lambda1_sign": self.lambda1_sign,
            "unstable_radii": list(self.unstable_radii),
            "index_lower_bound": self.index_lower_bound,
            "rayleigh_values": [[t, q] for t, q in self.rayleigh_values],
            "notes": self.notes,
        }


def spectral_report(pair, a, b, radii=(1.0, 10.0, 100.0), horizon=1e4,
                    tol=DEFAULT_TOL, z0=1.0, max_rayleigh=4):
    """Build a SpectralReport: threshold certificate, solver confirmations,
    nodal index evidence, and Rayleigh quotients at the certified zeros."""
    verdict = lambda1_negative(pair, a, b, tol=tol)
    osc = instability_at_infinity(pair, min(radii), horizon=horizon, tol=tol)
    traj = solve_radial(pair, z0, horizon=horizon, tol=tol)
    zeros = [z.location for z in traj.zeros]

    unstable = ()
    if osc.satisfied:
        unstable = tuple(R for R in radii if any(t > R for t in zeros))

    rayleigh = []
    for z in traj.zeros[:max_rayleigh]:
        q = rayleigh_quotient(pair, traj, z.location, z.location * 1.25)
        rayleigh.append((z.location, q))

    certified = verdict.satisfied or bool(zeros)
    notes = []
    if verdict.satisfied:
        notes.append("annulus threshold exceeded")
    if zeros:
        notes.append(f"solver certified {len(zeros)} zero(s) before {horizon:g}")
    if osc.satisfied:
        notes.append("unstable at infinity (infinite index)")
    return SpectralReport(
        lambda1_sign="certified_negative" if certified else "unknown",
        unstable_radii=unstable,
        index_lower_bound=len(zeros),
        rayleigh_values=tuple(rayleigh),
        notes="; ".join(notes))


def yamabe_constant(m):
    """The conformal coupling constant 4 (m-1) / (m-2)."""
    if m < 3:
        raise InvalidParams("the conformal criterion needs dimension m >= 3")
    return 4.0 * (m - 1.0) / (m - 2.0)


def check_yamabe(s_mean, m, v, b_const, a, b, tol=DEFAULT_TOL):
    """Conformal-deformation criterion from the scalar-curvature annulus integral.

    Hypothesis: the spherical mean S(r) of the scalar curvature satisfies
    S(r) <= c_m B^2 / v(r) (sampled); the caller separately asserts the
    positivity of the bottom of the spectrum around the zero set of the
    target curvature, which is recorded in the notes, not checked.
    """
    if not 0 < a < b:
        raise InvalidParams("need 0 < a < b")
    if b_const < 0:
        raise InvalidParams("need B >= 0")
    cm = yamabe_constant(m)
    grid = np.geomspace(max(a / 10.0, 1e-6), b * 10.0, 41)
    sv = s_mean(grid)
    vv = v(grid)
    bound = cm * b_const ** 2 / vv
    if np.any(sv > bound + 1e-9 * (1.0 + np.abs(bound))):
        raise HypothesisViolated(
            "spherical mean of the scalar curvature exceeds c_m B^2 / v")

    v_inv = reciprocal(v)
    lhs = integrate(multiply(scaled(s_mean, -1.0), v), a, b, tol=tol)
    converges = tail_integral_converges(v_inv)
    if converges is None:
        raise InvalidParams("deciding the threshold needs tail info on 1/v")
    if not converges:
        rhs = 2.0 * cm * b_const
    elif b_const == 0.0:
        rhs = cm / tail_integral(v_inv, b, tol=tol)
    else:
        expo = tail_integral(v_inv, b, tol=tol)
        vm1 = math.expm1(2.0 * b_const * expo)
        rhs = 2.0 * cm * b_const * (vm1 + 1.0) / vm1
    witness = {"lhs": lhs, "rhs": rhs, "a": float(a), "b": float(b),
               "c_m": cm, "B": float(b_const)}
    notes = ("assumes a positive bottom of the spectrum around the zero set "
             "of the target curvature (not checked here)")
    if (lhs - rhs) > 10.0 * tol * (1.0 + max(abs(lhs), abs(rhs))):
        return Verdict("yamabe", Status.SATISFIED,
                       Conclusion.CONFORMAL_DEFORMATION, witness, notes=notes)
    return Verdict("yamabe", Status.INCONCLUSIVE, Conclusion.NONE, witness,
                   notes=notes)
