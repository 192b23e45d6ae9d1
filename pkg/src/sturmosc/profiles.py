"""Closed-form coefficient profiles, adaptive quadrature, and tail integrals.

Everything downstream (the solvers, the Riccati machinery, the criterion
checkers) consumes coefficient functions through :class:`Profile`: an
evaluator on (0, +inf) bundled with certified asymptotic metadata.
Improper integrals are never guessed from samples -- divergence and
closed tail values are decided from the declared tail form only, and a
missing declaration surfaces as :class:`~sturmosc.errors.TailInfoMissing`
rather than a silent extrapolation.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np

from .errors import InvalidParams, NonFiniteSample, TailInfoMissing, ToleranceNotMet

__all__ = [
    "AsymptoticTail",
    "ClosedFormTailIntegral",
    "PowerTail",
    "ExpTail",
    "Profile",
    "CoefficientPair",
    "CurvatureProfile",
    "constant",
    "power",
    "exponential",
    "certified_nonnegative",
    "certified_nonpositive",
    "multiply",
    "add",
    "subtract",
    "scaled",
    "reciprocal",
    "elementwise_power",
    "integrate",
    "integrate_err",
    "tail_integral",
    "tail_integral_converges",
    "tail_divergence",
    "big_v",
    "weighted_moment",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
PANEL_BUDGET = 10**6


# ---------------------------------------------------------------------------
# Tail metadata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticTail:
    """Leading behavior ``coefficient * t**exponent * exp(rate*t)`` at +inf.

    ``exact=True`` asserts the profile *coincides* with this form for every
    ``t >= valid_from``, so truncated tail integrals may finish analytically.
    Inexact tails (products of sums, dominant terms) still decide
    divergence, but never produce certified values.
    """

    coefficient: float
    exponent: float
    rate: float = 0.0
    valid_from: float = 0.0
    exact: bool = True


def PowerTail(coefficient, exponent, valid_from=0.0, exact=True):
    """Tail form c * t**p."""
    return AsymptoticTail(float(coefficient), float(exponent), 0.0,
                          float(valid_from), bool(exact))


def ExpTail(coefficient, rate, valid_from=0.0, exact=True):
    """Tail form c * exp(rate * t)."""
    return AsymptoticTail(float(coefficient), 0.0, float(rate),
                          float(valid_from), bool(exact))


@dataclass(frozen=True)
class ClosedFormTailIntegral:
    """Exact map ``b -> integral of the profile over (b, +inf)``."""

    integral_from: Callable[[float], float]


Tail = Union[AsymptoticTail, ClosedFormTailIntegral, None]


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """An evaluable coefficient function on (0, +inf).

    The evaluator must be vectorized (numpy arrays in, arrays out).
    ``sign`` is an optional certificate that the function is nonnegative,
    nonpositive, or identically zero on the *whole* domain; it is what
    allows a checker to say "fails for every parameter choice" instead of
    merely "inconclusive here".  ``origin`` records the qualitative
    behavior as t -> 0+.
    """

    evaluator: Callable
    tail: Tail = None
    origin: str = "finite"  # "finite" | "power" | "log" | "unknown"
    sign: Optional[str] = None  # "nonnegative" | "nonpositive" | "zero" | None
    label: str = ""

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape)
        if arr.ndim == 0:
            return float(out)
        return np.array(out, dtype=float)


def _sign_of_value(c):
    if c == 0:
        return "zero"
    return "nonnegative" if c > 0 else "nonpositive"


def certified_nonnegative(p):
    return p.sign in ("nonnegative", "zero")


def certified_nonpositive(p):
    return p.sign in ("nonpositive", "zero")


def constant(value, label=""):
    v = float(value)

    def ev(t):
        return np.full(np.shape(t), v)

    return Profile(ev, tail=PowerTail(v, 0.0), origin="finite",
                   sign=_sign_of_value(v), label=label or f"const({v:g})")


def power(coefficient, exponent, label=""):
    c, p = float(coefficient), float(exponent)

    def ev(t):
        return c * np.power(t, p)

    origin = "finite" if p >= 0 else "power"
    return Profile(ev, tail=PowerTail(c, p), origin=origin,
                   sign=_sign_of_value(c), label=label or f"{c:g}*t^{p:g}")


def exponential(coefficient, rate, label=""):
    c, r = float(coefficient), float(rate)

    def ev(t):
        return c * np.exp(r * t)

    return Profile(ev, tail=ExpTail(c, r), origin="finite",
                   sign=_sign_of_value(c), label=label or f"{c:g}*exp({r:g}t)")


# --- profile algebra -------------------------------------------------------

def _mul_sign(a, b):
    if a == "zero" or b == "zero":
        return "zero"
    if a is None or b is None:
        return None
    return "nonnegative" if a == b else "nonpositive"


def _mul_tail(a, b):
    if isinstance(a, AsymptoticTail) and isinstance(b, AsymptoticTail):
        return AsymptoticTail(a.coefficient * b.coefficient,
                              a.exponent + b.exponent,
                              a.rate + b.rate,
                              max(a.valid_from, b.valid_from),
                              a.exact and b.exact)
    return None


def _add_tail(a, b):
    if not (isinstance(a, AsymptoticTail) and isinstance(b, AsymptoticTail)):
        return None
    if a.coefficient == 0.0:
        return replace(b, valid_from=max(a.valid_from, b.valid_from),
                       exact=a.exact and b.exact)
    if b.coefficient == 0.0:
        return replace(a, valid_from=max(a.valid_from, b.valid_from),
                       exact=a.exact and b.exact)
    if (a.rate, a.exponent) == (b.rate, b.exponent):
        c = a.coefficient + b.coefficient
        if c == 0.0:
            return None  # cancellation: leading order unknown
        return AsymptoticTail(c, a.exponent, a.rate,
                              max(a.valid_from, b.valid_from),
                              a.exact and b.exact)
    dominant = a if (a.rate, a.exponent) > (b.rate, b.exponent) else b
    # the sub-leading term spoils exactness but not the divergence class
    return replace(dominant, exact=False,
                   valid_from=max(a.valid_from, b.valid_from))


def multiply(p, q, label=""):
    def ev(t):
        return p.evaluator(t) * q.evaluator(t)

    return Profile(ev, tail=_mul_tail(p.tail, q.tail), origin="unknown",
                   sign=_mul_sign(p.sign, q.sign),
                   label=label or f"({p.label})*({q.label})")


def _add_sign(a, b):
    if a == "zero":
        return b
    if b == "zero":
        return a
    return a if a is not None and a == b else None


def add(p, q, label=""):
    def ev(t):
        return p.evaluator(t) + q.evaluator(t)

    return Profile(ev, tail=_add_tail(p.tail, q.tail), origin="unknown",
                   sign=_add_sign(p.sign, q.sign),
                   label=label or f"({p.label})+({q.label})")


def scaled(p, factor, label=""):
    k = float(factor)

    def ev(t):
        return k * p.evaluator(t)

    if isinstance(p.tail, AsymptoticTail):
        tail = replace(p.tail, coefficient=k * p.tail.coefficient)
    elif isinstance(p.tail, ClosedFormTailIntegral):
        inner = p.tail.integral_from
        tail = ClosedFormTailIntegral(lambda b: k * inner(b))
    else:
        tail = None
    sign = _mul_sign(p.sign, _sign_of_value(k))
    return Profile(ev, tail=tail, origin=p.origin, sign=sign,
                   label=label or f"{k:g}*({p.label})")


def subtract(p, q, label=""):
    return add(p, scaled(q, -1.0), label=label or f"({p.label})-({q.label})")


def reciprocal(p, label=""):
    def ev(t):
        return 1.0 / p.evaluator(t)

    tail = None
    if isinstance(p.tail, AsymptoticTail) and p.tail.coefficient != 0.0:
        tail = AsymptoticTail(1.0 / p.tail.coefficient, -p.tail.exponent,
                              -p.tail.rate, p.tail.valid_from, p.tail.exact)
    return Profile(ev, tail=tail, origin="unknown", sign=p.sign,
                   label=label or f"1/({p.label})")


def elementwise_power(p, exponent, label=""):
    """Pointwise p(t)**e; fractional exponents need a nonnegative certificate."""
    e = float(exponent)
    if e != int(e) and not certified_nonnegative(p):
        raise InvalidParams(
            "fractional elementwise power needs a certified nonnegative profile")

    def ev(t):
        return np.power(p.evaluator(t), e)

    tail = None
    if isinstance(p.tail, AsymptoticTail) and p.tail.coefficient > 0.0:
        tail = AsymptoticTail(p.tail.coefficient ** e, p.tail.exponent * e,
                              p.tail.rate * e, p.tail.valid_from, p.tail.exact)
    elif isinstance(p.tail, AsymptoticTail) and p.tail.coefficient == 0.0 and p.tail.exact:
        tail = p.tail
    sign = "zero" if p.sign == "zero" else (
        "nonnegative" if certified_nonnegative(p) else None)
    return Profile(ev, tail=tail, origin="unknown", sign=sign,
                   label=label or f"({p.label})^{e:g}")


# ---------------------------------------------------------------------------
# Adaptive quadrature (Gauss-Kronrod 7/15, global bisection)
# ---------------------------------------------------------------------------

# Standard G7-K15 abscissae and weights on [-1, 1].
_K15_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_K15_WEIGHTS = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_G7_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
_G7_WEIGHTS = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


def _as_callable(p):
    return p.evaluator if isinstance(p, Profile) else p


def _gk_panel(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c + h * _K15_NODES
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(np.asarray(y))][0]
        raise NonFiniteSample(f"integrand is not finite near t = {bad:.6g}")
    k = h * float(_K15_WEIGHTS @ y)
    g = h * float(_G7_WEIGHTS @ y[_G7_IDX])
    return k, abs(k - g)


def integrate_err(p, a, b, tol=DEFAULT_TOL, max_panels=PANEL_BUDGET):
    """Adaptive integral of ``p`` over [a, b]; returns (value, error estimate).

    The target is |Q - integral| <= tol * (1 + |Q|).  Accepts a
    :class:`Profile` or any vectorized callable.  The Kronrod nodes are
    interior, so integrable endpoint singularities (and a = 0) are fine.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidParams("integrate needs finite endpoints; use tail_integral")
    if a > b:
        raise InvalidParams(f"empty interval [{a:g}, {b:g}]")
    if a == b:
        return 0.0, 0.0
    if tol <= 0:
        raise InvalidParams("tol must be positive")
    f = _as_callable(p)

    counter = itertools.count()
    val, err = _gk_panel(f, a, b)
    heap = [(-err, next(counter), a, b, val, err)]
    total_val, total_err = val, err
    panels = 1
    while total_err > tol * (1.0 + abs(total_val)):
        if not heap:
            break
        if panels >= max_panels:
            raise ToleranceNotMet(
                f"quadrature budget of {max_panels} panels exhausted on "
                f"[{a:g}, {b:g}] (error {total_err:.3g})",
                estimate=total_val, error=total_err)
        _, _, pa, pb, pval, perr = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        if pm <= pa or pm >= pb:
            # machine-width panel: accept as-is, drop from the error pool
            total_err -= perr
            continue
        lval, lerr = _gk_panel(f, pa, pm)
        rval, rerr = _gk_panel(f, pm, pb)
        total_val += lval + rval - pval
        total_err += lerr + rerr - perr
        heapq.heappush(heap, (-lerr, next(counter), pa, pm, lval, lerr))
        heapq.heappush(heap, (-rerr, next(counter), pm, pb, rval, rerr))
        panels += 2
    return total_val, total_err


def integrate(p, a, b, tol=DEFAULT_TOL, max_panels=PANEL_BUDGET):
    """Adaptive integral of ``p`` over [a, b] (value only)."""
    return integrate_err(p, a, b, tol=tol, max_panels=max_panels)[0]


# ---------------------------------------------------------------------------
# Tail integrals
# ---------------------------------------------------------------------------

def tail_divergence(p):
    """Classify the improper integral of ``p`` over (b, +inf) from its tail.

    Returns '+inf', '-inf', 'finite', or None when no tail is declared.
    Works for inexact (dominant-term) tails: the divergence class only
    depends on the leading form.
    """
    t = p.tail
    if t is None:
        return None
    if isinstance(t, ClosedFormTailIntegral):
        return "finite"
    if t.coefficient == 0.0:
        return "finite"
    if t.rate > 0 or (t.rate == 0 and t.exponent >= -1.0):
        return "+inf" if t.coefficient > 0 else "-inf"
    return "finite"


def tail_integral_converges(p):
    """True/False when the tail decides convergence at +inf, None otherwise."""
    d = tail_divergence(p)
    if d is None:
        return None
    return d == "finite"


def tail_integral(p, b, tol=DEFAULT_TOL):
    """Integral of ``p`` over (b, +inf): exact value, or +/-inf on divergence.

    Requires declared tail info.  Convergent asymptotic tails must be exact
    beyond their ``valid_from`` point; the truncated head is integrated
    adaptively and the remainder finished analytically (power tails) or by
    extending the truncation until an exponential envelope is negligible.
    """
    b = float(b)
    if b < 0:
        raise InvalidParams("tail_integral needs b >= 0")
    t = p.tail
    if t is None:
        raise TailInfoMissing(
            f"profile {p.label or '<anonymous>'} declares no tail behavior")
    if isinstance(t, ClosedFormTailIntegral):
        return float(t.integral_from(b))

    c, pw, rate = t.coefficient, t.exponent, t.rate
    div = tail_divergence(p)
    if div == "+inf":
        return math.inf
    if div == "-inf":
        return -math.inf

    if c == 0.0:
        if not t.exact:
            raise TailInfoMissing(
                "tail coefficient 0 without exactness cannot be integrated")
        if b >= t.valid_from:
            return 0.0
        return integrate(p, b, t.valid_from, tol=tol)
    if not t.exact:
        raise TailInfoMissing(
            "asymptotic-only tail cannot produce a certified tail integral")

    T = max(b, t.valid_from)
    head = integrate(p, b, T, tol=tol) if T > b else 0.0
    if rate == 0.0:
        # exact power remainder, exponent < -1
        return head + c * T ** (pw + 1.0) / (-(pw + 1.0))
    # decaying exponential factor: extend until the envelope is negligible
    T2 = max(T, 1.0)
    if pw > 0:
        T2 = max(T2, 2.0 * pw / (-rate))
    floor = 1e-18 * (1.0 + abs(head))

    def envelope(x):
        return (2.0 if pw > 0 else 1.0) * abs(c) * x ** pw * math.exp(rate * x) / (-rate)

    for _ in range(400):
        if envelope(T2) <= floor:
            break
        T2 += max(1.0, 3.0 / (-rate))
    return head + integrate(p, T, T2, tol=tol)


# ---------------------------------------------------------------------------
# Coefficient pairs and curvature profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientPair:
    """A (v, W) coefficient pair for (v z')' + W v z = 0.

    ``b_const`` is the constant B >= 0 certifying W v^2 >= -B^2.
    ``t_start > 0`` declares a shifted problem posed on [t_start, +inf)
    with regular initial data, bypassing the singular origin (and its
    admissibility checks).  ``validate=False`` skips the sampled
    admissibility checks entirely, for deliberately non-admissible
    examples.
    """

    v: Profile
    w: Profile
    b_const: float = 0.0
    t_start: float = 0.0
    v_inv_l1_at_zero: Optional[bool] = None
    v_inv_l1_at_infinity: Optional[bool] = None
    validate: bool = True
    label: str = ""
    v_inv: Profile = field(init=False, repr=False, compare=False)
    wv: Profile = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.b_const < 0:
            raise InvalidParams("b_const must be >= 0")
        if self.t_start < 0:
            raise InvalidParams("t_start must be >= 0")
        object.__setattr__(self, "v_inv", reciprocal(self.v, label="1/v"))
        object.__setattr__(self, "wv", multiply(self.w, self.v, label="W*v"))
        inferred = tail_integral_converges(self.v_inv)
        if self.v_inv_l1_at_infinity is None:
            object.__setattr__(self, "v_inv_l1_at_infinity", inferred)
        elif inferred is not None and inferred != self.v_inv_l1_at_infinity:
            raise InvalidParams(
                "declared integrability of 1/v at +inf contradicts the tail form")
        if self.validate:
            self._check_admissibility()

    def _check_admissibility(self):
        lo = self.t_start if self.t_start > 0 else 1e-3
        grid = np.geomspace(max(lo, 1e-8) * (1 + 1e-9), max(lo * 1e4, 1e3), 41)
        vs = self.v(grid)
        ws = self.w(grid)
        if not (np.all(np.isfinite(vs)) and np.all(np.isfinite(ws))):
            raise NonFiniteSample("v or W not finite on the validation grid")
        if np.any(vs <= 0):
            raise InvalidParams("v must be positive on (t_start, +inf)")
        slack = 1e-9 * (1.0 + self.b_const ** 2)
        if np.any(ws * vs ** 2 < -self.b_const ** 2 - slack):
            worst = float(np.min(ws * vs ** 2))
            raise InvalidParams(
                f"W*v^2 >= -B^2 fails on samples (min {worst:.6g} < {-self.b_const**2:.6g})")
        if self.t_start == 0:
            if self.v_inv_l1_at_zero is True:
                raise InvalidParams(
                    "admissible pairs need 1/v non-integrable at 0+")
            dec = np.geomspace(1e-2, 1e-7, 11)
            vdec = self.v(dec)
            if not (np.all(np.isfinite(vdec)) and vdec[-1] < 0.05 * (1.0 + vdec[0])):
                raise InvalidParams("v(t) -> 0 as t -> 0+ fails on samples")


@dataclass(frozen=True)
class CurvatureProfile:
    """A radial curvature function K with certified lower bound -b_const^2."""

    k: Profile
    b_const: float = 0.0
    m: int = 2
    validate: bool = True

    def __post_init__(self):
        if self.m < 2 or int(self.m) != self.m:
            raise InvalidParams("dimension m must be an integer >= 2")
        if self.b_const < 0:
            raise InvalidParams("b_const must be >= 0")
        if self.validate:
            grid = np.geomspace(1e-3, 1e3, 41)
            ks = self.k(grid)
            if not np.all(np.isfinite(ks)):
                raise NonFiniteSample("K not finite on the validation grid")
            slack = 1e-9 * (1.0 + self.b_const ** 2)
            if np.any(ks < -self.b_const ** 2 - slack):
                raise InvalidParams(
                    f"K >= -B^2 fails on samples (min {float(np.min(ks)):.6g})")


# ---------------------------------------------------------------------------
# Integral functionals
# ---------------------------------------------------------------------------

def big_v(pair, t1, t2, tol=DEFAULT_TOL):
    """exp(2 B * integral of 1/v over [t1, t2]); t2 may be +inf.

    Returns 1 when t1 == t2 or B == 0, and +inf when the exponent
    diverges.
    """
    t1 = float(t1)
    if t1 < 0:
        raise InvalidParams("big_v needs t1 >= 0")
    if t2 < t1:
        raise InvalidParams("big_v needs t1 <= t2")
    if t1 == t2 or pair.b_const == 0.0:
        return 1.0
    if math.isinf(t2):
        expo = tail_integral(pair.v_inv, t1, tol=tol)
    else:
        expo = integrate(pair.v_inv, t1, float(t2), tol=tol)
    if math.isinf(expo):
        return math.inf
    try:
        return math.exp(2.0 * pair.b_const * expo)
    except OverflowError:
        return math.inf


def big_v_minus_one(pair, t1, t2, tol=DEFAULT_TOL):
    """big_v(pair, t1, t2) - 1 computed through expm1.

    Exact where the growth factor itself rounds to 1.0, which is what the
    V/(V - 1) thresholds need when the remaining tail of 1/v is tiny.
    """
    t1 = float(t1)
    if t1 < 0 or t2 < t1:
        raise InvalidParams("need 0 <= t1 <= t2")
    if t1 == t2 or pair.b_const == 0.0:
        return 0.0
    if math.isinf(t2):
        expo = tail_integral(pair.v_inv, t1, tol=tol)
    else:
        expo = integrate(pair.v_inv, t1, float(t2), tol=tol)
    if math.isinf(expo):
        return math.inf
    try:
        return math.expm1(2.0 * pair.b_const * expo)
    except OverflowError:
        return math.inf


def weighted_moment(k, lam, a, b, tol=DEFAULT_TOL):
    """Integral of t**lam * K(t) over [a, b]."""
    kp = k.k if isinstance(k, CurvatureProfile) else k
    return integrate(multiply(power(1.0, lam), kp), a, b, tol=tol)
