"""Exact solvers for linear dynamic equations on isolated time scales.

All solvers are explicit forward recurrences; the sequential loops live in
the kernel backend (compiled when available).
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tempus._backend import kernels
from tempus.errors import (ComplexRootsError, GridMismatchError, RiccatiBreakdownError,
                           TooFewPointsError)
from tempus.timescale import (REGRESSIVITY_RTOL, Coefficient, GridFunction, TimeScale,
                              as_coefficient, delta_derivative, regressive_mask)

ROOT_SEPARATION_RTOL = 1e-8
RICCATI_RTOL = 1e-10


def values_on(x, ts):
    """Float64 contiguous values of ``x`` on ``ts``; scalars are broadcast."""
    if isinstance(x, Coefficient):
        x = x.fn
    if isinstance(x, GridFunction):
        if x.timescale != ts:
            raise GridMismatchError("grid function is not aligned with the time scale")
        return np.ascontiguousarray(x.values)
    return np.full(ts.n, float(x))


def _require_second_order(ts):
    if ts.n < 3:
        raise TooFewPointsError(f"second-order operations need at least 3 points, got {ts.n}")


@dataclass(frozen=True)
class CharacteristicRoots:
    lambda1: float
    lambda2: float
    distinct: bool
    both_positive: bool


def characteristic_roots(alpha, beta):
    """Real roots of ``lambda^2 + alpha lambda + beta = 0``, smaller one first."""
    alpha, beta = float(alpha), float(beta)
    disc = alpha * alpha - 4.0 * beta
    if disc < -1e-12 * max(1.0, alpha * alpha, 4.0 * abs(beta)):
        raise ComplexRootsError(alpha, beta)
    s = math.sqrt(max(disc, 0.0))
    # take the root that avoids cancellation, then Vieta for the other
    big = -0.5 * (alpha + math.copysign(s, alpha))
    if big == 0.0:
        r1 = r2 = 0.0
    else:
        r1, r2 = big, beta / big
    lo, hi = min(r1, r2), max(r1, r2)
    distinct = abs(hi - lo) > ROOT_SEPARATION_RTOL * max(1.0, abs(lo), abs(hi))
    return CharacteristicRoots(lo, hi, distinct, lo > 0.0)


def solve_first_order_ivp(d, f, x0):
    """Solve ``x^Delta = d x + f`` with ``x(a) = x0``.

    Equivalent to the variation-of-constants formula
    ``x(t) = e_d(t,a) x0 + int_a^t e_d(t, sigma(s)) f(s) Delta s``.
    """
    d = as_coefficient(d)
    ts = d.timescale
    d.require_regressive(0, ts.n - 1)
    x = kernels.first_order_forward(ts.mu, np.ascontiguousarray(d.values),
                                    values_on(f, ts), float(x0))
    return GridFunction(x, ts)


def recurrence_oracle_second_order(p, q, f, x0, x1, timescale=None):
    """Solve ``x^DD + p x^D + q x = f`` forward from ``x[0], x[1]``.

    ``p``, ``q``, ``f`` may be grid functions or constants; with all three
    constant the time scale must be passed explicitly.
    """
    ts = timescale
    for c in (p, q, f):
        if isinstance(c, (GridFunction, Coefficient)):
            ts = c.timescale if ts is None else ts
    if ts is None:
        raise TypeError("timescale is required when p, q and f are all constants")
    _require_second_order(ts)
    x = kernels.second_order_forward(ts.mu, values_on(p, ts), values_on(q, ts),
                                     values_on(f, ts), float(x0), float(x1))
    return GridFunction(x, ts)


def second_order_defect(y, p, q, f):
    """Pointwise ``y^DD + p y^D + q y - f`` and its rounding scale, for ``i <= n-3``.

    The scale bounds the magnitude of every term (difference quotients
    included), so ``1e-9 * scale`` is a sensible zero test.
    """
    ts = y.timescale
    _require_second_order(ts)
    pv, qv, fv = values_on(p, ts), values_on(q, ts), values_on(f, ts)
    yd = delta_derivative(y)
    ydd = delta_derivative(yd)
    m = ts.n - 2
    yv, mu = y.values, ts.mu
    defect = ydd.values[:m] + pv[:m] * yd.values[:m] + qv[:m] * yv[:m] - fv[:m]
    ay = np.abs(yv)
    quot = (ay[2:] / mu[1:m + 1] + ay[1:m + 1] * (1.0 / mu[1:m + 1] + 1.0 / mu[:m])
            + ay[:m] / mu[:m]) / mu[:m]
    scale = (quot + np.abs(pv[:m]) * (ay[1:m + 1] + ay[:m]) / mu[:m]
             + np.abs(qv[:m] * yv[:m]) + np.abs(fv[:m]))
    return defect, scale


def residual_second_order(y, p, q, f):
    """Sup over ``i <= n-3`` of ``|y^DD + p y^D + q y - f|``."""
    defect, _ = second_order_defect(y, p, q, f)
    return float(np.max(np.abs(defect)))


def residual_second_order_scale(y, p, q, f):
    _, scale = second_order_defect(y, p, q, f)
    return float(np.max(scale))


def first_order_defect(x, d, f):
    """Pointwise ``x^D - d x - f`` and rounding scale, for ``i <= n-2``."""
    ts = x.timescale
    dv, fv = values_on(d, ts), values_on(f, ts)
    xv, mu = x.values, ts.mu
    m = ts.n - 1
    defect = delta_derivative(x).values[:m] - dv[:m] * xv[:m] - fv[:m]
    ax = np.abs(xv)
    scale = (ax[1:] + ax[:m]) / mu[:m] + np.abs(dv[:m] * xv[:m]) + np.abs(fv[:m])
    return defect, scale


@dataclass(frozen=True)
class RiccatiSolution:
    """A particular solution of ``z^D + p z - z z^sigma = q`` with its side conditions.

    ``cond1_ok``: ``1 + mu (z^sigma - p) != 0`` everywhere.
    ``cond2_ok``: ``1 - mu z != 0`` everywhere.
    """
    z: GridFunction
    cond1_ok: bool
    cond2_ok: bool
    residual: float
    scale: float

    @property
    def residual_ok(self):
        return self.residual <= RICCATI_RTOL * self.scale


def riccati_check(p, q, z):
    """Measure the Riccati defect and side conditions of a given ``z``."""
    ts = z.timescale
    pv, qv = values_on(p, ts), values_on(q, ts)
    zv, mu = z.values, ts.mu
    zs = z.shift().values
    m = ts.n - 1
    zd = delta_derivative(z).values
    defect = zd[:m] + pv[:m] * zv[:m] - zv[:m] * zs[:m] - qv[:m]
    az = np.abs(zv)
    scale = ((az[1:] + az[:m]) / mu[:m] + np.abs(pv[:m] * zv[:m])
             + np.abs(zv[:m] * zs[:m]) + np.abs(qv[:m]))
    return RiccatiSolution(
        z=z,
        cond1_ok=bool(regressive_mask(mu, zs - pv).all()),
        cond2_ok=bool(regressive_mask(mu, -zv).all()),
        residual=float(np.max(np.abs(defect))),
        scale=float(max(np.max(scale), np.finfo(float).tiny)),
    )


def riccati_forward(p, q, z0, timescale=None):
    """Propagate a Riccati solution from ``z(a) = z0``.

    Each step solves ``z^sigma (1 - mu z) = z + mu (q - p z)``; a vanishing
    ``1 - mu z`` raises :class:`RiccatiBreakdownError` at that index.
    """
    ts = timescale
    for c in (p, q):
        if isinstance(c, (GridFunction, Coefficient)):
            ts = c.timescale if ts is None else ts
    if ts is None:
        raise TypeError("timescale is required when p and q are constants")
    pv, qv = values_on(p, ts), values_on(q, ts)
    z, k = kernels.riccati_forward(ts.mu, pv, qv, float(z0), REGRESSIVITY_RTOL)
    if k >= 0:
        raise RiccatiBreakdownError(k)
    return riccati_check(GridFunction(pv, ts), GridFunction(qv, ts), GridFunction(z, ts))


def suggest_riccati_seed(p, q, timescale=None):
    """``z(a) = -lambda1`` for the coefficients frozen at ``a``."""
    ts = timescale
    for c in (p, q):
        if isinstance(c, (GridFunction, Coefficient)):
            ts = c.timescale if ts is None else ts
    if ts is None:
        return -characteristic_roots(p, q).lambda1
    return -characteristic_roots(values_on(p, ts)[0], values_on(q, ts)[0]).lambda1


FORMS = ("first", "cc", "icc", "ivc")


@dataclass(frozen=True)
class EquationSpec:
    """A first- or second-order linear dynamic equation on one time scale.

    ``form`` selects the equation family:

    ``first``  ``x^D - d x - f = 0``
    ``cc``     ``x^DD + alpha x^D + beta x = 0``
    ``icc``    ``x^DD + alpha x^D + beta x = f``
    ``ivc``    ``x^DD + p x^D + q x = f``

    ``initial`` holds ``x(t_0)`` (and ``x(t_1)`` for second order) of the
    reference exact solution used by the perturbation harness.
    """
    timescale: TimeScale
    form: str
    f: GridFunction
    d: Optional[Coefficient] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    p: Optional[GridFunction] = None
    q: Optional[GridFunction] = None
    initial: tuple = (1.0, 1.0)
    riccati_seed: Optional[float] = None
    riccati_values: Optional[GridFunction] = None

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown equation form {self.form!r}")
        ts = self.timescale
        fields = [self.f, self.d, self.p, self.q, self.riccati_values]
        for fn in fields:
            if fn is not None and fn.timescale != ts:
                raise GridMismatchError("equation data is not aligned with its time scale")
        if self.form == "first":
            if self.d is None:
                raise ValueError("first-order equation needs d")
            if len(self.initial) < 1:
                raise ValueError("first-order equation needs x(a)")
        else:
            _require_second_order(ts)
            if len(self.initial) < 2:
                raise ValueError("second-order equation needs x(t0), x(t1)")
            if self.form in ("cc", "icc") and (self.alpha is None or self.beta is None):
                raise ValueError(f"{self.form} equation needs alpha and beta")
            if self.form == "ivc" and (self.p is None or self.q is None):
                raise ValueError("ivc equation needs p and q")
            if self.form == "cc" and np.any(self.f.values != 0.0):
                raise ValueError("cc equation is homogeneous; use icc for a forcing term")

    @property
    def order(self):
        return 1 if self.form == "first" else 2

    def coefficients(self):
        """``(p, q)`` as grid functions for second-order forms."""
        ts = self.timescale
        if self.form in ("cc", "icc"):
            return GridFunction.constant(self.alpha, ts), GridFunction.constant(self.beta, ts)
        if self.form == "ivc":
            return self.p, self.q
        raise ValueError("first-order equation has no (p, q)")

    def exact_solution(self, initial=None):
        init = self.initial if initial is None else initial
        if self.form == "first":
            return solve_first_order_ivp(self.d, self.f, init[0])
        p, q = self.coefficients()
        return recurrence_oracle_second_order(p, q, self.f, init[0], init[1])

    def riccati(self):
        if self.form != "ivc":
            raise ValueError("only ivc equations carry a Riccati solution")
        if self.riccati_values is not None:
            return riccati_check(self.p, self.q, self.riccati_values)
        seed = self.riccati_seed
        if seed is None:
            seed = suggest_riccati_seed(self.p, self.q)
        return riccati_forward(self.p, self.q, seed)
