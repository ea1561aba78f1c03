"""Approximate-solution generators and randomized certificate campaigns."""
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from tempus.errors import CampaignError, NonMonotoneError, TempusError, TimeScaleError
from tempus.hyers_ulam import (certify_first_order, certify_second_order_cc,
                               certify_second_order_icc, certify_second_order_ivc)
from tempus.rng import SplitMix64
from tempus.solvers import recurrence_oracle_second_order, solve_first_order_ivp
from tempus.timescale import GridFunction, TimeScale

KINDS = ("pointwise-uniform", "single-spike", "smooth-bump", "residual-targeted")


# -- time scale families ------------------------------------------------------

def uniform(a, b, h):
    """``{a, a+h, ..., <= b}``."""
    a, b, h = float(a), float(b), float(h)
    if not h > 0:
        raise TimeScaleError(f"uniform step must be positive, got {h!r}")
    if not b > a:
        raise TimeScaleError(f"uniform needs b > a, got a={a!r}, b={b!r}")
    count = int(math.floor((b - a) / h + 1e-9)) + 1
    return TimeScale(a + h * np.arange(count))


def q_scale(t0, q, n):
    """``{t0, t0 q, ..., t0 q^(n-1)}``."""
    t0, q, n = float(t0), float(q), int(n)
    if not (t0 > 0 and q > 1 and n >= 2):
        raise TimeScaleError(f"q_scale needs t0 > 0, q > 1, n >= 2 (got {t0}, {q}, {n})")
    return TimeScale(t0 * q ** np.arange(n))


def sample(a, b, n):
    """``n`` equally spaced samples of the interval ``[a, b]``, endpoints included."""
    if int(n) < 2 or not float(b) > float(a):
        raise TimeScaleError("sample needs b > a and n >= 2")
    return TimeScale(np.linspace(float(a), float(b), int(n)))


def make_timescale(family):
    """Build a time scale from a ``{"family": ..., ...}`` mapping.

    Families: ``uniform(a, b, h)``, ``q_scale(t0, q, n)``, ``sample(a, b, n)``,
    ``points(points)`` and ``mixed(segments)``; mixed segments are
    concatenated and must stay strictly increasing across the joins.
    """
    kind = family.get("family")
    try:
        if kind == "uniform":
            return uniform(family["a"], family["b"], family["h"])
        if kind == "q_scale":
            return q_scale(family["t0"], family["q"], family["n"])
        if kind == "sample":
            return sample(family["a"], family["b"], family["n"])
        if kind == "points":
            return TimeScale(family["points"])
    except KeyError as exc:
        raise TimeScaleError(f"{kind} time scale is missing parameter {exc.args[0]!r}") from None
    if kind == "mixed":
        parts = [make_timescale(seg).points for seg in family.get("segments", [])]
        if not parts:
            raise TimeScaleError("mixed time scale needs at least one segment")
        for left, right in zip(parts, parts[1:]):
            if not right[0] > left[-1]:
                raise NonMonotoneError(
                    f"mixed segments overlap: {right[0]!r} does not exceed {left[-1]!r}")
        return TimeScale(np.concatenate(parts))
    raise TimeScaleError(f"unknown time scale family {kind!r}")


# -- perturbations --------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationSpec:
    kind: str
    magnitude: float
    seed: int = 0
    pin_endpoints: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}; expected one of {KINDS}")
        if not (self.magnitude >= 0 and math.isfinite(self.magnitude)):
            raise ValueError("perturbation magnitude must be finite and >= 0")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


def perturb(x_exact, spec, equation=None, order=None):
    """An approximate solution near ``x_exact``, fully determined by ``spec``.

    Pointwise kinds add noise of sup norm at most ``magnitude``.
    ``residual-targeted`` needs ``equation``: it draws a defect ``l`` with
    ``sup|l| = magnitude`` and re-solves the equation with ``f + l`` as
    forcing, so the result has residual exactly ``magnitude``.
    With ``pin_endpoints`` the first one (first order) or two (second order)
    values keep their exact values.
    """
    if order is None:
        order = equation.order if equation is not None else 2
    ts = x_exact.timescale
    n = ts.n
    m = float(spec.magnitude)
    rng = SplitMix64(spec.seed)
    pinned = order if spec.pin_endpoints else 0
    x = x_exact.values

    if spec.kind == "residual-targeted":
        if equation is None:
            raise ValueError("residual-targeted perturbation needs the equation")
        count = n - order  # defect indices 0..n-1-order
        ell = np.array([m * rng.symmetric() for _ in range(count)])
        if count:
            ell[rng.below(count)] = m * rng.sign()
        init = [x[i] if i < pinned else x[i] + m * rng.symmetric() for i in range(order)]
        forcing = np.zeros(n)
        forcing[:count] = ell
        f = equation.f + forcing
        if equation.order == 1:
            return solve_first_order_ivp(equation.d, f, init[0])
        p, q = equation.coefficients()
        return recurrence_oracle_second_order(p, q, f, init[0], init[1])

    noise = np.zeros(n)
    if spec.kind == "pointwise-uniform":
        noise = np.array([m * rng.symmetric() for _ in range(n)])
    elif spec.kind == "single-spike":
        lo = max(1, pinned)
        k = lo + rng.below(n - 1 - lo) if n - 1 > lo else n - 1
        noise[k] = m * rng.sign()
    elif spec.kind == "smooth-bump":
        a, b = ts.a, ts.b
        centre = rng.uniform(a, b)
        width = (b - a) * rng.uniform(0.1, 0.5)
        noise = m * rng.sign() * np.exp(-(((ts.points - centre) / width) ** 2))
    noise[:pinned] = 0.0
    return GridFunction(x + noise, ts)


# -- campaigns ----------------------------------------------------------------------

def certify_equation(eq, y, riccati=None, construction="literal"):
    """Dispatch ``y`` to the certifier matching ``eq.form``."""
    if eq.form == "first":
        return certify_first_order(y, eq.d, eq.f)
    if eq.form == "cc":
        return certify_second_order_cc(y, eq.alpha, eq.beta, construction)
    if eq.form == "icc":
        return certify_second_order_icc(y, eq.alpha, eq.beta, eq.f)
    if riccati is None:
        riccati = eq.riccati()
    return certify_second_order_ivc(y, eq.p, eq.q, eq.f, riccati)


@dataclass(frozen=True)
class TrialRow:
    seed: int
    epsilon: float
    analytic_constant: Optional[float]
    empirical_constant: float
    sup_deviation: float
    solution_residual: float
    verdict: str


@dataclass(frozen=True)
class CampaignReport:
    trials: int
    pass_count: int
    max_empirical_constant: float
    max_analytic_constant: Optional[float]
    worst_trial_seed: int
    rows: tuple

    @property
    def all_passed(self):
        return self.pass_count == self.trials


def aggregate(rows):
    """Fold trial rows into a report; the result does not depend on row order."""
    rows = tuple(sorted(rows, key=lambda r: r.seed))
    if not rows:
        raise ValueError("a campaign needs at least one trial")
    worst = max(rows, key=lambda r: (r.empirical_constant, -r.seed))
    analytic = [r.analytic_constant for r in rows if r.analytic_constant is not None]
    return CampaignReport(
        trials=len(rows),
        pass_count=sum(r.verdict == "pass" for r in rows),
        max_empirical_constant=worst.empirical_constant,
        max_analytic_constant=max(analytic) if analytic else None,
        worst_trial_seed=worst.seed,
        rows=rows,
    )


def run_campaign(eq, pert, trials, construction="literal"):
    """Certify ``trials`` perturbations seeded ``pert.seed, pert.seed + 1, ...``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    x = eq.exact_solution()
    riccati = eq.riccati() if eq.form == "ivc" else None
    rows = []
    for k in range(trials):
        seed = (int(pert.seed) + k) % 2 ** 64
        try:
            y = perturb(x, replace(pert, seed=seed), eq)
            _, cert = certify_equation(eq, y, riccati, construction)
        except TempusError as exc:
            raise CampaignError(seed, exc) from exc
        rows.append(TrialRow(seed, cert.epsilon, cert.analytic_constant,
                             cert.empirical_constant, cert.sup_deviation,
                             cert.solution_residual, cert.verdict))
    return aggregate(rows)
