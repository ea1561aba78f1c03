"""Delta calculus on finite, isolated time scales.

A :class:`TimeScale` is a strictly increasing array of points. Every point
except the last is right-scattered, so the forward jump, graininess, delta
derivative, delta integral and generalized exponential all reduce to exact
finite arithmetic:

* ``sigma(t_i) = t_{i+1}`` and ``sigma(t_{n-1}) = t_{n-1}``
* ``mu(t_i) = sigma(t_i) - t_i``
* ``f^Delta(t_i) = (f_{i+1} - f_i) / mu_i``
* ``int_{t_i}^{t_j} f Delta s = sum_{k=i}^{j-1} mu_k f_k``
* ``e_p(t_i, t_j) = prod_{k=j}^{i-1} (1 + mu_k p_k)``

The derivative at the right endpoint is undefined; it is filled with the last
interior value so grid functions keep a uniform length.
"""
import math

import numpy as np

from tempus.errors import (GridMismatchError, NonFiniteError, NonFiniteValuesError,
                           NonMonotoneError, NonRegressiveError, TooFewPointsError)

#: ``1 + mu p`` counts as nonzero when its magnitude exceeds this times ``max(1, |mu p|)``.
REGRESSIVITY_RTOL = 1e-9


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


class TimeScale:
    """A finite strictly increasing set of real points."""

    __slots__ = ("points", "mu", "_key")

    def __init__(self, points):
        pts = np.asarray(points, dtype=float).ravel()
        if not np.all(np.isfinite(pts)):
            raise NonFiniteError("time scale points must be finite")
        if pts.size < 2:
            raise TooFewPointsError(f"a time scale needs at least 2 points, got {pts.size}")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            bad = int(np.argmax(steps <= 0))
            raise NonMonotoneError(
                f"points must be strictly increasing (index {bad}: {pts[bad]!r} -> {pts[bad + 1]!r})")
        self.points = _frozen(pts)
        self.mu = _frozen(np.append(steps, 0.0))
        self._key = self.points.tobytes()

    @property
    def n(self):
        return self.points.size

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        if not isinstance(other, TimeScale):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"TimeScale(n={self.n}, a={self.points[0]!r}, b={self.points[-1]!r})"

    @property
    def a(self):
        return float(self.points[0])

    @property
    def b(self):
        return float(self.points[-1])

    def head(self, m):
        """The time scale made of the first ``m`` points."""
        if not 2 <= m <= self.n:
            raise TooFewPointsError(f"cannot take {m} points from a {self.n}-point time scale")
        return self if m == self.n else TimeScale(self.points[:m])

    def check_index(self, i):
        if not 0 <= i < self.n:
            raise IndexError(f"point index {i} out of range for {self.n} points")
        return int(i)


def validate_timescale(points):
    """Build a :class:`TimeScale`, rejecting non-finite, short or non-monotone input."""
    return TimeScale(points)


class GridFunction:
    """Real values sampled on the points of one time scale."""

    __slots__ = ("values", "timescale")

    def __init__(self, values, timescale):
        vals = np.asarray(values, dtype=float)
        if vals.ndim == 0:
            vals = np.full(timescale.n, float(vals))
        vals = vals.ravel()
        if vals.size != timescale.n:
            raise GridMismatchError(
                f"{vals.size} values do not match a {timescale.n}-point time scale")
        if not np.all(np.isfinite(vals)):
            bad = int(np.argmin(np.isfinite(vals)))
            raise NonFiniteValuesError(f"grid function value at index {bad} is not finite")
        self.values = _frozen(vals)
        self.timescale = timescale

    @classmethod
    def constant(cls, c, timescale):
        return cls(np.full(timescale.n, float(c)), timescale)

    @classmethod
    def from_callable(cls, func, timescale):
        return cls([func(t) for t in timescale.points], timescale)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self):
        return f"GridFunction({self.values.tolist()!r})"

    def _other(self, other):
        if isinstance(other, GridFunction):
            aligned(self, other)
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.values + self._other(other), self.timescale)

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.values - self._other(other), self.timescale)

    def __rsub__(self, other):
        return GridFunction(self._other(other) - self.values, self.timescale)

    def __mul__(self, other):
        return GridFunction(self.values * self._other(other), self.timescale)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(-self.values, self.timescale)

    def shift(self):
        """``f^sigma``: the forward shift, with the endpoint mapped to itself."""
        return GridFunction(np.append(self.values[1:], self.values[-1]), self.timescale)

    def head(self, m):
        return GridFunction(self.values[:m], self.timescale.head(m))

    def sup(self, stop=None):
        """Max of ``|f|`` over indices ``0..stop`` (inclusive); all indices by default."""
        vals = self.values if stop is None else self.values[: stop + 1]
        return float(np.max(np.abs(vals)))


def aligned(*fns):
    """Return the shared time scale of ``fns`` or raise :class:`GridMismatchError`."""
    ts = fns[0].timescale
    for fn in fns[1:]:
        if fn.timescale != ts:
            raise GridMismatchError("grid functions live on different time scales")
    return ts


def regressive_mask(mu, p):
    mp = mu * p
    return np.abs(1.0 + mp) > REGRESSIVITY_RTOL * np.maximum(1.0, np.abs(mp))


class Coefficient:
    """A grid function together with its pointwise regressivity record."""

    __slots__ = ("fn", "regressive")

    def __init__(self, fn):
        if not isinstance(fn, GridFunction):
            raise TypeError("Coefficient wraps a GridFunction")
        self.fn = fn
        self.regressive = _frozen(regressive_mask(fn.timescale.mu, fn.values)).astype(bool)

    @classmethod
    def constant(cls, c, timescale):
        return cls(GridFunction.constant(c, timescale))

    @property
    def timescale(self):
        return self.fn.timescale

    @property
    def values(self):
        return self.fn.values

    def __len__(self):
        return len(self.fn)

    def __getitem__(self, i):
        return self.fn.values[i]

    def __repr__(self):
        return f"Coefficient({self.fn.values.tolist()!r})"

    @property
    def is_regressive(self):
        return bool(self.regressive.all())

    def require_regressive(self, start=0, stop=None, what="coefficient"):
        """Raise :class:`NonRegressiveError` at the first bad index in ``[start, stop)``."""
        mask = self.regressive[start:stop]
        if not mask.all():
            raise NonRegressiveError(start + int(np.argmin(mask)), what)
        return self


def as_coefficient(p, timescale=None):
    if isinstance(p, Coefficient):
        return p
    if isinstance(p, GridFunction):
        return Coefficient(p)
    if timescale is None:
        raise TypeError("a time scale is needed to broadcast a constant coefficient")
    return Coefficient(GridFunction(p, timescale))


def sigma(ts, i):
    i = ts.check_index(i)
    return float(ts.points[min(i + 1, ts.n - 1)])


def graininess(ts, i):
    return float(ts.mu[ts.check_index(i)])


def delta_derivative(f):
    mu = f.timescale.mu
    vals = f.values
    out = np.empty_like(vals)
    out[:-1] = (vals[1:] - vals[:-1]) / mu[:-1]
    out[-1] = out[-2]
    return GridFunction(out, f.timescale)


def delta_integral(f, i, j):
    ts = f.timescale
    i, j = ts.check_index(i), ts.check_index(j)
    if i > j:
        raise ValueError(f"delta_integral needs i <= j, got i={i}, j={j}")
    return math.fsum(ts.mu[i:j] * f.values[i:j])


def circle_minus(p):
    """``(-)p = -p / (1 + mu p)``; the additive inverse in the regressive group."""
    p = as_coefficient(p)
    p.require_regressive()
    mu = p.timescale.mu
    return Coefficient(GridFunction(-p.values / (1.0 + mu * p.values), p.timescale))


def ts_exponential(p, i, j):
    """``e_p(t_i, t_j)`` as a product of ``1 + mu p`` factors (reciprocal when ``i < j``)."""
    p = as_coefficient(p)
    ts = p.timescale
    i, j = ts.check_index(i), ts.check_index(j)
    lo, hi = min(i, j), max(i, j)
    p.require_regressive(lo, hi)
    prod = math.prod((1.0 + ts.mu[lo:hi] * p.values[lo:hi]).tolist())
    return prod if i >= j else 1.0 / prod


def exponential_table(p, anchor=0):
    """``e_p(t_i, t_anchor)`` for every index ``i`` in one pass."""
    p = as_coefficient(p)
    ts = p.timescale
    anchor = ts.check_index(anchor)
    p.require_regressive(0, ts.n - 1)
    factors = 1.0 + ts.mu * p.values
    out = np.empty(ts.n)
    out[anchor] = 1.0
    if anchor < ts.n - 1:
        out[anchor + 1:] = np.cumprod(factors[anchor:-1])
    for k in range(anchor - 1, -1, -1):
        out[k] = out[k + 1] / factors[k]
    return GridFunction(out, ts)
