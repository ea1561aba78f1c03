"""Pure-Python twins of the compiled recurrences in ``_kernels.pyx``.

Operation order matches the Cython code exactly so both backends produce
bit-identical floats.
"""
import numpy as np

BACKEND = "python"


def first_order_forward(mu, d, f, x0):
    mu = mu.tolist()
    d = d.tolist()
    f = f.tolist()
    n = len(mu)
    x = [0.0] * n
    x[0] = float(x0)
    for i in range(n - 1):
        x[i + 1] = (1.0 + mu[i] * d[i]) * x[i] + mu[i] * f[i]
    return np.array(x)


def second_order_forward(mu, p, q, f, x0, x1):
    mu = mu.tolist()
    p = p.tolist()
    q = q.tolist()
    f = f.tolist()
    n = len(mu)
    x = [0.0] * n
    x[0] = float(x0)
    x[1] = float(x1)
    for i in range(n - 2):
        dx = (x[i + 1] - x[i]) / mu[i]
        x[i + 2] = x[i + 1] + mu[i + 1] * (dx + mu[i] * (f[i] - p[i] * dx - q[i] * x[i]))
    return np.array(x)


def riccati_forward(mu, p, q, z0, rtol):
    """Return ``(z, k)``; ``k`` is the breakdown index or -1."""
    mu = mu.tolist()
    p = p.tolist()
    q = q.tolist()
    n = len(mu)
    z = [0.0] * n
    z[0] = float(z0)
    for i in range(n - 1):
        mz = mu[i] * z[i]
        c = 1.0 - mz
        if abs(c) <= rtol * max(1.0, abs(mz)):
            return np.array(z[: i + 1]), i
        z[i + 1] = (z[i] + mu[i] * (q[i] - p[i] * z[i])) / c
    return np.array(z), -1


def lemma_sup(mu, d):
    """Running ``S[i+1] = |1 + mu d| S[i] + mu``; return ``(max S, argmax)``."""
    mu = mu.tolist()
    d = d.tolist()
    s = 0.0
    best = 0.0
    arg = 0
    for i in range(len(mu) - 1):
        s = abs(1.0 + mu[i] * d[i]) * s + mu[i]
        if s > best:
            best = s
            arg = i + 1
    return best, arg
