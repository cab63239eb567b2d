"""Finite-difference oracles used by tests (independent of the AD path)."""
import numpy as np


def fd_gradient(fn, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fn(x + e) - fn(x - e)) / (2 * h)
    return g


def fd_hessian(fn, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    n = len(x)
    H = np.zeros((n, n))
    f0 = fn(x)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        H[i, i] = (fn(x + e) - 2 * f0 + fn(x - e)) / (h * h)
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            H[i, j] = H[j, i] = (fn(x + ei + ej) - fn(x + ei - ej)
                                 - fn(x - ei + ej) + fn(x - ei - ej)) / (4 * h * h)
    return H
