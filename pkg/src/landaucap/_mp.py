"""Extended-precision building blocks: Gauss-Legendre and tanh-sinh node
caches and a Hermitian Cholesky, all on top of mpmath."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from mpmath import mp

from .errors import DegenerateMomentError


@lru_cache(maxsize=128)
def gauss_legendre(n: int, prec: int):
    """Nodes and weights on [-1, 1], exact for polynomial degree 2n-1.

    float64 seeds refined by Newton steps at extended precision; each step
    doubles the correct digits, so a handful suffices even at 512 bits.
    """
    if n < 1:
        raise ValueError("need at least one node")
    seeds, _ = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    with mp.workprec(prec + 30):
        eps = mp.mpf(2) ** (-(prec + 10))
        for x0 in seeds:
            x = mp.mpf(float(x0))
            for _ in range(10):
                p, dp = _legendre_pair(n, x)
                dx = p / dp
                x -= dx
                if abs(dx) <= eps:
                    break
            p, dp = _legendre_pair(n, x)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def _legendre_pair(n: int, x):
    pm, p = mp.one, x
    for k in range(2, n + 1):
        pm, p = p, ((2 * k - 1) * x * p - (k - 1) * pm) / k
    dp = n * (x * p - pm) / (x * x - 1)
    return p, dp


@lru_cache(maxsize=16)
def tanh_sinh(prec: int):
    """Tanh-sinh nodes/weights on [-1, 1]; robust to endpoint singularities.

    x = tanh(pi/2 sinh(kh)). Step h = 2^-m gives roughly exp(-pi^2/h) error
    for strip-analytic integrands, so m is picked from the precision; the
    sum is truncated once 1 - |x| drops below 2^-(prec+20).
    """
    if prec <= 150:
        m = 5
    elif prec <= 300:
        m = 6
    else:
        m = 7
    with mp.workprec(prec + 30):
        h = mp.mpf(2) ** (-m)
        u_cut = mp.log(2) * (prec + 24) / 2
        kmax = int(mp.ceil(mp.asinh(2 * u_cut / mp.pi) / h)) + 1
        pairs = []
        for k in range(-kmax, kmax + 1):
            t = k * h
            u = mp.pi / 2 * mp.sinh(t)
            x = mp.tanh(u)
            w = h * mp.pi / 2 * mp.cosh(t) / mp.cosh(u) ** 2
            pairs.append((x, w))
        return tuple(pairs)


def map_rule(nodes, weights, lo, hi):
    """Affine image of a [-1, 1] rule onto [lo, hi]."""
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    return [mid + half * x for x in nodes], [half * w for w in weights]


def hermitian_cholesky(g, prec: int):
    """Lower Cholesky factor of a Hermitian matrix given as list-of-lists.

    Returns (L, log_pivots) with log_pivots[n] = log(L[n][n]^2). Raises
    DegenerateMomentError (with .degree set) on a non-positive pivot.
    """
    n = len(g)
    with mp.workprec(prec):
        L = [[mp.mpc(0)] * n for _ in range(n)]
        logs = []
        for i in range(n):
            for j in range(i + 1):
                s = g[i][j]
                for k in range(j):
                    s -= L[i][k] * mp.conj(L[j][k])
                if i == j:
                    piv = mp.re(s)
                    if not piv > 0:
                        err = DegenerateMomentError(f"non-positive pivot at degree {i}")
                        err.degree = i
                        raise err
                    L[i][i] = mp.sqrt(piv)
                    logs.append(mp.log(piv))
                else:
                    L[i][j] = s / L[j][j]
        return L, logs
