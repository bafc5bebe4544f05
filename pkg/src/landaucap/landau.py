"""Truncated Landau-level compressions and their spectral asymptotics.

The compression of multiplication by a compactly supported weight v onto the
q-th Landau level is represented by its top-left (N+1)x(N+1) block in the
normalized level basis.  The block is assembled from Gaussian mixed moments,
diagonalized by a cyclic complex Jacobi sweep at working precision, and the
resulting eigenvalues s_n feed the n-th-root sequences that the minimal-norm
and capacity machinery is asymptotically equal to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from mpmath import mp

from .chebyshev import CapacityEstimate
from .errors import NonConvergenceError
from .orthopoly import monic_orthogonalize
from .region import affine, region_key
from .weight import (
    Constant,
    Generic,
    Radial,
    Weight,
    _default_precision,
    _radial_applicable,
    _radial_interval,
    mixed_moments,
    weight_key,
)

__all__ = [
    "LandauBasisSpec",
    "ToeplitzSpectrum",
    "AsymptoticsReport",
    "rescaled_weight",
    "lll_matrix",
    "level_q_matrix",
    "spectrum",
    "toeplitz_spectrum",
    "radial_oracle",
    "lemma1_sequences",
    "theorem_predictions",
]

TRUST_MSG = "raise precision to extend the trusted spectral tail"
ORACLE_MSG = "oracle requires centered radial weight"

_MAX_SWEEPS = 60


@dataclass(frozen=True)
class LandauBasisSpec:
    q: int
    b0: float
    N: int

    def __post_init__(self):
        if not (isinstance(self.q, int) and self.q >= 0):
            raise ValueError("q must be a nonnegative integer")
        if not self.b0 > 0:
            raise ValueError("b0 must be positive")
        if self.N < self.q:
            raise ValueError("truncation N must be >= q")


@dataclass
class ToeplitzSpectrum:
    spec: LandauBasisSpec
    log_eigs: tuple         # log s_n descending, mpf (-inf for nonpositive noise)
    matrix_residual: float  # max of Hermiticity defect and final off-diagonal mass
    trusted_count: int      # eigenvalues above s_1 * 10^(-p/3)

    def eigenvalues(self):
        """s_1 >= s_2 >= ... as mpf (nonpositive noise entries collapse to 0)."""
        return tuple(mp.exp(lg) for lg in self.log_eigs)


@dataclass
class AsymptoticsReport:
    n_values: tuple
    lhs_sequence: tuple     # (n! s_{n+1})^(1/n), mpf
    rhs_sequence: tuple     # (b0/2) M_n^(1/n), mpf
    ratio_sequence: tuple
    predicted_limits: Optional[dict] = None
    trusted_n_max: Optional[int] = None


# ----------------------------------------------------------- field reduction

def rescaled_weight(v: Weight, b0: float) -> Weight:
    """The weight u(z) = v(z * sqrt(2/b0)) reducing field b0 to 2.

    Substituting z -> sqrt(b0/2) z in the quadratic form turns the field-b0
    Gaussian into the b0=2 one exactly, so every level-q matrix of u at b0=2
    equals the one of v at b0 (only quadrature error distinguishes them).
    """
    if not b0 > 0:
        raise ValueError("b0 must be positive")
    eta = math.sqrt(b0 / 2.0)
    if eta == 1.0:
        return v
    support = affine(v.support, eta, 0.0)
    pos = affine(v.positive_on, eta, 0.0) if v.positive_on is not None else None
    d = v.density
    if isinstance(d, Constant):
        density = d
    elif isinstance(d, Radial):
        density = Radial(
            lambda rho, _p=d.profile, _e=eta: _p(rho / _e),
            d.poly_degree,
            f"{d.label}~scale:{eta!r}",
        )
    else:
        density = Generic(lambda z, _f=d.fn, _e=eta: _f(z / _e), f"{d.label}~scale:{eta!r}")
    return Weight(support, density, pos)


# ------------------------------------------------------------ matrix assembly

def _creation_pow(j: int, q: int) -> dict:
    """Polynomial part of the q-fold creation image of z^j at b0 = 2.

    Monomials are keyed (m, l) for z^m conj(z)^l with exact integer
    coefficients; one application maps P to dP/dz - conj(z) P.
    """
    poly = {(j, 0): 1}
    for _ in range(q):
        nxt = {}
        for (m, l), c in poly.items():
            if m > 0:
                key = (m - 1, l)
                nxt[key] = nxt.get(key, 0) + c * m
            key = (m, l + 1)
            nxt[key] = nxt.get(key, 0) - c
        poly = nxt
    return poly


def _assemble(v: Weight, q: int, b0: float, N: int, precision_bits: int, method: str):
    LandauBasisSpec(q, float(b0), N)  # validate the triple
    u = rescaled_weight(v, b0)
    table = mixed_moments(u, "gaussian", maxdeg=N + q, precision_bits=precision_bits,
                          b0=2.0, method=method)
    polys = [_creation_pow(j, q) for j in range(N + 1)]
    T = mp.matrix(N + 1, N + 1)
    with mp.workprec(precision_bits + 20):
        log_pi_q = mp.log(mp.pi) + mp.loggamma(q + 1)
        half_lg = [mp.loggamma(n + 1) / 2 for n in range(N + 1)]
        for j in range(N + 1):
            for k in range(j, N + 1):
                acc = mp.mpc(0)
                for (m1, l1), c1 in polys[j].items():
                    for (m2, l2), c2 in polys[k].items():
                        acc += (c1 * c2) * table.raw_entry(m1 + l2, l1 + m2)
                val = acc * mp.e ** (-(log_pi_q + half_lg[j] + half_lg[k]))
                T[j, k] = val
                if k != j:
                    T[k, j] = mp.conj(val)
    return T


def lll_matrix(v: Weight, b0: float, N: int, precision_bits: int, method: str = "auto"):
    """Matrix of the ground-level compression in the normalized basis.

    T_jk = G_jk / sqrt(pi^2 (2/b0)^(j+k+2) j! k!) with G the Gaussian moment
    table of v; the general field is reduced to b0 = 2 by rescaled_weight,
    after which the normalization is G~_jk / (pi sqrt(j! k!)), the factorial
    factors applied through log-gamma in log domain.
    """
    return _assemble(v, 0, b0, N, precision_bits, method)


def level_q_matrix(v: Weight, q: int, b0: float, N: int, precision_bits: int,
                   method: str = "auto"):
    """Compression matrix on the q-th level via the symbolic creation rule.

    Basis functions at b0=2 are (polynomial in z, conj z) x exp(-|z|^2/2)
    obtained by q applications of P -> dP/dz - conj(z) P to z^j; entries are
    finite combinations of Gaussian mixed moments up to degree N + q with an
    overall prefactor 1/q! (the creation-operator modulus (2 b0)^q cancels
    the (2 b0)^(-q) of the quadratic form).  q = 0 reduces to lll_matrix.
    """
    return _assemble(v, q, b0, N, precision_bits, method)


# -------------------------------------------------------------- eigenvalues

def _offdiag_frobenius(a, n):
    acc = mp.mpf(0)
    for i in range(n):
        for j in range(n):
            if i != j:
                x = a[i][j]
                acc += mp.re(x) ** 2 + mp.im(x) ** 2
    return mp.sqrt(acc)


def _jacobi_rotate(a, n, i, j):
    beta = a[i][j]
    ab = abs(beta)
    alpha = mp.re(a[i][i])
    gamma = mp.re(a[j][j])
    tau = (gamma - alpha) / (2 * ab)
    if tau == 0:
        t = mp.mpf(1)
    else:
        t = mp.sign(tau) / (abs(tau) + mp.sqrt(1 + tau * tau))
    c = 1 / mp.sqrt(1 + t * t)
    s = t * c
    ph = beta / ab
    phc = mp.conj(ph)
    sph = s * ph
    sphc = s * phc
    for k in range(n):
        aki = a[k][i]
        akj = a[k][j]
        a[k][i] = c * aki - sphc * akj
        a[k][j] = sph * aki + c * akj
    for k in range(n):
        aik = a[i][k]
        ajk = a[j][k]
        a[i][k] = c * aik - sph * ajk
        a[j][k] = sphc * aik + c * ajk
    a[i][j] = mp.mpc(0)
    a[j][i] = mp.mpc(0)
    a[i][i] = mp.mpc(mp.re(a[i][i]))
    a[j][j] = mp.mpc(mp.re(a[j][j]))


def spectrum(matrix, precision_bits: int, spec: Optional[LandauBasisSpec] = None) -> ToeplitzSpectrum:
    """Eigenvalues of a Hermitian compression block by cyclic complex Jacobi.

    Rotations run at precision_bits until the off-diagonal Frobenius mass
    drops below 10^(-p/2) times the trace; eigenvalues are reported sorted
    descending in log domain, and trusted_count marks how many exceed the
    relative floor s_1 * 10^(-p/3).  A diagonal input returns its sorted
    diagonal unchanged.
    """
    p = precision_bits
    with mp.workprec(p):
        if hasattr(matrix, "rows"):
            n = matrix.rows
            if matrix.cols != n:
                raise ValueError("matrix must be square")
            a = [[mp.mpc(matrix[i, j]) for j in range(n)] for i in range(n)]
        else:
            n = len(matrix)
            if any(len(row) != n for row in matrix):
                raise ValueError("matrix must be square")
            a = [[mp.mpc(x) for x in row] for row in matrix]
        amax = mp.mpf(0)
        herm = mp.mpf(0)
        for i in range(n):
            for j in range(n):
                amax = max(amax, abs(a[i][j]))
                herm = max(herm, abs(a[i][j] - mp.conj(a[j][i])))
        tol = mp.mpf(10) ** (-(p / mp.mpf(2)))
        if amax > 0 and herm > tol * amax:
            raise ValueError(
                f"matrix is not Hermitian within tolerance (relative defect {mp.nstr(herm / amax, 6)})"
            )
        for i in range(n):
            for j in range(i + 1, n):
                sym = (a[i][j] + mp.conj(a[j][i])) / 2
                a[i][j] = sym
                a[j][i] = mp.conj(sym)
            a[i][i] = mp.mpc(mp.re(a[i][i]))

        trace = mp.re(sum(a[i][i] for i in range(n)))
        threshold = tol * (trace if trace > 0 else n * amax)
        if threshold <= 0:
            threshold = mp.mpf(2) ** (-p)
        skip = threshold / (n * n) if n else threshold
        off = _offdiag_frobenius(a, n)
        sweeps = 0
        while off >= threshold:
            if sweeps >= _MAX_SWEEPS:
                raise NonConvergenceError("Jacobi sweep limit reached before off-diagonal target")
            for i in range(n - 1):
                for j in range(i + 1, n):
                    if abs(a[i][j]) > skip:
                        _jacobi_rotate(a, n, i, j)
            off = _offdiag_frobenius(a, n)
            sweeps += 1

        eigs = sorted((mp.re(a[i][i]) for i in range(n)), reverse=True)
        s1 = eigs[0] if n else mp.mpf(0)
        if s1 > 0:
            floor = s1 * mp.mpf(10) ** (-(p / mp.mpf(3)))
            trusted = sum(1 for e in eigs if e > floor)
        else:
            trusted = 0
        log_eigs = tuple(mp.log(e) if e > 0 else mp.ninf for e in eigs)
        residual = 0.0
        if amax > 0:
            residual = float(herm / amax)
        if trace > 0:
            residual = max(residual, float(off / trace))

    if spec is None:
        spec = LandauBasisSpec(0, 2.0, n - 1)
    return ToeplitzSpectrum(spec, log_eigs, residual, trusted)


def toeplitz_spectrum(v: Weight, q: int = 0, b0: float = 2.0, N: int = 48,
                      precision_bits: int = 256, method: str = "auto") -> ToeplitzSpectrum:
    """Assemble the level-q compression of v and diagonalize it."""
    T = level_q_matrix(v, q, b0, N, precision_bits, method)
    return spectrum(T, precision_bits, spec=LandauBasisSpec(q, float(b0), N))


# ------------------------------------------------------------- radial oracle

def radial_oracle(v: Weight, b0: float = 2.0, N: int = 48,
                  precision_bits: Optional[int] = None, q: int = 0) -> ToeplitzSpectrum:
    """Level-q eigenvalues of a centered radial weight by 1d quadrature.

    Separation of variables diagonalizes the compression in the angular
    momentum basis: at level q the candidate attached to basis index j is

        (p! / (p + a)!) int t^a [L_p^(a)(t)]^2 e^(-t) u(sqrt t) dt

    with m = j - q, a = |m|, p = q + min(m, 0), and L the associated Laguerre
    polynomial. At q = 0 this is (1/j!) int t^j e^(-t) u(sqrt t) dt, and for
    characteristic profiles it collapses to gamma(j+1, r^2)/j!. Independent
    of the creation-polynomial matrix assembly, so it serves as an oracle.
    """
    if not _radial_applicable(v):
        raise ValueError(ORACLE_MSG)
    LandauBasisSpec(q, float(b0), N)  # validates q, b0, N together
    p_bits = precision_bits if precision_bits is not None else _default_precision(N)
    with mp.workprec(p_bits + 20):
        # reduce to b0 = 2 inside the integral: t = (b0/2) rho^2, exact in mpf
        scale = mp.mpf(b0) / 2
        lo, hi = _radial_interval(v.support)
        lo2, hi2 = scale * lo * lo, scale * hi * hi
        d = v.density
        if isinstance(d, Constant):
            c = mp.mpf(d.c)
            dens = lambda t: c
        else:
            dens = lambda t: d.profile(mp.sqrt(t / scale))
        vals = []
        for j in range(N + 1):
            m = j - q
            alpha = abs(m)
            pdeg = q + min(m, 0)
            if q == 0 and isinstance(d, Constant):
                vals.append(c * mp.gammainc(j + 1, lo2, hi2) / mp.factorial(j))
                continue
            norm = mp.e ** (mp.loggamma(pdeg + 1) - mp.loggamma(pdeg + alpha + 1))
            f = lambda t: t ** alpha * mp.laguerre(pdeg, alpha, t) ** 2 * mp.e ** (-t) * dens(t)
            vals.append(norm * mp.quad(f, [lo2, hi2]))
        eigs = sorted(vals, reverse=True)
        s1 = eigs[0]
        if s1 > 0:
            floor = s1 * mp.mpf(10) ** (-(p_bits / mp.mpf(3)))
            trusted = sum(1 for e in eigs if e > floor)
        else:
            trusted = 0
        log_eigs = tuple(mp.log(e) if e > 0 else mp.ninf for e in eigs)
    return ToeplitzSpectrum(LandauBasisSpec(q, float(b0), N), log_eigs, 0.0, trusted)


# ------------------------------------------------------- asymptotic sequences

def lemma1_sequences(v: Weight, b0: float = 2.0, N: int = 48,
                     precision_bits: int = 256, method: str = "auto") -> AsymptoticsReport:
    """The two sides of (n! s_{n+1})^(1/n) = (b0/2) M_n^(1/n) (1 + o(1)).

    lhs comes from the ground-level spectrum of v, rhs from the monic
    minimal norms of the plain moments of the same v; the sequences stop at
    the largest n with trusted s_{n+1}.
    """
    if N < 4:
        raise ValueError("need N >= 4")
    sp = toeplitz_spectrum(v, 0, b0, N, precision_bits, method)
    if sp.trusted_count < 5:
        raise NonConvergenceError(TRUST_MSG)
    n_max = sp.trusted_count - 1
    plain = mixed_moments(v, "plain", maxdeg=n_max, precision_bits=precision_bits, method=method)
    basis = monic_orthogonalize(plain)
    with mp.workprec(precision_bits):
        half_b0 = mp.mpf(b0) / 2
        ns, lhs, rhs, ratio = [], [], [], []
        for n in range(1, n_max + 1):
            left = mp.exp((mp.loggamma(n + 1) + sp.log_eigs[n]) / n)
            right = half_b0 * mp.exp(basis.log_norms[n] / n)
            ns.append(n)
            lhs.append(left)
            rhs.append(right)
            ratio.append(left / right)
    return AsymptoticsReport(tuple(ns), tuple(lhs), tuple(rhs), tuple(ratio),
                             predicted_limits=None, trusted_n_max=n_max)


def theorem_predictions(v_or_w: Weight, q: int, b0: float, rho, cap) -> dict:
    """Predicted n-th-root limits for the three perturbed eigenvalue families.

    rho is a RhoEstimate for the plain moments of v_or_w and cap either a
    CapacityEstimate for supp v_or_w or a known capacity value; the ground
    family gets b0 rho/2 (limsup/liminf from the tail envelope), the level-q
    family (b0/2) Cp^2, and the three-dimensional family (b0 rho/2)^2, plus
    the log-asymptote coefficients -n log n and log(b0/2) + 2 log Cp.
    """
    LandauBasisSpec(q, float(b0), q)
    wkey = weight_key(v_or_w)
    if getattr(rho, "weight_key", None) not in (None, wkey):
        raise ValueError("rho estimate provenance does not match this weight")
    skey = region_key(v_or_w.support)
    if isinstance(cap, CapacityEstimate):
        if cap.region_key not in (None, skey):
            raise ValueError("capacity estimate provenance does not match supp v")
        cp = mp.mpf(cap.extrapolated)
    else:
        cp = mp.mpf(cap)
    if not cp > 0:
        raise ValueError("capacity must be positive")
    half_b0 = mp.mpf(b0) / 2
    t1 = {"limsup": half_b0 * rho.rho_plus_hat, "liminf": half_b0 * rho.rho_minus_hat}
    t3 = {"limsup": t1["limsup"] ** 2, "liminf": t1["liminf"] ** 2}
    if rho.extrapolated is not None:
        t1["extrapolated"] = half_b0 * rho.extrapolated
        t3["extrapolated"] = t1["extrapolated"] ** 2
    return {
        "theorem1": t1,
        "theorem2": {"limit": half_b0 * cp ** 2},
        "theorem3": t3,
        "log_asymptote": {
            "nlogn_coefficient": mp.mpf(-1),
            "linear_coefficient": mp.log(half_b0) + 2 * mp.log(cp),
        },
        "q": q,
        "b0": float(b0),
        "provenance": {"weight": wkey, "support": skey},
    }
