"""Weights on plane regions and their mixed moment tables.

A weight is a nonnegative density on a compact support region. The moment
table mu_ab = int z^a conj(z)^b v(z) g(z) dm(z) comes in two flavours:
plain (g = 1) and Gaussian (g = exp(-b0 |z|^2 / 2)). Tables are computed
at a stated bit precision and stored with monomials prescaled by the
bounding radius, which keeps the Gram entries of order of the total mass.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from mpmath import mp

from ._mp import gauss_legendre, hermitian_cholesky, map_rule, tanh_sinh
from .errors import DegenerateMomentError
from .region import (
    Annulus,
    Disc,
    Polygon,
    Region,
    UnionRegion,
    bounding_radius,
    contains,
    region_from_config,
    region_key,
    region_to_config,
    _strictly_inside,
)

__all__ = [
    "Constant",
    "Radial",
    "Generic",
    "Weight",
    "MomentTable",
    "Potential3D",
    "SectionGrid",
    "quadrature",
    "mixed_moments",
    "reduce_3d",
    "radialized",
    "weight_value",
    "weight_key",
    "weight_from_config",
    "weight_to_config",
    "moment_table_to_json",
    "moment_table_from_json",
    "emission_digits",
]

DEGENERATE_MSG = "moment table numerically degenerate; increase precision"
UNION_MSG = "union parts must be pairwise disjoint for quadrature"


def emission_digits(prec: int) -> int:
    return math.ceil(prec * 0.3)


# ------------------------------------------------------------------ densities

@dataclass(frozen=True)
class Constant:
    c: float = 1.0


@dataclass(frozen=True)
class Radial:
    """Density depending on |z| only (radial about the origin)."""

    profile: Callable
    poly_degree: Optional[int] = None  # set when profile is polynomial in rho
    label: str = "radial"


@dataclass(frozen=True)
class Generic:
    fn: Callable
    label: str = "generic"


@dataclass(frozen=True)
class Weight:
    support: Region
    density: object
    positive_on: Optional[Region] = None  # region whose interior has v >= c > 0 on compacts

    def __post_init__(self):
        d = self.density
        if isinstance(d, Constant):
            if not d.c > 0:
                raise ValueError("weight is degenerate (zero mass)")
            if self.positive_on is None:
                object.__setattr__(self, "positive_on", self.support)
            return
        if not isinstance(d, (Radial, Generic)):
            raise ValueError("density must be Constant, Radial or Generic")
        # sampling nondegeneracy check at double precision
        vals = [float(_density_value(d, z)) for z in _probe_points(self.support)]
        if min(vals) < -1e-12:
            raise ValueError("weight must be nonnegative")
        if max(vals) <= 0.0:
            raise ValueError("weight is degenerate (zero mass)")


def _probe_points(support: Region, per_axis: int = 12):
    r = bounding_radius(support)
    pts = []
    for i in range(per_axis):
        for j in range(per_axis):
            z = complex(-r + (2 * r) * (i + 0.5) / per_axis, -r + (2 * r) * (j + 0.5) / per_axis)
            if contains(support, z):
                pts.append(z)
    if not pts:
        raise ValueError("support has no probe points, region looks degenerate")
    return pts


def _density_value(density, z):
    if isinstance(density, Constant):
        return mp.mpf(density.c)
    if isinstance(density, Radial):
        return density.profile(abs(z))
    return density.fn(z)


def weight_value(w: Weight, z) -> object:
    """v(z), zero off the support."""
    z = mp.mpc(z)
    if not contains(w.support, complex(z)):
        return mp.mpf(0)
    return _density_value(w.density, z)


def _density_key(density) -> str:
    if isinstance(density, Constant):
        return f"const:{density.c!r}"
    if isinstance(density, Radial):
        return f"radial:{density.label}:{density.poly_degree}"
    return f"generic:{density.label}"


def weight_key(w: Weight) -> str:
    return f"{_density_key(w.density)}|{region_key(w.support)}"


# ----------------------------------------------------------- quadrature rules

@dataclass
class _PolarRule:
    center: complex
    rho: list    # radial nodes, mpf
    rw: list     # radial weights including the rho jacobian, mpf
    ntheta: int


@dataclass
class _FlatRule:
    nodes: list
    weights: list


def _polar(center, lo, hi, degree, prec) -> _PolarRule:
    n_r = max(1, math.ceil((degree + 2) / 2))
    xs, ws = gauss_legendre(n_r, prec)
    with mp.workprec(prec + 10):
        rho, rw = map_rule(xs, ws, mp.mpf(lo), mp.mpf(hi))
        rw = [w * r for w, r in zip(rw, rho)]
    return _PolarRule(center, rho, rw, degree + 1)


def _triangle_rule(a, b, c, degree, prec):
    """Tensor rule on a triangle via the collapsed-square map, exact for
    total degree <= degree."""
    n_u = max(1, math.ceil((degree + 2) / 2))
    n_v = max(1, math.ceil((degree + 1) / 2))
    xu, wu = gauss_legendre(n_u, prec)
    xv, wv = gauss_legendre(n_v, prec)
    with mp.workprec(prec + 10):
        a, b, c = mp.mpc(a), mp.mpc(b), mp.mpc(c)
        area2 = abs(mp.im(mp.conj(b - a) * (c - a)))  # twice the area
        us, uw = map_rule(xu, wu, mp.mpf(0), mp.mpf(1))
        vs, vw = map_rule(xv, wv, mp.mpf(0), mp.mpf(1))
        nodes, weights = [], []
        for u, wu_ in zip(us, uw):
            for v, wv_ in zip(vs, vw):
                nodes.append(a + u * ((1 - v) * (b - a) + v * (c - a)))
                weights.append(wu_ * wv_ * area2 * u)
    return nodes, weights


def _is_convex_ring(vs) -> bool:
    n = len(vs)
    for i in range(n):
        a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        if (b.real - a.real) * (c.imag - b.imag) - (b.imag - a.imag) * (c.real - b.real) < 0:
            return False
    return True


def _triangulate(vs):
    if _is_convex_ring(vs):
        return [(vs[0], vs[i], vs[i + 1]) for i in range(1, len(vs) - 1)]
    # ear clipping for simple non-convex rings
    idx = list(range(len(vs)))
    tris = []

    def cross(o, a, b):
        return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)

    def inside(p, a, b, c):
        # closed triangle: a vertex exactly on a diagonal must block the ear
        d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
        return d1 >= 0 and d2 >= 0 and d3 >= 0

    guard = 0
    while len(idx) > 3 and guard < 10000:
        guard += 1
        clipped = False
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = vs[i0], vs[i1], vs[i2]
            if cross(a, b, c) <= 0:
                continue
            if any(inside(vs[j], a, b, c) for j in idx if j not in (i0, i1, i2)):
                continue
            tris.append((a, b, c))
            idx.pop(k)
            clipped = True
            break
        if not clipped:
            raise ValueError("triangulation failed; polygon may be degenerate")
    tris.append((vs[idx[0]], vs[idx[1]], vs[idx[2]]))
    return tris


def _rep_point(region: Region) -> complex:
    if isinstance(region, Disc):
        return region.center
    if isinstance(region, Annulus):
        return region.center + (region.inner + region.outer) / 2.0
    if isinstance(region, Polygon):
        a, b, c = _triangulate(region.vertices)[0]
        return (a + b + c) / 3.0
    if isinstance(region, UnionRegion):
        return _rep_point(region.parts[0])
    raise TypeError


def _bounding_circle(region: Region):
    if isinstance(region, Disc):
        return region.center, region.radius
    if isinstance(region, Annulus):
        return region.center, region.outer
    if isinstance(region, Polygon):
        c = sum(region.vertices) / len(region.vertices)
        return c, max(abs(v - c) for v in region.vertices)
    if isinstance(region, UnionRegion):
        circles = [_bounding_circle(p) for p in region.parts]
        c = sum(ci for ci, _ in circles) / len(circles)
        return c, max(abs(ci - c) + ri for ci, ri in circles)
    raise TypeError


def _disjoint(a: Region, b: Region) -> bool:
    ca, ra = _bounding_circle(a)
    cb, rb = _bounding_circle(b)
    if abs(ca - cb) >= ra + rb - 1e-15:
        return True
    if isinstance(a, Disc) and isinstance(b, Disc):
        return abs(a.center - b.center) >= a.radius + b.radius - 1e-15
    from .region import boundary_points  # local import to dodge cycles

    for first, second in ((a, b), (b, a)):
        if _strictly_inside(second, _rep_point(first), 1e-12):
            return False
        for z in boundary_points(first, 512):
            if _strictly_inside(second, complex(z), 1e-12):
                return False
    return True


def _build_rule(support: Region, degree: int, prec: int):
    if isinstance(support, Disc):
        return _polar(support.center, 0, support.radius, degree, prec)
    if isinstance(support, Annulus):
        return _polar(support.center, support.inner, support.outer, degree, prec)
    if isinstance(support, Polygon):
        nodes, weights = [], []
        for a, b, c in _triangulate(support.vertices):
            ns, ws = _triangle_rule(a, b, c, degree, prec)
            nodes.extend(ns)
            weights.extend(ws)
        return _FlatRule(nodes, weights)
    if isinstance(support, UnionRegion):
        parts = support.parts
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if not _disjoint(parts[i], parts[j]):
                    raise ValueError(UNION_MSG)
        nodes, weights = [], []
        for p in parts:
            ns, ws = _materialize(_build_rule(p, degree, prec), prec)
            nodes.extend(ns)
            weights.extend(ws)
        return _FlatRule(nodes, weights)
    raise TypeError(f"not a region: {support!r}")


def _materialize(rule, prec):
    if isinstance(rule, _FlatRule):
        return rule.nodes, rule.weights
    with mp.workprec(prec + 10):
        T = rule.ntheta
        step = 2 * mp.pi / T
        nodes, weights = [], []
        for r, w in zip(rule.rho, rule.rw):
            for t in range(T):
                nodes.append(rule.center + r * mp.expjpi(mp.mpf(2 * t) / T))
                weights.append(w * step)
    return nodes, weights


def quadrature(support: Region, design_degree: int, precision_bits: int = 128):
    """Nodes and weights integrating polynomials in (z, conj z) of total
    degree <= design_degree exactly over the support."""
    if design_degree < 0:
        raise ValueError("design degree must be >= 0")
    rule = _build_rule(support, design_degree, precision_bits)
    return _materialize(rule, precision_bits)


# ------------------------------------------------------------- moment tables

@dataclass
class MomentTable:
    kind: str              # "plain" | "gaussian"
    b0: float
    maxdeg: int
    precision_bits: int
    scale_radius: object   # mpf; monomials are (z / scale_radius)^a
    rows: list             # rows[a][b], b <= a
    diagonal: bool
    weight_key: str
    design_degree: int

    def entry(self, a: int, b: int):
        """Scaled moment for monomials (z/R0)^a conj(z/R0)^b."""
        if max(a, b) > self.maxdeg:
            raise IndexError("degree beyond table")
        if b <= a:
            return self.rows[a][b]
        return mp.conj(self.rows[b][a])

    def raw_entry(self, a: int, b: int):
        """Unscaled moment mu_ab."""
        with mp.workprec(self.precision_bits + 10):
            return self.entry(a, b) * self.scale_radius ** (a + b)


def _gaussian_excess(b0: float, rmax: float, prec: int) -> int:
    """Extra design degrees resolving exp(-b0 |z|^2/2) on |z| <= rmax: the
    smallest K with (b0 rmax^2/2)^(K+1)/(K+1)! below the emission floor."""
    x = float(b0) * float(rmax) ** 2 / 2.0
    target = -(emission_digits(prec) + 10) * math.log(10.0)
    lx = math.log(x) if x > 0 else -700.0
    K = 1
    while (K + 1) * lx - math.lgamma(K + 2) > target:
        K += 1
    return max(30, 2 * K)


def _default_precision(maxdeg: int) -> int:
    return 128 if maxdeg <= 24 else 256


_GENERIC_MARGIN = 48  # oversampling degrees for non-polynomial densities on the 2d path


def _density_margin(density) -> int:
    if isinstance(density, Constant):
        return 0
    if isinstance(density, Radial) and density.poly_degree is not None:
        k = density.poly_degree
        return k if k % 2 == 0 else k + _GENERIC_MARGIN  # odd |z|^k is not polynomial in (x, y)
    return _GENERIC_MARGIN


def _radial_applicable(w: Weight) -> bool:
    if not isinstance(w.support, (Disc, Annulus)):
        return False
    if w.support.center != 0:
        return False
    return isinstance(w.density, (Constant, Radial))


def _radial_interval(support):
    if isinstance(support, Disc):
        return mp.mpf(0), mp.mpf(support.radius)
    return mp.mpf(support.inner), mp.mpf(support.outer)


def _radial_table(w, kind, maxdeg, prec, b0):
    lo, hi = _radial_interval(w.support)
    d = w.density
    poly_deg = 0 if isinstance(d, Constant) else d.poly_degree
    gaussian = kind == "gaussian"
    if poly_deg is not None:
        need = 2 * maxdeg + 1 + poly_deg
        if gaussian:
            need += _gaussian_excess(b0, float(hi), prec)
        xs, ws = gauss_legendre(math.ceil((need + 1) / 2), prec)
        rho, rw = map_rule(xs, ws, lo, hi)
    else:
        need = -1  # adaptive double-exponential rule, no polynomial design degree
        pairs = tanh_sinh(prec)
        rho, rw = map_rule([x for x, _ in pairs], [wt for _, wt in pairs], lo, hi)
    R0 = mp.mpf(bounding_radius(w.support))
    b0m = mp.mpf(b0)
    two_pi = 2 * mp.pi
    data, ratio = [], []
    for r, wt in zip(rho, rw):
        val = mp.mpf(d.c) if isinstance(d, Constant) else mp.mpf(d.profile(r))
        if gaussian:
            val *= mp.exp(-b0m * r * r / 2)
        data.append(two_pi * wt * r * val)
        ratio.append((r / R0) ** 2)
    rows = []
    for a in range(maxdeg + 1):
        s = mp.fsum(data)
        if not s > 0:
            raise DegenerateMomentError(DEGENERATE_MSG)
        rows.append([mp.mpf(0)] * a + [s])
        if a < maxdeg:
            data = [dv * rv for dv, rv in zip(data, ratio)]
    return rows, R0, need


def _polar_dft_table(w, rule: _PolarRule, kind, maxdeg, prec, b0):
    """Origin moments via centered angular DFT sums plus an exact binomial
    shift; a pure reassociation of the quadrature sum."""
    R0 = mp.mpf(bounding_radius(w.support))
    b0m = mp.mpf(b0)
    T = rule.ntheta
    step = 2 * mp.pi / T
    omega = [mp.expjpi(mp.mpf(2 * t) / T) for t in range(T)]
    center = mp.mpc(rule.center)
    gaussian = kind == "gaussian"
    dens = w.density

    # angular sums C_i[k] = sum_t c_{i,t} omega^{t k}, k = 0..maxdeg
    chat = [[None] * (maxdeg + 1) for _ in range(len(rule.rho))]
    const_val = mp.mpf(dens.c) if isinstance(dens, Constant) else None
    for i, (r, rwt) in enumerate(zip(rule.rho, rule.rw)):
        base = rwt * step
        cdata = []
        for t in range(T):
            z = center + r * omega[t]
            val = base * const_val if const_val is not None else base * mp.mpf(_density_value(dens, z))
            if gaussian:
                val *= mp.exp(-b0m * (mp.re(z) ** 2 + mp.im(z) ** 2) / 2)
            cdata.append(val)
        for k in range(maxdeg + 1):
            acc = mp.mpc(0)
            for t in range(T):
                acc += cdata[t] * omega[(t * k) % T]
            chat[i][k] = acc

    # scaled centered moments nu[alpha][beta], alpha >= beta
    rr = [r / R0 for r in rule.rho]
    powers = []
    for r in rr:
        row, cur = [mp.mpf(1)], mp.mpf(1)
        for _ in range(2 * maxdeg):
            cur *= r
            row.append(cur)
        powers.append(row)
    nu = [[None] * (maxdeg + 1) for _ in range(maxdeg + 1)]
    for alpha in range(maxdeg + 1):
        for beta in range(alpha + 1):
            acc = mp.mpc(0)
            for i in range(len(rr)):
                acc += powers[i][alpha + beta] * chat[i][alpha - beta]
            nu[alpha][beta] = acc
            if beta != alpha:
                nu[beta][alpha] = mp.conj(acc)

    if center == 0:
        rows = []
        for a in range(maxdeg + 1):
            row = [nu[a][b] for b in range(a)]
            row.append(mp.re(nu[a][a]))
            rows.append(row)
        return rows, R0

    chat0 = center / R0
    binom = [[mp.mpc(math.comb(a, k)) for k in range(a + 1)] for a in range(maxdeg + 1)]
    kmat = []
    for a in range(maxdeg + 1):
        pw, cur = [], mp.mpc(1)
        for j in range(a + 1):
            pw.append(cur)  # chat0^j
            cur *= chat0
        kmat.append([binom[a][al] * pw[a - al] for al in range(a + 1)])
    kmatc = [[mp.conj(v) for v in row] for row in kmat]
    rows = []
    for a in range(maxdeg + 1):
        row = []
        for b in range(a + 1):
            acc = mp.mpc(0)
            for al in range(a + 1):
                ka = kmat[a][al]
                nual = nu[al]
                kcb = kmatc[b]
                for be in range(b + 1):
                    acc += ka * kcb[be] * nual[be]
            row.append(mp.re(acc) if b == a else acc)
        rows.append(row)
    return rows, R0


def _flat_table(w, rule: _FlatRule, kind, maxdeg, prec, b0):
    R0 = mp.mpf(bounding_radius(w.support))
    b0m = mp.mpf(b0)
    gaussian = kind == "gaussian"
    dens = w.density
    cs, zs = [], []
    for z, wt in zip(rule.nodes, rule.weights):
        val = wt * mp.mpf(dens.c) if isinstance(dens, Constant) else wt * mp.mpf(_density_value(dens, z))
        if gaussian:
            val *= mp.exp(-b0m * (mp.re(z) ** 2 + mp.im(z) ** 2) / 2)
        cs.append(val)
        zs.append(mp.mpc(z) / R0)
    mpow = [[mp.mpc(1)] * len(zs)]
    for a in range(maxdeg):
        mpow.append([p * z for p, z in zip(mpow[-1], zs)])
    rows = []
    for a in range(maxdeg + 1):
        row = []
        pa = mpow[a]
        for b in range(a + 1):
            pb = mpow[b]
            acc = mp.mpc(0)
            for i in range(len(zs)):
                acc += cs[i] * pa[i] * mp.conj(pb[i])
            row.append(mp.re(acc) if b == a else acc)
        rows.append(row)
    return rows, R0


def mixed_moments(
    w: Weight,
    kind: str,
    maxdeg: int,
    precision_bits: Optional[int] = None,
    b0: float = 2.0,
    method: str = "auto",
    design_margin: Optional[int] = None,
) -> MomentTable:
    """Moment table mu_ab for 0 <= a, b <= maxdeg, Hermitian by construction.

    method "auto" takes the diagonal radial path when the support is a disc
    or annulus centered at the origin with a Constant/Radial density, and
    the generic two-dimensional path otherwise. On the 2d path the design
    degree covers the monomials exactly; non-polynomial densities get an
    oversampling margin (default 48 degrees, override with design_margin),
    so results for such densities are approximate, not design-exact.
    """
    if kind not in ("plain", "gaussian"):
        raise ValueError("kind must be 'plain' or 'gaussian'")
    if maxdeg < 0:
        raise ValueError("maxdeg must be >= 0")
    if method not in ("auto", "radial", "generic"):
        raise ValueError("method must be auto, radial or generic")
    prec = precision_bits if precision_bits is not None else _default_precision(maxdeg)
    radial = _radial_applicable(w) if method == "auto" else (method == "radial")
    if method == "radial" and not _radial_applicable(w):
        raise ValueError("radial moment path needs an origin-centered disc/annulus with Constant/Radial density")

    with mp.workprec(prec):
        if radial:
            rows, R0, degree_used = _radial_table(w, kind, maxdeg, prec, b0)
            diagonal = True
        else:
            degree_used = 2 * maxdeg
            if kind == "gaussian":
                degree_used += _gaussian_excess(b0, bounding_radius(w.support), prec)
            degree_used += design_margin if design_margin is not None else _density_margin(w.density)
            rule = _build_rule(w.support, degree_used, prec)
            if isinstance(rule, _PolarRule):
                rows, R0 = _polar_dft_table(w, rule, kind, maxdeg, prec, b0)
            else:
                rows, R0 = _flat_table(w, rule, kind, maxdeg, prec, b0)
            diagonal = False
        table = MomentTable(
            kind=kind,
            b0=float(b0),
            maxdeg=maxdeg,
            precision_bits=prec,
            scale_radius=R0,
            rows=rows,
            diagonal=diagonal,
            weight_key=weight_key(w),
            design_degree=degree_used,
        )
        if not diagonal:
            full = [[table.entry(a, b) for b in range(maxdeg + 1)] for a in range(maxdeg + 1)]
            try:
                hermitian_cholesky(full, prec)
            except DegenerateMomentError as e:
                raise DegenerateMomentError(DEGENERATE_MSG) from e
        return table


# ------------------------------------------------------------- 3d reduction

@dataclass(frozen=True)
class Potential3D:
    evaluator: Callable          # (x1, x2, x3) -> value >= 0
    support_box: tuple           # ((x1lo, x1hi), (x2lo, x2hi), (x3lo, x3hi))


@dataclass(frozen=True)
class SectionGrid:
    nodes: int = 64      # Gauss-Legendre count on the located section
    scan: int = 257      # coarse positivity scan along x3
    bisect_tol: float = 1e-15


def _section_integral(V: Potential3D, x1, x2, grid: SectionGrid, prec: int):
    """Integrate V(x1, x2, .) over its positive section of the box interval.

    The section endpoints are located by a scan plus bisection, so indicator
    profiles integrate to full accuracy; sections are assumed to be single
    intervals (multi-interval sections lose accuracy in the gaps).
    """
    lo, hi = V.support_box[2]
    with mp.workprec(prec):
        lo, hi = mp.mpf(lo), mp.mpf(hi)
        n = grid.scan
        ts = [lo + (hi - lo) * k / (n - 1) for k in range(n)]
        pos = [k for k, t in enumerate(ts) if V.evaluator(x1, x2, t) > 0]
        if not pos:
            return mp.mpf(0)

        def bisect(a, b):
            # V(..a) <= 0 < V(..b); returns the crossing within bisect_tol
            for _ in range(80):
                if abs(b - a) <= grid.bisect_tol:
                    break
                mid = (a + b) / 2
                if V.evaluator(x1, x2, mid) > 0:
                    b = mid
                else:
                    a = mid
            return b

        left = ts[pos[0]] if pos[0] == 0 else bisect(ts[pos[0] - 1], ts[pos[0]])
        right = ts[pos[-1]] if pos[-1] == n - 1 else bisect(ts[pos[-1] + 1], ts[pos[-1]])
        if not right > left:
            return mp.mpf(0)
        xs, ws = gauss_legendre(grid.nodes, prec)
        nodes, wts = map_rule(xs, ws, left, right)
        return mp.fsum(wt * V.evaluator(x1, x2, t) for t, wt in zip(nodes, wts))


def reduce_3d(V: Potential3D, grid: Optional[SectionGrid] = None, support: Optional[Region] = None) -> Weight:
    """Collapse a 3d potential to a plane weight w(z) = int V(x1, x2, x3) dx3."""
    grid = grid or SectionGrid()
    (x1lo, x1hi), (x2lo, x2hi), _ = V.support_box
    if support is None:
        support = Polygon(
            (
                complex(x1lo, x2lo),
                complex(x1hi, x2lo),
                complex(x1hi, x2hi),
                complex(x1lo, x2hi),
            )
        )

    def fn(z):
        return _section_integral(V, mp.re(z), mp.im(z), grid, mp.prec)

    return Weight(support=support, density=Generic(fn, label="reduce3d"))


def radialized(w: Weight, center: complex = 0j, positive_on: Optional[Region] = None) -> Weight:
    """Re-tag a weight the caller asserts is radial about the origin, so the
    diagonal moment path applies. The profile samples the density on the
    positive real ray."""
    if complex(center) != 0j:
        raise ValueError("radialization only supports the origin")
    if not isinstance(w.support, (Disc, Annulus)) or w.support.center != 0:
        raise ValueError("radialization needs an origin-centered disc/annulus support")
    dens = w.density

    def profile(r):
        return _density_value(dens, mp.mpc(r))

    return Weight(
        support=w.support,
        density=Radial(profile, poly_degree=None, label="radialized"),
        positive_on=positive_on if positive_on is not None else w.positive_on,
    )


# ------------------------------------------------------------ config + json

def weight_from_config(rec: dict) -> Weight:
    if not isinstance(rec, dict) or "density" not in rec:
        raise ValueError("weight record needs a 'density'")
    dens = rec["density"]
    if not isinstance(dens, dict) or "kind" not in dens:
        raise ValueError("density record needs a 'kind'")
    kind = dens["kind"]
    if kind == "ball3d_reduction":
        R = float(dens.get("R", 1.0))
        if not R > 0:
            raise ValueError("ball radius must be positive")
        if rec.get("support") not in (None, "auto"):
            raise ValueError("ball3d_reduction fixes its own support; omit it or use 'auto'")
        return ball_reduction_weight(R)
    if "support" not in rec:
        raise ValueError("weight record needs a 'support'")
    support = region_from_config(rec["support"])
    if kind == "constant":
        return Weight(support, Constant(float(dens.get("c", 1.0))))
    if kind == "radial":
        prof = dens.get("profile", "chi")
        if prof == "chi":
            return Weight(support, Constant(1.0))
        if isinstance(prof, str) and prof.startswith("power:"):
            k = int(prof.split(":", 1)[1])
            if k < 0:
                raise ValueError("power profile needs k >= 0")
            return Weight(support, Radial(lambda r, _k=k: r**_k, poly_degree=k, label=f"power:{k}"))
        raise ValueError(f"unknown radial profile {prof!r}")
    raise ValueError(f"unknown density kind {kind!r}")


def ball_reduction_weight(R: float = 1.0, grid: Optional[SectionGrid] = None) -> Weight:
    """Weight from collapsing the indicator of the ball of radius R along x3;
    the chord integral gives 2 sqrt(R^2 - |z|^2) on the disc shadow."""
    R = float(R)
    R2 = R * R

    def ball(x1, x2, x3):
        return mp.mpf(1) if x1 * x1 + x2 * x2 + x3 * x3 <= R2 else mp.mpf(0)

    V = Potential3D(ball, ((-R, R), (-R, R), (-R, R)))
    w = reduce_3d(V, grid=grid, support=Disc(0j, R))
    w = radialized(w, positive_on=Disc(0j, R))
    return Weight(w.support, Radial(w.density.profile, None, label=f"ball3d:{R}"), positive_on=Disc(0j, R))


def weight_to_config(w: Weight) -> dict:
    d = w.density
    if isinstance(d, Constant):
        dens = {"kind": "constant", "c": d.c}
    elif isinstance(d, Radial) and d.label.startswith("power:"):
        dens = {"kind": "radial", "profile": d.label}
    elif isinstance(d, Radial) and d.label.startswith("ball3d:"):
        return {"support": "auto", "density": {"kind": "ball3d_reduction", "R": float(d.label.split(":", 1)[1])}}
    else:
        raise ValueError("weight has no config form (callable density)")
    return {"support": region_to_config(w.support), "density": dens}


def _num_str(x, digits):
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def moment_table_to_json(table: MomentTable) -> str:
    digits = emission_digits(table.precision_bits) + 5
    with mp.workprec(table.precision_bits + 10):
        rows = [
            [[_num_str(mp.re(v), digits), _num_str(mp.im(v), digits)] for v in row]
            for row in table.rows
        ]
        payload = {
            "kind": table.kind,
            "b0": table.b0,
            "maxdeg": table.maxdeg,
            "precision_bits": table.precision_bits,
            "scale_radius": _num_str(table.scale_radius, digits),
            "diagonal": table.diagonal,
            "weight_key": table.weight_key,
            "design_degree": table.design_degree,
            "rows": rows,
        }
    return json.dumps(payload, indent=1)


def moment_table_from_json(text: str) -> MomentTable:
    payload = json.loads(text)
    prec = int(payload["precision_bits"])
    with mp.workprec(prec + 10):
        rows = []
        for a, row in enumerate(payload["rows"]):
            out = []
            for b, (re_s, im_s) in enumerate(row):
                if b == a:
                    out.append(mp.mpf(re_s))
                else:
                    out.append(mp.mpc(mp.mpf(re_s), mp.mpf(im_s)))
            rows.append(out)
        return MomentTable(
            kind=payload["kind"],
            b0=float(payload["b0"]),
            maxdeg=int(payload["maxdeg"]),
            precision_bits=prec,
            scale_radius=mp.mpf(payload["scale_radius"]),
            rows=rows,
            diagonal=bool(payload["diagonal"]),
            weight_key=payload["weight_key"],
            design_degree=int(payload["design_degree"]),
        )
