"""Spherical h-harmonics: exact kernel bases of the Dunkl Laplacian on
homogeneous polynomials, orthonormalized on the weighted sphere, plus
spectral expansion, Parseval, and the mean-projection identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
from scipy.interpolate import CubicSpline

from .polyalg import Polynomial, constant, dunkl_laplacian_fast, norm_squared
from .quad import (
    RadialGrid,
    SphericalRule,
    integrate_measure,
    jitter_off_hyperplanes,
    radial_nodes,
    sphere_weight_integral,
)
from .reflection import RootSystem, reflect, weight

__all__ = [
    "HHarmonicBasis",
    "SpectralCoefficients",
    "CrossTermReport",
    "hharmonic_dim",
    "homogeneous_exponents",
    "fraction_kernel",
    "kernel_basis",
    "build_basis",
    "eigenvalue",
    "sphere_eigencheck",
    "expand",
    "reconstruct",
    "parseval_residual",
    "mean_projection_invariance",
    "cross_term_bound_check",
]


def hharmonic_dim(n: int, N: int) -> int:
    """Dimension of the degree-n h-harmonic space,
    C(n+N-1, N-1) - C(n+N-3, N-1)."""
    if n < 0 or N < 2:
        raise ValueError("need n >= 0 and N >= 2")

    def c(a, b):
        return comb(a, b) if a >= 0 else 0

    return c(n + N - 1, N - 1) - c(n + N - 3, N - 1)


def eigenvalue(n: int, nbar) -> float:
    """Sphere-restriction eigenvalue -n(n + nbar - 2)."""
    return -n * (n + nbar - 2)


def homogeneous_exponents(n: int, N: int) -> list:
    """All exponent tuples of total degree n, in a fixed canonical order."""
    if N == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        out.extend((first,) + rest for rest in homogeneous_exponents(n - first, N - 1))
    return out


def fraction_kernel(rows, ncols):
    """Kernel basis of an exact rational matrix given as a list of rows."""
    m = [list(row) for row in rows]
    nrows = len(m)
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for pc, pr in pivots.items():
            v[pc] = -m[pr][fc]
        kernel.append(v)
    return kernel


@dataclass
class HHarmonicBasis:
    degree: int
    dimension: int
    kernel_polys: list  # exact rational kernel of the Dunkl Laplacian
    transform: np.ndarray  # (d, d) orthonormalization, rows are ON combos
    gram: np.ndarray  # post-orthonormalization Gram matrix
    gram_condition: float
    orthonormalized: bool

    def evaluate(self, points) -> np.ndarray:
        """Orthonormal basis values, shape (d, M)."""
        raw = np.array([p.evaluate(points) for p in self.kernel_polys])
        return self.transform @ np.atleast_2d(raw)


def _require_exact(rs: RootSystem):
    if not rs.exact or not all(
        isinstance(k, (int, Fraction)) for k in rs.multiplicities
    ):
        raise ValueError("h-harmonic bases need rational root data")


def kernel_basis(rs: RootSystem, n: int) -> list:
    """Exact basis of homogeneous degree-n polynomials killed by the
    Dunkl Laplacian."""
    _require_exact(rs)
    N = rs.dimension
    src = homogeneous_exponents(n, N)
    if n < 2:
        polys = [Polynomial(N, {e: 1}) for e in src]
    else:
        tgt = homogeneous_exponents(n - 2, N)
        tgt_index = {e: i for i, e in enumerate(tgt)}
        cols = []
        for e in src:
            lap = dunkl_laplacian_fast(rs, Polynomial(N, {e: 1}))
            col = [Fraction(0)] * len(tgt)
            for ee, c in lap.terms.items():
                col[tgt_index[ee]] = c
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))]
        kernel = fraction_kernel(rows, len(src))
        polys = [
            Polynomial(N, {e: c for e, c in zip(src, vec) if c != 0})
            for vec in kernel
        ]
    d = hharmonic_dim(n, N)
    if len(polys) != d:
        raise ArithmeticError(
            f"kernel dimension {len(polys)} != expected d({n}) = {d}"
        )
    return polys


def build_basis(rs: RootSystem, n: int, rule: SphericalRule) -> HHarmonicBasis:
    """Exact kernel basis orthonormalized against the weighted sphere rule."""
    polys = kernel_basis(rs, n)
    d = len(polys)
    rule = jitter_off_hyperplanes(rule, rs)
    wsph = rule.weights * weight(rs, rule.nodes)
    vals = np.array([p.evaluate(rule.nodes) for p in polys])
    gram0 = (vals * wsph) @ vals.T
    cond = float(np.linalg.cond(gram0))
    # modified Gram-Schmidt in the weighted inner product, two passes
    T = np.eye(d)
    V = vals.copy()
    for i in range(d):
        for _ in range(2):
            for j in range(i):
                proj = float(np.sum(wsph * V[i] * V[j]))
                V[i] -= proj * V[j]
                T[i] -= proj * T[j]
        norm = np.sqrt(float(np.sum(wsph * V[i] ** 2)))
        if norm < 1e-13:
            raise ArithmeticError("degenerate h-harmonic Gram matrix")
        V[i] /= norm
        T[i] /= norm
    gram = (V * wsph) @ V.T
    ok = bool(np.max(np.abs(gram - np.eye(d))) < 1e-8)
    return HHarmonicBasis(n, d, polys, T, gram, cond, ok)


def sphere_eigencheck(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Residual r^2 (Dunkl Laplacian p) - (mu_n + lambda_n) p for homogeneous
    p of degree n, mu_n = n(n + nbar - 2); zero iff the sphere restriction is
    an eigenfunction with the standard eigenvalue."""
    _require_exact(rs)
    if not p.is_homogeneous():
        raise ValueError("eigencheck needs a homogeneous polynomial")
    n = p.degree()
    nbar = Fraction(rs.dimension) + 2 * sum(
        Fraction(k) for k in rs.multiplicities
    )
    mu = n * (n + nbar - 2)
    lam = -mu
    lap = dunkl_laplacian_fast(rs, p)
    return norm_squared(p.nvars) * lap - (mu + lam) * p


# ---------------------------------------------------------------------------
# spectral expansion


@dataclass
class SpectralCoefficients:
    n_max: int
    radii: np.ndarray
    radial_weights: np.ndarray
    tables: dict  # (n, i) -> coefficient values at radii
    bases: list  # HHarmonicBasis for n = 0..n_max

    def spline(self, n: int, i: int) -> CubicSpline:
        return CubicSpline(self.radii, self.tables[(n, i)])


def _grid_values(u, r, xi, N):
    X = (r[:, None, None] * xi[None, :, :]).reshape(-1, N)
    f = u.value if hasattr(u, "value") else u
    return np.asarray(f(X), dtype=float).reshape(len(r), len(xi))


def expand(
    rs: RootSystem, u, bases, grid: RadialGrid, rule: SphericalRule
) -> SpectralCoefficients:
    """Tabulate u_{n,i}(r) = int_{S} u(r xi) Y_i^n(xi) omega_k(xi) dnu(xi)."""
    for b in bases:
        if not b.orthonormalized:
            raise ValueError("expansion requires orthonormal bases")
    rule = jitter_off_hyperplanes(rule, rs)
    wsph = rule.weights * weight(rs, rule.nodes)
    r, wr = radial_nodes(grid)
    U = _grid_values(u, r, rule.nodes, rs.dimension)
    tables = {}
    for b in bases:
        Y = b.evaluate(rule.nodes)
        coeffs = U @ (Y * wsph).T  # (Mr, d)
        for i in range(b.dimension):
            tables[(b.degree, i)] = coeffs[:, i]
    return SpectralCoefficients(max(b.degree for b in bases), r, wr, tables, list(bases))


def reconstruct(coeffs: SpectralCoefficients, r: float, xi) -> float:
    """Sum of u_{n,i}(r) Y_i^n(xi) over all tabulated modes."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    total = 0.0
    for b in coeffs.bases:
        Y = b.evaluate(xi)[:, 0]
        for i in range(b.dimension):
            total += coeffs.spline(b.degree, i)(r) * Y[i]
    return float(total)


def parseval_residual(
    rs: RootSystem, u, coeffs: SpectralCoefficients, grid: RadialGrid,
    rule: SphericalRule,
) -> float:
    """Relative gap between int u^2 dmu and the summed squared radial
    coefficients against r^(nbar-1) dr."""
    f = u.value if hasattr(u, "value") else u
    total_sq = integrate_measure(rs, lambda X: np.asarray(f(X)) ** 2, grid, rule).value
    nbar = rs.dimension + 2.0 * rs.gamma
    wpow = coeffs.radial_weights * coeffs.radii ** (nbar - 1.0)
    mode_sum = sum(float(np.sum(wpow * c**2)) for c in coeffs.tables.values())
    return abs(total_sq - mode_sum) / (abs(total_sq) + 1e-300)


def _sphere_mean(rs, u, r, rule, wsph, sk):
    U = _grid_values(u, r, rule.nodes, rs.dimension)
    return (U @ wsph) / sk


def mean_projection_invariance(
    rs: RootSystem, u, grid: RadialGrid, rule: SphericalRule
) -> float:
    """Max over positive roots of sup_r |mean(u o sigma)(r) - mean(u)(r)|,
    means taken against omega_k dnu / S_k."""
    rule = jitter_off_hyperplanes(rule, rs)
    wsph = rule.weights * weight(rs, rule.nodes)
    sk = float(np.sum(wsph))
    r, _ = radial_nodes(grid)
    base = _sphere_mean(rs, u, r, rule, wsph, sk)
    f = u.value if hasattr(u, "value") else u
    worst = 0.0
    for root in rs.positive_roots:
        refl = _sphere_mean(
            rs, lambda X, rt=root: f(reflect(rt, X)), r, rule, wsph, sk
        )
        worst = max(worst, float(np.max(np.abs(refl - base))))
    return worst


@dataclass
class CrossTermReport:
    entries: list  # (root index, lhs, rhs)
    tolerance: float
    passed: bool


def cross_term_bound_check(
    rs: RootSystem, u, grid: RadialGrid, rule: SphericalRule,
    tolerance: float = 1e-8,
) -> CrossTermReport:
    """Per positive root alpha, check
    int (u - u o sigma_alpha) u / |x|^4 dmu <= 2 int (u - mean u)^2 / |x|^4 dmu.
    The corpus must vanish near the origin so both sides converge."""
    rule = jitter_off_hyperplanes(rule, rs)
    wsph = rule.weights * weight(rs, rule.nodes)
    sk = float(np.sum(wsph))
    exponent = rs.dimension + 2.0 * rs.gamma - 1.0
    r, wr = radial_nodes(grid)
    U = _grid_values(u, r, rule.nodes, rs.dimension)
    mean = (U @ wsph) / sk
    wrad = wr * r ** (exponent - 4.0)
    rhs = 2.0 * float(wrad @ ((U - mean[:, None]) ** 2 @ wsph))
    f = u.value if hasattr(u, "value") else u
    entries = []
    ok = True
    for idx, root in enumerate(rs.positive_roots):
        Us = _grid_values(
            lambda X, rt=root: f(reflect(rt, X)), r, rule.nodes, rs.dimension
        )
        lhs = float(wrad @ (((U - Us) * U) @ wsph))
        entries.append((idx, lhs, rhs))
        ok = ok and lhs <= rhs + tolerance * (abs(rhs) + 1.0)
    return CrossTermReport(entries, tolerance, ok)
