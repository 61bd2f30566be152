"""Quadrature for the reflection-weighted measure.

The measure is d(mu) = omega_k(x) dx, realized in polar form as
r^(N + 2*gamma - 1) * omega_k(xi) dr dnu(xi) with nu the surface measure on
the unit sphere.  Radial integration handles the two improper ends that the
extremizer sweeps produce: an integrable power singularity at r = 0 and a
power-law tail r^s with s < -1 at infinity.  Both get dedicated Gauss-Jacobi
rules so the 1/eps mass of near-extremal profiles is captured exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma as gamma_fn
from math import pi

import numpy as np
from scipy.special import roots_jacobi

from .reflection import RootSystem, reflect, weight

__all__ = [
    "SphericalRule",
    "RadialGrid",
    "WeightedIntegral",
    "DivergenceError",
    "sphere_surface",
    "sphere_rule",
    "jitter_off_hyperplanes",
    "sphere_weight_integral",
    "radial_nodes",
    "integrate_radial",
    "integrate_measure",
    "integration_by_parts_residual",
    "reflected_measure_invariance",
]

MAX_SPHERE_DIM = 8


class DivergenceError(ArithmeticError):
    """An analytic head or tail does not converge."""


@dataclass(frozen=True)
class SphericalRule:
    dimension: int
    order: int
    nodes: np.ndarray  # (M, N) unit vectors
    weights: np.ndarray  # (M,) positive, summing to |S^(N-1)|


@dataclass(frozen=True)
class RadialGrid:
    """Breakpoints tile [0, R_max]; beyond R_max a tail mode may apply.

    tail_mode: "none" (truncate), "analytic-power" (exact power antiderivative,
    valid when the integrand is an exact power beyond R_max), or
    "substitution" (r = R/t with a Gauss-Jacobi rule matched to the decay).
    """

    breakpoints: tuple
    nodes_per_interval: int = 64
    tail_mode: str = "none"

    def __post_init__(self):
        b = self.breakpoints
        if len(b) < 2 or any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.nodes_per_interval < 8:
            raise ValueError("need at least 8 nodes per interval")
        if self.tail_mode not in ("none", "analytic-power", "substitution"):
            raise ValueError(f"unknown tail mode {self.tail_mode!r}")


@dataclass(frozen=True)
class WeightedIntegral:
    value: float
    estimated_error: float


def sphere_surface(N: int) -> float:
    return 2.0 * pi ** (N / 2.0) / gamma_fn(N / 2.0)


@lru_cache(maxsize=None)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=None)
def _jacobi(n: int, alpha: float, beta: float):
    return roots_jacobi(n, alpha, beta)


@lru_cache(maxsize=None)
def sphere_rule(N: int, order: int) -> SphericalRule:
    """Deterministic rule on S^(N-1), exact for polynomials up to ``order``.

    N = 2 uses the uniform angular rule; N >= 3 splits off the first
    coordinate, xi = (c, sqrt(1-c^2) eta), with a Gauss-Gegenbauer rule in c
    of weight (1-c^2)^((N-3)/2) tensored against the rule on S^(N-2).
    """
    if not 2 <= N <= MAX_SPHERE_DIM:
        raise ValueError(f"sphere rule supports 2 <= N <= {MAX_SPHERE_DIM}")
    if order < 1:
        raise ValueError("order must be positive")
    if N == 2:
        m = 2 * (order + 1)
        theta = (np.arange(m) + 0.5) * (2.0 * pi / m)
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(m, 2.0 * pi / m)
        return SphericalRule(N, order, nodes, weights)
    sub = sphere_rule(N - 1, order)
    lam = (N - 3) / 2.0
    npts = max(order, 2)
    c, w = _jacobi(npts, lam, lam)
    s = np.sqrt(np.clip(1.0 - c**2, 0.0, None))
    nodes = np.empty((len(c) * len(sub.nodes), N))
    weights = np.empty(len(c) * len(sub.nodes))
    m = len(sub.nodes)
    for i in range(len(c)):
        nodes[i * m : (i + 1) * m, 0] = c[i]
        nodes[i * m : (i + 1) * m, 1:] = s[i] * sub.nodes
        weights[i * m : (i + 1) * m] = w[i] * sub.weights
    return SphericalRule(N, order, nodes, weights)


def _rotation(N: int, i: int, j: int, angle: float) -> np.ndarray:
    R = np.eye(N)
    R[i, i] = R[j, j] = np.cos(angle)
    R[i, j] = -np.sin(angle)
    R[j, i] = np.sin(angle)
    return R


def jitter_off_hyperplanes(rule: SphericalRule, rs: RootSystem) -> SphericalRule:
    """Rotate all nodes by a fixed small angle if any node sits on a
    reflection hyperplane (within 1e-9); keeps integrands with 1/<alpha,x>
    factors finite without breaking polynomial exactness."""
    active = [root.vector for root, _ in rs.active_roots()]
    if not active:
        return rule
    nodes = rule.nodes
    N = rule.dimension
    for attempt in range(6):
        dist = min(np.min(np.abs(nodes @ a)) for a in active)
        if dist > 1e-9:
            break
        R = _rotation(N, 0, 1 + (attempt % (N - 1)), 1e-3 * (attempt + 1))
        nodes = nodes @ R.T
    else:
        raise RuntimeError("could not jitter sphere nodes off all hyperplanes")
    if nodes is rule.nodes:
        return rule
    return SphericalRule(rule.dimension, rule.order, nodes, rule.weights)


def sphere_weight_integral(rs: RootSystem, rule: SphericalRule) -> float:
    """S_k = integral of omega_k over the unit sphere."""
    return float(np.sum(rule.weights * weight(rs, rule.nodes)))


# ---------------------------------------------------------------------------
# radial integration


def radial_nodes(grid: RadialGrid, n: int | None = None):
    """Plain composite Gauss nodes/weights for the finite part [0, R_max]."""
    if n is None:
        n = grid.nodes_per_interval
    x, w = _leggauss(n)
    rs, ws = [], []
    for a, b in zip(grid.breakpoints[:-1], grid.breakpoints[1:]):
        rs.append((a + b) / 2.0 + (b - a) / 2.0 * x)
        ws.append((b - a) / 2.0 * w)
    return np.concatenate(rs), np.concatenate(ws)


def _radial_value(g, exponent, grid, head_power, tail_power, n):
    total = 0.0
    bps = grid.breakpoints
    first = True
    for a, b in zip(bps[:-1], bps[1:]):
        if first and a == 0.0 and head_power is not None:
            if head_power <= -1.0:
                raise DivergenceError("head exponent <= -1 is not integrable")
            # integral of r^hp * [g(r) r^(exponent-hp)] with the power as weight
            x, w = _jacobi(n, 0.0, head_power)
            r = b * (x + 1.0) / 2.0
            phi = np.asarray(g(r), dtype=float) * r ** (exponent - head_power)
            total += (b / 2.0) ** (head_power + 1.0) * float(np.sum(w * phi))
        else:
            x, w = _leggauss(n)
            r = (a + b) / 2.0 + (b - a) / 2.0 * x
            vals = np.asarray(g(r), dtype=float) * r**exponent
            total += (b - a) / 2.0 * float(np.sum(w * vals))
        first = False
    if grid.tail_mode != "none":
        if tail_power is None:
            raise ValueError("tail mode requires the tail decay exponent")
        if tail_power >= -1.0:
            raise DivergenceError("tail exponent >= -1 diverges")
        R = bps[-1]
        if grid.tail_mode == "analytic-power":
            gR = float(np.asarray(g(np.array([R])), dtype=float)[0])
            total += gR * R ** (exponent + 1.0) / (-(tail_power + 1.0))
        else:
            # r = R/t; integrand ~ t^beta near t=0 with beta = -tail_power-2
            beta = -tail_power - 2.0
            x, w = _jacobi(n, 0.0, beta)
            t = (x + 1.0) / 2.0
            r = R / t
            psi = np.asarray(g(r), dtype=float) * r**exponent * R / t ** (2.0 + beta)
            total += 0.5 ** (beta + 1.0) * float(np.sum(w * psi))
    return total


def integrate_radial(
    g,
    exponent: float,
    grid: RadialGrid,
    head_power: float | None = None,
    tail_power: float | None = None,
) -> WeightedIntegral:
    """Integral of g(r) r^exponent dr over [0, R_max] plus the grid's tail.

    ``head_power`` / ``tail_power`` give the combined power behavior of
    g(r) r^exponent at the respective end; the head power switches the first
    interval to a Gauss-Jacobi rule with that weight.
    """
    n = grid.nodes_per_interval
    v = _radial_value(g, exponent, grid, head_power, tail_power, n)
    v2 = _radial_value(g, exponent, grid, head_power, tail_power, max(n // 2, 8))
    return WeightedIntegral(v, abs(v - v2))


# ---------------------------------------------------------------------------
# measure integration over R^N


def _measure_sum(rs, f, r, wr, rule_nodes, wsph, exponent):
    X = (r[:, None, None] * rule_nodes[None, :, :]).reshape(-1, rs.dimension)
    vals = np.asarray(f(X), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = X[np.argmax(~np.isfinite(vals))]
        raise ValueError(f"integrand not finite at node {bad}")
    vals = vals.reshape(len(r), len(rule_nodes))
    return float((wr * r**exponent) @ vals @ wsph)


def integrate_measure(
    rs: RootSystem, f, grid: RadialGrid, rule: SphericalRule
) -> WeightedIntegral:
    """Integral of f against omega_k(x) dx over the ball of radius R_max.

    f must accept an (M, N) array of points and return (M,) values.
    """
    if rule.dimension != rs.dimension:
        raise ValueError("spherical rule dimension mismatches the root system")
    rule = jitter_off_hyperplanes(rule, rs)
    wsph = rule.weights * weight(rs, rule.nodes)
    exponent = rs.dimension + 2.0 * rs.gamma - 1.0
    r, wr = radial_nodes(grid)
    v = _measure_sum(rs, f, r, wr, rule.nodes, wsph, exponent)
    r2, wr2 = radial_nodes(grid, max(grid.nodes_per_interval // 2, 8))
    v2 = _measure_sum(rs, f, r2, wr2, rule.nodes, wsph, exponent)
    return WeightedIntegral(v, abs(v - v2))


def integration_by_parts_residual(
    rs: RootSystem, u, v, i: int, grid: RadialGrid, rule: SphericalRule
) -> float:
    """|int T_i(u) v dmu + int u T_i(v) dmu| / (|int T_i(u) v dmu| + 1)."""
    from .dunklnum import dunkl_gradient

    def lhs(X):
        return dunkl_gradient(rs, u, X)[:, i] * v.value(X)

    def rhs(X):
        return u.value(X) * dunkl_gradient(rs, v, X)[:, i]

    a = integrate_measure(rs, lhs, grid, rule).value
    b = integrate_measure(rs, rhs, grid, rule).value
    return abs(a + b) / (abs(a) + 1.0)


def reflected_measure_invariance(
    rs: RootSystem, f, grid: RadialGrid, rule: SphericalRule
) -> float:
    """Max over positive roots of the relative defect
    |int f(sigma_alpha x) dmu - int f dmu|."""
    base = integrate_measure(rs, f, grid, rule).value
    scale = abs(base) + 1.0
    worst = 0.0
    for root in rs.positive_roots:
        refl = integrate_measure(
            rs, lambda X, rt=root: f(reflect(rt, X)), grid, rule
        ).value
        worst = max(worst, abs(refl - base) / scale)
    return worst
