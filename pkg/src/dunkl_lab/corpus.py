"""Builders for test-function corpora.

Everything here is C^2 with analytic gradients (and Laplacians/Hessians where
the checks need them): sextic ball bumps, shifted Gaussians, radial shell
bumps, and separable radial-times-harmonic modes.  Bump profiles are exact
polynomials so the 1-D reductions stay quadrature-exact.
"""

from __future__ import annotations

import numpy as np

from .dunklnum import SmoothFunction
from .inequalities import ModeFunction
from .polyalg import Polynomial
from .profiles import PiecewiseProfile, PolyPiece, PowerPiece

__all__ = [
    "ball_bump",
    "shifted_gaussian",
    "radial_shell_bump",
    "bump_radial_profile",
    "mode_function",
    "separable_mode",
    "random_damped_polynomial",
    "domain_bump_corpus",
    "mode_corpus",
]

_INF = float("inf")


def ball_bump(center, radius: float) -> SmoothFunction:
    """u = (1 - |x-c|^2/rho^2)^3 inside the ball, 0 outside; C^2 everywhere."""
    c = np.asarray(center, dtype=float)
    rho2 = float(radius) ** 2
    N = len(c)

    def parts(X):
        D = np.atleast_2d(np.asarray(X, dtype=float)) - c
        q = np.sum(D**2, axis=1) / rho2
        inside = q < 1.0
        w = np.where(inside, 1.0 - q, 0.0)
        return D, q, w, inside

    def value(X):
        _, _, w, _ = parts(X)
        return w**3

    def gradient(X):
        D, _, w, _ = parts(X)
        return -6.0 / rho2 * w[:, None] ** 2 * D

    def laplacian(X):
        _, q, w, _ = parts(X)
        return 24.0 / rho2 * w * q - 6.0 * N / rho2 * w**2

    def hessian(X):
        D, _, w, _ = parts(X)
        H = 24.0 / rho2**2 * w[:, None, None] * np.einsum("mi,mj->mij", D, D)
        H -= 6.0 / rho2 * w[:, None, None] ** 2 * np.eye(N)
        return H

    return SmoothFunction(value, gradient, laplacian, hessian, dimension=N)


def shifted_gaussian(center, scale: float) -> SmoothFunction:
    """u = exp(-|x-c|^2/s^2) with full analytic derivatives."""
    c = np.asarray(center, dtype=float)
    s2 = float(scale) ** 2
    N = len(c)

    def value(X):
        D = np.atleast_2d(np.asarray(X, dtype=float)) - c
        return np.exp(-np.sum(D**2, axis=1) / s2)

    def gradient(X):
        D = np.atleast_2d(np.asarray(X, dtype=float)) - c
        return -2.0 / s2 * value(X)[:, None] * D

    def laplacian(X):
        D = np.atleast_2d(np.asarray(X, dtype=float)) - c
        d2 = np.sum(D**2, axis=1)
        return (4.0 * d2 / s2**2 - 2.0 * N / s2) * np.exp(-d2 / s2)

    def hessian(X):
        D = np.atleast_2d(np.asarray(X, dtype=float)) - c
        v = value(X)
        H = 4.0 / s2**2 * v[:, None, None] * np.einsum("mi,mj->mij", D, D)
        H -= 2.0 / s2 * v[:, None, None] * np.eye(N)
        return H

    return SmoothFunction(value, gradient, laplacian, hessian, dimension=N)


def bump_radial_profile(center: float, width: float) -> PiecewiseProfile:
    """g(r) = (1 - ((r-c)/w)^2)^3 on [c-w, c+w], 0 elsewhere, as exact
    polynomial pieces; requires c > w so the support avoids the origin."""
    if center <= width:
        raise ValueError("profile support must avoid the origin")
    s = np.polynomial.Polynomial([-center / width, 1.0 / width])
    poly = (np.polynomial.Polynomial([1.0]) - s**2) ** 3
    return PiecewiseProfile(
        [
            PowerPiece(0.0, center - width, 0.0, 0.0),
            PolyPiece(center - width, center + width, poly),
            PowerPiece(center + width, _INF, 0.0, 0.0),
        ]
    )


def radial_shell_bump(center: float, width: float, dimension: int) -> SmoothFunction:
    """Radial function u(x) = g(|x|) from the polynomial shell profile."""
    g = bump_radial_profile(center, width)

    def value(X):
        return g.value(np.linalg.norm(np.atleast_2d(X), axis=1))

    def gradient(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r = np.linalg.norm(X, axis=1)
        return (g.deriv(r) / r)[:, None] * X

    def laplacian(X):
        r = np.linalg.norm(np.atleast_2d(X), axis=1)
        return g.deriv2(r) + (dimension - 1.0) * g.deriv(r) / r

    return SmoothFunction(value, gradient, laplacian, radial=True,
                          dimension=dimension)


def mode_function(profile: PiecewiseProfile, p: Polynomial) -> SmoothFunction:
    """u(x) = g(|x|) p(x) for a homogeneous polynomial p, with the classical
    derivatives assembled by the product rule."""
    if not p.is_homogeneous():
        raise ValueError("the angular factor must be homogeneous")
    n = p.degree()
    N = p.nvars
    grads = [p.partial(i) for i in range(N)]
    lap_p = Polynomial(N)
    for i in range(N):
        lap_p = lap_p + grads[i].partial(i)

    def value(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return profile.value(np.linalg.norm(X, axis=1)) * p.evaluate(X)

    def gradient(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r = np.linalg.norm(X, axis=1)
        g, g1 = profile.value(r), profile.deriv(r)
        pv = p.evaluate(X)
        G = (g1 * pv / r)[:, None] * X
        for i in range(N):
            G[:, i] += g * grads[i].evaluate(X)
        return G

    def laplacian(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r = np.linalg.norm(X, axis=1)
        g, g1, g2 = profile.value(r), profile.deriv(r), profile.deriv2(r)
        pv = p.evaluate(X)
        # lap(g p) = (g'' + (N-1)g'/r) p + 2 g'/r <x, grad p> + g lap p
        return (
            (g2 + (N - 1.0) * g1 / r) * pv
            + 2.0 * g1 / r * n * pv
            + g * lap_p.evaluate(X)
        )

    return SmoothFunction(value, gradient, laplacian, dimension=N)


def separable_mode(rs, profile: PiecewiseProfile, p: Polynomial,
                   rule=None) -> ModeFunction:
    """Single-mode trial function u = g(r) p(x) for a homogeneous h-harmonic p.

    The Dunkl gradient of u splits pointwise as g grad_k p + g' p x/r, so the
    quotient integrals need only three spherical averages of p; they are
    computed here with a weighted sphere rule whose order covers the
    polynomial integrands exactly (the multiplicities must make the weight a
    polynomial for that exactness to hold, e.g. integer values).
    """
    from math import ceil

    from .polyalg import dunkl_gradient_sym
    from .quad import sphere_rule
    from .reflection import weight

    if not p.is_homogeneous():
        raise ValueError("the angular factor must be homogeneous")
    n = p.degree()
    N = rs.dimension
    gamma = float(rs.gamma)
    if rule is None:
        rule = sphere_rule(N, 2 * n + int(ceil(2.0 * gamma)) + 4)
    xi, w = rule.nodes, rule.weights * weight(rs, rule.nodes)
    pv = p.evaluate(xi)
    G = np.column_stack([q.evaluate(xi) for q in dunkl_gradient_sym(rs, p)])
    c0 = float(np.sum(w * pv**2))
    c1 = float(np.sum(w * np.sum(G**2, axis=1)))
    c2 = float(np.sum(w * pv * np.einsum("mi,mi->m", xi, G)))
    return ModeFunction(n, profile, N + 2.0 * gamma, c0, c1, c2)


def random_damped_polynomial(rng, N: int, degree: int) -> SmoothFunction:
    """Gaussian-damped random polynomial with analytic derivatives."""
    exps = []
    for d in range(degree + 1):
        from .harmonics import homogeneous_exponents

        exps.extend(homogeneous_exponents(d, N))
    coeffs = rng.uniform(-1.0, 1.0, size=len(exps))
    p = Polynomial(N)
    from fractions import Fraction

    for e, c in zip(exps, coeffs):
        p = p + Polynomial(N, {e: Fraction(round(c * 64), 64)})
    grads = [p.partial(i) for i in range(N)]
    lap_p = Polynomial(N)
    for i in range(N):
        lap_p = lap_p + grads[i].partial(i)

    def value(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return p.evaluate(X) * np.exp(-np.sum(X**2, axis=1))

    def gradient(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        damp = np.exp(-np.sum(X**2, axis=1))
        G = np.column_stack([g.evaluate(X) for g in grads])
        return damp[:, None] * (G - 2.0 * p.evaluate(X)[:, None] * X)

    def laplacian(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        damp = np.exp(-np.sum(X**2, axis=1))
        pv = p.evaluate(X)
        G = np.column_stack([g.evaluate(X) for g in grads])
        xg = np.einsum("mi,mi->m", X, G)
        r2 = np.sum(X**2, axis=1)
        return damp * (lap_p.evaluate(X) - 4.0 * xg + pv * (4.0 * r2 - 2.0 * N))

    return SmoothFunction(value, gradient, laplacian, dimension=N)


# ---------------------------------------------------------------------------
# corpora


def domain_bump_corpus(data, rng, count: int, rmax: float):
    """C^2 ball bumps supported strictly inside the domain described by
    ``data`` (a DistanceData), within |x| < rmax.  Returns (name, fn) pairs."""
    spec = data.spec
    N = spec.dimension
    out = []
    attempts = 0
    while len(out) < count and attempts < 200 * count:
        attempts += 1
        c = rng.uniform(-1.0, 1.0, size=N)
        c *= rng.uniform(0.3 * rmax, 0.7 * rmax) / (np.linalg.norm(c) + 1e-12)
        d = float(data.delta(c[None, :])[0])
        if d <= 0.15 * rmax:
            continue
        rho = min(0.75 * d, 0.25 * rmax)
        if np.linalg.norm(c) + rho > 0.95 * rmax:
            continue
        out.append((f"bump{len(out)}", ball_bump(c, rho)))
    if len(out) < count:
        raise RuntimeError("could not place enough bumps inside the domain")
    return out


def mode_corpus(rs, rng, count: int, degrees=(0, 1, 2, 3), rule=None):
    """Single-mode trial functions: random shell profiles times h-harmonics
    of the listed degrees (mode 0 entries are plain radial functions).

    ``rule`` optionally fixes the sphere rule used for the mode constants;
    it must be exact for polynomials of degree 2*max(degrees) + 2*gamma.
    Constants are cached per harmonic since they do not depend on the
    radial profile."""
    from fractions import Fraction

    from .harmonics import kernel_basis

    bases = {}
    for n in set(degrees):
        if n == 0:
            bases[0] = [Polynomial(rs.dimension, {(0,) * rs.dimension: Fraction(1)})]
        else:
            bases[n] = kernel_basis(rs, n)
    out = []
    cache = {}
    for i in range(count):
        n = degrees[i % len(degrees)]
        center = rng.uniform(0.8, 2.5)
        width = rng.uniform(0.3, 0.9) * center * 0.8
        prof = bump_radial_profile(center, width)
        idx = int(rng.integers(len(bases[n])))
        key = (n, idx)
        if key in cache:
            template = cache[key]
            mf = ModeFunction(
                n, prof, template.nbar, template.c0, template.c1, template.c2
            )
        else:
            mf = separable_mode(rs, prof, bases[n][idx], rule=rule)
            cache[key] = mf
        out.append((f"mode{n}_{i}", mf))
    return out
