"""Numeric Dunkl calculus on black-box functions.

Functions are registered with analytic value/gradient/laplacian callables,
all vectorized over (M, N) batches of points.  Near reflection hyperplanes
the difference quotients switch to their Taylor limits (first order for the
gradient term, second order for the Laplacian's squared denominator, which
needs the Hessian).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .reflection import HYPERPLANE_RTOL, RootSystem, SingularPointError

__all__ = [
    "SmoothFunction",
    "dunkl_gradient",
    "dunkl_laplacian_num",
    "polar_laplacian",
]

_PROBE_RNG_SEED = 20240517


@dataclass
class SmoothFunction:
    """value: (M,N)->(M,); gradient: (M,N)->(M,N); laplacian: (M,N)->(M,).

    The analytic gradient is spot-checked against central finite differences
    at registration; silent finite differencing is never used afterwards.
    """

    value: object
    gradient: object
    laplacian: object | None = None
    hessian: object | None = None  # (M,N)->(M,N,N), for hyperplane fallback
    radial: bool = False
    dimension: int | None = None
    check: bool = field(default=True, repr=False)
    probe_scale: float = field(default=1.0, repr=False)

    def __post_init__(self):
        if self.check:
            if self.dimension is None:
                raise ValueError("gradient check requires the dimension")
            self._check_gradient()

    def _check_gradient(self):
        rng = np.random.default_rng(_PROBE_RNG_SEED)
        X = rng.uniform(-1.0, 1.0, size=(4, self.dimension)) * self.probe_scale
        g = np.asarray(self.gradient(X), dtype=float)
        h = 1e-5 * self.probe_scale
        fd = np.empty_like(g)
        for j in range(self.dimension):
            e = np.zeros(self.dimension)
            e[j] = h
            fd[:, j] = (
                np.asarray(self.value(X + e)) - np.asarray(self.value(X - e))
            ) / (2.0 * h)
        scale = np.max(np.abs(g)) + 1.0
        if np.max(np.abs(g - fd)) > 1e-5 * scale:
            raise ValueError(
                "analytic gradient disagrees with central differences "
                f"(max abs deviation {np.max(np.abs(g - fd)):.3e})"
            )


def _as_batch(x, dim):
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    return np.atleast_2d(X), single


def dunkl_gradient(rs: RootSystem, f: SmoothFunction, x) -> np.ndarray:
    """grad f + sum_alpha k_alpha alpha (f(x) - f(sigma_alpha x))/<alpha, x>.

    Accepts a single point or an (M, N) batch; returns matching shape.
    """
    X, single = _as_batch(x, rs.dimension)
    G = np.array(f.gradient(X), dtype=float)
    if not f.radial:
        nx = np.linalg.norm(X, axis=1)
        fx = None
        for root, k in rs.active_roots():
            a = root.vector
            t = X @ a
            if fx is None:
                fx = np.asarray(f.value(X), dtype=float)
            fs = np.asarray(f.value(X - np.multiply.outer(t, a)), dtype=float)
            near = np.abs(t) < HYPERPLANE_RTOL * nx
            safe_t = np.where(near, 1.0, t)
            ratio = np.where(near, G @ a, (fx - fs) / safe_t)
            G += float(k) * np.multiply.outer(ratio, a)
    return G[0] if single else G


def dunkl_laplacian_num(rs: RootSystem, f: SmoothFunction, x) -> np.ndarray:
    """Classical Laplacian plus the reflection-difference correction terms."""
    if f.laplacian is None:
        raise ValueError("function registered without a classical laplacian")
    X, single = _as_batch(x, rs.dimension)
    L = np.array(f.laplacian(X), dtype=float)
    nx = np.linalg.norm(X, axis=1)
    if f.radial:
        # difference terms vanish; <rho, grad f> = 2*gamma*<grad f, x>/|x|^2
        g = float(rs.gamma)
        if g != 0.0:
            G = np.asarray(f.gradient(X), dtype=float)
            L += 2.0 * g * np.einsum("ij,ij->i", G, X) / nx**2
        return L[0] if single else L
    G = np.asarray(f.gradient(X), dtype=float)
    fx = np.asarray(f.value(X), dtype=float)
    H = None
    for root, k in rs.active_roots():
        a = root.vector
        t = X @ a
        near = np.abs(t) < HYPERPLANE_RTOL * nx
        fs = np.asarray(f.value(X - np.multiply.outer(t, a)), dtype=float)
        ga = G @ a
        safe_t = np.where(near, 1.0, t)
        bracket = ga / safe_t - (fx - fs) / safe_t**2
        if np.any(near):
            if f.hessian is None:
                raise SingularPointError(
                    "point on a reflection hyperplane and no Hessian supplied "
                    "for the second-order Taylor fallback"
                )
            if H is None:
                H = np.asarray(f.hessian(X), dtype=float)
            # limit of <grad f,a>/t - (f - f o sigma)/t^2 as t -> 0
            taylor = 0.5 * np.einsum("i,mij,j->m", a, H, a)
            bracket = np.where(near, taylor, bracket)
        L += 2.0 * float(k) * bracket
    return L[0] if single else L


def polar_laplacian(nbar: float, modes, r: float, xi) -> float:
    """Laplacian in polar form from a radial-spectral representation.

    ``modes`` is a sequence of (lambda_n, radial, angular) with ``radial`` a
    twice-differentiable callable (scipy spline or similar exposing
    derivative()) and ``angular`` the sphere factor evaluated at unit xi.
    """
    if r <= 0.0:
        raise ValueError("polar chart excludes the origin")
    xi = np.asarray(xi, dtype=float)
    total = 0.0
    for lam, radial, angular in modes:
        d1 = radial.derivative(1)(r)
        d2 = radial.derivative(2)(r)
        u = radial(r)
        total += (d2 + (nbar - 1.0) * d1 / r + lam * u / r**2) * float(angular(xi))
    return float(total)
