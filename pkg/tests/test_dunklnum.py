import numpy as np
import pytest

from dunkl_lab.corpus import radial_shell_bump, shifted_gaussian
from dunkl_lab.dunklnum import (
    SmoothFunction,
    dunkl_gradient,
    dunkl_laplacian_num,
    polar_laplacian,
)
from dunkl_lab.polyalg import dunkl_gradient_sym, dunkl_laplacian_sym
from dunkl_lab.reflection import SingularPointError, build_root_system


def _poly_as_smooth(p):
    N = p.nvars
    grads = [p.partial(i) for i in range(N)]
    lap = sum((g.partial(i) for i, g in enumerate(grads)), start=p * 0)
    hess = [[g.partial(j) for j in range(N)] for g in grads]

    def hessian(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        H = np.empty((len(X), N, N))
        for i in range(N):
            for j in range(N):
                H[:, i, j] = hess[i][j].evaluate(X)
        return H

    return SmoothFunction(
        lambda X: p.evaluate(np.atleast_2d(X)),
        lambda X: np.column_stack(
            [g.evaluate(np.atleast_2d(X)) for g in grads]
        ),
        lambda X: lap.evaluate(np.atleast_2d(X)),
        hessian,
        dimension=N,
    )


def test_registration_rejects_wrong_gradient():
    with pytest.raises(ValueError):
        SmoothFunction(
            lambda X: np.sum(np.atleast_2d(X) ** 2, axis=1),
            lambda X: 3.0 * np.atleast_2d(X),  # should be 2x
            dimension=3,
        )


def test_numeric_matches_symbolic_gradient(rs_b2, rng):
    from dunkl_lab.polyalg import variable

    x, y = variable(0, 2), variable(1, 2)
    p = x**3 * y + y**2 * 2
    u = _poly_as_smooth(p)
    X = rng.normal(size=(25, 2)) + np.array([0.7, 1.9])
    G = dunkl_gradient(rs_b2, u, X)
    sym = dunkl_gradient_sym(rs_b2, p)
    expected = np.column_stack([q.evaluate(X) for q in sym])
    assert np.allclose(G, expected, rtol=1e-11, atol=1e-11)


def test_numeric_matches_symbolic_laplacian(rs_a2, rng):
    from dunkl_lab.polyalg import norm_squared, variable

    p = norm_squared(3) * variable(0, 3) + variable(1, 3) ** 3
    u = _poly_as_smooth(p)
    X = rng.normal(size=(25, 3)) + np.array([0.5, 1.3, 2.6])
    lap = dunkl_laplacian_num(rs_a2, u, X)
    expected = dunkl_laplacian_sym(rs_a2, p).evaluate(X)
    assert np.allclose(lap, expected, rtol=1e-9, atol=1e-9)


def test_hyperplane_point_uses_taylor_fallback(rs_b2):
    u = shifted_gaussian([0.0, 0.0], 1.0)
    # x1 = x2 lies on the hyperplane of e1 - e2; the difference quotient
    # degenerates to a directional derivative and must stay finite
    X = np.array([[0.7, 0.7], [1.2, 1.2]])
    G = dunkl_gradient(rs_b2, u, X)
    assert np.all(np.isfinite(G))
    L = dunkl_laplacian_num(rs_b2, u, X)
    assert np.all(np.isfinite(L))


def test_laplacian_without_hessian_raises_on_hyperplane(rs_b2):
    u = SmoothFunction(
        lambda X: np.exp(-np.sum(np.atleast_2d(X) ** 2, axis=1)),
        lambda X: -2.0
        * np.exp(-np.sum(np.atleast_2d(X) ** 2, axis=1))[:, None]
        * np.atleast_2d(X),
        lambda X: (4.0 * np.sum(np.atleast_2d(X) ** 2, axis=1) - 4.0)
        * np.exp(-np.sum(np.atleast_2d(X) ** 2, axis=1)),
        dimension=2,
    )
    with pytest.raises(SingularPointError):
        dunkl_laplacian_num(rs_b2, u, np.array([[0.9, 0.9]]))


def test_radial_shortcut_matches_generic(rs_a2, rng):
    u = radial_shell_bump(1.5, 0.9, 3)
    X = rng.normal(size=(30, 3))
    X *= (1.5 / np.linalg.norm(X, axis=1))[:, None]
    X += rng.normal(scale=0.05, size=X.shape)
    lap_radial = dunkl_laplacian_num(rs_a2, u, X)
    # generic evaluation of the same function without the radial flag
    v = SmoothFunction(
        u.value, u.gradient, u.laplacian, dimension=3, check=False
    )
    lap_generic = dunkl_laplacian_num(rs_a2, v, X)
    assert np.allclose(lap_radial, lap_generic, rtol=1e-9, atol=1e-9)


def test_polar_laplacian_matches_full_operator(rs_z23, rng):
    # u = g(r) x1 with x1 h-harmonic for Z2^3: polar form with n = 1
    from dunkl_lab.corpus import bump_radial_profile, mode_function
    from dunkl_lab.polyalg import variable

    nbar = 3 + 2.0 * float(rs_z23.gamma)
    prof = bump_radial_profile(1.4, 0.7)
    u = mode_function(prof, variable(0, 3))
    xi = rng.normal(size=(12, 3))
    xi /= np.linalg.norm(xi, axis=1)[:, None]
    for r in (1.0, 1.4, 1.9):
        X = r * xi
        full = dunkl_laplacian_num(rs_z23, u, X)

        def g(rr):
            return prof.value(rr) * rr  # radial coefficient of the mode

        def g1(rr):
            return prof.deriv(rr) * rr + prof.value(rr)

        def g2(rr):
            return prof.deriv2(rr) * rr + 2.0 * prof.deriv(rr)

        lam = -1.0 * (1.0 + nbar - 2.0)
        expected = (g2(r) + (nbar - 1.0) * g1(r) / r + lam * g(r) / r**2) * xi[
            :, 0
        ]
        assert np.allclose(full, expected, rtol=1e-8, atol=1e-8)


def test_polar_laplacian_helper():
    from scipy.interpolate import CubicSpline

    nbar = 7.0
    rgrid = np.linspace(0.5, 3.0, 600)
    spline = CubicSpline(rgrid, np.sin(rgrid))
    lam = -2.0 * (2.0 + nbar - 2.0)
    r = 1.7
    got = polar_laplacian(nbar, [(lam, spline, lambda xi: 1.0)], r, np.ones(3))
    expected = -np.sin(r) + (nbar - 1.0) * np.cos(r) / r + lam * np.sin(r) / r**2
    assert got == pytest.approx(expected, rel=1e-5)
    with pytest.raises(ValueError):
        polar_laplacian(nbar, [], 0.0, np.ones(3))
