from fractions import Fraction

import numpy as np
import pytest

from dunkl_lab.corpus import (
    bump_radial_profile,
    mode_function,
    separable_mode,
)
from dunkl_lab.domains import DomainSpec
from dunkl_lab.harmonics import kernel_basis
from dunkl_lab.inequalities import (
    DEFAULT_EPSILONS,
    FAMILY_KINDS,
    DegenerateInputError,
    alternate_exponent_limit,
    build_extremizer,
    extrapolate_to_zero,
    hardy_eps_check,
    hardy_quotient_p,
    hardy_remainder_check,
    hr_quotient,
    hr_weighted_quotient,
    mode_coefficients,
    mode_functional,
    mode_quotient,
    oracle_quotient,
    quadrature_quotient,
    radial_hardy_1d,
    rellich_quotient,
    sharp_constant,
    sharpness_sweep,
)
from dunkl_lab.polyalg import Polynomial
from dunkl_lab.quad import RadialGrid, jitter_off_hyperplanes, sphere_rule


def _const_poly(N):
    return Polynomial(N, {(0,) * N: Fraction(1)})


def test_sharp_constant_values():
    assert sharp_constant("hardy_2", 9.0) == pytest.approx(12.25)
    assert sharp_constant("rellich", 9.0) == pytest.approx(81.0 * 25.0 / 16.0)
    assert sharp_constant("weighted_hr", 9.0) == pytest.approx(12.25)
    assert sharp_constant("hardy_rellich", 9.0) == pytest.approx(20.25)
    assert sharp_constant("hardy_p", 6.0, 8.0) == pytest.approx((2.0 / 8.0) ** 8)


def test_extrapolation_exact_on_polynomials():
    xs = [0.3, 0.1, 0.03]
    ys = [5.0 + 2.0 * x + 7.0 * x**2 for x in xs]
    assert extrapolate_to_zero(xs, ys) == pytest.approx(5.0, abs=1e-10)


def test_hardy_2_quotient_closed_form():
    # the step-power family gives target + (nbar-2)/4 * eps exactly
    nbar = 9.0
    for eps in (0.3, 0.01):
        q = oracle_quotient("hardy_2", nbar, eps)
        assert q == pytest.approx(
            sharp_constant("hardy_2", nbar) + (nbar - 2.0) / 4.0 * eps,
            rel=1e-12,
        )


@pytest.mark.parametrize("kind", FAMILY_KINDS)
def test_oracle_and_quadrature_paths_agree(kind):
    nbar = 9.0
    p = nbar + 1.0 if kind == "hardy_p" else None
    for eps in (0.3, 0.01, 0.001):
        qo = oracle_quotient(kind, nbar, eps, p)
        qq = quadrature_quotient(kind, nbar, eps, p)
        assert abs(qo - qq) / qo < 1e-6


def test_sweep_converges_and_is_monotone():
    sweep = sharpness_sweep("hardy_2", 3, 1.0)
    assert sweep.converged
    assert sweep.rel_gap < 0.01
    assert all(
        b <= a + 1e-10 for a, b in zip(sweep.quotients_oracle,
                                       sweep.quotients_oracle[1:])
    )
    rows = sweep.csv_rows()
    assert len(rows) == len(DEFAULT_EPSILONS)
    assert all(len(r) == 5 for r in rows)


def test_sweep_rejects_bad_epsilons():
    with pytest.raises(ValueError):
        sharpness_sweep("hardy_2", 3, 1.0, epsilons=[0.1, 0.3])
    with pytest.raises(ValueError):
        sharpness_sweep("hardy_2", 3, 1.0, epsilons=[0.1, 1e-6])
    with pytest.raises(ValueError):
        sharpness_sweep("hardy_p", 3, 0.0, p=2.0)  # needs p > nbar
    with pytest.raises(ValueError):
        sharpness_sweep("bogus", 3, 0.0)


def test_alternate_exponent_status():
    status, value = alternate_exponent_limit(5, 1.0)
    assert status == "divergent" and value is None
    status0, value0 = alternate_exponent_limit(5, 0.0)
    assert status0 == "finite"
    assert value0 == pytest.approx(sharp_constant("hardy_rellich", 5.0),
                                   rel=0.01)


def test_mode_coefficients_exact():
    for N, g in ((5, 0), (7, 1), (6, Fraction(1, 2))):
        nbar = Fraction(N) + 2 * Fraction(g)
        C = nbar**2 / 4
        co0 = mode_coefficients(N, g, 0, C)
        assert co0.b_n == 0
        co1 = mode_coefficients(N, g, 1, C)
        assert co1.d_n == ((N - 5 - 2 * Fraction(g)) * nbar**2 + 4) / 4
        co2 = mode_coefficients(N, g, 2, C)
        assert co2.d_n == 2 * N * nbar**2 / 4


def test_radial_hardy_1d_bound_and_sharpness():
    prof = bump_radial_profile(1.5, 0.9)
    for exponent in (10.0, 8.0, 6.0):
        q = radial_hardy_1d(exponent, prof)
        assert q >= (exponent - 1.0) ** 2 / 4.0
    # the truncated-power family approaches the constant
    for eps in (0.1, 0.01):
        fam = build_extremizer("hardy_2", 10.0, eps)  # exponent 9 instance
        q = radial_hardy_1d(9.0, fam)
        assert q == pytest.approx(16.0, rel=0.1 * max(eps, 0.01) * 10)
    with pytest.raises(DegenerateInputError):
        radial_hardy_1d(8.0, _zero_profile())


def _zero_profile():
    from math import inf

    from dunkl_lab.profiles import PiecewiseProfile, PowerPiece

    return PiecewiseProfile(
        [PowerPiece(0.0, 1.0, 0.0, 0.0), PowerPiece(1.0, inf, 0.0, 0.0)]
    )


def test_mode_functional_lower_bound():
    rng = np.random.default_rng(7)
    for N, g in ((5, 0), (7, 1)):
        nbar = Fraction(N) + 2 * Fraction(g)
        C = nbar**2 / 4
        for n in (0, 1, 2):
            for _ in range(4):
                center = rng.uniform(0.9, 2.2)
                prof = bump_radial_profile(center, 0.6 * center)
                i_val, bound, ok = mode_functional(N, g, C, n, prof)
                assert ok
                assert i_val >= bound - 1e-9 * abs(bound)


def test_mode_reduction_matches_full_quadrature(rs_a2, rule_a2):
    """The 1-D single-mode reduction must agree with full 3-D quadrature
    for every quotient, including the r^-2-weighted gradient denominator
    whose naive polar split would miss the reflection cross terms."""
    grid = RadialGrid((0.0, 0.6, 1.0, 1.5, 2.4, 3.0), nodes_per_interval=48)
    prof = bump_radial_profile(1.5, 0.9)
    spec = DomainSpec("punctured_space", 3)
    for n in (0, 1, 2):
        p = _const_poly(3) if n == 0 else kernel_basis(rs_a2, n)[0]
        mf = separable_mode(rs_a2, prof, p)
        u = mode_function(prof, p)
        pairs = {
            "hardy_2": hardy_quotient_p(rs_a2, u, 2.0, spec, grid, rule_a2),
            "rellich": rellich_quotient(rs_a2, u, grid, rule_a2),
            "weighted_hr": hr_weighted_quotient(rs_a2, u, grid, rule_a2),
            "hardy_rellich": hr_quotient(rs_a2, u, grid, rule_a2),
        }
        for kind, full in pairs.items():
            assert mode_quotient(mf, kind) == pytest.approx(full, rel=1e-10)


def test_quotients_scale_invariant(rs_a2):
    prof_a = bump_radial_profile(1.5, 0.9)
    prof_b = bump_radial_profile(3.0, 1.8)  # u(x/2)
    p = kernel_basis(rs_a2, 1)[0]
    mf_a = separable_mode(rs_a2, prof_a, p)
    mf_b = separable_mode(rs_a2, prof_b, p)
    for kind in ("hardy_2", "rellich", "weighted_hr", "hardy_rellich"):
        assert mode_quotient(mf_a, kind) == pytest.approx(
            mode_quotient(mf_b, kind), rel=1e-8
        )
    # constant rescaling is exact by homogeneity of both integrals
    mf_c = separable_mode(rs_a2, prof_a, p * 5)
    assert mode_quotient(mf_c, "rellich") == pytest.approx(
        mode_quotient(mf_a, "rellich"), rel=1e-12
    )


def test_mode_quotients_respect_sharp_constants(rs_a2):
    nbar = 3 + 2.0 * float(rs_a2.gamma)
    prof = bump_radial_profile(1.2, 0.7)
    for n in (0, 1, 2):
        p = _const_poly(3) if n == 0 else kernel_basis(rs_a2, n)[0]
        mf = separable_mode(rs_a2, prof, p)
        for kind in ("hardy_2", "rellich", "weighted_hr", "hardy_rellich"):
            assert mode_quotient(mf, kind) >= sharp_constant(kind, nbar) - 1e-9


def test_domain_remainder_and_eps_checks(rs_a2, rule_a2):
    from dunkl_lab.corpus import domain_bump_corpus
    from dunkl_lab.domains import distance_data

    rng = np.random.default_rng(42)
    spec = DomainSpec("exterior_ball", 3, radius=1.0)
    data = distance_data(spec, rs_a2)
    grid = RadialGrid((1.0, 1.5, 2.25, 3.0, 4.0), nodes_per_interval=40)
    corpus = domain_bump_corpus(data, rng, 4, 4.0)
    nbar = 3 + 2.0 * float(rs_a2.gamma)
    for p in (2.0, nbar + 1.0):
        rep = hardy_remainder_check(
            rs_a2, corpus, spec, p, grid, rule_a2
        )
        assert rep.passed, rep.entries
        rep2 = hardy_eps_check(rs_a2, corpus, spec, p, 0.7, grid, rule_a2)
        assert rep2.passed, rep2.entries


def test_degenerate_denominator_raises(rs_a2, rule_a2):
    from dunkl_lab.corpus import ball_bump

    grid = RadialGrid((0.0, 1.0, 2.0), nodes_per_interval=32)
    u = ball_bump([10.0, 10.0, 10.0], 0.5)  # supported outside the grid
    with pytest.raises(DegenerateInputError):
        rellich_quotient(rs_a2, u, grid, rule_a2)
