"""Exact multivariate polynomials over Q and the symbolic Dunkl calculus.

Everything in this module is exact: coefficients are Fractions, reflections
act by exact linear substitution, and divided differences are exact
polynomial divisions.  A floating-point value anywhere in here is a bug.

The difference term of a Dunkl operator,
k_alpha * alpha_i * (p - p o sigma_alpha)/<alpha, x>, is computed with the
root's rational direction v (alpha = c v):  alpha_i/<alpha, x> = v_i/<v, x>,
so the sqrt(2) scale cancels and every operator output stays rational.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .reflection import Root, RootSystem, reflection_matrix

__all__ = [
    "Polynomial",
    "ExactDivisionError",
    "LaplacianMismatchError",
    "variable",
    "constant",
    "norm_squared",
    "reflect_poly",
    "divided_difference",
    "dunkl_apply",
    "dunkl_gradient_sym",
    "dunkl_laplacian_sym",
    "dunkl_laplacian_fast",
    "leibniz_check",
    "commutativity_check",
    "positive_subsystem_independence",
    "poly_to_json",
    "poly_from_json",
]


class ExactDivisionError(ArithmeticError):
    """A division that must be exact left a remainder (arithmetic bug)."""


class LaplacianMismatchError(ArithmeticError):
    """The two Dunkl-Laplacian formulas disagreed (arithmetic bug)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact polynomial coefficients must be rational, got {type(x)}")


class Polynomial:
    """Sparse polynomial: exponent tuple -> Fraction, zero coefficients dropped."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c != 0:
                    if len(e) != nvars:
                        raise ValueError("exponent tuple length != nvars")
                    self.terms[tuple(e)] = c

    # -- basics -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = constant(self.nvars, other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Fraction(0)) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.nvars, out.terms = self.nvars, t
        return out

    def __neg__(self):
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if c == 0:
                return Polynomial(self.nvars)
            out = Polynomial.__new__(Polynomial)
            out.nvars = self.nvars
            out.terms = {e: cc * c for e, cc in self.terms.items()}
            return out
        if other.nvars != self.nvars:
            raise ValueError("nvars mismatch")
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Fraction(0)) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.nvars, out.terms = self.nvars, t
        return out

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def partial(self, i: int) -> "Polynomial":
        t: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                t[e2] = t.get(e2, Fraction(0)) + c * e[i]
        return Polynomial(self.nvars, t)

    def homogeneous_component(self, degree: int) -> "Polynomial":
        return Polynomial(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    # -- substitution and evaluation ---------------------------------------

    def compose_linear(self, matrix) -> "Polynomial":
        """p(Mx): substitute x_i -> sum_j M[i][j] x_j (exact rational M)."""
        n = self.nvars
        rows = [
            Polynomial(n, {tuple(1 if l == j else 0 for l in range(n)): _frac(matrix[i][j])
                           for j in range(n) if matrix[i][j] != 0})
            for i in range(n)
        ]
        pow_cache: dict = {}

        def lin_pow(i, m):
            key = (i, m)
            if key not in pow_cache:
                pow_cache[key] = (
                    constant(n, 1) if m == 0 else lin_pow(i, m - 1) * rows[i]
                )
            return pow_cache[key]

        out = Polynomial(n)
        for e, c in self.terms.items():
            term = constant(n, c)
            for i, m in enumerate(e):
                if m:
                    term = term * lin_pow(i, m)
            out = out + term
        return out

    def evaluate_exact(self, point):
        vals = [_frac(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, m in zip(vals, e):
                for _ in range(m):
                    t *= v
            total += t
        return total

    def evaluate(self, points) -> np.ndarray:
        """Float evaluation at a batch of points (M, N) (or a single (N,))."""
        X = np.asarray(points, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        out = np.zeros(X.shape[0])
        for e, c in self.terms.items():
            t = np.full(X.shape[0], float(c))
            for i, m in enumerate(e):
                if m:
                    t *= X[:, i] ** m
            out += t
        return float(out[0]) if single else out

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"x{i}^{m}" if m > 1 else f"x{i}" for i, m in enumerate(e) if m
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Polynomial(" + " + ".join(bits) + ")"


def variable(i: int, nvars: int) -> Polynomial:
    return Polynomial(nvars, {tuple(1 if j == i else 0 for j in range(nvars)): 1})


def constant(nvars: int, c) -> Polynomial:
    return Polynomial(nvars, {(0,) * nvars: _frac(c)})


def norm_squared(nvars: int) -> Polynomial:
    return Polynomial(
        nvars,
        {tuple(2 if j == i else 0 for j in range(nvars)): 1 for i in range(nvars)},
    )


# ---------------------------------------------------------------------------
# division by a linear form


def _divide_by_linear(p: Polynomial, v) -> Polynomial:
    """Exact quotient p / <v, x>; raises ExactDivisionError on a remainder.

    Pivot on one variable with v_j != 0 and solve the graded recurrence
    a_d = v_j b_(d-1) + M b_d top-down, where M is the rest of the form.
    """
    n = p.nvars
    j = next(i for i, c in enumerate(v) if c != 0)
    vj = _frac(v[j])
    rest = Polynomial(
        n,
        {
            tuple(1 if l == i else 0 for l in range(n)): _frac(v[i])
            for i in range(n)
            if i != j and v[i] != 0
        },
    )
    # slice p by the exponent of x_j
    slices: dict[int, dict] = {}
    for e, c in p.terms.items():
        d = e[j]
        e0 = e[:j] + (0,) + e[j + 1 :]
        slices.setdefault(d, {})[e0] = c
    if not slices:
        return Polynomial(n)
    D = max(slices)
    a = {d: Polynomial(n, t) for d, t in slices.items()}
    b: dict[int, Polynomial] = {}
    prev = Polynomial(n)  # b_d for d above the current one
    for d in range(D, 0, -1):
        num = a.get(d, Polynomial(n)) - rest * prev
        bd = num * Fraction(1, 1)
        bd = Polynomial(n, {e: c / vj for e, c in num.terms.items()})
        b[d - 1] = bd
        prev = bd
    if not (a.get(0, Polynomial(n)) - rest * prev).is_zero():
        raise ExactDivisionError("polynomial is not divisible by the linear form")
    out = Polynomial(n)
    xj = variable(j, n)
    for d, bd in b.items():
        out = out + bd * xj**d
    return out


# ---------------------------------------------------------------------------
# Dunkl operators


def _require_exact(rs: RootSystem):
    if not rs.exact:
        raise ValueError(
            "symbolic Dunkl calculus needs rational root data "
            f"(family {rs.family}({rs.rank}) has irrational roots)"
        )
    for k in rs.multiplicities:
        if not isinstance(k, (Fraction, int)):
            raise ValueError("symbolic Dunkl calculus needs rational multiplicities")


def reflect_poly(p: Polynomial, root: Root) -> Polynomial:
    """p o sigma_alpha by exact linear substitution."""
    return p.compose_linear(reflection_matrix(root, exact=True))


def divided_difference(p: Polynomial, root: Root) -> Polynomial:
    """Exact q with <v, x> q = p - p o sigma_alpha, v the rational direction.

    The quotient against <alpha, x> itself is q / c with c = sqrt(2/|v|^2);
    the scale cancels inside Dunkl operators and is left to the caller.
    """
    diff = p - reflect_poly(p, root)
    if diff.is_zero():
        return Polynomial(p.nvars)
    return _divide_by_linear(diff, root.direction)


def dunkl_apply(rs: RootSystem, i: int, p: Polynomial, flips=None) -> Polynomial:
    """T_i p = d_i p + sum_alpha k_alpha alpha_i (p - p o sigma_alpha)/<alpha,x>.

    ``flips`` optionally replaces the fixed positive subsystem by flipping the
    sign of selected roots (used by the choice-independence check).
    """
    _require_exact(rs)
    out = p.partial(i)
    roots = rs.positive_roots
    if flips is None:
        flips = (1,) * len(roots)
    for root, k, s in zip(roots, rs.multiplicities, flips):
        if k == 0:
            continue
        r = root if s == 1 else root.negate()
        vi = _frac(r.direction[i])
        if vi == 0:
            continue
        out = out + (k * vi) * divided_difference(p, r)
    return out


def dunkl_gradient_sym(rs: RootSystem, p: Polynomial) -> list:
    return [dunkl_apply(rs, i, p) for i in range(rs.dimension)]


def dunkl_laplacian_fast(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Dunkl Laplacian via the gradient/difference formula (single route)."""
    _require_exact(rs)
    n = rs.dimension
    out = Polynomial(n)
    grad = [p.partial(i) for i in range(n)]
    for i in range(n):
        out = out + grad[i].partial(i)
    for root, k in rs.active_roots():
        v = root.direction
        grad_dot_v = Polynomial(n)
        for i in range(n):
            if v[i] != 0:
                grad_dot_v = grad_dot_v + _frac(v[i]) * grad[i]
        q = divided_difference(p, root)
        # <grad p, alpha>/<alpha,x> - (p - p o sigma)/<alpha,x>^2
        #   = [<grad p, v> - (|v|^2/2) q] / <v, x>
        num = grad_dot_v - (root.norm2_direction * Fraction(1, 2)) * q
        out = out + (2 * k) * _divide_by_linear(num, v)
    return out


def dunkl_laplacian_sym(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Dunkl Laplacian computed two independent ways; they must agree exactly."""
    n = rs.dimension
    via_squares = Polynomial(n)
    for i in range(n):
        via_squares = via_squares + dunkl_apply(rs, i, dunkl_apply(rs, i, p))
    via_formula = dunkl_laplacian_fast(rs, p)
    if via_squares != via_formula:
        raise LaplacianMismatchError(
            "sum of squared Dunkl operators disagrees with the "
            "gradient/difference formula"
        )
    return via_squares


# ---------------------------------------------------------------------------
# identity checks


def leibniz_check(rs: RootSystem, u: Polynomial, v: Polynomial, i: int):
    """Residual of the general product rule for T_i (must be zero).

    Returns (general_residual, short_residual); ``short_residual`` is the
    residual of T_i(uv) = u T_i v + v T_i u, which is only expected to vanish
    when u or v is G-invariant, and None-checks are left to the caller.
    """
    _require_exact(rs)
    tuv = dunkl_apply(rs, i, u * v)
    base = v * dunkl_apply(rs, i, u) + u * dunkl_apply(rs, i, v)
    corr = Polynomial(u.nvars)
    for root, k in rs.active_roots():
        vi = _frac(root.direction[i])
        if vi == 0:
            continue
        du = u - reflect_poly(u, root)
        dv = v - reflect_poly(v, root)
        if du.is_zero() or dv.is_zero():
            continue
        corr = corr + (k * vi) * _divide_by_linear(du * dv, root.direction)
    general = tuv - (base - corr)
    short = tuv - base
    return general, short


def is_invariant(rs: RootSystem, p: Polynomial) -> bool:
    """Invariance under the generating reflections (hence under all of G)."""
    return all(reflect_poly(p, r) == p for r in rs.positive_roots)


def commutativity_check(rs: RootSystem, i: int, j: int, p: Polynomial):
    """T_i T_j p == T_j T_i p exactly; returns (ok, difference)."""
    a = dunkl_apply(rs, i, dunkl_apply(rs, j, p))
    b = dunkl_apply(rs, j, dunkl_apply(rs, i, p))
    return a == b, a - b


def positive_subsystem_independence(rs: RootSystem, flips, p: Polynomial, i: int) -> bool:
    """Dunkl operators do not depend on the choice of positive subsystem."""
    ref = dunkl_apply(rs, i, p)
    alt = dunkl_apply(rs, i, p, flips=tuple(flips))
    return ref == alt


# ---------------------------------------------------------------------------
# serialization


def poly_to_json(p: Polynomial) -> str:
    doc = [
        {"exponents": list(e), "numerator": c.numerator, "denominator": c.denominator}
        for e, c in sorted(p.terms.items())
    ]
    return json.dumps({"nvars": p.nvars, "terms": doc})


def poly_from_json(text: str) -> Polynomial:
    doc = json.loads(text)
    terms = {
        tuple(t["exponents"]): Fraction(t["numerator"], t["denominator"])
        for t in doc["terms"]
    }
    return Polynomial(doc["nvars"], terms)
