"""Special functions of a complex variable, in double precision.

Gamma, the Riemann and Hurwitz zeta functions, the symmetrised zeta
``xi1(s) = pi**(-s/2) Gamma(s/2) zeta(s)``, Kronecker characters, the Dirichlet
L-functions built from them, and the MacDonald function ``K_nu(x)`` for complex
order and real positive argument.

Every function takes and returns Python scalars (``complex`` or ``float``).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from .errors import AccuracyWarning, ConvergenceError, DomainError, PoleError

__all__ = [
    "QuadratureSpec",
    "gamma",
    "loggamma",
    "riemann_zeta",
    "hurwitz_zeta",
    "xi1",
    "kronecker_chi",
    "character_table",
    "dirichlet_l",
    "completed_l",
    "bessel_k",
    "SUPPORTED_DISCRIMINANTS",
]

LOG_PI = math.log(math.pi)
_EPS = np.finfo(float).eps

# Discriminants whose L-functions appear in the closed-form lattice sums.
SUPPORTED_DISCRIMINANTS = (-3, -4, -7, -8, -20, -24, 5, 8)

_EM_CORRECTIONS = 12


def _bernoulli_even(count: int) -> tuple[float, ...]:
    """Return B_{2j}/(2j)! for j = 1..count (Akiyama-Tanigawa in exact arithmetic)."""
    n_max = 2 * count
    a = [Fraction(0)] * (n_max + 1)
    bern = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])
    return tuple(float(bern[2 * j] / math.factorial(2 * j)) for j in range(1, count + 1))


_BERN_OVER_FACT = _bernoulli_even(_EM_CORRECTIONS)


def _as_complex(s) -> complex:
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {s!r}")
    return z


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------


def loggamma(s) -> complex:
    """Principal branch of log Gamma(s)."""
    z = _as_complex(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at s = {z.real:g}")
    return complex(_sp.loggamma(z))


def gamma(s) -> complex:
    """Gamma(s) for complex s.

    Raises PoleError at the non-positive integers.
    """
    z = _as_complex(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at s = {z.real:g}")
    if z.imag == 0.0 and z.real > 0.0 and z.real < 171.0:
        return complex(math.gamma(z.real))
    return cmath.exp(complex(_sp.loggamma(z)))


# ---------------------------------------------------------------------------
# Zeta functions (Euler-Maclaurin)
# ---------------------------------------------------------------------------


def _em_cutoff(z: complex) -> int:
    if z.real < 0.0:
        # head terms grow like k**-Re z, so keep the head as short as the
        # Bernoulli tail allows: (|z| + 24) / (2 pi x) <= 1/2
        return max(8, int((abs(z) + 24.0) / math.pi) + 1)
    return max(20, int(2.0 * abs(z.imag)) + 1, int(abs(z)) + 10)


def _phi1(z: complex) -> complex:
    """(exp(z) - 1) / z, accurate near z = 0."""
    if abs(z) < 0.1:
        term = 1.0 + 0j
        total = term
        for k in range(2, 20):
            term *= z / k
            total += term
        return total
    return (cmath.exp(z) - 1.0) / z


def _hurwitz_em(z: complex, a: float, regular: bool = False) -> complex:
    """Euler-Maclaurin sum for zeta(z, a).

    With ``regular=True`` the pole part 1/(z-1) is removed, which leaves an
    entire function that can be evaluated at z = 1 itself.
    """
    n = _em_cutoff(z)
    k = a + np.arange(n, dtype=float)
    head = complex(np.exp(-z * np.log(k)).sum())
    x = n + a
    logx = math.log(x)
    x_pow = cmath.exp(-z * logx)
    if regular:
        # (x^{1-z} - 1)/(z - 1) = -log(x) * phi1(-(z-1) log x)
        pole_part = -logx * _phi1(-(z - 1.0) * logx)
    else:
        pole_part = x_pow * x / (z - 1.0)
    total = head + pole_part + 0.5 * x_pow
    term = z * x_pow / x
    inv_x2 = 1.0 / (x * x)
    for j, coeff in enumerate(_BERN_OVER_FACT, start=1):
        total += coeff * term
        term *= (z + 2 * j - 1) * (z + 2 * j) * inv_x2
    return total


def hurwitz_zeta(s, a: float) -> complex:
    """Hurwitz zeta(s, a) for 0 < a <= 1 and s != 1.

    Relative accuracy is ~1e-13 for Re s >= 0. For Re s < 0 the partial sum
    cancels against the tail and accuracy falls to ~1e-10 at |Im s| = 40;
    ``riemann_zeta`` and ``dirichlet_l`` avoid this with functional equations.
    """
    z = _as_complex(s)
    a = float(a)
    if not (0.0 < a <= 1.0):
        raise DomainError(f"Hurwitz parameter a = {a} outside (0, 1]")
    if z == 1.0:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    return _hurwitz_em(z, a)


def riemann_zeta(s) -> complex:
    """Riemann zeta(s), continued to Re s < 0 by the functional equation."""
    z = _as_complex(s)
    if z == 1.0:
        raise PoleError("zeta(s) has a pole at s = 1")
    if z.imag == 0.0 and z.real < 0.0 and z.real == math.floor(z.real) and int(z.real) % 2 == 0:
        return 0j
    if z.real >= 0.0:
        return _hurwitz_em(z, 1.0)
    w = 1.0 - z
    # zeta(z) = 2^z pi^(z-1) sin(pi z / 2) Gamma(1 - z) zeta(1 - z)
    log_factor = z * math.log(2.0) + (z - 1.0) * LOG_PI + complex(_sp.loggamma(w))
    return cmath.exp(log_factor) * cmath.sin(0.5 * math.pi * z) * _hurwitz_em(w, 1.0)


def _xi1_right(z: complex) -> complex:
    """xi1 for Re z >= 1/2 (no reflection)."""
    return cmath.exp(-0.5 * z * LOG_PI + complex(_sp.loggamma(0.5 * z))) * _hurwitz_em(z, 1.0)


def xi1(s) -> complex:
    """Symmetrised zeta function pi^(-s/2) Gamma(s/2) zeta(s).

    Values with Re s < 1/2 are computed as xi1(1 - s), so the functional
    equation holds to round-off.
    """
    z = _as_complex(s)
    if z == 0.0 or z == 1.0:
        raise PoleError(f"xi1 has a pole at s = {z.real:g}")
    if z.real < 0.5:
        z = 1.0 - z
    return _xi1_right(z)


# ---------------------------------------------------------------------------
# Characters and L-functions
# ---------------------------------------------------------------------------


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _check_discriminant(d: int) -> int:
    d = int(d)
    if d == 0 or d % 4 not in (0, 1):
        raise DomainError(f"{d} is not a discriminant (must be nonzero and 0 or 1 mod 4)")
    return d


def kronecker_chi(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for a discriminant d and integer n >= 0."""
    d = _check_discriminant(d)
    n = int(n)
    if n < 0:
        raise DomainError("kronecker_chi expects n >= 0")
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * _jacobi(d, n)


@lru_cache(maxsize=None)
def character_table(d: int) -> tuple[int, ...]:
    """chi_d(a) for a = 1..|d| (one full period)."""
    d = _check_discriminant(d)
    return tuple(kronecker_chi(d, a) for a in range(1, abs(d) + 1))


def dirichlet_l(d: int, s) -> complex:
    """Dirichlet L-function of the Kronecker character of discriminant d.

    Built from Hurwitz zeta values with their common pole removed, so the
    result is finite at s = 1 for every non-principal character.
    """
    z = _as_complex(s)
    d = _check_discriminant(d)
    q = abs(d)
    chars = character_table(d)
    if q == 1:
        return riemann_zeta(z)
    if z.real < 0.0:
        return _dirichlet_l_reflected(d, z)
    total = 0j
    for a, chi in enumerate(chars, start=1):
        if chi:
            total += chi * _hurwitz_em(z, a / q, regular=True)
    return cmath.exp(-z * math.log(q)) * total


def _dirichlet_l_reflected(d: int, z: complex) -> complex:
    # Lambda_d(s) = Lambda_d(1 - s); the Kronecker characters here are primitive with root number 1
    a = 0.0 if d > 0 else 1.0
    g = 0.5 * (z + a)
    if _is_nonpositive_integer(g):
        return 0j  # trivial zero
    half_log = 0.5 * (math.log(abs(d)) - LOG_PI)
    w = 1.0 - z
    log_ratio = (w - z) * half_log + complex(_sp.loggamma(0.5 * (w + a))) - complex(_sp.loggamma(g))
    return cmath.exp(log_ratio) * dirichlet_l(d, w)


def completed_l(d: int, s) -> complex:
    """Lambda_d(s) = (|d|/pi)^(s/2) Gamma((s + a)/2) L_d(s), a = 0 for d > 0, 1 for d < 0.

    For the primitive real characters used here Lambda_d(s) = Lambda_d(1 - s),
    so it is real on the critical line; d = 1 gives xi1.
    """
    z = _as_complex(s)
    d = _check_discriminant(d)
    if d == 1:
        return xi1(z)
    a = 0.0 if d > 0 else 1.0
    log_factor = 0.5 * z * (math.log(abs(d)) - LOG_PI) + complex(_sp.loggamma(0.5 * (z + a)))
    return cmath.exp(log_factor) * dirichlet_l(d, z)


# ---------------------------------------------------------------------------
# MacDonald function K_nu(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the trapezoidal evaluation of K_nu(x).

    ``abs_tol`` is the integrand magnitude, relative to its peak, below which
    the infinite range is cut; ``rel_tol`` stops step halving once successive
    estimates agree; ``max_levels`` caps the number of halvings.
    """

    abs_tol: float = 1e-18
    rel_tol: float = 1e-15
    max_levels: int = 16
    t_max_policy: str = "peak-relative"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.max_levels >= 1):
            raise DomainError("QuadratureSpec needs abs_tol > 0, rel_tol > 0, max_levels >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def _contour_height(a: float, b: float, x: float) -> float:
    """Imaginary offset of the integration line.

    The line passes near the saddle of -x cosh u + nu u, kept at least
    ``delta`` below pi/2 where the integrand stops decaying.
    """
    beta = cmath.asinh(complex(a, b) / x).imag
    excess = max(b - x, 1.0)
    delta = min(0.5, 1.0 / excess)
    return min(beta, 0.5 * math.pi - delta)


def _range_limit(x_cos: float, a: float, log_cut: float, direction: float) -> float:
    # smallest |v| beyond which -x cos(beta) cosh v + a v < peak + log_cut
    peak = -x_cos
    v = 1.0
    while -x_cos * math.cosh(v) + direction * a * v > peak + log_cut:
        v *= 1.25
        if v > 700:
            raise ConvergenceError("integrand decays too slowly; x cos(beta) too small")
    return v


def _bessel_k_core(nu: complex, x: float, q: QuadratureSpec):
    """Return (K_nu(x), error estimate, cancellation ratio)."""
    # K is even in nu and K_{conj nu} = conj K_nu: reduce to Re nu >= 0, Im nu >= 0.
    if nu.real < 0 or (nu.real == 0 and nu.imag < 0):
        nu = -nu
    conj = nu.imag < 0
    if conj:
        nu = nu.conjugate()
    a, b = nu.real, nu.imag

    beta = _contour_height(a, b, x)
    cb = math.cos(beta)
    x_cos = x * cb
    log_cut = math.log(q.abs_tol)
    v_hi = _range_limit(x_cos, a, log_cut, +1.0)
    v_lo = -_range_limit(x_cos, a, log_cut, -1.0)
    shift = complex(-x * cb, 0.0)
    phase = complex(0.0, beta)

    def integrand(v):
        u = v + phase
        return np.exp(-x * np.cosh(u) + nu * u - shift)

    width = v_hi - v_lo
    h0 = min(0.25, 0.5 * (0.5 * math.pi - beta))
    n = max(8, int(math.ceil(width / h0)))
    h = width / n
    vals = integrand(v_lo + h * np.arange(n + 1))
    total = vals.sum() - 0.5 * (vals[0] + vals[-1])
    mass = np.abs(vals).sum()
    estimate = h * total
    err = math.inf
    for _ in range(q.max_levels):
        mids = integrand(v_lo + h * (np.arange(n) + 0.5))
        total += mids.sum()
        mass += np.abs(mids).sum()
        n *= 2
        h *= 0.5
        new = h * total
        err = abs(new - estimate)
        estimate = new
        floor = 8.0 * _EPS * h * mass
        if err <= max(q.rel_tol * abs(estimate), floor):
            break
    else:
        if err > 1e3 * max(q.rel_tol * abs(estimate), 8.0 * _EPS * h * mass):
            raise ConvergenceError(f"K_nu quadrature did not converge for nu={nu}, x={x}")
    scale = 0.5 * math.exp(-x_cos)
    value = complex(0.5 * estimate) * math.exp(-x_cos)
    ratio = (h * mass) / max(abs(estimate), 1e-300)
    err_abs = scale * max(err, 8.0 * _EPS * h * mass)
    if conj:
        value = value.conjugate()
    return value, err_abs, ratio


def bessel_k(nu, x: float, q: QuadratureSpec | None = None) -> complex:
    """MacDonald function K_nu(x) for complex order and real x > 0.

    Uses the integral (1/2) int_R exp(-x cosh u + nu u) du on a line shifted
    into the complex u-plane towards the saddle point, where the integrand
    does not oscillate strongly, and trapezoidal step halving. An
    AccuracyWarning is issued when x < 1.3 |nu| and the quadrature suffered
    visible cancellation.
    """
    nu = _as_complex(nu)
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"bessel_k needs x > 0, got {x}")
    q = q or DEFAULT_QUADRATURE
    value, err, ratio = _bessel_k_core(nu, x, q)
    if x < 1.3 * abs(nu) and ratio > 1e3:
        warnings.warn(
            f"K_nu(x) with x={x:.4g} < 1.3|nu|={1.3 * abs(nu):.4g}: cancellation ratio {ratio:.1e}",
            AccuracyWarning,
            stacklevel=2,
        )
    return value


def bessel_k_with_error(nu, x: float, q: QuadratureSpec | None = None) -> tuple[complex, float]:
    """K_nu(x) together with an absolute error estimate."""
    nu = _as_complex(nu)
    x = float(x)
    if not (x > 0.0):
        raise DomainError(f"bessel_k needs x > 0, got {x}")
    value, err, _ = _bessel_k_core(nu, x, q or DEFAULT_QUADRATURE)
    return value, err
