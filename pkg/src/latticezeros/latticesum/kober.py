"""Kober representation of the rectangular lattice sum.

    S0~(lam, s) = T+(lam, s) + lam**-0.5 * K(0, 0; s; 1/lam)

with T+ built from xi1(2s), xi1(2s - 1) and K a MacDonald double sum. For
lam > 1 the same value is computed at 1/lam (S0~ is invariant under
lam -> 1/lam), so that every MacDonald sum is taken at ratio >= 1.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from ..errors import ConvergenceError, DomainError, PoleError
from ..specialfn import _bessel_k_core, _xi1_right, LOG_PI, xi1
from .types import DEFAULT_CONFIG, EvalConfig, SumValue, as_shape

TWO_PI = 2.0 * math.pi
LOG_8 = math.log(8.0)

# T+ has removable singularities at s = 1/2; inside this disc it is evaluated
# from its Taylor series, built from samples on a circle of radius _PATCH_RADIUS.
_HALF_EXCLUSION = 1e-2
_PATCH_RADIUS = 0.1
_PATCH_NODES = 48


def _complex(s) -> complex:
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite s = {s!r}")
    return z


def cauchy_patch(f, center: complex, s: complex, radius: float = _PATCH_RADIUS, nodes: int = _PATCH_NODES):
    """Evaluate an analytic f at s from its Taylor series about ``center``.

    The coefficients come from an FFT of f on the circle |z - center| = radius,
    so f is never evaluated near ``center`` itself.
    """
    k = np.arange(nodes)
    ring = center + radius * np.exp(2j * math.pi * k / nodes)
    samples = np.array([complex(f(z)) for z in ring])
    coeffs = np.fft.fft(samples) / nodes / radius ** k
    dz = s - center
    return complex(np.polyval(coeffs[::-1], dz))


# ---------------------------------------------------------------------------
# T+ and T-
# ---------------------------------------------------------------------------


def _xi_pair(s: complex) -> tuple[complex, complex]:
    """(xi1(2s), xi1(2s - 1)), each evaluated on the side Re >= 1/2."""
    a = 2.0 * s
    b = 2.0 * s - 1.0
    xa = _xi1_right(a if a.real >= 0.5 else 1.0 - a)
    xb = _xi1_right(b if b.real >= 0.5 else 1.0 - b)
    return xa, xb


def _t_plus_direct(lam: float, s: complex) -> tuple[complex, float]:
    xa, xb = _xi_pair(s)
    loglam = math.log(lam)
    u = 0.25 * xa * cmath.exp(-s * loglam)
    v = 0.25 * xb * cmath.exp((s - 1.0) * loglam)
    return u + v, abs(u) + abs(v)


def t_plus_value(lam: float, s: complex) -> tuple[complex, float]:
    """T+(lam, s) and the moduli sum of its two terms; regular at s = 1/2."""
    if s == 0.0 or s == 1.0:
        raise PoleError(f"T+ has a pole at s = {s.real:g}")
    if abs(s - 0.5) < _HALF_EXCLUSION:
        value = cauchy_patch(lambda z: _t_plus_direct(lam, z)[0], 0.5 + 0j, s)
        return value, abs(value)
    return _t_plus_direct(lam, s)


def t_plus(shape, s) -> complex:
    """T+(lam, s) = [xi1(2s) lam**-s + xi1(2s-1) lam**(s-1)] / 4.

    Raises PoleError at s in {0, 1/2, 1}; the singularity at 1/2 is removable
    and points near it are evaluated through a local Taylor patch.
    """
    shape = as_shape(shape)
    z = _complex(s)
    if z in (0.0, 0.5, 1.0):
        raise PoleError(f"T+ is excluded at s = {z.real:g}")
    return t_plus_value(shape.lam, z)[0]


def t_minus(s) -> complex:
    """T-(1, s) = [xi1(2s) - xi1(2s-1)] / 4, odd under s -> 1 - s."""
    z = _complex(s)
    if z in (0.0, 0.5, 1.0):
        raise PoleError(f"T- has a pole at s = {z.real:g}")
    return 0.25 * (xi1(2.0 * z) - xi1(2.0 * z - 1.0))


# ---------------------------------------------------------------------------
# MacDonald double sums
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


def _macdonald_core(n: int, m: int, s: complex, lam: float, cfg: EvalConfig, scale_floor: float = 0.0):
    """Return (value, abs error, scale, terms) for K(n, m; s; lam).

    Terms with p1 * p2 = N share the Bessel factor, so the double sum is
    accumulated over N with divisor-sum coefficients.
    """
    nu = s - 0.5
    order = nu + m
    q = cfg.bessel_quadrature
    power = 1.0 + abs(nu.real) + n
    alpha = abs(order.real)
    decay = math.exp(-TWO_PI * lam)
    activation = cfg.activation_ratio * abs(order)
    total = 0j
    abs_sum = 0.0
    quad_err = 0.0
    tail = math.inf
    a_exp = nu + n
    b_exp = nu - n
    for big_n in range(1, cfg.max_terms_per_axis + 1):
        x = TWO_PI * big_n * lam
        kval, kerr, _ = _bessel_k_core(order, x, q)
        coeff = 0j
        coeff_abs = 0.0
        for p1 in _divisors(big_n):
            p2 = big_n // p1
            w = cmath.exp(a_exp * math.log(p2) - b_exp * math.log(p1))
            coeff += w
            coeff_abs += abs(w)
        term = coeff * kval
        total += term
        abs_sum += coeff_abs * abs(kval)
        quad_err += coeff_abs * kerr
        if x >= activation:
            nxt = big_n + 1
            rho = ((nxt + 1) / nxt) ** power * decay
            if rho < 1.0:
                first = nxt ** power * float(_sp.kv(alpha, TWO_PI * nxt * lam))
                tail = first / (1.0 - rho)
                if tail <= cfg.target_rel_err * max(abs_sum, scale_floor):
                    break
    else:
        raise ConvergenceError(
            f"MacDonald sum K({n},{m};s={s};lam={lam}) not converged after {cfg.max_terms_per_axis} terms"
        )
    factor = math.pi ** n
    return factor * total, factor * (quad_err + tail), factor * abs_sum, big_n


def macdonald_sum(n: int, m: int, s, lam: float, cfg: EvalConfig | None = None) -> SumValue:
    """MacDonald double sum

        K(n, m; s; lam) = pi**n sum_{p1, p2 >= 1} p2**(s-1/2+n) p1**(-(s-1/2-n)) K_{s-1/2+m}(2 pi p1 p2 lam)

    Convergence is rapid for lam >= 1; smaller ratios are accepted but need
    more terms.
    """
    z = _complex(s)
    lam = float(lam)
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    if not lam > 0:
        raise DomainError("lam must be positive")
    cfg = cfg or DEFAULT_CONFIG
    value, err, scale, terms = _macdonald_core(int(n), int(m), z, lam, cfg)
    return SumValue(value, err, terms, (), scale)


# ---------------------------------------------------------------------------
# S0~ and S0
# ---------------------------------------------------------------------------


def _s0_tilde_raw(lam: float, s: complex, cfg: EvalConfig, fold: bool = True):
    """(value, abs error, scale, terms) of S0~(lam, s) for s away from 0 and 1."""
    if fold:
        big = lam if lam >= 1.0 else 1.0 / lam
        small = 1.0 / big
    else:
        small = lam
        big = 1.0 / lam
    tp, tp_scale = t_plus_value(small, s)
    root = 1.0 / math.sqrt(small)
    kval, kerr, kscale, terms = _macdonald_core(0, 0, s, big, cfg, scale_floor=tp_scale / root)
    value = tp + root * kval
    scale = tp_scale + root * kscale
    err = root * kerr + 64.0 * np.finfo(float).eps * scale
    return value, err, scale, terms


def s0_tilde_value(lam: float, s: complex, cfg: EvalConfig | None = None) -> tuple[complex, float]:
    """Fast path: (S0~(lam, s), scale). Used by the zero finders."""
    if s == 0.0 or s == 1.0:
        raise PoleError(f"S0~ has a pole at s = {s.real:g}")
    value, _, scale, _ = _s0_tilde_raw(lam, s, cfg or DEFAULT_CONFIG)
    return value, scale


def s0_tilde(shape, s, cfg: EvalConfig | None = None, *, fold: bool = True) -> SumValue:
    """Symmetrised lattice sum lam**s Gamma(s) / (8 pi**s) * S0(lam, s).

    Invariant under lam -> 1/lam and s -> 1 - s, real on Re s = 1/2, with
    simple poles at s = 0 and s = 1. ``fold=False`` evaluates the Kober form
    literally at the given lam (slower for lam > 1; used as a cross-check).
    """
    shape = as_shape(shape)
    z = _complex(s)
    if z == 0.0 or z == 1.0:
        raise PoleError(f"S0~ has a pole at s = {z.real:g}")
    value, err, scale, terms = _s0_tilde_raw(shape.lam, z, cfg or DEFAULT_CONFIG, fold=fold)
    return SumValue(value, err, terms, (), scale)


def _tilde_to_s0(lam: float, s: complex) -> complex:
    """Factor 8 pi**s / (lam**s Gamma(s)) turning S0~ into S0."""
    return 8.0 * cmath.exp(s * (LOG_PI - math.log(lam))) * complex(_sp.rgamma(s))


def s0(shape, s, cfg: EvalConfig | None = None) -> SumValue:
    """Rectangular lattice sum S0(lam, s) = sum' (p1**2 + lam**2 p2**2)**-s, continued in s.

    Evaluated as 8 pi**s / (lam**s Gamma(s)) * S0~(lam, s). The only pole is
    s = 1; S0(lam, 0) = -1 is reached through a Taylor patch.
    """
    shape = as_shape(shape)
    z = _complex(s)
    cfg = cfg or DEFAULT_CONFIG
    if z == 1.0:
        raise PoleError("S0 has a pole at s = 1")
    lam = shape.lam
    if abs(z) < _HALF_EXCLUSION:
        value = cauchy_patch(lambda w: _tilde_to_s0(lam, w) * _s0_tilde_raw(lam, w, cfg)[0], 0j, z)
        return SumValue(value, 1e-13 * max(abs(value), 1.0), 0, ("taylor-patch",), abs(value))
    tv, err, scale, terms = _s0_tilde_raw(lam, z, cfg)
    factor = _tilde_to_s0(lam, z)
    return SumValue(factor * tv, abs(factor) * err, terms, (), abs(factor) * scale)
