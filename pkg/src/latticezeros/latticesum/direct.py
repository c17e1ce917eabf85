"""Direct lattice summation, independent of the Bessel-function route.

Sums run over the first quadrant with multiplicity weights. By default the
cutoff is smooth: terms are weighted by g(rho), rho = sqrt(Q)/R, with g = 1
for rho <= 1/2 falling to 0 at rho = 1 through a C-infinity step, and the
discarded part is replaced by its continuum integral. For smooth weights the
lattice-versus-integral discrepancy decays faster than any power of R, so
moderate radii give near machine-precision results. ``smooth=False`` gives
the literal sharp truncation plus the same continuum tail.

Real s is summed in extended precision (numpy longdouble).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..specialfn import loggamma
from .types import SumValue, as_shape

_INNER = 0.5
_GL_NODES = 400
_PI_LD = np.longdouble("3.14159265358979323846264338327950288")


def _smoothstep(x):
    """C-infinity step from 0 (x <= 0) to 1 (x >= 1)."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def cutoff_weight(rho):
    """Weight g(rho): 1 inside rho <= 1/2, 0 outside rho >= 1."""
    return 1.0 - _smoothstep((rho - _INNER) / (1.0 - _INNER))


def _quadrant(lam: float, radius: float, dtype):
    """First-quadrant lattice points with Q = p1^2 + lam^2 p2^2 <= radius^2.

    Returns (p1^2, p2^2, weights); the origin is excluded and points on an
    axis carry weight 2 instead of 4.
    """
    r2 = radius * radius
    lam2 = lam * lam
    p2_max = int(math.floor(radius / lam))
    p2 = np.arange(p2_max + 1)
    p1_max = np.floor(np.sqrt(np.maximum(r2 - lam2 * p2.astype(float) ** 2, 0.0))).astype(np.int64)
    counts = p1_max + 1
    rows = np.repeat(p2, counts)
    starts = np.cumsum(counts) - counts
    cols = np.arange(counts.sum()) - np.repeat(starts, counts)
    keep = (rows > 0) | (cols > 0)
    rows, cols = rows[keep], cols[keep]
    weight = np.where((rows == 0) | (cols == 0), 2.0, 4.0).astype(dtype)
    return cols.astype(dtype) ** 2, rows.astype(dtype) ** 2, weight


def _tail_integral(s: complex, smooth: bool) -> complex:
    """int_0^inf (1 - g(rho)) 2 rho^(1-2s) d rho, in units where R = 1."""
    if not smooth:
        return 1.0 / (s - 1.0)
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    rho = _INNER + 0.5 * (1.0 - _INNER) * (x + 1.0)
    vals = (1.0 - cutoff_weight(rho)) * 2.0 * np.exp((1.0 - 2.0 * s) * np.log(rho))
    inner = 0.5 * (1.0 - _INNER) * complex(np.dot(w, vals))
    return inner + 1.0 / (s - 1.0)


def _power(q, s: complex, extended: bool):
    if extended:
        return q ** np.longdouble(-s.real)
    return np.exp(-s * np.log(q))


def _check_s(s) -> complex:
    z = complex(s)
    if not z.real > 1.0:
        raise DomainError(f"direct summation needs Re s > 1, got {z}")
    return z


def _sum_ellipse(lam, s, radius, smooth, extended):
    dtype = np.longdouble if extended else float
    a, b, weight = _quadrant(lam, radius, dtype)
    lam_ld = dtype(lam)
    q = a + lam_ld * lam_ld * b
    terms = weight * _power(q, s, extended)
    if smooth:
        terms = terms * cutoff_weight(np.sqrt(q.astype(float)) / radius).astype(dtype)
    total = terms.sum()
    tail = math.pi / lam * complex(np.exp((2.0 - 2.0 * s) * math.log(radius))) * _tail_integral(s, smooth)
    return total, tail, len(terms), float(np.abs(terms).sum())


def direct_sum(shape, s, radius: float = 400.0, *, smooth: bool = True) -> SumValue:
    """S0(lam, s) by summing (p1^2 + lam^2 p2^2)^-s over 0 < Q <= radius^2.

    The continuum tail is added; ``est_abs_err`` combines the change against
    a 0.8x radius evaluation with a round-off bound.
    """
    shape = as_shape(shape)
    z = _check_s(s)
    if radius < 10:
        raise DomainError("radius must be at least 10")
    extended = z.imag == 0.0
    values = []
    for r in (radius, 0.8 * radius):
        total, tail, count, mass = _sum_ellipse(shape.lam, z, r, smooth, extended)
        values.append((complex(total) + tail, count, mass))
    value, count, mass = values[0]
    eps = float(np.finfo(np.longdouble if extended else float).eps)
    err = abs(value - values[1][0]) + 8.0 * eps * mass
    if not smooth:
        # lattice-point discrepancy at the sharp edge, |E(u)| <~ perimeter
        err += 8.0 * (1.0 + 1.0 / shape.lam) * radius ** (1.0 - 2.0 * z.real) * (1.0 + abs(z) / (z.real - 0.5))
    return SumValue(value, err, count, (), mass)


def direct_sum_extended(lam: float, s: float, radius: float = 400.0) -> np.longdouble:
    """Real-s S0(lam, s) in extended precision (smooth cutoff)."""
    z = _check_s(s)
    if z.imag != 0.0:
        raise DomainError("extended-precision sums need real s")
    total, tail, _, _ = _sum_ellipse(float(lam), z, radius, True, True)
    return total + np.longdouble(tail.real)


def _chebyshev_even(c, m: int):
    """T_m(c) by the three-term recursion (c = cos 2 theta, so T_{2m}(c) = cos 4 m theta)."""
    t_prev = np.ones_like(c)
    if m == 0:
        return t_prev
    t_cur = c
    for _ in range(m - 1):
        t_prev, t_cur = t_cur, 2 * c * t_cur - t_prev
    return t_cur


def _trig_lattice_sum(m: int, s: complex, radius: float, extended: bool):
    dtype = np.longdouble if extended else float
    a, b, weight = _quadrant(1.0, radius, dtype)
    r2 = a + b
    cos2 = (a - b) / r2
    terms = weight * _chebyshev_even(cos2, 2 * m) * _power(r2, s, extended)
    terms = terms * cutoff_weight(np.sqrt(r2.astype(float)) / radius).astype(dtype)
    total = terms.sum()
    if m == 0:
        tail = math.pi * complex(np.exp((2.0 - 2.0 * s) * math.log(radius))) * _tail_integral(s, True)
        total = total + (np.longdouble(tail.real) if extended else tail)
    return total, len(terms), float(np.abs(terms).sum())


def trig_prefactor(m: int, s: complex, extended: bool = False):
    """Gamma(2m + s) / (8 pi^s)."""
    if extended:
        x = np.longdouble(s.real)
        return np.longdouble(math.exp(float(loggamma(2 * m + s.real).real))) / (8 * _PI_LD ** x)
    return np.exp(loggamma(2 * m + s) - s * math.log(math.pi)) / 8.0


def trig_sum_c(m: int, s, radius: float = 400.0) -> SumValue:
    """Square-lattice trigonometric sum

        C~(1, 4m; s) = Gamma(2m + s) / (8 pi^s) * sum' cos(4 m theta) / (p1^2 + p2^2)^s

    for Re s > 1 and 0 <= m <= 4, with cos 4m theta from integer coordinates.
    C~(1, 0; s) equals S0~(1, s).
    """
    m = int(m)
    if not 0 <= m <= 4:
        raise DomainError("trig_sum_c supports 0 <= m <= 4")
    z = _check_s(s)
    extended = z.imag == 0.0
    vals = []
    for r in (radius, 0.8 * radius):
        total, count, mass = _trig_lattice_sum(m, z, r, extended)
        vals.append(complex(total))
    pre = complex(trig_prefactor(m, z))
    eps = float(np.finfo(np.longdouble if extended else float).eps)
    err = abs(pre) * (abs(vals[0] - vals[1]) + 8.0 * eps * mass)
    return SumValue(pre * vals[0], err, count, (), abs(pre) * mass)


def trig_sum_c_extended(m: int, s: float, radius: float = 400.0) -> np.longdouble:
    """C~(1, 4m; s) for real s in extended precision."""
    z = _check_s(s)
    if z.imag != 0.0:
        raise DomainError("extended-precision sums need real s")
    total, _, _ = _trig_lattice_sum(int(m), z, radius, True)
    return trig_prefactor(int(m), z, extended=True) * total
