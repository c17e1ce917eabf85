"""Expansion of S0~ about the square lattice in powers of sin(phi).

    S0~(lam, s) = C~(0,1;s) + sum_m S_2m(s) sin^(2m) phi,  sin phi = (lam^2 - 1)/(lam^2 + 1)

Each S_2m is a combination of the square-lattice trigonometric sums
C~(1,4j;s), j <= m, with coefficients polynomial in u = s(1 - s). The tables
below come from expanding (p1^2 + lam^2 p2^2)^-s binomially in sin(phi) and
reducing powers of cos(2 theta) to cos(4 j theta).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import DomainError
from ..specialfn import loggamma
from .direct import _trig_lattice_sum, direct_sum_extended, trig_sum_c
from .kober import t_minus, t_plus
from .types import as_shape

# S2M_TABLE[m][j] = (coefficients of a polynomial in u, ascending; denominator)
# giving the multiplier of C~(1, 4j; s) in S_2m(s).
S2M_TABLE = {
    1: [((0, -1), 4), ((1,), 4)],
    2: [((0, -10, 1), 64), ((6, -1), 48), ((1,), 192)],
    3: [((0, -264, 46, -1), 2304), ((120, -38, 1), 1536), ((20, -1), 3840), ((1,), 23040)],
    4: [
        ((0, -13392, 3132, -124, 1), 147456),
        ((5040, -2292, 112, -1), 92160),
        ((840, -82, 1), 184320),
        ((42, -1), 645120),
        ((1,), 5160960),
    ],
}

# The C~(1,12) term of S_8 is often quoted with denominator 654120; the
# binomial expansion gives 645120. The quoted value is kept for comparison.
_S8_PRINTED_DENOMINATOR = 654120


def _coefficient_table(m: int, printed: bool):
    rows = S2M_TABLE[m]
    if printed and m == 4:
        rows = list(rows)
        rows[3] = (rows[3][0], _S8_PRINTED_DENOMINATOR)
    return rows


def _poly_u(coeffs, u):
    return sum(c * u**k for k, c in enumerate(coeffs))


def _check_order(order: int, top: int) -> int:
    order = int(order)
    if not 0 <= order <= top:
        raise DomainError(f"order must be in 0..{top}")
    return order


def s2m_coefficient(m: int, s, radius: float = 400.0, *, printed: bool = False) -> complex:
    """S_2m(s) for m = 1..4 from direct square-lattice trig sums (Re s > 1).

    ``printed=True`` swaps in the 1/654120 denominator for comparison.
    """
    m = int(m)
    if m not in S2M_TABLE:
        raise DomainError("m must be in 1..4")
    z = complex(s)
    u = z * (1.0 - z)
    total = 0j
    for j, (poly, den) in enumerate(_coefficient_table(m, printed)):
        total += _poly_u(poly, u) / den * trig_sum_c(j, z, radius).value
    return total


def expansion_eval(shape, s, order: int = 4, radius: float = 400.0, *, printed: bool = False) -> complex:
    """C~(0,1;s) + sum_{m=1}^{order} S_2m(s) sin^(2m) phi, for Re s > 1."""
    shape = as_shape(shape)
    order = _check_order(order, 4)
    z = complex(s)
    sums = [trig_sum_c(j, z, radius).value for j in range(order + 1)]
    u = z * (1.0 - z)
    x = shape.sin_phi**2
    total = sums[0]
    for m in range(1, order + 1):
        coef = sum(_poly_u(poly, u) / den * sums[j] for j, (poly, den) in enumerate(_coefficient_table(m, printed)))
        total += coef * x**m
    return total


def expansion_residual_extended(lam: float, s: float, order: int = 4, radius: float = 400.0) -> float:
    """S0~(lam, s) - expansion_eval(lam, s, order) for real s > 1, in extended precision.

    Both sides share the factor Gamma(s) / (8 pi^s); it is pulled out so the
    difference is formed from lattice sums and exact rational coefficients
    only. Needed because the order-4 remainder near lam = 1 is below double
    precision round-off of S0~ itself.
    """
    order = _check_order(order, 4)
    z = float(s)
    if not z > 1.0:
        raise DomainError("extended residual needs real s > 1")
    ld = np.longdouble
    lam_ld = ld(lam)
    sz = ld(z)
    # S0~ / (Gamma(s)/(8 pi^s)) = lam^s S0
    lhs = lam_ld**sz * direct_sum_extended(lam, z, radius)
    # C~(1,4j) / (Gamma(s)/(8 pi^s)) = (s)_2j * raw trig sum
    raw = []
    for j in range(order + 1):
        poch = ld(1)
        for k in range(2 * j):
            poch *= sz + k
        raw.append(poch * _trig_lattice_sum(j, complex(z), radius, True)[0])
    u = sz * (ld(1) - sz)
    x = ((lam_ld * lam_ld - 1) / (lam_ld * lam_ld + 1)) ** 2
    rhs = raw[0]
    for m in range(1, order + 1):
        coef = ld(0)
        for j, (poly, den) in enumerate(S2M_TABLE[m]):
            coef += sum(ld(c) * u**k for k, c in enumerate(poly)) / ld(den) * raw[j]
        rhs += coef * x**m
    common = math.exp(float(loggamma(z).real) - z * math.log(math.pi)) / 8.0
    return float((lhs - rhs) * ld(common))


# ---------------------------------------------------------------------------
# T+ expansion
# ---------------------------------------------------------------------------
#
# With w = sin(phi), lam = sqrt((1 + w)/(1 - w)) and lam^a = exp(a atanh w), so
#
#   T+(lam, s) = A(w, s) T+(1, s) + B(w, s) T-(1, s)
#   A = (lam^-s + lam^(s-1)) / 2,  B = (lam^-s - lam^(s-1)) / 2.

# Printed version of the double series: A carries only even powers of w and
# B only odd ones. Kept for comparison; ascending powers of s.
_PRINTED_A = {
    0: ((1,), 1),
    2: ((1, -2, 1), 2),
    4: ((12, -34, 32, -8, 1), 24),
    6: ((360, -1212, 1504, -750, 205, -18, 1), 720),
}
_PRINTED_B = {
    1: ((-1,), 2),
    3: ((-2, 4, -3), 4),
    5: ((-24, 68, -76, 28, -5), 48),
    7: ((-720, 2424, -3328, 1980, -670, 96, -7), 1440),
}


def _exp_series(a: complex, order: int) -> list[complex]:
    """Taylor coefficients of exp(a atanh w) through w^order."""
    g = [0j] * (order + 1)
    for k in range(1, order + 1, 2):
        g[k] = a / k
    # f' = g' f  =>  n f_n = sum_k k g_k f_{n-k}
    f = [0j] * (order + 1)
    f[0] = 1.0 + 0j
    for n in range(1, order + 1):
        f[n] = sum(k * g[k] * f[n - k] for k in range(1, n + 1)) / n
    return f


def t_plus_coefficients(s, order: int = 7) -> tuple[list[complex], list[complex]]:
    """Taylor coefficients (A_k, B_k), k = 0..order, of the T+ expansion in w = sin(phi)."""
    z = complex(s)
    order = _check_order(order, 64)
    p = _exp_series(-z, order)
    q = _exp_series(z - 1.0, order)
    a = [0.5 * (x + y) for x, y in zip(p, q)]
    b = [0.5 * (x - y) for x, y in zip(p, q)]
    return a, b


def _printed_coefficients(s: complex, order: int):
    a = [0j] * (order + 1)
    b = [0j] * (order + 1)
    for k in range(order + 1):
        if k in _PRINTED_A:
            poly, den = _PRINTED_A[k]
            a[k] = _poly_u(poly, s) / den
        if k in _PRINTED_B:
            poly, den = _PRINTED_B[k]
            b[k] = _poly_u(poly, s) / den
    return a, b


def t_plus_expansion(shape, s, order: int = 7, *, printed: bool = False) -> complex:
    """T+(lam, s) from its expansion in sin(phi) about lam = 1, through sin^order(phi).

    ``printed=True`` uses the printed coefficient table (order <= 7), which
    does not agree with the closed form beyond the leading term.
    """
    shape = as_shape(shape)
    z = complex(s)
    order = _check_order(order, 7)
    tp = t_plus(1.0, z)
    tm = t_minus(z)
    a, b = _printed_coefficients(z, order) if printed else t_plus_coefficients(z, order)
    w = shape.sin_phi
    return sum((a[k] * tp + b[k] * tm) * w**k for k in range(order + 1))


def t_plus_split(shape, s) -> tuple[complex, complex]:
    """Exact weights (A, B) with T+(lam, s) = A T+(1, s) + B T-(1, s)."""
    shape = as_shape(shape)
    z = complex(s)
    lg = math.log(shape.lam)
    p = cmath.exp(-z * lg)
    q = cmath.exp((z - 1.0) * lg)
    return 0.5 * (p + q), 0.5 * (p - q)

