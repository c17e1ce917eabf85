"""Closed forms of S0(lam, s) at lam**2 = 1..7 and their prefactor zeros."""

from __future__ import annotations

import cmath
import math

from ..errors import UnsupportedShape
from ..specialfn import dirichlet_l, riemann_zeta
from .types import as_shape

LN2 = math.log(2.0)


def _pow2(z: complex) -> complex:
    return cmath.exp(z * LN2)


def _integer_c(shape, allowed) -> int:
    shape = as_shape(shape)
    c = shape.c
    k = round(c)
    if k not in allowed or abs(c - k) > 1e-12 * k:
        raise UnsupportedShape(f"no closed form for lam**2 = {c!r}; supported: {sorted(allowed)}")
    return k


def factorized_reference(shape, s) -> complex:
    """S0(lam, s) from products of Dirichlet L-functions, lam**2 in 1..7.

    lam^2 = 1: 4 zeta L_-4          lam^2 = 2: 2 zeta L_-8
    lam^2 = 3: 2 (1 + 2^(1-2s)) zeta L_-3
    lam^2 = 4: 2 (1 - 2^-s + 2^(1-2s)) zeta L_-4
    lam^2 = 5: zeta L_-20 + L_-4 L_5
    lam^2 = 6: zeta L_-24 + L_-3 L_8
    lam^2 = 7: 2 (1 - 2^(1-s) + 2^(1-2s)) zeta L_-7
    """
    k = _integer_c(shape, range(1, 8))
    z = complex(s)
    zeta = riemann_zeta(z)
    if k == 1:
        return 4.0 * zeta * dirichlet_l(-4, z)
    if k == 2:
        return 2.0 * zeta * dirichlet_l(-8, z)
    if k == 3:
        # the representation counts of p1^2 + 3 p2^2 fix the sign as +2^(1-2s)
        return 2.0 * (1.0 + _pow2(1.0 - 2.0 * z)) * zeta * dirichlet_l(-3, z)
    if k == 4:
        return 2.0 * (1.0 - _pow2(-z) + _pow2(1.0 - 2.0 * z)) * zeta * dirichlet_l(-4, z)
    if k == 5:
        return zeta * dirichlet_l(-20, z) + dirichlet_l(-4, z) * dirichlet_l(5, z)
    if k == 6:
        return zeta * dirichlet_l(-24, z) + dirichlet_l(-3, z) * dirichlet_l(8, z)
    return 2.0 * (1.0 - _pow2(1.0 - z) + _pow2(1.0 - 2.0 * z)) * zeta * dirichlet_l(-7, z)


def prefactor(shape, s) -> complex:
    """The elementary factor multiplying zeta * L in the lam**2 = 3, 4, 7 closed forms."""
    k = _integer_c(shape, (3, 4, 7))
    z = complex(s)
    if k == 3:
        return 1.0 + _pow2(1.0 - 2.0 * z)
    if k == 4:
        return 1.0 - _pow2(-z) + _pow2(1.0 - 2.0 * z)
    return 1.0 - _pow2(1.0 - z) + _pow2(1.0 - 2.0 * z)


def prefactor_zeros(shape, n_range) -> list[complex]:
    """Zeros of the prefactor for lam**2 in {3, 4, 7}, all on Re s = 1/2.

    ``n_range`` is an iterable of integers (e.g. ``range(0, 4)``) indexing the
    periodic families:

    lam^2 = 3: s = 1/2 + (2n + 1) pi i / (2 ln 2)
    lam^2 = 4: s = 1/2 +- i arctan(sqrt 7) / ln 2 + 2 n pi i / ln 2
    lam^2 = 7: s = 1/2 +- i pi / (4 ln 2) + 2 n pi i / ln 2

    For lam^2 = 7 the minus family holds the conjugates of the plus family
    with negative n, listed so that a range of n >= 0 covers every positive t.
    The result is sorted by imaginary part.
    """
    k = _integer_c(shape, (3, 4, 7))
    out = []
    period = 2.0 * math.pi / LN2
    for n in n_range:
        n = int(n)
        if k == 3:
            out.append(complex(0.5, (2 * n + 1) * math.pi / (2.0 * LN2)))
        else:
            offset = math.atan(math.sqrt(7.0)) / LN2 if k == 4 else math.pi / (4.0 * LN2)
            out.append(complex(0.5, offset + n * period))
            out.append(complex(0.5, -offset + n * period))
    return sorted(set(out), key=lambda z: z.imag)


# L-function factors of the single-product closed forms (lam^2 = 5, 6 are sums)
FACTORS = {1: (1, -4), 2: (1, -8), 3: (1, -3), 4: (1, -4), 7: (1, -7)}


def factor_zeros(shape, t_min: float, t_max: float, step: float = 0.01) -> list[tuple[str, complex]]:
    """Critical-line zeros of the factors of S0(lam, s), for overlays.

    Returns (label, s) pairs: "zeta", "L-4", ... for zeros of the L-function
    factors (sign changes of the completed function, Brent-refined) and
    "prefactor" for the analytic prefactor zeros. Empty for lam^2 = 5, 6.
    """
    from scipy import optimize

    from ..specialfn import completed_l

    k = _integer_c(shape, range(1, 8))
    out: list[tuple[str, complex]] = []
    if k not in FACTORS or t_max <= t_min:
        return out
    n = max(2, int(math.ceil((t_max - t_min) / step)) + 1)
    ts = [t_min + (t_max - t_min) * i / (n - 1) for i in range(n)]
    for d in FACTORS[k]:
        label = "zeta" if d == 1 else f"L{d:+d}"

        def z(t, d=d):
            return completed_l(d, complex(0.5, t)).real

        vals = [z(t) for t in ts]
        for a, b, za, zb in zip(ts[:-1], ts[1:], vals[:-1], vals[1:]):
            if za == 0.0:
                out.append((label, complex(0.5, a)))
            elif za * zb < 0:
                out.append((label, complex(0.5, optimize.brentq(z, a, b, xtol=1e-12))))
    if k in (3, 4, 7):
        period = 2.0 * math.pi / LN2
        n_hi = int(math.ceil(max(abs(t_min), abs(t_max)) / period)) + 1
        for w in prefactor_zeros(shape, range(-n_hi, n_hi + 1)):
            if t_min <= w.imag <= t_max:
                out.append(("prefactor", w))
    out.sort(key=lambda p: (p[1].imag, p[0]))
    return out
