"""Residuals of the symmetry and derivative identities satisfied by S0 and K."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..specialfn import xi1
from .kober import macdonald_sum, s0, s0_tilde
from .types import DEFAULT_CONFIG, EvalConfig, as_shape

# fourth-order central difference weights for f'(x) on x +- h, x +- 2h
_FD4 = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))


@dataclass(frozen=True)
class Residual:
    name: str
    value: float
    lhs: complex
    rhs: complex


def _relative(name: str, lhs: complex, rhs: complex) -> Residual:
    big = max(abs(lhs), abs(rhs))
    return Residual(name, abs(lhs - rhs) / big if big > 0 else 0.0, lhs, rhs)


def _step(s: complex, h: float | None) -> float:
    # the lam-derivatives grow like |s|^k, so the step shrinks with |s|
    return h if h is not None else 3e-4 / max(1.0, abs(s))


def _derivative(f, x: float, h: float) -> complex:
    return sum(w * f(x + k * h) for k, w in _FD4) / h


def reciprocal_residual(shape, s, cfg: EvalConfig | None = None) -> Residual:
    """S0~(lam, s) = S0~(1/lam, s), both sides from the unfolded Kober form.

    The two evaluations use MacDonald sums at different ratios (lam and 1/lam)
    and different T+ terms, so agreement is a genuine check.
    """
    shape = as_shape(shape)
    a = s0_tilde(shape, s, cfg, fold=False).value
    b = s0_tilde(shape.reciprocal(), s, cfg, fold=False).value
    return _relative("reciprocal", a, b)


def functional_residual(shape, s, cfg: EvalConfig | None = None) -> Residual:
    """S0~(lam, s) = S0~(lam, 1 - s).

    The left side is folded to max(lam, 1/lam), the right side is not, so the
    check is not satisfied trivially by the evenness of K_nu in nu.
    """
    z = complex(s)
    return _relative(
        "functional", s0_tilde(shape, z, cfg).value, s0_tilde(shape, 1.0 - z, cfg, fold=False).value
    )


def s0_reciprocal_residual(shape, s, cfg: EvalConfig | None = None) -> Residual:
    """S0(lam, s) = lam^(-2s) S0(1/lam, s), on the unsymmetrised sum."""
    shape = as_shape(shape)
    z = complex(s)
    lhs = s0(shape, z, cfg).value
    rhs = cmath.exp(-2.0 * z * math.log(shape.lam)) * s0(shape.reciprocal(), z, cfg).value
    return _relative("s0-reciprocal", lhs, rhs)


def k_symmetry_residual(shape, s, cfg: EvalConfig | None = None) -> Residual:
    """xi1 / K identity:

        [xi1(2s)(lam^-s - lam^s) + xi1(2s-1)(lam^(s-1) - lam^(1-s))] / 4
            = sqrt(lam) K(0,0;s;lam) - K(0,0;s;1/lam) / sqrt(lam)
    """
    shape = as_shape(shape)
    lam = shape.lam
    z = complex(s)
    if lam == 1.0:
        return Residual("k-symmetry", 0.0, 0j, 0j)
    lg = math.log(lam)
    lhs = 0.25 * (
        xi1(2.0 * z) * (cmath.exp(-z * lg) - cmath.exp(z * lg))
        + xi1(2.0 * z - 1.0) * (cmath.exp((z - 1.0) * lg) - cmath.exp((1.0 - z) * lg))
    )
    root = math.sqrt(lam)
    rhs = root * macdonald_sum(0, 0, z, lam, cfg).value - macdonald_sum(0, 0, z, 1.0 / lam, cfg).value / root
    return _relative("k-symmetry", lhs, rhs)


def k_derivative_residual(s, cfg: EvalConfig | None = None, h: float | None = None) -> Residual:
    """First-order form at lam = 1:

        s xi1(2s) + (1-s) xi1(2s-1) = -2 K(0,0;s;1) - 4 dK/dlam |_(lam=1)

    with the derivative by a fourth-order central difference.
    """
    z = complex(s)
    cfg = cfg or DEFAULT_CONFIG
    lhs = z * xi1(2.0 * z) + (1.0 - z) * xi1(2.0 * z - 1.0)

    def k(lam):
        return macdonald_sum(0, 0, z, lam, cfg).value

    rhs = -2.0 * k(1.0) - 4.0 * _derivative(k, 1.0, _step(z, h))
    return _relative("k-derivative", lhs, rhs)


def lambda_derivative_residual(s, cfg: EvalConfig | None = None, h: float | None = None) -> Residual:
    """dS0/dlam at lam = 1 equals -s S0(1, s); fourth-order central difference."""
    z = complex(s)
    lhs = _derivative(lambda lam: s0(lam, z, cfg).value, 1.0, _step(z, h))
    rhs = -z * s0(1.0, z, cfg).value
    return _relative("lambda-derivative", lhs, rhs)


def identity_residuals(shape, s, cfg: EvalConfig | None = None) -> list[Residual]:
    """All identity residuals at (lam, s), each normalised by the larger side.

    The two lam = 1 derivative identities do not depend on ``shape``.
    """
    shape = as_shape(shape)
    cfg = cfg or DEFAULT_CONFIG
    return [
        functional_residual(shape, s, cfg),
        reciprocal_residual(shape, s, cfg),
        s0_reciprocal_residual(shape, s, cfg),
        k_symmetry_residual(shape, s, cfg),
        k_derivative_residual(s, cfg),
        lambda_derivative_residual(s, cfg),
    ]
