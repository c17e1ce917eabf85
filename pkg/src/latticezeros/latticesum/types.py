from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

from ..errors import DomainError
from ..specialfn import QuadratureSpec

ENV_TOL = "LZT_DEFAULT_TOL"


@dataclass(frozen=True)
class LatticeShape:
    """Rectangular lattice with period ratio ``lam``.

    ``chi = lam - 1/lam`` and ``sin_phi = (lam**2 - 1)/(lam**2 + 1)`` are the
    expansion variables about the square lattice; ``c = lam**2``.
    """

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not (lam > 0.0 and math.isfinite(lam)):
            raise DomainError(f"period ratio must be positive, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_c(cls, c: float) -> "LatticeShape":
        if not c > 0:
            raise DomainError(f"c = lambda^2 must be positive, got {c!r}")
        return cls(math.sqrt(c))

    @classmethod
    def from_chi(cls, chi: float) -> "LatticeShape":
        return cls(0.5 * chi + math.sqrt(1.0 + 0.25 * chi * chi))

    @property
    def c(self) -> float:
        return self.lam * self.lam

    @property
    def chi(self) -> float:
        return self.lam - 1.0 / self.lam

    @property
    def sin_phi(self) -> float:
        c = self.c
        return (c - 1.0) / (c + 1.0)

    @property
    def folded(self) -> float:
        """max(lam, 1/lam), the ratio at which MacDonald sums converge fastest."""
        return self.lam if self.lam >= 1.0 else 1.0 / self.lam

    def reciprocal(self) -> "LatticeShape":
        return LatticeShape(1.0 / self.lam)


def as_shape(shape) -> LatticeShape:
    return shape if isinstance(shape, LatticeShape) else LatticeShape(shape)


@dataclass(frozen=True)
class EvalConfig:
    """Truncation policy for the MacDonald series and the K_nu quadrature.

    A MacDonald sum is truncated once the Bessel argument exceeds
    ``activation_ratio`` times the order modulus *and* a geometric bound on
    the remaining terms is below ``target_rel_err`` times the running scale.
    """

    target_rel_err: float = 1e-14
    max_terms_per_axis: int = 400
    bessel_quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    activation_ratio: float = 1.3

    def __post_init__(self):
        if not self.target_rel_err > 0:
            raise DomainError("target_rel_err must be positive")
        if self.max_terms_per_axis < 4:
            raise DomainError("max_terms_per_axis must be at least 4")

    @classmethod
    def from_env(cls, **overrides) -> "EvalConfig":
        """Default config, with ``target_rel_err`` taken from LZT_DEFAULT_TOL if set."""
        tol = os.environ.get(ENV_TOL)
        if tol and "target_rel_err" not in overrides:
            overrides["target_rel_err"] = float(tol)
        return cls(**overrides)

    def tightened(self, factor: float = 10.0) -> "EvalConfig":
        q = self.bessel_quadrature
        return replace(
            self,
            target_rel_err=self.target_rel_err / factor,
            bessel_quadrature=replace(q, rel_tol=max(q.rel_tol / factor, 1e-17)),
        )


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class SumValue:
    """A series value with its error estimate.

    ``scale`` is the sum of the moduli of the contributions; near a zero the
    value is small compared with it, and residuals are judged against it.
    """

    value: complex
    est_abs_err: float
    terms_used: int
    warnings: tuple[str, ...] = ()
    scale: float = 0.0

    def __complex__(self) -> complex:
        return complex(self.value)

    @property
    def rel_err(self) -> float:
        return self.est_abs_err / abs(self.value) if self.value else math.inf
