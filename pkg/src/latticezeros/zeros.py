"""Zeros of S0~(lam, s): critical-line scanning, argument-principle counts,
Newton refinement and multiplicity.

On the critical line S0~(lam, 1/2 + it) is real, so zeros there show up as
sign changes of Z(t) = Re S0~(lam, 1/2 + it). Zeros off the line come in
pairs s, 1 - conj(s) and show up on the line only as minima of |Z|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterator

import numpy as np
from scipy import optimize

from .errors import AccuracyError, BoundaryZeroError, DomainError, NoConvergence
from .latticesum import DEFAULT_CONFIG, EvalConfig
from .latticesum.kober import s0_tilde_value
from .specialfn import loggamma

LINE_TOL = 1e-8
RESIDUAL_TOL = 1e-10
REALNESS_TOL = 1e-9

# phase increments along a contour are kept below this (certified < pi/2)
_MAX_PHASE_STEP = math.pi / 4
_MAX_LOG_RATIO = 1.0

Evaluator = Callable[[complex], "tuple[complex, float]"]


class ZeroMethod(str, Enum):
    LINE_SCAN = "LineScan"
    NEWTON_REFINE = "NewtonRefine"
    ARG_PRINCIPLE = "ArgPrinciple"


@dataclass(frozen=True)
class ZeroRecord:
    lam: float
    s: complex
    multiplicity: int
    residual: float
    method: ZeroMethod
    scale: float = 0.0

    @property
    def on_critical_line(self) -> bool:
        return abs(self.s.real - 0.5) <= LINE_TOL

    @property
    def rel_residual(self) -> float:
        return self.residual / self.scale if self.scale > 0 else math.inf

    @property
    def c(self) -> float:
        return self.lam * self.lam


@dataclass(frozen=True)
class Region:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not (self.sigma_min < self.sigma_max and self.t_min < self.t_max):
            raise DomainError(f"degenerate region {self}")

    def grown(self, delta: float) -> "Region":
        return Region(self.sigma_min - delta, self.sigma_max + delta, self.t_min - delta, self.t_max + delta)

    def contains(self, s: complex) -> bool:
        return self.sigma_min < s.real < self.sigma_max and self.t_min < s.imag < self.t_max

    def corners(self) -> list[complex]:
        return [
            complex(self.sigma_min, self.t_min),
            complex(self.sigma_max, self.t_min),
            complex(self.sigma_max, self.t_max),
            complex(self.sigma_min, self.t_max),
        ]


@dataclass
class ScanResult:
    """Sign-change zeros on the critical line plus |Z| minima without a sign change."""

    lam: float
    zeros: list[ZeroRecord] = field(default_factory=list)
    candidates: list[float] = field(default_factory=list)
    max_imag_ratio: float = 0.0

    def __iter__(self) -> Iterator[ZeroRecord]:
        return iter(self.zeros)

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def t_values(self) -> list[float]:
        return [z.s.imag for z in self.zeros]


def evaluator(lam: float, cfg: EvalConfig | None = None) -> Evaluator:
    """s -> (S0~(lam, s), scale)."""
    cfg = cfg or DEFAULT_CONFIG
    lam = float(lam)
    if not lam > 0:
        raise DomainError("lam must be positive")

    def f(s: complex):
        return s0_tilde_value(lam, complex(s), cfg)

    return f


# ---------------------------------------------------------------------------
# critical-line scan
# ---------------------------------------------------------------------------


class _LineSampler:
    # module-level and picklable so process pools can use it
    def __init__(self, lam: float, cfg: EvalConfig):
        self.lam, self.cfg = lam, cfg

    def __call__(self, s: complex):
        return s0_tilde_value(self.lam, s, self.cfg)


def _hardy_weight(t: float) -> float:
    """1/|Gamma(1/2 + it)|, removing the exponential decay of S0~ along the line."""
    return math.exp(-loggamma(complex(0.5, t)).real)


def scan_critical_line(
    lam: float,
    t_min: float,
    t_max: float,
    step: float = 0.01,
    cfg: EvalConfig | None = None,
    *,
    func: Evaluator | None = None,
    realness_tol: float = REALNESS_TOL,
    mapper: Callable | None = None,
) -> ScanResult:
    """Zeros of Z(t) = S0~(lam, 1/2 + it) for t_min <= t <= t_max.

    Each sign change is refined by Brent's method to |dt| <= 1e-10. Local
    minima of |Z| (after removing the Gamma-function decay) that do not
    change sign are returned as ``candidates``; they mark near-double zeros
    or off-line pairs. ``func`` replaces S0~ by another function that is real
    on the line (e.g. T+). ``mapper(fn, items)`` may replace the built-in
    ``map`` for the sampling pass (it must preserve order); ``fn`` is then
    picklable when ``func`` is not given.
    """
    if not t_max >= t_min:
        raise DomainError("t_max must be >= t_min")
    if not step > 0:
        raise DomainError("step must be positive")
    f = func or evaluator(lam, cfg)
    result = ScanResult(float(lam))
    if t_max == t_min:
        return result
    n = max(2, int(math.ceil((t_max - t_min) / step)) + 1)
    ts = np.linspace(t_min, t_max, n)
    vals = np.empty(n)
    scales = np.empty(n)
    sampler = f if func is not None else _LineSampler(float(lam), cfg or DEFAULT_CONFIG)
    pts = [complex(0.5, t) for t in ts]
    sampled = list(mapper(sampler, pts)) if mapper is not None else [sampler(p) for p in pts]
    for i, t in enumerate(ts):
        v, sc = sampled[i]
        if abs(v.imag) > realness_tol * max(sc, abs(v)):
            raise AccuracyError(f"S0~ not real on the critical line at t = {t}: {v}")
        if v != 0:
            result.max_imag_ratio = max(result.max_imag_ratio, abs(v.imag) / abs(v))
        vals[i] = v.real
        scales[i] = sc

    def z(t):
        return f(complex(0.5, t))[0].real

    zeros = []
    for i in range(n - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            zeros.append(ts[i])
        elif a * b < 0:
            zeros.append(optimize.brentq(z, ts[i], ts[i + 1], xtol=1e-12, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        zeros.append(ts[-1])
    for t in zeros:
        v, sc = f(complex(0.5, t))
        result.zeros.append(ZeroRecord(float(lam), complex(0.5, t), 1, abs(v), ZeroMethod.LINE_SCAN, sc))

    weighted = np.abs(vals) * np.array([_hardy_weight(t) for t in ts])
    for i in range(1, n - 1):
        if weighted[i] < weighted[i - 1] and weighted[i] < weighted[i + 1] and vals[i - 1] * vals[i + 1] > 0 and vals[i] * vals[i - 1] > 0:
            res = optimize.minimize_scalar(
                lambda t: abs(z(t)) * _hardy_weight(t),
                bounds=(ts[i - 1], ts[i + 1]),
                method="bounded",
                options={"xatol": 1e-10},
            )
            result.candidates.append(float(res.x))
    return result


# ---------------------------------------------------------------------------
# argument principle
# ---------------------------------------------------------------------------


def _edge_winding(f: Evaluator, a: complex, b: complex, fa, h0: float, floor_rel: float):
    """Accumulated phase of f along the segment a -> b.

    Steps are halved until each phase increment is below pi/4 and the modulus
    changes by less than a factor e. Returns (phase change, f(b)).
    """
    length = abs(b - a)
    u = 0.0
    h = min(h0, length)
    cur = fa
    total = 0.0
    while u < length:
        h = min(h, length - u)
        nxt_s = a + (b - a) * ((u + h) / length)
        nxt = f(nxt_s)
        if abs(nxt[0]) <= floor_rel * nxt[1]:
            raise BoundaryZeroError(f"zero on or next to the contour near s = {nxt_s}")
        ratio = nxt[0] / cur[0]
        dphase = cmath.phase(ratio)
        if abs(dphase) > _MAX_PHASE_STEP or abs(math.log(abs(ratio))) > _MAX_LOG_RATIO:
            h *= 0.5
            if h < 1e-9 * max(1.0, length):
                raise BoundaryZeroError(f"phase not resolved near s = {nxt_s}")
            continue
        total += dphase
        u += h
        cur = nxt
        h = min(2.0 * h, h0)
    return total, cur


def winding_number(f: Evaluator, vertices: list[complex], h0: float = 0.05, floor_rel: float = 1e-12) -> int:
    """Winding number of f around the closed polygon through ``vertices``."""
    start = f(vertices[0])
    if abs(start[0]) <= floor_rel * start[1]:
        raise BoundaryZeroError(f"zero at contour vertex {vertices[0]}")
    total = 0.0
    cur = start
    pts = list(vertices) + [vertices[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        phase, cur = _edge_winding(f, a, b, cur, h0, floor_rel)
        total += phase
    w = total / (2.0 * math.pi)
    k = round(w)
    if abs(w - k) > 1e-6:
        raise BoundaryZeroError(f"non-integer winding {w}")
    return int(k)


def _check_poles(region: Region, poles=(0j, 1 + 0j)):
    for p in poles:
        if region.sigma_min <= p.real <= region.sigma_max and region.t_min <= p.imag <= region.t_max:
            raise DomainError(f"region {region} contains the pole s = {p}")


def count_zeros(
    lam: float,
    region: Region,
    cfg: EvalConfig | None = None,
    *,
    func: Evaluator | None = None,
    tries: int = 3,
) -> int:
    """Number of zeros of S0~(lam, .) inside ``region`` (argument principle).

    If a zero sits on or very near the boundary the rectangle is grown by
    1e-4, 3e-4, then 1e-3 before giving up with BoundaryZeroError.
    """
    f = func or evaluator(lam, cfg)
    deltas = [0.0, 1e-4, 3e-4, 1e-3][: tries + 1]
    last = None
    for d in deltas:
        reg = region.grown(d) if d else region
        if func is None:
            _check_poles(reg)
        try:
            return winding_number(f, reg.corners())
        except BoundaryZeroError as exc:
            last = exc
    raise BoundaryZeroError(f"could not place a zero-free contour around {region}: {last}")


def circle_vertices(center: complex, radius: float, n: int = 16) -> list[complex]:
    return [center + radius * cmath.exp(2j * math.pi * k / n) for k in range(n)]


def local_multiplicity(f: Evaluator, s: complex, radius: float = 1e-3) -> int:
    """Winding number of f on a small polygonal circle around s."""
    return winding_number(f, circle_vertices(s, radius, 24), h0=radius / 2)


# ---------------------------------------------------------------------------
# Newton refinement
# ---------------------------------------------------------------------------


def derivative(f: Evaluator, s: complex, rel_step: float = 1e-6) -> complex:
    """Central complex difference f'(s) with step rel_step * max(|s|, 1)."""
    h = rel_step * max(abs(s), 1.0)
    return (f(s + h)[0] - f(s - h)[0]) / (2.0 * h)


def newton(f: Evaluator, s: complex, tol: float = RESIDUAL_TOL, max_iter: int = 50):
    """Damped Newton iteration to |f| <= tol * scale.

    Returns (s, f(s), scale, iterations); raises NoConvergence.
    """
    s0 = s
    val, sc = f(s)
    it = 0
    while not abs(val) <= tol * sc:
        if it >= max_iter:
            raise NoConvergence(f"Newton did not converge from {s0}; last s = {s}, |f|/scale = {abs(val) / sc:.3e}")
        it += 1
        d = derivative(f, s)
        if d == 0:
            raise NoConvergence(f"zero derivative at s = {s}")
        step = val / d
        # damp steps that would leave the basin
        if abs(step) > 0.5:
            step *= 0.5 / abs(step)
        s_new = s - step
        val_new, sc_new = f(s_new)
        if abs(val_new) / sc_new > abs(val) / sc:
            s_half = s - 0.5 * step
            vh, sh = f(s_half)
            if abs(vh) / sh < abs(val_new) / sc_new:
                s_new, val_new, sc_new = s_half, vh, sh
        s, val, sc = s_new, val_new, sc_new
        if abs(step) <= 1e-15 * max(abs(s), 1.0) and not abs(val) <= tol * sc:
            raise NoConvergence(f"Newton stalled at s = {s}, |f|/scale = {abs(val) / sc:.3e}")
    return s, val, sc, it


def refine_zero(
    lam: float,
    s_init,
    cfg: EvalConfig | None = None,
    *,
    func: Evaluator | None = None,
    tol: float = RESIDUAL_TOL,
    max_iter: int = 50,
    multiplicity_radius: float | None = 1e-3,
) -> ZeroRecord:
    """Newton iteration from ``s_init`` to |S0~| <= tol * scale.

    The derivative is a central difference with step 1e-6 |s|. Multiplicity
    comes from the winding number on a circle of radius 1e-3, so a pair closer
    than that counts as a double zero; if a zero lies on that circle the test
    is repeated at 1e-4. Pass ``multiplicity_radius=None`` to skip it.
    """
    f = func or evaluator(lam, cfg)
    s, val, sc, _ = newton(f, complex(s_init), tol=tol, max_iter=max_iter)
    if abs(s.real - 0.5) <= LINE_TOL:
        # the zero is on the line by symmetry; snap it and re-polish in t
        s_line = complex(0.5, s.imag)
        v_line, sc_line = f(s_line)
        if abs(v_line) <= abs(val) or abs(v_line) <= tol * sc_line:
            s, val, sc = s_line, v_line, sc_line
    mult = 1
    if multiplicity_radius:
        try:
            mult = local_multiplicity(f, s, multiplicity_radius)
        except BoundaryZeroError:
            # another zero sits on the circle; shrink and retest
            mult = local_multiplicity(f, s, multiplicity_radius / 10)
        mult = max(mult, 1)
    return ZeroRecord(float(lam), s, mult, abs(val), ZeroMethod.NEWTON_REFINE, sc)


def zero_quadruple(z: ZeroRecord, cfg: EvalConfig | None = None, *, func: Evaluator | None = None) -> list[ZeroRecord]:
    """The zeros s, 1 - s, conj(s), 1 - conj(s) implied by the two symmetries.

    Each image is re-refined. On the critical line 1 - s = conj(s) and the
    set collapses to the pair {s, conj(s)}.
    """
    s = z.s
    images = [s, 1.0 - s, s.conjugate(), 1.0 - s.conjugate()]
    uniq: list[complex] = []
    for w in images:
        if all(abs(w - u) > 10 * LINE_TOL for u in uniq):
            uniq.append(w)
    out = []
    for w in uniq:
        r = refine_zero(z.lam, w, cfg, func=func, multiplicity_radius=None)
        out.append(replace(r, multiplicity=z.multiplicity))
    return out
