"""Zero trajectories of S0~(sqrt(c), s) as c = lam**2 varies.

Off the critical line zeros of S0~ come in pairs s, 1 - conj(s). As c moves,
such a pair can run into the line and merge into a double zero there, after
which it continues as two zeros on the line. Near the merge point (c*, t*)

    S0~(sqrt(c), s) ~ a (s - s*)^2 + b (c - c*),   a, b real,

so the pair separation grows like |c - c*|^(1/2) on both sides, along the
line on one side and across it on the other.

Everything here is parameterised by c; ``lam = sqrt(c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize, stats

from .errors import BracketError, DomainError, LatticeZerosError, NoConvergence, WindowError
from .latticesum import DEFAULT_CONFIG, EvalConfig
from .latticesum.kober import _s0_tilde_raw
from .zeros import Region, count_zeros, derivative, evaluator, local_multiplicity, newton

MAX_STEP = 0.05
INITIAL_DC = 1e-2
MERGE_SIGMA = 1e-6
POINT_TOL = 1e-10
_SIGMA_MODE_GAP = 0.05
_MAX_CORRECTOR_ITER = 5


class Configuration(str, Enum):
    OFF_LINE_PAIR = "OffLinePair"
    ON_LINE_PAIR = "OnLinePair"
    INDETERMINATE = "Indeterminate"


class Termination(str, Enum):
    REACHED_LAMBDA_BOUND = "ReachedLambdaBound"
    MERGED_ON_CRITICAL_LINE = "MergedOnCriticalLine"
    DERIVATIVE_DEGENERATE = "DerivativeDegenerate"
    STEP_UNDERFLOW = "StepUnderflow"


@dataclass(frozen=True)
class TrajectoryPoint:
    c: float
    s: complex
    residual: float
    scale: float

    @property
    def lam(self) -> float:
        return math.sqrt(self.c)


@dataclass(frozen=True)
class StepMeta:
    dc: float
    mode: str  # "c" or "sigma"
    predictor_error: float
    corrector_iterations: int


@dataclass
class Trajectory:
    points: list[TrajectoryPoint] = field(default_factory=list)
    step_meta: list[StepMeta] = field(default_factory=list)
    termination: Termination | None = None

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]

    @property
    def c_values(self) -> np.ndarray:
        return np.array([p.c for p in self.points])

    @property
    def s_values(self) -> np.ndarray:
        return np.array([p.s for p in self.points])


@dataclass(frozen=True)
class WindowProbe:
    """Shape of Z(t) = S0~(sqrt(c), 1/2 + it) over a window around a zero cluster."""

    c: float
    configuration: Configuration
    t_extremum: float
    z_extremum: float
    z_edges: tuple[float, float]
    floor: float


@dataclass
class TransitionBracket:
    c_lo: float
    c_hi: float
    classification_lo: Configuration
    classification_hi: Configuration
    t_center: float
    history: list[WindowProbe] = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.c_hi - self.c_lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.c_lo + self.c_hi)


@dataclass
class MergeSignature:
    c: float
    s_merge: complex
    winding: int
    beta: float
    beta_ci: tuple[float, float]
    offsets: list[float]
    separations: list[float]
    beta_by_side: dict[str, float] = field(default_factory=dict)


def _lam(c: float) -> float:
    if not c > 0:
        raise DomainError(f"c = lam**2 must be positive, got {c}")
    return math.sqrt(c)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _line_function(c: float, cfg: EvalConfig):
    lam = _lam(c)

    def z(t: float):
        value, err, scale, _ = _s0_tilde_raw(lam, complex(0.5, t), cfg)
        return value.real, err

    return z


def probe_window(c: float, t_center: float, t_halfwidth: float, cfg: EvalConfig | None = None) -> WindowProbe:
    """Locate the extremum of Z between the window edges and classify it.

    Z has the same sign at both edges when the window holds a pair. If the
    extremum between them has the opposite sign, Z crosses zero twice and
    the pair is on the line; otherwise the pair is off the line. When the
    extremum is within 10x the evaluation error of zero the call is
    Indeterminate.
    """
    cfg = cfg or DEFAULT_CONFIG
    z = _line_function(c, cfg)
    a, b = t_center - t_halfwidth, t_center + t_halfwidth
    za, _ = z(a)
    zb, _ = z(b)
    if za * zb <= 0:
        raise WindowError(f"Z changes sign across the window [{a}, {b}] at c = {c}: not an isolated pair")
    sign = 1.0 if za > 0 else -1.0
    # coarse sampling picks the basin, bounded Brent polishes it
    ts = np.linspace(a, b, 41)
    zs = np.array([sign * z(t)[0] for t in ts])
    k = int(np.argmin(zs))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    res = optimize.minimize_scalar(lambda t: sign * z(t)[0], bounds=(lo, hi), method="bounded", options={"xatol": 1e-11})
    t_ext = float(res.x)
    z_ext, err = z(t_ext)
    floor = err
    if abs(z_ext) < 10.0 * floor:
        conf = Configuration.INDETERMINATE
    elif z_ext * sign < 0:
        conf = Configuration.ON_LINE_PAIR
    else:
        conf = Configuration.OFF_LINE_PAIR
    return WindowProbe(c, conf, t_ext, z_ext, (za, zb), floor)


def classify_configuration(
    c: float,
    t_center: float,
    t_halfwidth: float,
    cfg: EvalConfig | None = None,
    *,
    check_count: bool = False,
) -> Configuration:
    """OffLinePair, OnLinePair or Indeterminate for the zero cluster in the window.

    With ``check_count`` the argument principle on the strip
    [0, 1] x [t - h, t + h] must give exactly 2, otherwise WindowError. (The
    pair at c = 5 sits at Re s = 0.067 and 0.933, so a narrower rectangle
    would miss it.)
    """
    probe = probe_window(c, t_center, t_halfwidth, cfg)
    if check_count:
        region = Region(0.0, 1.0, t_center - t_halfwidth, t_center + t_halfwidth)
        n = count_zeros(_lam(c), region, cfg)
        if n != 2:
            raise WindowError(f"window around t = {t_center} holds {n} zeros at c = {c}, expected 2")
    return probe.configuration


# ---------------------------------------------------------------------------
# continuation
# ---------------------------------------------------------------------------


def _partials(c: float, s: complex, cfg: EvalConfig):
    """(F, scale, dF/ds, dF/dc) with central differences."""
    f = evaluator(_lam(c), cfg)
    val, sc = f(s)
    fs = derivative(f, s)
    hc = 1e-6 * c
    fc = (evaluator(_lam(c + hc), cfg)(s)[0] - evaluator(_lam(c - hc), cfg)(s)[0]) / (2.0 * hc)
    return val, sc, fs, fc


def _solve_ct(fc: complex, fs: complex, rhs: complex) -> tuple[float, float]:
    """Real (dc, dt) with fc dc + i fs dt = rhs."""
    m = np.array([[fc.real, -fs.imag], [fc.imag, fs.real]])
    x = np.linalg.solve(m, np.array([rhs.real, rhs.imag]))
    return float(x[0]), float(x[1])


def _sigma_corrector(c: float, s: complex, cfg: EvalConfig, tol: float, max_iter: int):
    """Newton in (c, t) at fixed sigma = Re s."""
    sigma = s.real
    t = s.imag
    for it in range(max_iter + 1):
        val, sc, fs, fc = _partials(c, complex(sigma, t), cfg)
        if abs(val) <= tol * sc:
            return c, complex(sigma, t), val, sc, it
        if it == max_iter:
            break
        dc, dt = _solve_ct(fc, fs, -val)
        c += dc
        t += dt
        if not c > 0:
            break
    raise NoConvergence(f"(c, t) corrector failed at sigma = {sigma}")


def _underflow_reason(c: float, s: complex, cfg: EvalConfig, merge_sigma: float) -> Termination:
    # steps collapse when an on-line zero runs into its partner; a double zero there is a merge
    if abs(s.real - 0.5) <= 10.0 * merge_sigma:
        try:
            if local_multiplicity(evaluator(_lam(c), cfg), complex(0.5, s.imag)) == 2:
                return Termination.MERGED_ON_CRITICAL_LINE
        except LatticeZerosError:
            pass
    return Termination.STEP_UNDERFLOW


def trace(
    c_start: float,
    s_start,
    c_end: float,
    cfg: EvalConfig | None = None,
    *,
    max_step: float = MAX_STEP,
    initial_dc: float = INITIAL_DC,
    tol: float = POINT_TOL,
    merge_sigma: float = MERGE_SIGMA,
) -> Trajectory:
    """Follow the zero through (c_start, s_start) as c moves towards c_end.

    Predictor: ds/dc = -F_c / F_s from central differences. Corrector: Newton
    in s at the new c (at most 5 iterations, otherwise the step is halved).
    When the zero approaches the critical line with |Re s - 1/2| < 0.05 the
    continuation switches to sigma as the parameter, solving for (c, t) at
    fixed sigma, because dc/dsigma -> 0 at a merge. It stops with
    MergedOnCriticalLine once |Re s - 1/2| <= merge_sigma. A zero that starts
    on the line is kept there; if its steps collapse against a partner and a
    circle of radius 1e-3 around the point winds twice, that is also reported
    as MergedOnCriticalLine.
    """
    cfg = cfg or DEFAULT_CONFIG
    c = float(c_start)
    c_end = float(c_end)
    _lam(c)
    _lam(c_end)
    direction = 1.0 if c_end > c else -1.0
    s, val, sc, _ = newton(evaluator(_lam(c), cfg), complex(s_start), tol=tol)
    traj = Trajectory([TrajectoryPoint(c, s, abs(val), sc)])
    if c == c_end:
        traj.termination = Termination.REACHED_LAMBDA_BOUND
        return traj
    dc = initial_dc
    mode = "c"
    dsig = None
    while True:
        val, sc, fs, fc = _partials(c, s, cfg)
        if abs(fs) < 1e-8 * sc:
            traj.termination = Termination.DERIVATIVE_DEGENERATE
            return traj
        gap = s.real - 0.5
        dsdc = -fc / fs
        if mode == "c" and merge_sigma < abs(gap) < _SIGMA_MODE_GAP and gap * dsdc.real * direction < 0:
            mode = "sigma"
            dsig = min(abs(gap) * 0.5, max_step)
        if mode == "c":
            step_c = direction * min(dc, abs(c_end - c))
            ds = dsdc * step_c
            if abs(ds) > max_step:
                dc = 0.9 * max_step / abs(dsdc)
                continue
            s_pred = s + ds
            c_new = c + step_c
            try:
                s_new, v_new, sc_new, iters = newton(evaluator(_lam(c_new), cfg), s_pred, tol=tol, max_iter=_MAX_CORRECTOR_ITER)
            except NoConvergence:
                iters = _MAX_CORRECTOR_ITER + 1
            left_line = abs(gap) <= merge_sigma and abs(s_new.real - 0.5) > merge_sigma
            if iters > _MAX_CORRECTOR_ITER or abs(s_new - s) > max_step or left_line:
                # an on-line zero can only leave the line through a double zero
                dc *= 0.5
                if dc < 1e-14 * max(abs(c), 1.0):
                    traj.termination = _underflow_reason(c, s, cfg, merge_sigma)
                    return traj
                continue
            traj.step_meta.append(StepMeta(step_c, "c", abs(s_new - s_pred), iters))
            c, s = c_new, s_new
            traj.points.append(TrajectoryPoint(c, s, abs(v_new), sc_new))
            if c == c_end:
                traj.termination = Termination.REACHED_LAMBDA_BOUND
                return traj
            if iters <= 2:
                dc = min(2.0 * dc, initial_dc * 10)
        else:
            # tangent at fixed sigma step: fc dc + i fs dt = -fs dsigma
            target_gap = gap - math.copysign(dsig, gap)
            if abs(target_gap) < merge_sigma:
                target_gap = math.copysign(merge_sigma, gap)
            dsigma = target_gap - gap
            dcp, dtp = _solve_ct(fc, fs, -fs * dsigma)
            c_pred = c + dcp
            s_pred = complex(0.5 + target_gap, s.imag + dtp)
            if not c_pred > 0 or abs(dcp) > 10.0 * initial_dc or abs(dtp) > max_step:
                dsig *= 0.5
                if dsig < 1e-3 * merge_sigma:
                    traj.termination = Termination.STEP_UNDERFLOW
                    return traj
                continue
            try:
                c_new, s_new, v_new, sc_new, iters = _sigma_corrector(c_pred, s_pred, cfg, tol, _MAX_CORRECTOR_ITER)
            except (NoConvergence, np.linalg.LinAlgError):
                iters = _MAX_CORRECTOR_ITER + 1
            if iters > _MAX_CORRECTOR_ITER or abs(s_new - s) > max_step or (c_new - c) * direction < 0:
                dsig *= 0.5
                if dsig < 1e-3 * merge_sigma:
                    traj.termination = Termination.STEP_UNDERFLOW
                    return traj
                continue
            if (c_new - c_end) * direction > 0:
                # the bound lies before the merge: finish on it in c-mode
                s_fin, v_fin, sc_fin, iters = newton(evaluator(_lam(c_end), cfg), s, tol=tol)
                traj.step_meta.append(StepMeta(c_end - c, "c", 0.0, iters))
                traj.points.append(TrajectoryPoint(c_end, s_fin, abs(v_fin), sc_fin))
                traj.termination = Termination.REACHED_LAMBDA_BOUND
                return traj
            traj.step_meta.append(StepMeta(c_new - c, "sigma", abs(s_new - s_pred), iters))
            c, s = c_new, s_new
            traj.points.append(TrajectoryPoint(c, s, abs(v_new), sc_new))
            if abs(s.real - 0.5) <= merge_sigma * (1 + 1e-9):
                traj.termination = Termination.MERGED_ON_CRITICAL_LINE
                return traj
            dsig = min(abs(s.real - 0.5) * 0.5, max_step)


# ---------------------------------------------------------------------------
# transitions
# ---------------------------------------------------------------------------


def _resolve(c: float, t_center: float, t_halfwidth: float, cfg: EvalConfig) -> WindowProbe:
    """Classify, shrinking the window (x4) and tightening cfg (x10) when Indeterminate."""
    probe = probe_window(c, t_center, t_halfwidth, cfg)
    if probe.configuration != Configuration.INDETERMINATE:
        return probe
    h = t_halfwidth
    for _ in range(2):
        h /= 4.0
        try:
            p = probe_window(c, probe.t_extremum, h, cfg)
        except WindowError:
            break
        if p.configuration != Configuration.INDETERMINATE:
            return p
    p = probe_window(c, probe.t_extremum, t_halfwidth, cfg.tightened(10.0))
    return p


def find_transition(
    c_lo: float,
    c_hi: float,
    t_center: float,
    t_halfwidth: float,
    target_width: float = 1e-10,
    cfg: EvalConfig | None = None,
) -> TransitionBracket:
    """Bisect on c for the value where the pair in the window changes configuration.

    The window follows the extremum of Z as the bracket shrinks. Midpoints
    that stay Indeterminate after window shrinking and tightening end the
    bisection early: the bracket then keeps both classified endpoints.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not c_lo < c_hi:
        raise BracketError("need c_lo < c_hi")
    lo = _resolve(c_lo, t_center, t_halfwidth, cfg)
    hi = _resolve(c_hi, t_center, t_halfwidth, cfg)
    if Configuration.INDETERMINATE in (lo.configuration, hi.configuration):
        raise BracketError(f"bracket endpoint is Indeterminate: {lo.configuration}, {hi.configuration}")
    if lo.configuration == hi.configuration:
        raise BracketError(f"both ends of [{c_lo}, {c_hi}] are {lo.configuration.value}")
    br = TransitionBracket(c_lo, c_hi, lo.configuration, hi.configuration, t_center, [lo, hi])
    center = 0.5 * (lo.t_extremum + hi.t_extremum)
    while br.width > target_width:
        mid = br.midpoint
        if mid <= br.c_lo or mid >= br.c_hi:
            break
        probe = _resolve(mid, center, t_halfwidth, cfg)
        br.history.append(probe)
        if probe.configuration == Configuration.INDETERMINATE:
            break
        center = probe.t_extremum
        if probe.configuration == br.classification_lo:
            br.c_lo = mid
        else:
            br.c_hi = mid
    br.t_center = center
    return br


def _pair_near_merge(c: float, c_star: float, s_star: complex, a: complex, b: complex, cfg: EvalConfig):
    """The two zeros near s* at c, from the quadratic model and Newton polish."""
    f = evaluator(_lam(c), cfg)
    root = np.sqrt(complex(-b * (c - c_star) / a))
    out = []
    for sign in (1.0, -1.0):
        s, _, _, _ = newton(f, s_star + sign * root, tol=POINT_TOL, max_iter=30)
        out.append(s)
    if abs(out[0] - out[1]) < 1e-3 * abs(root):
        raise NoConvergence("both starts converged to the same zero")
    return out


def merge_signature(
    c: float,
    s_merge,
    cfg: EvalConfig | None = None,
    *,
    offsets=(1e-7, 1e-6, 1e-5),
    radius: float = 1e-3,
) -> MergeSignature:
    """Double-zero checks at a transition.

    Reports the winding number on a circle of ``radius`` about s_merge, and
    the exponent beta in |s1 - s2| ~ |c - c*|^beta fitted (log-log least
    squares, 95% t-interval) over c* +- offsets. When the winding number is
    not 2 the fit is skipped and beta is NaN.
    """
    cfg = cfg or DEFAULT_CONFIG
    s_star = complex(s_merge)
    f = evaluator(_lam(c), cfg)
    winding = local_multiplicity(f, s_star, radius)
    if winding != 2:
        # not a double zero: there is no pair to fit
        return MergeSignature(c, s_star, winding, math.nan, (math.nan, math.nan), [], [], {})
    # local model F ~ a (s - s*)^2 + b (c - c*)
    h = 1e-4
    a = (f(s_star + h)[0] - 2.0 * f(s_star)[0] + f(s_star - h)[0]) / (2.0 * h * h)
    _, _, _, b = _partials(c, s_star, cfg)
    xs, ys, sides = [], [], []
    for side in (1.0, -1.0):
        for d in offsets:
            z1, z2 = _pair_near_merge(c + side * d, c, s_star, a, b, cfg)
            xs.append(math.log(d))
            ys.append(math.log(abs(z1 - z2)))
            sides.append(side)
    fit = stats.linregress(xs, ys)
    q = stats.t.ppf(0.975, len(xs) - 2)
    ci = (fit.slope - q * fit.stderr, fit.slope + q * fit.stderr)
    by_side = {}
    for side, name in ((1.0, "above"), (-1.0, "below")):
        sx = [x for x, sd in zip(xs, sides) if sd == side]
        sy = [y for y, sd in zip(ys, sides) if sd == side]
        by_side[name] = float(stats.linregress(sx, sy).slope)
    return MergeSignature(
        c,
        s_star,
        winding,
        float(fit.slope),
        (float(ci[0]), float(ci[1])),
        [s * d for s in (1.0, -1.0) for d in offsets],
        [math.exp(y) for y in ys],
        by_side,
    )


def transition_point(br: TransitionBracket, cfg: EvalConfig | None = None) -> tuple[float, complex]:
    """(c, s*) at the bracket midpoint; s* on the line at the Z extremum."""
    probe = probe_window(br.midpoint, br.t_center, 0.05, cfg)
    return br.midpoint, complex(0.5, probe.t_extremum)
