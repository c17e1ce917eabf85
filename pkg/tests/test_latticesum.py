import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticezeros import specialfn as sf
from latticezeros.errors import DomainError, PoleError, UnsupportedShape
from latticezeros.latticesum import (
    EvalConfig,
    LatticeShape,
    direct_sum,
    factorized_reference,
    macdonald_sum,
    prefactor,
    prefactor_zeros,
    s0,
    s0_tilde,
    t_minus,
    t_plus,
    trig_sum_c,
)
from latticezeros.latticesum.reference import factor_zeros

# mpmath values of the factorised forms: S0(1, s) = 4 zeta(s) L_-4(s) and
# S0(sqrt5, s) = zeta(s) L_-20(s) + L_-4(s) L_5(s)
S0_SQUARE = {
    complex(0.3, 5): complex(3.0498964915738509, -1.9512325972741967),
    complex(2, 1): complex(4.5034409603360769, -1.3361249456181985),
    complex(0.7, 12): complex(4.1711189217600859, -4.2813740577753723),
    complex(-0.4, 3): complex(2.9794462321059798, 1.138013007809346),
    complex(0.5, 1.0): complex(1.2107031626317471, -2.0713636029376509),
}
S0_SQRT5 = {
    complex(0.3, 5): complex(-0.74247594432460232, -2.3606849552488736),
    complex(2, 1): complex(1.8733312959209731, -0.35650351131071126),
    complex(0.7, 12): complex(1.7049460185992456, -1.7311425659555736),
    complex(-0.4, 3): complex(1.2189453954850515, 8.8196265593918454),
}
# near s = 1/2 and s = 0, where the evaluation switches to local Taylor patches
S0_SQUARE_PATCH = {
    complex(0.5, 0.003): complex(-3.9000380159282099, -0.03636752016037266),
    complex(0.5005, 0): complex(-3.9063327089541255, 0.0),
    complex(0.5, 0): complex(-3.9002649200019559, 0.0),
    complex(0.4995, -0.0007): complex(-3.8941974200822575, 0.0084684318178972733),
    complex(0.02, 0.01): complex(-1.0533912719079034, -0.027531289332919719),
}
# K(0,0;2;1) from S0~(1,2) - T+(1,2) and from the Bessel double sum, both in mpmath
K00_2_1 = 0.0010865738967348512


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# shapes and config
# ---------------------------------------------------------------------------


def test_shape_conversions():
    sh = LatticeShape.from_c(5.0)
    assert sh.lam == pytest.approx(math.sqrt(5))
    assert sh.c == pytest.approx(5.0)
    assert LatticeShape.from_chi(sh.chi).lam == pytest.approx(sh.lam)
    assert sh.reciprocal().lam == pytest.approx(1 / sh.lam)
    assert LatticeShape(0.5).folded == 2.0
    assert LatticeShape(1.1).sin_phi == pytest.approx((1.21 - 1) / (1.21 + 1))


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_shape_rejects_bad_ratio(bad):
    with pytest.raises(DomainError):
        LatticeShape(bad)


def test_config_env_default(monkeypatch):
    monkeypatch.setenv("LZT_DEFAULT_TOL", "1e-11")
    assert EvalConfig.from_env().target_rel_err == 1e-11
    assert EvalConfig.from_env(target_rel_err=1e-13).target_rel_err == 1e-13
    monkeypatch.delenv("LZT_DEFAULT_TOL")
    assert EvalConfig.from_env().target_rel_err == 1e-14
    with pytest.raises(DomainError):
        EvalConfig(target_rel_err=0)


# ---------------------------------------------------------------------------
# S0 and S0~
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("s,expected", list(S0_SQUARE.items()))
def test_s0_square_lattice(s, expected):
    assert rel(s0(1.0, s).value, expected) < 1e-12


@pytest.mark.parametrize("s,expected", list(S0_SQRT5.items()))
def test_s0_sqrt5(s, expected):
    assert rel(s0(math.sqrt(5), s).value, expected) < 1e-12


@pytest.mark.parametrize("s,expected", list(S0_SQUARE_PATCH.items()))
def test_s0_near_removable_points(s, expected):
    assert rel(s0(1.0, s).value, expected) < 1e-11


def test_s0_special_points():
    for lam in (1.0, 1.7, 0.6):
        assert abs(s0(lam, 0).value + 1.0) < 1e-12
    with pytest.raises(PoleError):
        s0(1.3, 1)
    with pytest.raises(PoleError):
        s0_tilde(1.3, 0)


def test_s0_reciprocal_relation():
    lam, s = 1.7, complex(0.4, 9)
    a = s0(lam, s).value
    b = s0(1 / lam, s).value * lam ** (-2 * s)
    assert rel(b, a) < 1e-12


def test_s0_tilde_examples():
    v = s0_tilde(1.3, complex(0.5, 10)).value
    assert abs(v.imag) <= 1e-10 * abs(v)
    s = complex(0.3, 4)
    assert rel(s0_tilde(2.0, s).value, s0_tilde(0.5, s).value) < 1e-12
    pt = s0_tilde(math.sqrt(5), complex(0.9329, 15.6682))
    assert abs(pt.value) < 1e-3 * pt.scale


def test_s0_tilde_error_estimate_is_honest():
    s = complex(0.7, 12)
    tv = s0_tilde(math.sqrt(5), s)
    factor = sf.gamma(s) * math.sqrt(5) ** s / (8 * math.pi**s)
    assert abs(tv.value - factor * S0_SQRT5[s]) <= 10 * tv.est_abs_err + 1e-15 * tv.scale


def test_unfolded_evaluation_agrees():
    s = complex(0.8, 6)
    a = s0_tilde(1.6, s).value
    b = s0_tilde(1.6, s, fold=False).value
    assert rel(b, a) < 1e-11


def test_tighter_config_converges_to_same_value():
    s = complex(0.25, 21)
    a = s0_tilde(2.3, s).value
    b = s0_tilde(2.3, s, EvalConfig().tightened(100)).value
    assert rel(a, b) < 1e-12


# ---------------------------------------------------------------------------
# MacDonald sums and T+-
# ---------------------------------------------------------------------------


def test_macdonald_square_value():
    assert rel(macdonald_sum(0, 0, 2, 1.0).value, K00_2_1) < 1e-12


@pytest.mark.parametrize("n,m", [(0, 0), (0, 1), (1, 1), (2, 3)])
def test_macdonald_swap_symmetry(n, m):
    s, lam = complex(0.3, 5), 1.5
    a = macdonald_sum(n, -m, s, lam).value
    b = macdonald_sum(n, m, 1 - s, lam).value
    assert abs(a - b) <= 1e-10 * max(abs(a), abs(b))


def test_macdonald_bad_arguments():
    with pytest.raises(DomainError):
        macdonald_sum(-1, 0, 2, 1.0)
    with pytest.raises(DomainError):
        macdonald_sum(0, 0, 2, -1.0)


def test_t_plus_symmetries():
    s = complex(0.3, 11)
    assert rel(t_plus(0.8, 1 - s), t_plus(0.8, s)) < 1e-13
    s = complex(0.6, 3)
    assert rel(t_plus(1.0, s) + t_minus(s), 0.5 * sf.xi1(2 * s)) < 1e-13
    assert rel(t_minus(1 - s), -t_minus(s)) < 1e-13


def test_t_plus_near_half_is_smooth():
    # removable singularity at s = 1/2: values just inside and outside the patch agree
    a = t_plus(1.4, complex(0.5, 0.0099))
    b = t_plus(1.4, complex(0.5, 0.0101))
    assert abs(a - b) < 1e-3 * abs(a)
    with pytest.raises(PoleError):
        t_plus(1.4, 0.5)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def test_factorized_reference_values():
    assert factorized_reference(1.0, 2) == pytest.approx(6.0268120396919401, rel=1e-13)
    s = complex(0.6, 9)
    lam = math.sqrt(7)
    ref = factorized_reference(lam, s)
    direct = 2 * (1 - 2 ** (1 - s) + 2 ** (1 - 2 * s)) * sf.riemann_zeta(s) * sf.dirichlet_l(-7, s)
    assert rel(ref, direct) < 1e-14
    assert rel(s0(lam, s).value, ref) < 1e-8
    # lambda^2 = 3: 2 (1 + 2^(1-2s)) zeta(s) L_-3(s), confirmed by direct summation
    s = complex(2.5, 4)
    assert rel(factorized_reference(math.sqrt(3), s), complex(2.0848835081213881, 0.22747219882431671)) < 1e-13


def test_factorized_reference_unsupported():
    with pytest.raises(UnsupportedShape):
        factorized_reference(math.sqrt(8), 2.0)


@pytest.mark.parametrize("k", range(1, 8))
def test_factorizations_hold(k):
    rng = random.Random(k)
    sh = LatticeShape.from_c(k)
    for _ in range(5):
        s = complex(rng.uniform(0.2, 2.5), rng.uniform(-30, 30))
        assert rel(s0(sh, s).value, factorized_reference(sh, s)) < 1e-8


def test_prefactor_zero_families():
    three = prefactor_zeros(LatticeShape.from_c(3), range(0, 4))
    assert [z.imag for z in three] == pytest.approx([(2 * n + 1) * math.pi / (2 * math.log(2)) for n in range(4)], abs=1e-12)
    assert three[0].imag == pytest.approx(2.2661800709, abs=1e-10)
    seven = prefactor_zeros(LatticeShape.from_c(7), range(0, 1))
    assert min(z.imag for z in seven if z.imag > 0) == pytest.approx(math.pi / (4 * math.log(2)), abs=1e-12)
    four = prefactor_zeros(LatticeShape.from_c(4), range(0, 3))
    assert any(abs(z.imag - 16.384603053995693) < 1e-9 for z in four)
    assert any(abs(z.imag - math.atan(math.sqrt(7)) / math.log(2)) < 1e-12 for z in four)
    for k, zs in ((3, three), (4, four), (7, seven)):
        for z in zs:
            assert abs(prefactor(LatticeShape.from_c(k), z)) < 1e-14
    with pytest.raises(UnsupportedShape):
        prefactor_zeros(LatticeShape.from_c(5), range(0, 2))


def test_prefactor_zeros_annihilate_the_sum():
    sh = LatticeShape.from_c(3)
    for z in prefactor_zeros(sh, range(0, 4)):
        assert abs(s0(sh, z).value) <= 1e-8 * abs(s0(sh, z + 0.1j).value)


def test_factor_zeros_square_lattice():
    marks = factor_zeros(LatticeShape(1.0), 10.0, 22.0)
    zeta = sorted(z.imag for lbl, z in marks if lbl == "zeta")
    l4 = sorted(z.imag for lbl, z in marks if lbl == "L-4")
    assert zeta == pytest.approx([14.134725141734694, 21.022039638771555], abs=1e-9)
    assert l4 == pytest.approx([10.243770304166555, 12.988098012312423, 16.342607104587222, 18.291993196123535, 21.45061134398346], abs=1e-9)


# ---------------------------------------------------------------------------
# direct summation oracle
# ---------------------------------------------------------------------------


def test_direct_sum_square_and_sqrt2():
    d = direct_sum(1.0, 3.0, radius=2000)
    assert abs(d.value - 4.6589136156038434) <= max(d.est_abs_err, 1e-14 * 4.66)
    d = direct_sum(math.sqrt(2), 3.0, radius=2000)
    assert abs(d.value - 2.4707620579168604) <= max(d.est_abs_err, 1e-14 * 2.47)


def test_direct_sum_sharp_cutoff_error_bound_holds():
    d = direct_sum(1.3, complex(2.2, 3), radius=300, smooth=False)
    k = s0(1.3, complex(2.2, 3))
    assert abs(d.value - k.value) <= d.est_abs_err


def test_direct_sum_domain():
    with pytest.raises(DomainError):
        direct_sum(1.0, 0.9)
    with pytest.raises(DomainError):
        direct_sum(1.0, 2.0, radius=5)


@settings(max_examples=15, deadline=None)
@given(st.floats(1.0, 3.0), st.floats(2.0, 4.0), st.floats(-10.0, 10.0))
def test_kober_matches_direct_sum(lam, sigma, t):
    s = complex(sigma, t)
    d = direct_sum(lam, s, radius=200)
    k = s0(lam, s)
    assert abs(d.value - k.value) <= 1e-8 * abs(k.value)


def _reordered_trig_sum(m, s, radius):
    # full Z^2, sharp cutoff, angles from atan2, accumulated row by row from the outside in
    n = int(radius)
    total = 0j
    for p2 in range(n, -n - 1, -1):
        p1 = np.arange(-n, n + 1, dtype=float)
        r2 = p1 * p1 + p2 * p2
        keep = (r2 > 0) & (r2 <= radius * radius)
        theta = np.arctan2(float(p2), p1[keep])
        total += complex(np.sum(np.cos(4 * m * theta) * np.exp(-s * np.log(r2[keep]))))
    return total


def test_trig_sum_reordered_oracle():
    s = 2.5
    ref = _reordered_trig_sum(2, s, 1500) * complex(sf.gamma(4 + s)) / (8 * math.pi**s)
    val = trig_sum_c(2, s, 2000).value
    assert abs(val - ref) <= 1e-8 * abs(ref)


def test_trig_sum_base_case_and_exchange():
    assert rel(trig_sum_c(0, 3.0, 2000).value, s0_tilde(1.0, 3.0).value) < 1e-13
    # cos 4m theta is unchanged by p1 <-> p2 (theta -> pi/2 - theta)
    a = _reordered_trig_sum(1, 3.0, 300)
    theta_sum = 0j
    n = 300
    for p1 in range(n, -n - 1, -1):
        p2 = np.arange(-n, n + 1, dtype=float)
        r2 = p1 * p1 + p2 * p2
        keep = (r2 > 0) & (r2 <= n * n)
        theta_sum += complex(np.sum(np.cos(4 * np.arctan2(float(p1), p2[keep])) * r2[keep] ** -3.0))
    assert abs(a - theta_sum) < 1e-13 * abs(a)


def test_trig_sum_domain():
    with pytest.raises(DomainError):
        trig_sum_c(5, 3.0)
    with pytest.raises(DomainError):
        trig_sum_c(1, complex(0.5, 3))


# ---------------------------------------------------------------------------
# symmetry properties
# ---------------------------------------------------------------------------

shapes = st.floats(0.4, 2.5)
points = st.builds(complex, st.floats(-0.5, 1.5), st.floats(-30.0, 30.0)).filter(
    lambda s: min(abs(s), abs(s - 1), abs(s - 0.5)) > 0.05
)


@settings(max_examples=30, deadline=None)
@given(shapes, points)
def test_functional_equation(lam, s):
    a = s0_tilde(lam, s).value
    assert abs(a - s0_tilde(lam, 1 - s).value) <= 1e-10 * abs(a)


@settings(max_examples=30, deadline=None)
@given(shapes, points)
def test_reciprocal_symmetry(lam, s):
    a = s0_tilde(lam, s).value
    assert abs(a - s0_tilde(1 / lam, s).value) <= 1e-10 * abs(a)


@settings(max_examples=30, deadline=None)
@given(shapes, st.floats(0.0, 40.0))
def test_critical_line_realness(lam, t):
    v = s0_tilde(lam, complex(0.5, t)).value
    assert abs(v.imag) <= 1e-10 * abs(v)


@settings(max_examples=30, deadline=None)
@given(shapes, points)
def test_conjugate_symmetry(lam, s):
    a = s0_tilde(lam, s).value
    assert abs(s0_tilde(lam, s.conjugate()).value - a.conjugate()) <= 1e-12 * abs(a)
