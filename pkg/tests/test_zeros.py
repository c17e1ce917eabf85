import math

import pytest

from latticezeros.errors import DomainError
from latticezeros.latticesum import LatticeShape
from latticezeros.zeros import (
    Region,
    ZeroMethod,
    count_zeros,
    evaluator,
    local_multiplicity,
    refine_zero,
    scan_critical_line,
    zero_quadruple,
)

# mpmath zetazero / findroot on L_-4 (40 digits)
ZETA_ZEROS = [14.134725141734694, 21.022039638771555, 25.010857580145689]
L4_ZEROS = [
    6.0209489046975967,
    10.243770304166555,
    12.988098012312423,
    16.342607104587222,
    18.291993196123535,
    21.45061134398346,
    23.278376520459532,
    25.728756425088728,
    28.359634343025327,
    29.656384014593154,
]
S_PT = complex(0.9329696974854123, 15.668249531278473)
SQRT3_PREFACTOR = [(2 * n + 1) * math.pi / (2 * math.log(2)) for n in range(4)]
UPPER_MERGE = (4.00071094104, complex(0.5, 16.3629328))


def test_scan_first_zeta_zero():
    res = scan_critical_line(1.0, 13, 15)
    assert len(res) == 1
    z = res.zeros[0]
    assert abs(z.s.imag - ZETA_ZEROS[0]) < 1e-9
    assert z.on_critical_line and z.method == ZeroMethod.LINE_SCAN


def test_scan_prefactor_zero_sqrt3():
    res = scan_critical_line(math.sqrt(3), 2, 2.5)
    assert [round(t, 9) for t in res.t_values] == [round(math.pi / (2 * math.log(2)), 9)]


def test_scan_empty_ranges():
    assert len(scan_critical_line(1.0, 0.1, 0.2)) == 0
    assert len(scan_critical_line(1.0, 5.0, 5.0)) == 0
    with pytest.raises(DomainError):
        scan_critical_line(1.0, 2.0, 1.0)


def test_scan_lambda_one_is_union_of_factor_zeros():
    res = scan_critical_line(1.0, 0, 30)
    expected = sorted(ZETA_ZEROS + L4_ZEROS)
    assert len(res) == len(expected)
    for t, e in zip(res.t_values, expected):
        assert abs(t - e) < 1e-8


def test_scan_prefactor_completeness_sqrt3():
    ts = scan_critical_line(math.sqrt(3), 0, 20).t_values
    for p in SQRT3_PREFACTOR:
        assert min(abs(t - p) for t in ts) < 1e-6


@pytest.mark.parametrize("lam", [1.0, 1.5, math.sqrt(5)])
def test_scan_realness(lam):
    res = scan_critical_line(lam, 0.5, 40, step=0.04)
    assert res.max_imag_ratio <= 1e-9


def test_scan_reports_off_line_signature_as_candidate():
    res = scan_critical_line(math.sqrt(5), 15, 16.2)
    assert len(res) == 0
    assert any(abs(t - S_PT.imag) < 0.05 for t in res.candidates)


@pytest.mark.parametrize(
    "lam,region,expected",
    [
        (math.sqrt(5), Region(0.55, 1.0, 15, 16), 1),
        (math.sqrt(5), Region(0.0, 0.45, 15, 16), 1),
        (1.0, Region(0.6, 0.9, 1, 2), 0),
    ],
)
def test_count_zeros_examples(lam, region, expected):
    assert count_zeros(lam, region) == expected


def test_count_zeros_rejects_poles():
    with pytest.raises(DomainError):
        count_zeros(1.0, Region(0.5, 1.5, -1, 1))


def test_region_validation():
    with pytest.raises(DomainError):
        Region(0.5, 0.5, 0, 1)


# 10 regions across four shapes; windows chosen with edges away from zeros
CONSISTENCY = [
    (1.0, 5, 11),
    (1.0, 13, 22),
    (1.0, 22, 27),
    (math.sqrt(2), 4, 12),
    (math.sqrt(2), 12, 20.5),
    (math.sqrt(3), 1, 7.5),
    (math.sqrt(3), 9, 16.5),
    (math.sqrt(5), 3, 10),
    (math.sqrt(5), 10, 15),
    (math.sqrt(5), 14.2, 17.2),
]


@pytest.mark.parametrize("lam,t0,t1", CONSISTENCY)
def test_count_consistency(lam, t0, t1):
    scan = scan_critical_line(lam, t0, t1)
    ts = scan.t_values
    assert all(min(t - t0, t1 - t) > 1e-3 for t in ts)
    found = {round(t, 8): 1 for t in ts}
    # off-line zeros: refine from each non-sign-change minimum and keep the pair
    for tc in scan.candidates:
        z = refine_zero(lam, complex(0.9, tc))
        if not z.on_critical_line and t0 < z.s.imag < t1 and 0.0 < z.s.real < 1.0:
            found[(round(z.s.real, 8), round(z.s.imag, 8))] = z.multiplicity
            found[(round(1 - z.s.real, 8), round(z.s.imag, 8))] = z.multiplicity
    assert count_zeros(lam, Region(0.0, 1.0, t0, t1)) == sum(found.values())


def test_refine_potter_titchmarsh():
    z = refine_zero(math.sqrt(5), complex(0.93, 15.67))
    assert abs(z.s - complex(0.9329, 15.6682)) < 5e-4
    assert abs(z.s - S_PT) < 1e-10
    assert z.multiplicity == 1
    assert z.residual <= 1e-10 * z.scale
    assert not z.on_critical_line


def test_refine_zeta_zero():
    z = refine_zero(1.0, complex(0.5, 14.13))
    assert abs(z.s - complex(0.5, ZETA_ZEROS[0])) < 1e-9
    assert z.multiplicity == 1 and z.on_critical_line


@pytest.mark.parametrize("dc", [1e-9, -1e-9, -1e-7])
def test_multiplicity_two_near_merge(dc):
    c, s = UPPER_MERGE
    z = refine_zero(math.sqrt(c + dc), s)
    assert z.multiplicity == 2
    assert local_multiplicity(evaluator(math.sqrt(c + dc)), z.s, 1e-3) == 2


def test_quadruple_of_on_line_zero_is_a_pair():
    z = refine_zero(1.0, complex(0.5, 14.13))
    quad = zero_quadruple(z)
    assert len(quad) == 2
    assert {round(q.s.imag, 8) for q in quad} == {round(ZETA_ZEROS[0], 8), round(-ZETA_ZEROS[0], 8)}


def test_quadruple_of_potter_titchmarsh():
    lam = math.sqrt(5)
    z = refine_zero(lam, complex(0.93, 15.67))
    quad = zero_quadruple(z)
    assert len(quad) == 4
    assert any(abs(q.s - complex(0.0671, 15.6682)) < 5e-4 for q in quad)
    for q in quad:
        assert q.residual <= 1e-10 * q.scale
    # the same four points are zeros at 1/lam
    f = evaluator(1 / lam)
    for q in quad:
        v, sc = f(q.s)
        assert abs(v) <= 1e-10 * sc


def test_sin_phi_is_odd_under_reciprocal():
    assert LatticeShape(math.sqrt(5)).sin_phi == pytest.approx(-LatticeShape(1 / math.sqrt(5)).sin_phi)
