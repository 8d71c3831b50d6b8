import numpy as np
import pytest

from bireflect.curves import Circle, LineY0, parse_curve
from bireflect.errors import BranchCutCrossing, OutsideValidity
from bireflect.goursat import BiharmonicField, log_term, power, zlog_term
from bireflect.reflection import (
    continue_circle_navier,
    continue_clamped_circle,
    continue_clamped_general,
    continue_general,
    continue_line,
    green_representation,
    khat,
)
from bireflect.testgen import closed_form_family

from oracles import NAVIER_RADIAL

LINE, CIRCLE = LineY0(), Circle(1.0)

Y = BiharmonicField([], [power(-1j, 1)])
Y2 = BiharmonicField([power(0.5, 1)], [power(-0.5, 2)])
X = BiharmonicField([], [power(1.0, 1)])
XY2_HALF = BiharmonicField([power(0.125, 2)], [power(-0.125, 3)])     # x y²/2
Y3_SIXTH = BiharmonicField([power(-0.125j, 2)], [power(1j / 24, 3)])  # y³/6


@pytest.mark.parametrize("case,u,truth", [
    ("I", Y2, lambda x, y: y * y),
    ("II", Y, lambda x, y: y),
    ("III", XY2_HALF, lambda x, y: x * y * y / 2),
    ("IV", Y3_SIXTH, lambda x, y: y**3 / 6),
    ("V", X, lambda x, y: x),
])
def test_line_examples(case, u, truth):
    P = 0.4 + 0.3j
    r = continue_line(u, case, P)
    assert r.value == pytest.approx(truth(0.4, 0.3), abs=1e-12)
    assert r.value == pytest.approx(r.point_term + r.correction)
    assert r.quadrature_error_estimate >= 0


def test_line_case_three_integral_term():
    r = continue_line(XY2_HALF, "III", 0.4 + 0.3j)
    assert r.correction == pytest.approx(0.4 * 0.3**2)  # −y₀ ∫₀^{−y₀} x₀ dy
    assert khat(XY2_HALF, LINE, "III", 0.4 + 0.3j) == pytest.approx(r.correction, abs=1e-10)


@pytest.mark.parametrize("case", ["II", "III", "IV", "V"])
def test_general_agrees_with_line(case):
    for u in closed_form_family(LINE, case).fields:
        for P in (0.1 + 0.2j, -0.8 + 0.45j):
            assert continue_general(u, LINE, case, P).value == pytest.approx(continue_line(u, case, P).value, abs=1e-10)


def test_identity_on_curve():
    u = closed_form_family(CIRCLE, "III").fields[0]
    P = np.exp(0.8j)
    assert continue_general(u, CIRCLE, "III", P).value == pytest.approx(u(P), abs=1e-14)
    assert continue_clamped_circle(u, 1.0, P).correction == 0
    assert continue_circle_navier(u, P).value == pytest.approx(u(P), abs=1e-14)
    assert continue_line(Y2, "I", 0.3).value == 0


def test_zero_field():
    zero = BiharmonicField()
    assert continue_clamped_general(zero, CIRCLE, 1.3).value == 0
    assert continue_clamped_circle(zero, 1.0, 1.3).value == 0


def test_bramble_example():
    u = BiharmonicField([zlog_term(1.0)], [log_term(-1.0)])
    P = 1.3 * np.exp(0.2j)
    assert continue_clamped_circle(u, 1.0, P).value == pytest.approx(u(P), abs=1e-10)


def test_bramble_other_radius():
    a = 2.0
    fam = closed_form_family(Circle(a), "I")
    for u in fam.fields:
        P = 2.4 * np.exp(1.1j)
        assert continue_clamped_circle(u, a, P).value == pytest.approx(u(P), abs=1e-10)
        assert continue_clamped_general(u, Circle(a), P).value == pytest.approx(u(P), abs=1e-10)


def test_navier_example_and_literal_flag():
    u = closed_form_family(CIRCLE, "II").fields[0]
    P = 1.25 * np.exp(0.4j)
    assert continue_circle_navier(u, P).value == pytest.approx(NAVIER_RADIAL[1.25], abs=1e-8)
    # the radial operator is exact for radial fields only
    assert continue_circle_navier(u, P, literal=True).value == pytest.approx(NAVIER_RADIAL[1.25], abs=1e-8)
    dipole = closed_form_family(CIRCLE, "II").fields[1]  # x − x/r², harmonic
    assert continue_circle_navier(dipole, P).value == pytest.approx(dipole(P), abs=1e-8)
    assert continue_circle_navier(dipole, P).correction == pytest.approx(0, abs=1e-12)


def test_navier_general_radius():
    a = 1.5
    u = closed_form_family(Circle(a), "II").fields[0]
    P = 1.8 * np.exp(2.0j)
    assert continue_circle_navier(u, P, a=a).value == pytest.approx(u(P), abs=1e-8)
    assert continue_general(u, Circle(a), "II", P).value == pytest.approx(u(P), abs=1e-8)


@pytest.mark.parametrize("case", ["II", "III", "IV", "V"])
def test_general_on_circle(case):
    for u in closed_form_family(CIRCLE, case).fields:
        for P in (1.15 * np.exp(0.3j), 1.3 * np.exp(-2.2j)):
            r = continue_general(u, CIRCLE, case, P)
            assert r.value == pytest.approx(u(P), abs=1e-8)
            assert r.truncation_K_used > 0


def test_khat_path_independence_line():
    u = closed_form_family(LINE, "IV").fields[0]
    P = 0.2 + 0.3j
    detour = [0.35 + 0j, 0.3 - 0.1j, 0.2 - 0.3j]
    assert khat(u, LINE, "IV", P) == pytest.approx(khat(u, LINE, "IV", P, path=detour), abs=1e-7)


def test_outside_validity():
    with pytest.raises(OutsideValidity):
        continue_clamped_circle(Y2, 1.0, 0j)


def test_branch_cut_refused():
    multi = BiharmonicField([], [log_term(1j)])
    with pytest.raises(BranchCutCrossing):
        khat(multi, LINE, "II", -0.5 + 0.3j, path=[-0.5 + 0.1j, -0.5 - 0.3j])


def test_green_examples():
    assert green_representation(Y2, (0.2, 0.5), 0.1) == pytest.approx(0.25, abs=1e-8)
    assert green_representation(X, (0.7, 0.1), 0.3) == pytest.approx(0.7, abs=1e-8)
    u = BiharmonicField([zlog_term(1.0)], [log_term(-1.0)])
    assert green_representation(u, (1.5, 0.0), 0.2) == pytest.approx(u(1.5), abs=1e-8)


@pytest.mark.parametrize("case", ["I", "II", "III", "IV", "V"])
def test_rotated_implicit_line_with_collocation_fields(case):
    from bireflect.testgen import collocation_family
    diag = parse_curve("implicit:poly=1:0:1,0:1:-1|ref=0.3,0.3")
    fam = collocation_family(diag, case, basis_size=24, sample_size=60)
    foot = 0.3 + 0.3j
    P = foot - 0.2 * diag.normal(foot)
    for u in fam.fields[:4]:
        r = continue_clamped_general(u, diag, P) if case == "I" else continue_general(u, diag, case, P)
        assert r.value == pytest.approx(u(P), abs=1e-8 * max(1.0, abs(u(P))))
