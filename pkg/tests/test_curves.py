import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bireflect.curves import Circle, LineY0, default_path, parse_curve, reflect_point
from bireflect.errors import NotOnCurve, OutsideValidity

UNIT_IMPLICIT = "implicit:poly=2:0:1,0:2:1,0:0:-1|ref=1,0"
ELLIPSE = "implicit:poly=2:0:1,0:2:4,0:0:-1|ref=1,0"


def test_line_reflection():
    r = reflect_point(LineY0(), (0.3, 0.7))
    assert r.image == pytest.approx(0.3 - 0.7j)
    assert r.foot == pytest.approx(0.3)


def test_circle_reflection_and_schwarz_derivatives():
    c = Circle(2.0)
    r = reflect_point(c, 3.0 + 0j)
    assert r.image == pytest.approx(4.0 / 3.0)
    z = 1.3 + 0.4j
    assert c.schwarz(z, 1) == pytest.approx(-4.0 / z**2)
    assert c.schwarz(z, 2) == pytest.approx(8.0 / z**3)


def test_circle_validity_gate():
    with pytest.raises(OutsideValidity):
        Circle(1.0).schwarz(1e-9 + 0j)


@given(st.floats(0.05, 0.6), st.floats(0, 2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_reflection_is_involution(d, th):
    c = parse_curve(ELLIPSE)
    foot = c.boundary_sample(1, half_width=0.0)[0]
    foot = c.trace(foot, th / 4, 2)[-1]
    P = foot - d * 0.3 * c.normal(foot)
    q = reflect_point(c, P).image
    back = reflect_point(c, q).image
    assert back == pytest.approx(P, abs=1e-9)


def test_implicit_circle_matches_closed_form():
    ic, c = parse_curve(UNIT_IMPLICIT), Circle(1.0)
    z = 1.2 * np.exp(0.4j)
    for k in range(4):
        assert ic.schwarz(z, k) == pytest.approx(c.schwarz(z, k), rel=1e-10)
    w = np.conj(z)
    assert ic.schwarz_inverse(w, 2) == pytest.approx(c.schwarz_inverse(w, 2), rel=1e-10)


def test_ellipse_schwarz_round_trip():
    e = parse_curve(ELLIPSE)
    z = 1.05 + 0.1j
    assert e.schwarz_inverse(e.schwarz(z)) == pytest.approx(z, abs=1e-10)


def test_on_curve_point_reflects_to_itself():
    r = reflect_point(Circle(1.0), np.exp(0.3j))
    assert r.on_curve and r.image == pytest.approx(np.exp(0.3j))
    assert default_path(Circle(1.0), r)[0] == r.image


def test_check_on_curve():
    with pytest.raises(NotOnCurve):
        LineY0().check_on_curve(0.1 + 0.1j)


@pytest.mark.parametrize("text", ["line", "circle:a=2.5", UNIT_IMPLICIT])
def test_parse_round_trip(text):
    c = parse_curve(text)
    assert parse_curve(c.spec()).spec() == c.spec()


@pytest.mark.parametrize("bad", ["hyperbola", "circle:a=-1", "implicit:poly=|ref=0,0", "circle:b=1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_curve(bad)


def test_normal_points_from_u1_to_u2():
    # U₁ is where the continued points live: above the line, outside the circle
    assert LineY0().normal(0.5) == pytest.approx(-1j)
    assert Circle(1.0).normal(1.0 + 0j) == pytest.approx(-1.0)
