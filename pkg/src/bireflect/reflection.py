"""Reflection operators continuing a biharmonic u from U₂ into U₁.

All operators return u(P) for P in U₁ (the side the curve normal points
away from) using data of u at and around the image point Q only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import Circle, Curve, as_point, default_path, reflect_point
from .errors import OutsideValidity, QuadratureFailure, ReflectionError
from .goursat import BiharmonicField
from .kernels import KernelSeries, _series_case
from .quadrature import QuadratureSpec, integrate, path_integral
from .testgen import BoundaryCase

DEFAULT_QUAD = QuadratureSpec()

# ±1 multiplying u(Q) in the general formula
POINT_SIGN = {BoundaryCase.II: -1, BoundaryCase.III: -1, BoundaryCase.IV: 1, BoundaryCase.V: 1}


@dataclass
class ContinuationResult:
    value: float
    point_term: float
    correction: float = 0.0
    quadrature_error_estimate: float = 0.0
    truncation_K_used: int = 0
    path: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)
        self.point_term = float(self.point_term)
        self.correction = float(self.correction)


def _on_curve_result(u, z, path=None):
    v = u.eval(z)
    return ContinuationResult(v, v, 0.0, 0.0, 0, path or [z, z], {"on_curve": True})


# line ----------------------------------------------------------------------
def continue_line(u: BiharmonicField, case, P, quad: QuadratureSpec = DEFAULT_QUAD) -> ContinuationResult:
    """Continuation across y = 0 by the five explicit line formulas.

    The formulas are symmetric under y ↦ −y, so P may lie on either side.
    """
    case = BoundaryCase.parse(case)
    z = as_point(P)
    x0, y0 = z.real, z.imag
    if y0 == 0:
        return _on_curve_result(u, z)
    q = complex(x0, -y0)
    path = [complex(x0, 0.0), q]
    uq = u.eval(q)
    err = 0.0
    if case is BoundaryCase.I:
        pt = -uq - 2 * y0 * u.eval(q, 0, 1) - y0**2 * u.laplacian(q)
        return ContinuationResult(pt, pt, 0.0, 0.0, 0, path)
    if case is BoundaryCase.II:
        return ContinuationResult(-uq, -uq, 0.0, 0.0, 0, path)
    if case is BoundaryCase.V:
        return ContinuationResult(uq, uq, 0.0, 0.0, 0, path)
    if case is BoundaryCase.III:
        val, err = integrate(lambda y: u.laplacian(x0 + 1j * y), 0.0, -y0, quad)
        pt, corr = -uq, -y0 * val
        err *= abs(y0)
    else:
        val, err = integrate(lambda y: y * u.laplacian(x0 + 1j * y), 0.0, -y0, quad)
        pt, corr = uq, -val
    return ContinuationResult(pt + corr, pt, corr, err, 0, path)


# clamped -------------------------------------------------------------------
def continue_clamped_general(u: BiharmonicField, curve: Curve, P) -> ContinuationResult:
    """Four-term point formula for u = ∂ₙu = 0 on a general analytic curve."""
    refl = reflect_point(curve, P)
    if refl.on_curve:
        return _on_curve_result(u, refl.source)
    z0 = refl.source
    x0, y0 = z0.real, z0.imag
    s = complex(curve.schwarz(z0))
    st = complex(curve.schwarz_inverse(np.conj(z0)))
    q = refl.image
    cx = (x0 - (s + st) / 2).real
    cy = (y0 + (s - st) / 2j).real
    cl = 0.25 * (x0**2 + y0**2 - s * z0 - st * np.conj(z0) + s * st).real
    val = -u.eval(q) - cx * u.eval(q, 1, 0) - cy * u.eval(q, 0, 1) - cl * u.laplacian(q)
    return ContinuationResult(val, val, 0.0, 0.0, 0, [refl.foot, q])


def continue_clamped_circle(u: BiharmonicField, a: float, P) -> ContinuationResult:
    """Clamped continuation across |z| = a written in polar form."""
    z0 = as_point(P)
    curve = Circle(a)
    r0 = abs(z0)
    if r0 == 0:
        raise OutsideValidity("the centre of the circle has no reflection")
    if abs(r0 - a) <= 1e-14 * a:
        return _on_curve_result(u, z0)
    curve.check_validity(z0)
    q = a * a / np.conj(z0)
    er = q / abs(q)
    ur = er.real * u.eval(q, 1, 0) + er.imag * u.eval(q, 0, 1)
    k = (r0**2 - a**2) / r0**2
    val = -u.eval(q) - k * (r0 * ur + 0.25 * (r0**2 - a**2) * u.laplacian(q))
    return ContinuationResult(val, val, 0.0, 0.0, 0, [a * er, q])


# general K̂ -----------------------------------------------------------------
def _khat_form(u: BiharmonicField, series: KernelSeries, diag: dict):
    def form(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = np.conj(z)
        s = series.series(z, w)
        diag["k_used"] = max(diag.get("k_used", 0), s.k_used)
        diag["tail"] = max(diag.get("tail", 0.0), s.tail)
        V = s.dV(0, 0)
        Vz, Vw = s.dV(1, 0), s.dV(0, 1)
        Vzzw, Vzww = s.dV(2, 1), s.dV(1, 2)
        Vx, Vy = Vz + Vw, 1j * (Vz - Vw)
        LV = 4 * s.dV(1, 1)
        LVx, LVy = 4 * (Vzzw + Vzww), 4j * (Vzzw - Vzww)
        uu, ux, uy, lap, lx, ly = u.jet(z)
        A = V * ly - lap * Vy + LV * uy - uu * LVy
        B = -(V * lx - lap * Vx + LV * ux - uu * LVx)
        return A, B

    return form


def khat(u: BiharmonicField, curve: Curve, case, P, quad: QuadratureSpec = DEFAULT_QUAD,
         path=None, k_max=None, details: bool = False, strict=None):
    """The correction K̂_j = (1/8i)∫_Γ^Q (… ) dx − (… ) dy along ``path``.

    The default path runs from the foot on Γ to Q.  The imaginary part must
    vanish to within 10× the quadrature tolerance (plus the series tail for
    truncated implicit kernels); it is then discarded.
    """
    case = _series_case(case)
    refl = reflect_point(curve, P)
    if refl.on_curve:
        out = (0.0, 0.0, {"k_used": 0, "tail": 0.0, "imag": 0.0}, [refl.image, refl.image])
        return out if details else 0.0
    if path is None:
        path = default_path(curve, refl)
    series = KernelSeries(case, curve, refl.source, k_max=k_max, strict=strict)
    diag: dict = {}
    val, err = path_integral(_khat_form(u, series, diag), path, quad, field=u)
    val = val / 8j
    err = err / 8
    diag["imag"] = abs(val.imag)
    allowed = 10 * quad.tol * max(1.0, abs(val)) + (0 if series.strict else 10 * diag.get("tail", 0.0))
    if abs(val.imag) > allowed:
        raise QuadratureFailure(f"K-hat has imaginary residue {val.imag:.3g} above {allowed:.3g}")
    if details:
        return float(val.real), float(err), diag, list(path)
    return float(val.real)


def continue_general(u: BiharmonicField, curve: Curve, case, P,
                     quad: QuadratureSpec = DEFAULT_QUAD, path=None, k_max=None,
                     strict=None) -> ContinuationResult:
    """u(P) = ±u(Q) + K̂_j for cases (ii)–(v) on any analytic curve."""
    case = _series_case(case)
    refl = reflect_point(curve, P)
    if refl.on_curve:
        return _on_curve_result(u, refl.source)
    sign = KernelSeries(case, curve, refl.source, k_max=k_max).first_coefficient_sign(refl.image)
    if round(sign) != POINT_SIGN[case] or abs(sign - round(sign)) > 1e-8:
        raise ReflectionError(f"runtime point sign {sign} disagrees with case {case.name}")
    pt = POINT_SIGN[case] * u.eval(refl.image)
    corr, err, diag, used = khat(u, curve, case, P, quad, path, k_max, details=True, strict=strict)
    diag["runtime_sign"] = sign
    return ContinuationResult(pt + corr, pt, corr, err, diag.get("k_used", 0), used, diag)


# circle Navier example -------------------------------------------------------
def continue_circle_navier(u: BiharmonicField, P, a: float = 1.0, quad: QuadratureSpec = DEFAULT_QUAD,
                           literal: bool = False) -> ContinuationResult:
    """Navier (u = Δu = 0) continuation across |z| = a along the ray θ = θ₀.

    In units of a: u(P) = −u(Q) + ((r₀² − 1)/4r₀) ∫₁^{1/r₀} ((1 − r²)/r²) Δu dr.
    ``literal=True`` replaces Δu by u_r/r + u_rr, which agrees with it only
    for radial fields.
    """
    z0 = as_point(P)
    r0, th = abs(z0) / a, np.angle(z0)
    if r0 == 0:
        raise OutsideValidity("the centre of the circle has no reflection")
    if abs(r0 - 1) <= 1e-14:
        return _on_curve_result(u, z0)
    e = np.exp(1j * th)
    q = a / r0 * e

    def lap(r):
        pts = a * r * e
        if not literal:
            return a * a * u.laplacian(pts)
        ur = e.real * u.eval(pts, 1, 0) + e.imag * u.eval(pts, 0, 1)
        urr = (e.real**2 * u.eval(pts, 2, 0) + 2 * e.real * e.imag * u.eval(pts, 1, 1)
               + e.imag**2 * u.eval(pts, 0, 2))
        return a * a * (ur / (a * r) + urr)

    val, err = integrate(lambda r: (1 - r * r) / (r * r) * lap(r), 1.0, 1.0 / r0, quad)
    k = (r0**2 - 1) / (4 * r0)
    pt, corr = -u.eval(q), k * val
    return ContinuationResult(pt + corr, pt, corr, abs(k) * err, 0, [a * e, q],
                              {"literal": literal})


# Green's representation ----------------------------------------------------
def green_representation(u: BiharmonicField, P, contour_radius: float,
                         quad: QuadratureSpec | None = None) -> float:
    """u(P) from u, ∇u, Δu, ∇Δu on the circle |z − P| = contour_radius.

    Uses G = −(1/16π)(z−z₀)(w−w₀)(ln(z−z₀) + ln(w−w₀) − 2), i.e.
    −(1/8π) ρ²(ln ρ − 1) at real points; the contour runs clockwise.
    """
    if quad is None:
        quad = QuadratureSpec(panel_count=64)
    z0 = as_point(P)
    R = float(contour_radius)
    if R <= 0:
        raise ValueError("contour radius must be positive")
    lnR = math.log(R)
    G = -(R * R) * (lnR - 1) / (8 * math.pi)
    LG = -lnR / (2 * math.pi)
    c_grad = -(2 * lnR - 1) / (8 * math.pi)
    c_lgrad = -1.0 / (2 * math.pi * R * R)

    def integrand(t):
        e = np.exp(-1j * t)  # clockwise
        z = z0 + R * e
        dx, dy = R * e.real, R * e.imag
        uu, ux, uy, lap, lx, ly = u.jet(z)
        Gx, Gy = c_grad * dx, c_grad * dy
        LGx, LGy = c_lgrad * dx, c_lgrad * dy
        A = G * ly - lap * Gy + LG * uy - uu * LGy
        B = -(G * lx - lap * Gx + LG * ux - uu * LGx)
        # dz/dt = −iR e
        zt = -1j * R * e
        return A * zt.real + B * zt.imag

    val, _ = integrate(integrand, 0.0, 2 * math.pi, quad)
    return float(np.real(val))
