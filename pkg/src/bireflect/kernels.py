"""Reflected fundamental solutions and their log multipliers V₁, V₂.

Every coefficient a_k(z, w) is linear in w (and b_k linear in z), so a side
series is carried as two jets in its own variable: ``P(t) + η Q(t)`` where
η is the partner variable.  Partial derivatives then come for free:

    ∂ζ^m V = m! (P[m] + η Q[m]),   ∂ζ^m ∂η V = m! Q[m],   ∂η² V = 0.

Coefficients are stored divided by k!, i.e. ã_k = a_k / k!, and the D̂
operators likewise as D̂^m / (m+1)!, which keeps magnitudes bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import jets
from .curves import Circle, Curve, LineY0, as_point
from .errors import NotConverged, SingularArgument, Unsupported
from .testgen import BoundaryCase

K_MAX = 64
K_MAX_IMPLICIT = 12
GATE_TOL = 1e-13
JET = 3  # value plus two derivatives in the side variable

# G̃ must reproduce these quantities of G on Γ_C for each case
G_MATCH = {
    BoundaryCase.II: ("u", "lap"),
    BoundaryCase.III: ("dn", "lap"),
    BoundaryCase.IV: ("u", "dnlap"),
    BoundaryCase.V: ("dn", "dnlap"),
}


def _series_case(case) -> BoundaryCase:
    case = BoundaryCase.parse(case)
    if case is BoundaryCase.I:
        raise Unsupported("case (i) uses the point formula; it has no series kernel")
    return case


def sigma(case: BoundaryCase) -> int:
    """Sign of the (ζ − ζ₀) part of the first coefficient."""
    return 1 if case in (BoundaryCase.II, BoundaryCase.IV) else -1


def c_coef(case: BoundaryCase, k: int) -> int:
    """Multiplier of (η − M) g D̂^{k−1} in a_k."""
    return (-1) ** (k - 1) if case in (BoundaryCase.II, BoundaryCase.III) else (-1) ** k


def e_coef(case: BoundaryCase, k: int) -> int:
    """Multiplier of g D̂^{k−2} in a_k (k ≥ 2)."""
    if k < 2:
        return 0
    if case is BoundaryCase.III:
        return (-1) ** k * 2 * k
    if case is BoundaryCase.V:
        return (-1) ** (k - 1) * (2 * k - 4)
    return 0


# special functions ---------------------------------------------------------
@lru_cache(maxsize=None)
def harmonic_number(k: int) -> float:
    return math.fsum(1.0 / l for l in range(1, k + 1))


def f_k(k: int, xi):
    """f_k(ξ) = ξᵏ/k! (ln ξ − C_k) for k ≥ 0, (−1)^{−k−1} (−k−1)! ξᵏ for k ≤ −1."""
    xi = np.asarray(xi, dtype=complex)
    if k >= 0:
        if np.any(xi == 0):
            raise SingularArgument("f_k with k >= 0 is logarithmic at xi = 0")
        val = xi**k / math.factorial(k) * (np.log(xi) - harmonic_number(k))
    else:
        if np.any(xi == 0):
            raise SingularArgument("f_k with k < 0 has a pole at xi = 0")
        val = (-1) ** (-k - 1) * math.factorial(-k - 1) * xi**k
    return complex(val) if val.ndim == 0 else val


def _scaled_f(k: int, j: int, xi0):
    """k! f_{k−j}(ξ₀), evaluated without forming k! explicitly."""
    m = k - j
    if m >= 0:
        ratio = math.prod(range(m + 1, k + 1))
        return ratio * xi0**m * (np.log(xi0) - harmonic_number(m))
    return math.factorial(k) * (-1) ** (-m - 1) * math.factorial(-m - 1) * xi0**m


# D̂ operators ---------------------------------------------------------------
class DhatSequence:
    """Jets of D̂^m/(m+1)! about the points x, for one side of the curve.

    Closed form on the line (D̂ ≡ 0 beyond m = 0) and the circle
    (D̂^m = (−1)^m (m+1)! x^m / a^{2m}); otherwise the nested derivative
    ∂(g ·) is applied to jets of g = 1/M', M = S or S̃.
    """

    def __init__(self, curve: Curve, side: str, x, m_max: int, generic: bool = False):
        self.curve, self.side, self.x, self.m_max = curve, side, np.asarray(x, dtype=complex), m_max
        self.mode = "generic"
        if not generic and isinstance(curve, LineY0):
            self.mode = "line"
        elif not generic and isinstance(curve, Circle):
            self.mode = "circle"
        full = JET + 1 if self.mode != "generic" else m_max + JET + 1
        M = self._map_jet(full)
        self.M = M[:JET]
        g = jets.recip(jets.deriv(M))
        self.g = g[:JET]
        self._cache = {}
        if self.mode == "generic":
            d = jets.const(np.ones_like(self.x), len(g))
            self._cache[0] = d[:JET]
            for m in range(1, m_max + 1):
                d = jets.deriv(jets.mul(g, d)) / (m + 1)
                self._cache[m] = d[:JET]

    def _map_jet(self, length):
        if self.side == "a":
            return self.curve.schwarz_jet(self.x, length)
        return self.curve.schwarz_inverse_jet(self.x, length)

    def __call__(self, m: int) -> np.ndarray:
        if m in self._cache:
            return self._cache[m]
        if m < 0:
            raise ValueError("negative D-hat power")
        if self.mode == "line":
            out = jets.const(np.full_like(self.x, 1.0 if m == 0 else 0.0), JET)
        elif self.mode == "circle":
            out = (-1.0 / self.curve.a**2) ** m * jets.monomial(self.x, m, JET)
        else:
            raise NotConverged(f"D-hat power {m} beyond the precomputed m_max={self.m_max}")
        self._cache[m] = out
        return out

    def unscaled(self, m: int) -> np.ndarray:
        return self(m)[0] * math.factorial(m + 1)


@dataclass
class SideSum:
    """Σ_k (A_k + η B_k) W_k(ξ) as jets P, Q in the side variable."""

    P: np.ndarray
    Q: np.ndarray
    eta: np.ndarray
    k_used: int
    tail: np.ndarray

    def partial(self, d_self: int, d_partner: int):
        if d_self > JET - 1:
            raise ValueError("only two derivatives in each variable are carried")
        fact = math.factorial(d_self)
        if d_partner == 0:
            return fact * (self.P[d_self] + self.eta * self.Q[d_self])
        if d_partner == 1:
            return fact * self.Q[d_self]
        return np.zeros_like(self.P[0])


def _power_weight(k, xi, xipow):
    return xipow


def _log_weight(k, xi, xipow):
    vals = [_scaled_f(k, j, xi[0]) for j in range(JET)]
    return jets.compose_ladder(vals, xi)


def _side_sum(case, dh: DhatSequence, zeta0, eta0, eta, k_max, tol, strict, logs=False) -> SideSum:
    x = dh.x
    M, g = dh.M, dh.g
    xi = M.copy()
    xi[0] = xi[0] - eta0
    if logs and np.any(xi[0] == 0):
        raise SingularArgument("point lies on the singular characteristic of the reflected kernel")
    zvar = jets.variable(x - zeta0, JET)
    shape = np.broadcast_shapes(x.shape, np.shape(eta))
    P = np.zeros((JET,) + shape, dtype=complex)
    Q = np.zeros_like(P)
    gM = jets.mul(g, M)
    xipow = jets.const(np.ones(shape), JET)
    small = np.zeros(shape, dtype=int)
    tail = np.zeros(shape)
    weight = _log_weight if logs else _power_weight
    k = 0
    for k in range(1, k_max + 1):
        xipow = jets.mul(xipow, xi)
        ck, ek = c_coef(case, k), e_coef(case, k)
        d1 = dh(k - 1)
        B = ck * jets.mul(g, d1)
        A = -ck * jets.mul(gM, d1)
        if ek:
            A = A + (ek / k) * jets.mul(g, dh(k - 2))
        if k == 1:
            A = A + sigma(case) * zvar
        W = weight(k, xi, xipow)
        tP, tQ = jets.mul(A, W), jets.mul(B, W)
        P = P + tP
        Q = Q + tQ
        mag = np.maximum(np.max(np.abs(tP), axis=0), np.abs(eta) * np.max(np.abs(tQ), axis=0))
        scale = np.maximum(1.0, np.maximum(np.max(np.abs(P), axis=0), np.abs(eta) * np.max(np.abs(Q), axis=0)))
        small = np.where(mag < tol * scale, small + 1, 0)
        tail = mag
        if np.all(small >= 3):
            break
    else:
        if strict:
            raise NotConverged(f"series gate not met within {k_max} terms (last term {np.max(tail):.3g})")
    return SideSum(P, Q, np.asarray(eta, dtype=complex) * np.ones(shape), k, tail)


@dataclass
class SeriesPair:
    """V₁ (b side, in w) and V₂ (a side, in z) at a batch of points."""

    b: SideSum
    a: SideSum

    @property
    def k_used(self) -> int:
        return max(self.a.k_used, self.b.k_used)

    @property
    def tail(self) -> float:
        return float(max(np.max(self.a.tail), np.max(self.b.tail)))

    def d1(self, dz: int, dw: int):
        return self.b.partial(dw, dz)

    def d2(self, dz: int, dw: int):
        return self.a.partial(dz, dw)

    def dV(self, dz: int, dw: int):
        return self.d1(dz, dw) - self.d2(dz, dw)


class KernelSeries:
    """Truncated series for V₁⁽ʲ⁾, V₂⁽ʲ⁾ and G̃⁽ʲ⁾ with source (z₀, w₀).

    Truncation stops once three consecutive terms fall below
    ``tol * max(1, |running sum|)``.  The budget is 64 terms for the line and
    circle and 12 for implicit curves; running out raises ``NotConverged``
    unless ``strict`` is False (the default for implicit curves, where the
    cap is a design limit and the tail bound is reported instead).
    """

    def __init__(self, case, curve: Curve, source, w0=None, k_max: int | None = None,
                 tol: float = GATE_TOL, strict: bool | None = None):
        self.case = _series_case(case)
        self.curve = curve
        self.z0 = as_point(source)
        self.w0 = complex(np.conj(self.z0)) if w0 is None else complex(w0)
        if k_max is None:
            k_max = K_MAX if curve.closed_form else K_MAX_IMPLICIT
        if not curve.closed_form:
            k_max = min(k_max, K_MAX_IMPLICIT)
        self.k_max = k_max
        self.tol = tol
        self.strict = curve.closed_form if strict is None else strict

    def _sides(self, z, w, logs=False) -> SeriesPair:
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        m_max = self.k_max
        da = DhatSequence(self.curve, "a", z, m_max)
        db = DhatSequence(self.curve, "b", w, m_max)
        a = _side_sum(self.case, da, self.z0, self.w0, w, self.k_max, self.tol, self.strict, logs)
        b = _side_sum(self.case, db, self.w0, self.z0, z, self.k_max, self.tol, self.strict, logs)
        return SeriesPair(b, a)

    def v2_side(self, z, w) -> SideSum:
        """Only the a-side sum V₂ (what the Cauchy–Goursat data constrain)."""
        z = np.asarray(z, dtype=complex)
        da = DhatSequence(self.curve, "a", z, self.k_max)
        return _side_sum(self.case, da, self.z0, self.w0, np.asarray(w, dtype=complex),
                         self.k_max, self.tol, self.strict)

    def series(self, z, w) -> SeriesPair:
        """Log multipliers V₁, V₂ (no −1/16π factor) with their partials."""
        return self._sides(z, w)

    def eval_V(self, which: str, z, w, dz: int = 0, dw: int = 0):
        if dz > 2 or dw > 2 or dz + dw > 3:
            raise ValueError("need dz <= 2, dw <= 2, dz + dw <= 3")
        s = self.series(z, w)
        fn = {"V1": s.d1, "V2": s.d2, "V": s.dV}[which]
        val = fn(dz, dw)
        return complex(val) if np.ndim(val) == 0 else val

    def reflected_G(self, z, w) -> SeriesPair:
        """G̃₁, G̃₂ (series in f_k, without the −1/16π factor) and partials."""
        return self._sides(z, w, logs=True)

    def eval_reflected_G(self, z, w):
        s = self.reflected_G(z, w)
        val = -(s.d1(0, 0) + s.d2(0, 0)) / (16 * math.pi)
        return complex(val) if np.ndim(val) == 0 else val

    def first_coefficient_sign(self, zq) -> float:
        """−½((∂a₁/∂w) S′ + (∂b₁/∂z) S̃′) evaluated at the image point."""
        zq = complex(zq)
        wq = complex(np.conj(zq))
        sp = self.curve.schwarz(zq, 1)
        stp = self.curve.schwarz_inverse(wq, 1)
        a1_w = c_coef(self.case, 1) / sp   # ∂a₁/∂w = c₁ g
        b1_z = c_coef(self.case, 1) / stp
        return float((-0.5 * (a1_w * sp + b1_z * stp)).real)


def eval_V(series: KernelSeries, which, z, w, dz=0, dw=0):
    return series.eval_V(which, z, w, dz, dw)


def eval_reflected_G(case, curve, z, w, z0, w0=None, **kw):
    return KernelSeries(case, curve, z0, w0, **kw).eval_reflected_G(z, w)


@dataclass(frozen=True)
class CoefficientSequence:
    """a_k⁽ʲ⁾ (side 'a', variable z) or b_k⁽ʲ⁾ (side 'b', variable w)."""

    case: BoundaryCase
    side: str
    curve: Curve

    def __call__(self, k: int, z, w, source, generic: bool = False):
        if k < 1:
            raise ValueError("coefficients start at k = 1")
        case = _series_case(self.case)
        src = complex(source)
        zeta, eta = (z, w) if self.side == "a" else (w, z)
        dh = DhatSequence(self.curve, self.side, zeta, k, generic=generic)
        g, M = dh.g[0], dh.M[0]
        val = c_coef(case, k) * (eta - M) * g * dh(k - 1)[0] * math.factorial(k)
        if e_coef(case, k):
            val = val + e_coef(case, k) * g * dh(k - 2)[0] * math.factorial(k - 1)
        if k == 1:
            val = val + sigma(case) * (zeta - src)
        return complex(val) if np.ndim(val) == 0 else val


def coefficient(seq: CoefficientSequence, k, z, w, source):
    return seq(k, z, w, source)


# closed forms --------------------------------------------------------------
def line_reflected_G(case, z, w, z0, w0):
    """G̃⁽ʲ⁾ on y = 0 in closed form, including the −1/16π factor."""
    case = _series_case(case)
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    L1 = np.log(w - z0) - 1
    L2 = np.log(z - w0) - 1
    if case is BoundaryCase.II:
        g1, g2 = (z - w0) * (w - z0) * L1, (w - z0) * (z - w0) * L2
    elif case is BoundaryCase.III:
        g1 = -(2 * w - z - w0) * (w - z0) * L1 + 2 * (w - z0) ** 2 * (L1 - 0.5)
        g2 = -(2 * z - w - z0) * (z - w0) * L2 + 2 * (z - w0) ** 2 * (L2 - 0.5)
    elif case is BoundaryCase.IV:
        g1, g2 = (2 * w - z - w0) * (w - z0) * L1, (2 * z - w - z0) * (z - w0) * L2
    else:
        g1, g2 = -(z - w0) * (w - z0) * L1, -(w - z0) * (z - w0) * L2
    val = -(g1 + g2) / (16 * math.pi)
    return complex(val) if val.ndim == 0 else val


def circle_V_closed(z, w, z0, w0, a: float = 1.0):
    """Summed case-(ii) multipliers on |z| = a: returns (V₁, V₂)."""
    a2 = a * a
    v2 = (z - z0) * (a2 / z - w0) + (a2 / z - w) * (a2 / w0 - z)
    v1 = (w - w0) * (a2 / w - z0) + (a2 / w - z) * (a2 / z0 - w)
    return v1, v2


def fundamental_partials(z, w, z0, w0):
    """G = −(G₁ + G₂)/16π and its partials (∂z, ∂w, ∂z∂w, ∂z²∂w, ∂z∂w²)."""
    c = -1.0 / (16 * math.pi)
    dz, dw = z - z0, w - w0
    lz, lw = np.log(dz), np.log(dw)
    p, q = dz * (lz - 1), dw * (lw - 1)
    return {
        (0, 0): c * (p * dw + q * dz),
        (1, 0): c * (lz * dw + q),
        (0, 1): c * (p + lw * dz),
        (1, 1): c * (lz + lw),
        (2, 1): c / dz,
        (1, 2): c / dw,
    }


def _conditions(d: dict, sprime):
    return {
        "u": d[(0, 0)],
        "dn": d[(1, 0)] - sprime * d[(0, 1)],
        "lap": 4 * d[(1, 1)],
        "dnlap": 4 * (d[(2, 1)] - sprime * d[(1, 2)]),
    }


def check_boundary_match(case, curve: Curve, z_on_curve, z0, w0=None, **kw):
    """Per-point max violation of the case's two matching conditions G̃ ↔ G.

    ∂n on Γ_C is taken along ∂z − S′∂w, which is the unit normal derivative
    up to a unimodular factor at real curve points.
    """
    case = _series_case(case)
    zb = np.asarray(z_on_curve, dtype=complex)
    wb = np.conj(zb)
    ks = KernelSeries(case, curve, z0, w0, **kw)
    s = ks.reflected_G(zb, wb)
    c = -1.0 / (16 * math.pi)
    keys = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]
    gt = {k: c * (s.d1(*k) + s.d2(*k)) for k in keys}
    g = fundamental_partials(zb, wb, ks.z0, ks.w0)
    sp = curve.schwarz(zb, 1)
    ct, cg = _conditions(gt, sp), _conditions(g, sp)
    n1, n2 = G_MATCH[case]
    return np.maximum(np.abs(ct[n1] - cg[n1]), np.abs(ct[n2] - cg[n2]))


def check_cauchy_goursat(curve: Curve, z0, w0=None, z_curve=None, w_char=None, **kw):
    """Residuals of the Cauchy–Goursat data that characterise V₂⁽²⁾.

    Returns ``[biharmonic, value on Γ_C, ∂z∂w on Γ_C, value on the
    characteristic S(z) = w₀, ∂z on that characteristic]``.  Here the
    Laplacian datum is ∂z∂w V₂ = 1 (ΔV₂ = 4 with Δ = 4∂z∂w).  Biharmonicity
    is checked through the w-independence of ∂w V₂.
    """
    ks = KernelSeries(BoundaryCase.II, curve, z0, w0, **kw)
    z0, w0 = ks.z0, ks.w0
    if z_curve is None:
        z_curve = curve.boundary_sample(24, around=curve.nearest(z0), half_width=0.3)
    zb = np.asarray(z_curve, dtype=complex)
    wb = np.conj(zb)
    s = ks.v2_side(zb, wb)
    s_shift = ks.v2_side(zb, wb + 0.05 + 0.03j)
    r_bih = np.max(np.abs(s.partial(0, 1) - s_shift.partial(0, 1)))
    r_val = np.max(np.abs(s.partial(0, 0) - (zb - z0) * (wb - w0)))
    r_lap = np.max(np.abs(s.partial(1, 1) - 1.0))
    zc = complex(curve.schwarz_inverse(w0))
    if w_char is None:
        w_char = w0 + np.array([0, 0.05, 0.05j, -0.05, 0.1 - 0.1j])
    wc = np.asarray(w_char, dtype=complex)
    zcs = np.full(wc.shape, zc)
    sc = ks.v2_side(zcs, wc)
    sp = curve.schwarz(zc, 1)
    S_zc = curve.schwarz(zc)
    r_cval = np.max(np.abs(sc.partial(0, 0)))
    r_cdz = np.max(np.abs(sc.partial(1, 0) - ((zc - z0) * sp + (wc - S_zc))))
    return [float(r_bih), float(r_val), float(r_lap), float(r_cval), float(r_cdz)]
