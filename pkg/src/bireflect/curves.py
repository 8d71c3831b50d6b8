"""Analytic plane curves, their Schwarz functions and the point reflection.

Points of the real plane are represented by complex numbers ``x + 1j*y``;
the characteristic coordinates of such a point are ``z = x + iy`` and
``w = conj(z)``.  A curve Γ = {f = 0} is oriented so that the side
U₁ = {f > 0} is where the data lives; unit normals point from U₁ into U₂.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from math import comb

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import jets
from .errors import (
    ConfigError,
    DerivativeSingular,
    NonConvergence,
    NotOnCurve,
    OutsideValidity,
)

SPRIME_MIN = 1e-8
SPRIME_MAX = 1e8
ON_CURVE_TOL = 1e-12


def as_point(P) -> complex:
    """Accept ``x + iy`` or an ``(x, y)`` pair."""
    if isinstance(P, (complex, float, int, np.number)):
        return complex(P)
    x, y = P
    return complex(float(x), float(y))


def polar(r: float, theta: float) -> complex:
    return complex(r * math.cos(theta), r * math.sin(theta))


@dataclass(frozen=True)
class ReflectedPoint:
    source: complex
    image: complex
    foot: complex

    @property
    def on_curve(self) -> bool:
        return self.source == self.image


class Curve:
    """Common interface; concrete curves override the jet methods."""

    closed_form = True

    def schwarz_jet(self, z, length: int) -> np.ndarray:
        raise NotImplementedError

    def schwarz_inverse_jet(self, w, length: int) -> np.ndarray:
        raise NotImplementedError

    def schwarz(self, z, order: int = 0):
        j = self.schwarz_jet(z, order + 1)
        val = jets.derivatives(j)[order]
        return complex(val) if np.ndim(val) == 0 else val

    def schwarz_inverse(self, w, order: int = 0):
        j = self.schwarz_inverse_jet(w, order + 1)
        val = jets.derivatives(j)[order]
        return complex(val) if np.ndim(val) == 0 else val

    # real geometry -----------------------------------------------------
    def level(self, P) -> float:
        """Signed defining function f, positive on U₁."""
        raise NotImplementedError

    def distance(self, P) -> float:
        raise NotImplementedError

    def normal(self, P) -> complex:
        """Unit normal at a curve point, pointing from U₁ into U₂."""
        raise NotImplementedError

    def nearest(self, P) -> complex:
        raise NotImplementedError

    def path_foot(self, source: complex, image: complex) -> complex:
        return self.nearest(image)

    def boundary_sample(self, n: int, around=None, half_width=None, offset=0.0) -> np.ndarray:
        raise NotImplementedError

    def check_on_curve(self, P, tol: float = 1e-10) -> complex:
        p = as_point(P)
        if self.distance(p) > tol:
            raise NotOnCurve(f"{p} is {self.distance(p):.3g} away from the curve")
        return p

    def check_validity(self, z) -> None:
        """Operational validity test: S converges and |S'| is moderate."""
        sp = np.atleast_1d(self.schwarz(z, 1))
        mag = np.abs(sp)
        if not np.all(np.isfinite(mag)) or np.any(mag == 0):
            raise DerivativeSingular(f"S' vanished or is not finite near {z}")
        if np.any(mag < SPRIME_MIN) or np.any(mag > SPRIME_MAX):
            raise OutsideValidity(f"|S'| = {mag.min():.3g}..{mag.max():.3g} outside validity band")

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class LineY0(Curve):
    """The real axis y = 0, with U₁ the upper half plane."""

    def schwarz_jet(self, z, length):
        return jets.variable(z, length)

    def schwarz_inverse_jet(self, w, length):
        return jets.variable(w, length)

    def level(self, P):
        return as_point(P).imag

    def distance(self, P):
        return abs(as_point(P).imag)

    def normal(self, P):
        return -1j

    def nearest(self, P):
        return complex(as_point(P).real, 0.0)

    def path_foot(self, source, image):
        return complex(source.real, 0.0)

    def boundary_sample(self, n, around=None, half_width=None, offset=0.0):
        c = 0.0 if around is None else as_point(around).real
        hw = 1.5 if half_width is None else half_width
        s = (np.arange(n) + 0.5 + offset) / n
        return (c - hw + 2 * hw * s).astype(complex)

    def spec(self):
        return "line"


@dataclass(frozen=True)
class Circle(Curve):
    """Circle |z| = a about the origin, with U₁ the exterior."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("circle radius must be positive")

    def _gate(self, z):
        r = np.abs(np.asarray(z))
        # |S'| = a²/|z|² within [SPRIME_MIN, SPRIME_MAX]
        lo = self.a / math.sqrt(SPRIME_MAX)
        hi = self.a / math.sqrt(SPRIME_MIN)
        if np.any(r < lo) or np.any(r > hi):
            raise OutsideValidity(f"|z| outside [{lo:.3g}, {hi:.3g}] for circle a={self.a}")

    def schwarz_jet(self, z, length):
        self._gate(z)
        return self.a**2 * jets.monomial(z, -1, length)

    def schwarz_inverse_jet(self, w, length):
        self._gate(w)
        return self.a**2 * jets.monomial(w, -1, length)

    def level(self, P):
        return abs(as_point(P)) ** 2 - self.a**2

    def distance(self, P):
        return abs(abs(as_point(P)) - self.a)

    def normal(self, P):
        p = as_point(P)
        return -p / abs(p)

    def nearest(self, P):
        p = as_point(P)
        if p == 0:
            raise OutsideValidity("circle centre has no nearest point")
        return self.a * p / abs(p)

    def path_foot(self, source, image):
        return self.nearest(source)

    def boundary_sample(self, n, around=None, half_width=None, offset=0.0):
        if around is None:
            c, hw = 0.0, math.pi
        else:
            c = np.angle(as_point(around))
            hw = math.pi if half_width is None else half_width
        s = (np.arange(n) + 0.5 + offset) / n
        return self.a * np.exp(1j * (c - hw + 2 * hw * s))

    def spec(self):
        return f"circle:a={self.a!r}"


def _binomial_expand(i: int, j: int) -> np.ndarray:
    """Coefficients of x^i y^j in (z, w) with x=(z+w)/2, y=(z-w)/(2i)."""
    out = np.zeros((i + j + 1, i + j + 1), dtype=complex)
    for a in range(i + 1):
        ca = comb(i, a) / 2**i
        for b in range(j + 1):
            cb = comb(j, b) * (-1) ** (j - b) / (2j) ** j
            out[a + b, i - a + j - b] += ca * cb
    return out


@dataclass(frozen=True, eq=False)
class ImplicitAlgebraic(Curve):
    """Nonsingular real algebraic curve f(x, y) = 0.

    ``terms`` lists ``(i, j, c)`` for the monomials ``c x^i y^j``.  S(z) is the
    root w of F(z, w) = f((z+w)/2, (z-w)/(2i)) continued from w = conj(z);
    derivatives come from implicit differentiation carried out on jets.
    """

    terms: tuple
    ref: complex | None = None
    newton_tol: float = 1e-13
    newton_maxit: int = 50
    homotopy_steps: int = 8
    homotopy_radius: float = 0.1
    closed_form = False

    _real: np.ndarray = field(init=False, repr=False)
    _cz: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        terms = tuple((int(i), int(j), float(c)) for i, j, c in self.terms)
        object.__setattr__(self, "terms", terms)
        deg = max(i + j for i, j, _ in terms)
        real = np.zeros((deg + 1, deg + 1))
        cz = np.zeros((deg + 1, deg + 1), dtype=complex)
        for i, j, c in terms:
            real[i, j] += c
            cz += c * np.pad(_binomial_expand(i, j), ((0, deg - i - j), (0, deg - i - j)))
        object.__setattr__(self, "_real", real)
        object.__setattr__(self, "_cz", cz)
        object.__setattr__(self, "_cz_w", npoly.polyder(cz, axis=1))
        object.__setattr__(self, "_fx", npoly.polyder(real, axis=0))
        object.__setattr__(self, "_fy", npoly.polyder(real, axis=1))
        ref = self._find_ref() if self.ref is None else self._project(as_point(self.ref))
        if abs(self._grad(ref)) == 0:
            raise ValueError("gradient of f vanishes at the reference point")
        object.__setattr__(self, "ref", complex(ref))

    # real polynomial helpers -----------------------------------------
    def f(self, P):
        p = np.asarray(P)
        return npoly.polyval2d(p.real, p.imag, self._real)

    def _grad(self, p):
        return complex(npoly.polyval2d(p.real, p.imag, self._fx), npoly.polyval2d(p.real, p.imag, self._fy))

    def _hess(self, p):
        fxx = npoly.polyval2d(p.real, p.imag, npoly.polyder(self._fx, axis=0))
        fxy = npoly.polyval2d(p.real, p.imag, npoly.polyder(self._fx, axis=1))
        fyy = npoly.polyval2d(p.real, p.imag, npoly.polyder(self._fy, axis=1))
        return fxx, fxy, fyy

    def _project(self, p: complex) -> complex:
        """Gradient-direction Newton onto Γ."""
        for _ in range(self.newton_maxit):
            g = self._grad(p)
            fv = self.f(p)
            if abs(g) == 0:
                raise DerivativeSingular("grad f vanishes")
            step = fv * g / abs(g) ** 2
            p = p - step
            if abs(step) < 1e-15 * max(1.0, abs(p)):
                return p
        if abs(self.f(p)) < 1e-12:
            return p
        raise NonConvergence(f"projection onto curve failed from {p}")

    def _find_ref(self) -> complex:
        for start in (1, -1, 1j, -1j, 0.5 + 0.5j, 2, -2):
            try:
                return self._project(complex(start))
            except (NonConvergence, DerivativeSingular):
                continue
        raise NonConvergence("no reference point found on curve; pass ref explicitly")

    def level(self, P):
        return float(self.f(as_point(P)))

    def distance(self, P):
        p = as_point(P)
        g = self._grad(p)
        return abs(self.f(p)) / abs(g) if g != 0 else math.inf

    def normal(self, P):
        g = self._grad(as_point(P))
        return -g / abs(g)

    def nearest(self, P):
        """Nearest curve point: Newton on f = 0 and (X - P) ∥ grad f."""
        p = as_point(P)
        x = self._project(p)
        for _ in range(self.newton_maxit):
            fx, fy = self._grad(x).real, self._grad(x).imag
            fxx, fxy, fyy = self._hess(x)
            d = x - p
            g1 = self.f(x)
            g2 = -d.real * fy + d.imag * fx
            jac = np.array([[fx, fy], [-fy - d.real * fxy + d.imag * fxx, -d.real * fyy + fx + d.imag * fxy]])
            try:
                dx = np.linalg.solve(jac, [-g1, -g2])
            except np.linalg.LinAlgError as exc:
                raise NonConvergence("singular Jacobian in nearest-point Newton") from exc
            x = x + complex(dx[0], dx[1])
            if abs(complex(*dx)) < 1e-15 * max(1.0, abs(x)):
                return complex(x)
        if abs(self.f(x)) < 1e-12:
            return complex(x)
        raise NonConvergence(f"nearest-point Newton failed for {p}")

    def trace(self, start, step: float, n: int) -> np.ndarray:
        """March n points along Γ from ``start`` (predictor-corrector)."""
        x = self._project(as_point(start))
        pts = [x]
        for _ in range(n - 1):
            g = self._grad(x)
            t = 1j * g / abs(g)
            x = self._project(x + step * t)
            pts.append(x)
        return np.array(pts)

    def boundary_sample(self, n, around=None, half_width=None, offset=0.0):
        c = self.ref if around is None else self.nearest(around)
        hw = 1.0 if half_width is None else half_width
        h = 2 * hw / n
        start = self.trace(c, -hw + (0.5 + offset) * h, 2)[-1]
        return self.trace(start, h, n)

    # Schwarz function --------------------------------------------------
    def _newton_w(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.array(w, dtype=complex, copy=True)
        ok = np.zeros(z.shape, dtype=bool)
        absc = np.abs(self._cz)
        for _ in range(self.newton_maxit):
            F = npoly.polyval2d(z, w, self._cz)
            scale = np.maximum(1.0, npoly.polyval2d(np.abs(z), np.abs(w), absc))
            ok = np.abs(F) <= self.newton_tol * scale
            if np.all(ok):
                break
            Fw = npoly.polyval2d(z, w, self._cz_w)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.where(ok, w, w - F / Fw)
        ok &= np.isfinite(w)
        return w, ok

    def _schwarz_points(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        w = np.conj(flat).copy()
        near = np.array([self.distance(p) <= self.homotopy_radius for p in flat])
        if np.any(near):
            w_near, ok = self._newton_w(flat[near], np.conj(flat[near]))
            w[near] = w_near
            near[np.flatnonzero(near)[~ok]] = False
        for idx in np.flatnonzero(~near):
            w[idx] = self._homotopy(flat[idx])
        return w.reshape(z.shape)

    def _homotopy(self, z: complex) -> complex:
        try:
            zf = self.nearest(z)
        except NonConvergence as exc:
            raise OutsideValidity(f"no foot point for {z}") from exc
        w = np.conj(zf)
        for s in np.linspace(0, 1, self.homotopy_steps + 1)[1:]:
            w, ok = self._newton_w(zf + s * (z - zf), w)
            if not ok:
                raise NonConvergence(f"homotopy for S({z}) failed at s={s:.3f}")
        return complex(w)

    def schwarz_jet(self, z, length):
        z = np.asarray(z, dtype=complex)
        w0 = self._schwarz_points(z)
        deg_w = self._cz.shape[1] - 1
        Z = jets.variable(z, length)
        zpow = [jets.const(np.ones_like(z), length)]
        for _ in range(self._cz.shape[0] - 1):
            zpow.append(jets.mul(zpow[-1], Z))
        A = [sum(self._cz[p, q] * zpow[p] for p in range(len(zpow))) for q in range(deg_w + 1)]
        W = jets.const(w0, length)
        its = max(1, math.ceil(math.log2(max(length, 2)))) + 1
        for _ in range(its):
            F = A[deg_w]
            Fw = deg_w * A[deg_w]
            for q in range(deg_w - 1, -1, -1):
                F = jets.mul(F, W) + A[q]
                if q > 0:
                    Fw = jets.mul(Fw, W) + q * A[q]
            if np.any(Fw[0] == 0):
                raise DerivativeSingular("F_w vanished; S is not locally a function of z")
            W = W - jets.mul(F, jets.recip(Fw))
        W[0] = w0
        if length > 1:
            sp = np.abs(W[1])
            if np.any(sp == 0) or not np.all(np.isfinite(sp)):
                raise DerivativeSingular("S' = 0 encountered")
            if np.any(sp < SPRIME_MIN) or np.any(sp > SPRIME_MAX):
                raise OutsideValidity("|S'| outside validity band")
        return W

    def schwarz_inverse_jet(self, w, length):
        # real coefficients give S̃(w) = conj(S(conj w)), coefficientwise too
        return np.conj(self.schwarz_jet(np.conj(np.asarray(w, dtype=complex)), length))

    def spec(self):
        poly = ",".join(f"{i}:{j}:{float(c)!r}" for i, j, c in self.terms)
        return f"implicit:poly={poly}|ref={float(self.ref.real)!r},{float(self.ref.imag)!r}"


def schwarz(curve: Curve, z, order: int = 0):
    """Order-th derivative of the Schwarz function at z."""
    return curve.schwarz(z, order)


def schwarz_inverse(curve: Curve, w, order: int = 0):
    return curve.schwarz_inverse(w, order)


def _segment_valid(curve: Curve, a: complex, b: complex, n: int = 17) -> bool:
    try:
        curve.check_validity(a + (b - a) * np.linspace(0, 1, n))
    except (OutsideValidity, NonConvergence, DerivativeSingular):
        return False
    return True


def default_path(curve: Curve, refl: ReflectedPoint, depth: int = 3) -> list[complex]:
    """Polyline from the foot on Γ to the image point Q.

    Straight for the line (vertical) and circle (radial).  For implicit curves
    an invalid straight segment is bent towards Γ at its midpoint.
    """
    if refl.on_curve:
        return [refl.image, refl.image]
    pts = [refl.foot, refl.image]
    if curve.closed_form:
        return pts

    def refine(a, b, d):
        if _segment_valid(curve, a, b) or d == 0:
            return [a, b]
        mid = 0.5 * (a + b)
        mid = 0.5 * (mid + curve.nearest(mid))
        left = refine(a, mid, d - 1)
        return left[:-1] + refine(mid, b, d - 1)

    return refine(pts[0], pts[1], depth)


def reflect_point(curve: Curve, P) -> ReflectedPoint:
    """Q = conj(S(z₀)) together with the foot point used to start paths."""
    z0 = as_point(P)
    if curve.distance(z0) <= ON_CURVE_TOL * max(1.0, abs(z0)):
        return ReflectedPoint(z0, z0, z0)
    curve.check_validity(z0)
    q = complex(np.conj(curve.schwarz(z0)))
    return ReflectedPoint(z0, q, curve.path_foot(z0, q))


_CURVE_RE = re.compile(r"^\s*(line|circle|implicit)\s*(?::\s*(.*))?$")


def parse_curve(text: str) -> Curve:
    """``line`` | ``circle:a=<float>`` | ``implicit:poly=i:j:c,...[|ref=x,y]``."""
    m = _CURVE_RE.match(text or "")
    if not m:
        raise ConfigError(f"unrecognised curve spec {text!r}")
    kind, rest = m.group(1), (m.group(2) or "").strip()
    try:
        if kind == "line":
            if rest:
                raise ConfigError("line takes no parameters")
            return LineY0()
        if kind == "circle":
            if not rest:
                return Circle(1.0)
            key, _, val = rest.partition("=")
            if key.strip() != "a":
                raise ConfigError(f"circle expects a=<radius>, got {rest!r}")
            return Circle(float(val))
        parts = dict(p.split("=", 1) for p in rest.split("|") if p.strip())
        if "poly" not in parts:
            raise ConfigError("implicit curve needs poly=i:j:c,...")
        terms = []
        for tok in parts["poly"].split(","):
            i, j, c = tok.split(":")
            terms.append((int(i), int(j), float(c)))
        ref = None
        if "ref" in parts:
            rx, ry = parts["ref"].split(",")
            ref = complex(float(rx), float(ry))
        return ImplicitAlgebraic(tuple(terms), ref)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad curve spec {text!r}: {exc}") from exc
