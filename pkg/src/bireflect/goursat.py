"""Biharmonic fields in Goursat form u = Re(conj(z) φ(z) + ψ(z)).

φ and ψ are finite sums of the analytic terms zⁿ, log z and z log z, so all
partial derivatives up to third order are available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .curves import Curve, as_point
from .errors import DomainViolation

KINDS = ("power", "log", "z_log")
SLOTS = ("phi", "psi")
MAX_ORDER = 3


@dataclass(frozen=True)
class AnalyticTerm:
    kind: str
    coeff: complex
    n: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind == "power" and not -8 <= self.n <= 8:
            raise ValueError("power terms are limited to n in [-8, 8]")
        object.__setattr__(self, "coeff", complex(self.coeff))

    @property
    def singular_at_origin(self) -> bool:
        return self.kind != "power" or self.n < 0

    def derivative(self, z: np.ndarray, p: int) -> np.ndarray:
        """p-th complex derivative of coeff * term at z."""
        c = self.coeff
        if self.kind == "power":
            n = self.n
            fall = math.prod(range(n - p + 1, n + 1)) if p else 1
            if fall == 0:
                return np.zeros_like(z)
            return c * fall * z ** (n - p)
        if self.kind == "log":
            if p == 0:
                return c * np.log(z)
            return c * (-1) ** (p - 1) * math.factorial(p - 1) * z ** (-p)
        if p == 0:
            return c * z * np.log(z)
        if p == 1:
            return c * (np.log(z) + 1)
        return c * (-1) ** p * math.factorial(p - 2) * z ** (1 - p)


def _term(slot, kind, coeff, n=0):
    return slot, AnalyticTerm(kind, coeff, n)


class BiharmonicField:
    """Real biharmonic function given by its Goursat pair.

    >>> u = BiharmonicField(phi=[AnalyticTerm("power", 0.5, 1)],
    ...                     psi=[AnalyticTerm("power", -0.5, 2)])   # u = y²
    >>> round(u.eval((1.0, 2.0)), 12)
    4.0
    """

    def __init__(self, phi=(), psi=(), name: str | None = None):
        self.phi = tuple(phi)
        self.psi = tuple(psi)
        self.name = name

    def __repr__(self):
        return f"BiharmonicField({self.name or self.records()!r})"

    # construction -----------------------------------------------------
    @classmethod
    def from_records(cls, records, name=None):
        """Build from ``(slot, kind, n, coeff_re, coeff_im)`` tuples."""
        phi, psi = [], []
        for slot, kind, n, cre, cim in records:
            if slot not in SLOTS:
                raise ValueError(f"slot must be phi or psi, got {slot!r}")
            term = AnalyticTerm(kind, complex(float(cre), float(cim)), int(n))
            (phi if slot == "phi" else psi).append(term)
        return cls(phi, psi, name)

    def records(self):
        out = []
        for slot, terms in (("phi", self.phi), ("psi", self.psi)):
            for t in terms:
                out.append((slot, t.kind, t.n, t.coeff.real, t.coeff.imag))
        return out

    def __add__(self, other):
        return BiharmonicField(self.phi + other.phi, self.psi + other.psi)

    def scaled(self, s: complex):
        sc = lambda ts: [AnalyticTerm(t.kind, s * t.coeff, t.n) for t in ts]
        return BiharmonicField(sc(self.phi), sc(self.psi), self.name)

    @staticmethod
    def combine(fields, weights, name=None):
        phi, psi = [], []
        for f, c in zip(fields, weights):
            if c == 0:
                continue
            g = f.scaled(c)
            phi.extend(g.phi)
            psi.extend(g.psi)
        return BiharmonicField(phi, psi, name)

    # branch structure ---------------------------------------------------
    def _log_coeffs(self):
        cphi_l = sum((t.coeff for t in self.phi if t.kind == "log"), 0j)
        cphi_z = sum((t.coeff for t in self.phi if t.kind == "z_log"), 0j)
        cpsi_l = sum((t.coeff for t in self.psi if t.kind == "log"), 0j)
        cpsi_z = sum((t.coeff for t in self.psi if t.kind == "z_log"), 0j)
        return cphi_l, cphi_z, cpsi_l, cpsi_z

    @property
    def single_valued(self) -> bool:
        """True when u has no jump across the log branch cut."""
        cphi_l, cphi_z, cpsi_l, cpsi_z = self._log_coeffs()
        tol = 1e-14 * max(1.0, *(abs(c) for c in (cphi_l, cphi_z, cpsi_l, cpsi_z)))
        return abs(cphi_z.imag) <= tol and abs(cpsi_l.imag) <= tol and abs((cphi_l + cpsi_z).imag) <= tol

    @property
    def has_logs(self) -> bool:
        return any(t.kind != "power" for t in self.phi + self.psi)

    def _check_domain(self, z):
        if any(t.singular_at_origin for t in self.phi + self.psi) and np.any(z == 0):
            raise DomainViolation("field evaluated at its singularity z = 0")
        if self.has_logs and not self.single_valued:
            if np.any((z.real < 0) & (z.imag == 0)):
                raise DomainViolation("field evaluated on its branch cut (negative real axis)")

    # evaluation ---------------------------------------------------------
    def _analytic(self, terms, z, p):
        out = np.zeros_like(z)
        for t in terms:
            out = out + t.derivative(z, p)
        return out

    def _F_partials(self, z, order):
        """∂_z^p ∂_w^q of F = w φ(z) + ψ(z); only q ≤ 1 is nonzero."""
        w = np.conj(z)
        phi = [self._analytic(self.phi, z, p) for p in range(order + 1)]
        psi = [self._analytic(self.psi, z, p) for p in range(order + 1)]
        return {(p, 0): w * phi[p] + psi[p] for p in range(order + 1)} | {
            (p, 1): phi[p] for p in range(order)
        }

    def eval(self, P, dx: int = 0, dy: int = 0):
        """∂^{dx+dy}u / ∂x^dx ∂y^dy at P (scalar or array of complex points)."""
        if dx < 0 or dy < 0 or dx + dy > MAX_ORDER:
            raise ValueError("derivative order must satisfy dx + dy <= 3")
        z = np.asarray(P if not isinstance(P, tuple) else as_point(P), dtype=complex)
        self._check_domain(z)
        Fd = self._F_partials(z, dx + dy)
        # ∂x = ∂z + ∂w,  ∂y = i(∂z − ∂w)
        acc = np.zeros_like(z)
        for j in range(dx + 1):
            for l in range(dy + 1):
                p, q = j + l, (dx - j) + (dy - l)
                if (p, q) in Fd:
                    acc = acc + comb(dx, j) * comb(dy, l) * (-1) ** (dy - l) * Fd[(p, q)]
        val = (1j**dy * acc).real
        return float(val) if val.ndim == 0 else val

    __call__ = eval

    def laplacian(self, P):
        """Δu = 4 Re φ'(z)."""
        z = np.asarray(P if not isinstance(P, tuple) else as_point(P), dtype=complex)
        self._check_domain(z)
        val = (4 * self._analytic(self.phi, z, 1)).real
        return float(val) if val.ndim == 0 else val

    def gradient_laplacian(self, P):
        """(∂x Δu, ∂y Δu) = 4 (Re φ'', −Im φ'')."""
        z = np.asarray(P if not isinstance(P, tuple) else as_point(P), dtype=complex)
        self._check_domain(z)
        d2 = 4 * self._analytic(self.phi, z, 2)
        return d2.real, -d2.imag

    def jet(self, P):
        """u, ∂x u, ∂y u, Δu, ∂xΔu, ∂yΔu at once (all the Green integrands need)."""
        z = np.asarray(P, dtype=complex)
        self._check_domain(z)
        w = np.conj(z)
        phi0, phi1, phi2 = (self._analytic(self.phi, z, p) for p in range(3))
        psi0, psi1 = (self._analytic(self.psi, z, p) for p in range(2))
        u = (w * phi0 + psi0).real
        uz = w * phi1 + psi1  # ∂z F;  ∂w F = φ
        ux = (uz + phi0).real
        uy = (1j * (uz - phi0)).real
        lap = (4 * phi1).real
        lx, ly = (4 * phi2).real, -(4 * phi2).imag
        return u, ux, uy, lap, lx, ly


def eval(u: BiharmonicField, P, dx: int = 0, dy: int = 0):
    return u.eval(P, dx, dy)


def laplacian(u: BiharmonicField, P):
    return u.laplacian(P)


def normal_derivative(u: BiharmonicField, curve: Curve, P_on_curve, of_laplacian: bool = False) -> float:
    """Derivative along the unit normal pointing from U₁ into U₂."""
    p = curve.check_on_curve(P_on_curve)
    n = curve.normal(p)
    if of_laplacian:
        gx, gy = u.gradient_laplacian(p)
    else:
        gx, gy = u.eval(p, 1, 0), u.eval(p, 0, 1)
    return float(n.real * gx + n.imag * gy)


# handy constructors ------------------------------------------------------
def power(coeff, n):
    return AnalyticTerm("power", coeff, n)


def log_term(coeff):
    return AnalyticTerm("log", coeff)


def zlog_term(coeff):
    return AnalyticTerm("z_log", coeff)
