"""Adaptive panel Gauss–Legendre quadrature along polylines in the plane."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BranchCutCrossing, QuadratureFailure


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "gauss-legendre"
    nodes: int = 16
    panel_count: int = 1
    max_refinement: int = 12
    tol: float = 1e-10

    def __post_init__(self):
        if self.rule != "gauss-legendre":
            raise ValueError("only Gauss-Legendre panels are supported")
        if self.tol <= 0 or self.nodes < 2 or self.panel_count < 1:
            raise ValueError("invalid quadrature spec")


@lru_cache(maxsize=None)
def _rule(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel(f, a, b, n):
    x, wts = _rule(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * np.sum(wts * f(mid + half * x))


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()):
    """∫_a^b f(s) ds for a vectorised (possibly complex) f.

    Each panel is bisected until the one-panel and two-half-panel estimates
    agree to ``tol`` (scaled by the panel's share of [a, b] or by the size
    of the estimate).  Returns ``(value, error_estimate)``.
    """
    total = abs(b - a)
    if total == 0:
        return 0.0, 0.0
    edges = np.linspace(a, b, spec.panel_count + 1)
    value, err = 0.0, 0.0
    stack = [(edges[i], edges[i + 1], _panel(f, edges[i], edges[i + 1], spec.nodes), 0)
             for i in range(spec.panel_count)]
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = _panel(f, lo, mid, spec.nodes), _panel(f, mid, hi, spec.nodes)
        fine = left + right
        diff = abs(fine - coarse)
        share = abs(hi - lo) / total
        if diff <= spec.tol * max(share, abs(fine)) or diff == 0:
            value += fine
            err += diff
        elif depth + 1 >= spec.max_refinement:
            raise QuadratureFailure(
                f"panel [{lo:.6g}, {hi:.6g}] unresolved at depth {depth + 1} (diff {diff:.3g})")
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return value, err


def crosses_negative_axis(path) -> bool:
    """Does the polyline touch the ray (-inf, 0] of the real axis?"""
    pts = np.asarray(path, dtype=complex)
    for a, b in zip(pts[:-1], pts[1:]):
        if a.imag == b.imag == 0:
            if min(a.real, b.real) <= 0:
                return True
            continue
        if (a.imag <= 0 <= b.imag) or (b.imag <= 0 <= a.imag):
            t = a.imag / (a.imag - b.imag)
            if (a + t * (b - a)).real <= 0:
                return True
    return False


def path_integral(form, path, spec: QuadratureSpec = QuadratureSpec(), field=None):
    """∫ (A dx + B dy) along a polyline, where ``form(z) -> (A, B)``.

    ``field`` (optional) is checked for branch-cut crossings first.
    """
    pts = [complex(p) for p in path]
    if field is not None and field.has_logs and not field.single_valued and crosses_negative_axis(pts):
        raise BranchCutCrossing("integration path crosses the field's branch cut")
    value, err = 0.0, 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        d = b - a
        if d == 0:
            continue

        def g(s, a=a, d=d):
            A, B = form(a + s * d)
            return A * d.real + B * d.imag

        v, e = integrate(g, 0.0, 1.0, spec)
        value += v
        err += e
    return value, err
