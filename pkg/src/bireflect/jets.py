"""Truncated Taylor series ("jets") in one complex variable.

A jet of length L is an array ``a`` of shape ``(L, *batch)`` holding the
Taylor coefficients ``a[n] = f^(n)(t0) / n!``.  All operations broadcast over
the trailing batch axes, so a whole panel of quadrature nodes is processed
at once.
"""

from __future__ import annotations

import numpy as np


def const(c, length: int) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    out = np.zeros((length,) + c.shape, dtype=complex)
    out[0] = c
    return out


def variable(t0, length: int) -> np.ndarray:
    """Jet of the identity map about ``t0``."""
    out = const(t0, length)
    if length > 1:
        out[1] = 1.0
    return out


def monomial(t0, power: int, length: int) -> np.ndarray:
    """Jet of ``t**power`` about ``t0`` (negative powers allowed)."""
    t0 = np.asarray(t0, dtype=complex)
    out = np.zeros((length,) + t0.shape, dtype=complex)
    coef = 1.0
    for n in range(length):
        out[n] = coef * t0 ** (power - n)
        coef *= (power - n) / (n + 1)
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    length = min(len(a), len(b))
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((length,) + shape, dtype=complex)
    for j in range(length):
        out[j:] += a[j] * b[: length - j]
    return out


def recip(a: np.ndarray) -> np.ndarray:
    length = len(a)
    out = np.zeros_like(a, dtype=complex)
    inv0 = 1.0 / a[0]
    out[0] = inv0
    for n in range(1, length):
        acc = np.zeros_like(a[0], dtype=complex)
        for j in range(1, n + 1):
            acc = acc + a[j] * out[n - j]
        out[n] = -acc * inv0
    return out


def deriv(a: np.ndarray) -> np.ndarray:
    """Jet of the derivative; one order shorter."""
    length = len(a)
    scale = np.arange(1, length, dtype=float).reshape((length - 1,) + (1,) * (a.ndim - 1))
    return a[1:] * scale


def truncate(a: np.ndarray, length: int) -> np.ndarray:
    return a[:length]


def derivatives(a: np.ndarray) -> np.ndarray:
    """Convert Taylor coefficients to plain derivatives f^(n)(t0)."""
    length = len(a)
    fact = np.cumprod(np.r_[1.0, np.arange(1, length, dtype=float)])
    return a * fact.reshape((length,) + (1,) * (a.ndim - 1))


def compose_ladder(values: list[np.ndarray], inner: np.ndarray) -> np.ndarray:
    """Jet of ``f(inner(t))`` given ``values[j] = f^(j)(inner[0])``.

    ``inner`` is a jet; only its non-constant part enters the expansion.
    """
    length = len(inner)
    delta = inner.copy()
    delta[0] = 0.0
    out = const(values[0], length)
    power = const(1.0, length)
    fact = 1.0
    for j in range(1, length):
        power = mul(power, delta)
        fact *= j
        out = out + values[j] * power / fact
    return out
