"""Limiting merit factor phi_nu(R, T) and its global maximum."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import BadT, OutOfRange

SCAN_LO, SCAN_HI, SCAN_STEP = -10.0, 10.0, 1e-3
ROOT_TOL = 1e-13
CONSISTENCY_TOL = 1e-9


class NonPositiveReciprocal(RuntimeWarning):
    """1/phi came out <= 0; phi was replaced by +inf."""


@dataclass(frozen=True)
class MaxResult:
    nu: float
    phi_max: float
    T_opt: float
    R_opt: float


def phi_reciprocal(nu: float, R: float, T: float) -> float:
    """1/phi_nu(R, T); both series are finite because their terms vanish for
    m >= T (first) and outside 2R < m < 2R + 2T (second)."""
    if not T > 0:
        raise BadT(f"T must be positive, got {T}")
    val = 1.0 - 2.0 * (1.0 + nu) * T / 3.0
    for m in range(1, math.ceil(T)):
        val += 4.0 * (1.0 - m / T) ** 2
    if nu:
        for m in range(math.floor(2 * R), math.ceil(2 * R + 2 * T) + 1):
            w = 1.0 - abs(1.0 + (2 * R - m) / T)
            if w > 0:
                val += nu * w * w
    return val


def phi(nu: float, R: float, T: float) -> float:
    recip = phi_reciprocal(nu, R, T)
    if recip <= 0:
        warnings.warn(f"1/phi = {recip} <= 0 at nu={nu}, R={R}, T={T}", NonPositiveReciprocal, stacklevel=2)
        return math.inf
    return 1.0 / recip


def phi_T1(nu: float, R: float) -> float:
    """Closed form at T = 1: 1/phi = (2 - nu)/6 + 8 nu (R - 1/4)^2, R taken mod 1/2."""
    R = R % 0.5
    return 1.0 / ((2.0 - nu) / 6.0 + 8.0 * nu * (R - 0.25) ** 2)


def max_cubic(nu: float) -> tuple[float, float, float, float]:
    """Coefficients (X^3, X^2, X, 1) of the cubic whose largest root is max phi_nu."""
    return (
        nu**4 - 2 * nu**3 - 3 * nu**2 - 50 * nu + 112,
        12 * nu**3 + 36 * nu**2 - 18 * nu - 528,
        24 * nu**2 + 282 * nu + 528,
        -6 * nu - 48,
    )


def argmax_cubic(nu: float) -> tuple[float, float, float, float]:
    """Coefficients of (2nu+2)X^3 - (6nu+24)X + 3nu + 24, whose middle root is T_opt."""
    return (2 * nu + 2, 0.0, -(6 * nu + 24), 3 * nu + 24)


def _horner(c, x: float) -> float:
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3]


def _dhorner(c, x: float) -> float:
    return (3 * c[0] * x + 2 * c[1]) * x + c[2]


def _refine(c, lo: float, hi: float) -> float:
    """Bisection with Newton steps kept inside the bracket."""
    flo = _horner(c, lo)
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = _horner(c, x)
        if fx == 0 or hi - lo < ROOT_TOL:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = _dhorner(c, x)
        newton = x - fx / d if d else None
        x = newton if newton is not None and lo < newton < hi else 0.5 * (lo + hi)
    return x


def real_roots(c, lo: float = SCAN_LO, hi: float = SCAN_HI, step: float = SCAN_STEP) -> list[float]:
    """Real roots of a cubic in [lo, hi] by sign scan then refinement, ascending."""
    roots = []
    n = int(round((hi - lo) / step))
    x0 = lo
    f0 = _horner(c, x0)
    for i in range(1, n + 1):
        x1 = lo + i * step
        f1 = _horner(c, x1)
        if f0 == 0:
            roots.append(x0)
        elif (f0 < 0) != (f1 < 0) and f1 != 0:
            roots.append(_refine(c, x0, x1))
        x0, f0 = x1, f1
    if f0 == 0:
        roots.append(x0)
    return roots


def phi_max(nu: float) -> MaxResult:
    if not 0.0 <= nu <= 1.0:
        raise OutOfRange(f"nu must lie in [0, 1], got {nu}")
    top = real_roots(max_cubic(nu))
    t_roots = real_roots(argmax_cubic(nu))
    if not top or len(t_roots) != 3:
        raise RuntimeError(f"root isolation failed for nu={nu}: {top}, {t_roots}")
    value = top[-1]
    T_opt = t_roots[1]
    R_opt = (0.75 - T_opt / 2) % 0.5
    check = phi(nu, R_opt, T_opt)
    if abs(check - value) > CONSISTENCY_TOL * max(1.0, value):
        raise RuntimeError(f"phi at the maximizer ({check}) disagrees with the cubic root ({value})")
    return MaxResult(nu, value, T_opt, R_opt)
