"""Small scalar routines shared by the solvers."""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketFailure

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = 0.0, maxiter: int = 400) -> float:
    """Bisection down to ``xtol`` (or to adjacent floats when ``xtol == 0``)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketFailure(f"no sign change on [{lo!r}, {hi!r}]: f = {flo!r}, {fhi!r}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= xtol:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo if abs(flo) <= abs(fhi) else hi


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12, maxiter: int = 500) -> float:
    """Minimiser of a unimodal ``f`` on ``[a, b]``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * (1.0 + abs(c)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return c if fc < fd else d
