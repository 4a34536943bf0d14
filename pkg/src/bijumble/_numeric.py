"""Float comparison discipline for bound checks.

Audits compare exact integer counts against bounds with irrational factors,
so every such comparison goes through these helpers: relative tolerance
1e-9 with an absolute floor of 1e-12, recorded in every report.
"""

from __future__ import annotations

REL_TOL = 1e-9
ABS_TOL = 1e-12


def slack(a: float, b: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> float:
    return max(abs_, rel * max(abs(a), abs(b)))


def geq(a: float, b: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """a >= b up to tolerance."""
    return a >= b - slack(a, b, rel, abs_)


def leq(a: float, b: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """a <= b up to tolerance."""
    return a <= b + slack(a, b, rel, abs_)


def within(x: float, lo: float, hi: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    return geq(x, lo, rel, abs_) and leq(x, hi, rel, abs_)
