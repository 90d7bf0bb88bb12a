"""Hoelder exponent arithmetic for the comparable-frequency estimates.

Two exponent menus are in play for 2 < p < 3: a low-frequency-output case
using (r0, r1) and a high-frequency-output case using (r0..r4).  Every
exponent must exceed 10/3 (the Strichartz admissibility floor), which
bounds how large epsilon may be; epsilon_max is located by bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EpsilonTooLarge

STRICHARTZ_FLOOR = 10.0 / 3.0


@dataclass(frozen=True)
class HoelderExponentSet:
    p: float
    eps: float
    case: str  # "low" or "high"
    r0: float
    r1: float
    r2: float | None = None
    r3: float | None = None
    r4: float | None = None

    @property
    def exponents(self) -> dict:
        out = {"r0": self.r0, "r1": self.r1}
        if self.case == "high":
            out.update({"r2": self.r2, "r3": self.r3, "r4": self.r4})
        return out

    def sum_identity(self) -> float:
        """The Hoelder budget that the estimate spends.

        Low case: 3/r0 + 1/r1.  High case: 1/r0 + 1/r1 + 1/r2 + 1/r3
        + (p-2)/r4.  A valid Hoelder application needs the value 1.
        """
        if self.case == "low":
            return 3.0 / self.r0 + 1.0 / self.r1
        return (
            1.0 / self.r0 + 1.0 / self.r1 + 1.0 / self.r2 + 1.0 / self.r3
            + (self.p - 2.0) / self.r4
        )


def _validate(name: str, value: float) -> float:
    if not value > STRICHARTZ_FLOOR:
        raise EpsilonTooLarge(name, value)
    return value


def hoelder_exponents(p: float, eps: float, case: str = "low") -> HoelderExponentSet:
    """Exponent menus r0..r4 for 2 < p < 3 and small eps > 0."""
    if not 2.0 < p < 3.0:
        raise ValueError(f"exponent menus are defined for 2 < p < 3, got p = {p}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if case == "low":
        r0 = _validate("r0", 15.0 * p / (5.0 * p - 2.0 * (1.0 - eps)))
        r1 = _validate("r1", 5.0 * p / (2.0 * (1.0 - eps)))
        return HoelderExponentSet(p, eps, "low", r0, r1)
    if case == "high":
        r01 = _validate(
            "r0", 20.0 * p / ((1.0 - eps) * p**2 + (1.0 + 5.0 * eps) * p + 4.0 * eps)
        )
        r2 = _validate(
            "r2", 10.0 * p / (2.0 * p**2 - 4.0 - 3.0 * (1.0 - eps / 3.0) * p * (p - 2.0))
        )
        r3 = _validate("r3", 5.0 * p / (2.0 * (1.0 - eps)))
        r4 = _validate("r4", 10.0 / (3.0 * (1.0 - eps)))
        return HoelderExponentSet(p, eps, "high", r01, r01, r2, r3, r4)
    raise ValueError(f"case must be 'low' or 'high', got {case!r}")


def epsilon_max(p: float, case: str = "low", tol: float = 1e-12) -> float:
    """Largest eps keeping every r_i > 10/3, located by bisection."""
    lo, hi = 0.0, 1.0
    # expand hi only if even eps -> 1 is admissible (it never is for r4; low
    # case can fail at smaller eps through r0)
    def ok(e: float) -> bool:
        if e <= 0:
            return True
        try:
            hoelder_exponents(p, e, case)
            return True
        except EpsilonTooLarge:
            return False

    if ok(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
