"""Independent partial quotients of cbrt(m^e) from rational interval iteration.

Nothing here touches the cubic-field algebra: the root is enclosed by integer
bisection and the Gauss map x -> 1/(x - floor x) is applied to the enclosure
with exact rational endpoints.  A quotient is emitted only when both endpoints
share the same floor; otherwise the whole run restarts at twice the precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cubic_field import RationalInterval, check_modulus
from .errors import DivisionByZero


@dataclass
class IntervalState:
    enclosure: RationalInterval
    bits: int
    steps_certified: int = 0


def _bisect_cbrt_scaled(M: int, bits: int) -> int:
    """Largest T with T^3 <= M * 2^(3*bits), found one bit at a time."""
    target = M << (3 * bits)
    T = 0
    for i in range((target.bit_length() + 2) // 3, -1, -1):
        cand = T | (1 << i)
        if cand * cand * cand <= target:
            T = cand
    return T


def root_enclosure(m: int, power: int, bits: int) -> RationalInterval:
    """lo < cbrt(m^power) < hi with hi - lo = 2^-bits."""
    M = m ** power
    T = _bisect_cbrt_scaled(M, bits)
    lo, hi = Fraction(T, 1 << bits), Fraction(T + 1, 1 << bits)
    assert lo ** 3 < M < hi ** 3
    return RationalInterval(lo, hi)


def _attempt(m: int, power: int, N: int, bits: int) -> tuple[list[int], IntervalState]:
    state = IntervalState(root_enclosure(m, power, bits), bits)
    quotients = []
    while True:
        b = state.enclosure.floor()
        if b is None:
            break
        assert state.enclosure.lo.numerator // state.enclosure.lo.denominator == b
        assert state.enclosure.hi.numerator // state.enclosure.hi.denominator == b
        quotients.append(b)
        state.steps_certified += 1
        if len(quotients) == N + 1:
            break
        try:
            state.enclosure = (state.enclosure - b).reciprocal()
        except DivisionByZero:
            # lo == b exactly: the enclosure touches the pole
            break
    return quotients, state


def oracle_expand(m: int, power: int, N: int, start_bits: int | None = None) -> list[int]:
    """Certified partial quotients b_0..b_N of cbrt(m^power)."""
    m = check_modulus(m)
    if power not in (1, 2):
        raise ValueError(f"power must be 1 or 2, got {power}")
    if N < 0:
        raise ValueError("N must be >= 0")
    bits = start_bits or 64
    while True:
        quotients, _ = _attempt(m, power, N, bits)
        if len(quotients) == N + 1:
            return quotients
        bits *= 2
