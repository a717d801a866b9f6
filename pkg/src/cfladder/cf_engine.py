"""Continued-fraction expansions of cbrt(m) and cbrt(m^2) in exact arithmetic.

Index convention: triplet ``n`` bundles the convergent p_{n-1}/q_{n-1}, the
complete quotient xi_n and the partial quotient b_n = floor(xi_n).  Triplet 0
therefore carries the formal convergent 1/0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .cubic_field import CubicNumber, check_modulus
from .errors import IndexOutOfRange


@dataclass(frozen=True)
class Surd:
    """cbrt(m) for power == 1, cbrt(m^2) for power == 2."""

    m: int
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "m", check_modulus(self.m))
        if self.power not in (1, 2):
            raise ValueError(f"power must be 1 or 2, got {self.power}")

    def value(self) -> CubicNumber:
        if self.power == 1:
            return CubicNumber(self.m, 0, 1, 0, 1)
        return CubicNumber(self.m, 0, 0, 1, 1)


@dataclass(frozen=True)
class Triplet:
    n: int
    p_prev: int
    q_prev: int
    xi: CubicNumber
    b: int


class Expansion:
    """Triplets 0..N of a surd, with random access to every convergent.

    ``p(i)``/``q(i)`` are defined for -1 <= i <= N.
    """

    def __init__(self, surd: Surd, triplets: list[Triplet], p: list[int], q: list[int]):
        self.surd = surd
        self.triplets = tuple(triplets)
        # _p[i + 1] == p_i, i = -1 .. N
        self._p = tuple(p)
        self._q = tuple(q)

    @property
    def N(self) -> int:
        return len(self.triplets) - 1

    @property
    def m(self) -> int:
        return self.surd.m

    @property
    def xi(self) -> CubicNumber:
        return self.triplets[0].xi

    @property
    def partial_quotients(self) -> list[int]:
        return [tr.b for tr in self.triplets]

    def __len__(self):
        return len(self.triplets)

    def __getitem__(self, n: int) -> Triplet:
        return self.triplets[n]

    def p(self, i: int) -> int:
        if not -1 <= i <= self.N:
            raise IndexOutOfRange(f"convergent index {i} outside [-1, {self.N}]")
        return self._p[i + 1]

    def q(self, i: int) -> int:
        if not -1 <= i <= self.N:
            raise IndexOutOfRange(f"convergent index {i} outside [-1, {self.N}]")
        return self._q[i + 1]

    def convergent(self, i: int) -> Fraction:
        if i < 0:
            raise IndexOutOfRange("p_{-1}/q_{-1} = 1/0 is not a real fraction")
        return Fraction(self.p(i), self.q(i))

    def __repr__(self):
        return f"Expansion(m={self.m}, power={self.surd.power}, N={self.N})"


def _complete_quotients(surd: Surd) -> Iterator[tuple[CubicNumber, int]]:
    xi = surd.value()
    while True:
        b = xi.floor()
        yield xi, b
        frac = xi - b
        # the surd is irrational, so the process can never terminate
        assert not frac.is_zero(), "continued fraction of a cubic irrational terminated"
        xi = frac.inverse()


def expand(surd: Surd, N: int) -> Expansion:
    """Triplets 0..N of ``surd`` via xi_n = 1/(xi_{n-1} - b_{n-1}), b_n = floor(xi_n)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    # p_{-2}, p_{-1} = 0, 1 and q_{-2}, q_{-1} = 1, 0
    p = [1]
    q = [0]
    pm2, qm2 = 0, 1
    triplets = []
    for n, (xi, b) in enumerate(_complete_quotients(surd)):
        triplets.append(Triplet(n, p[-1], q[-1], xi, b))
        pn = b * p[-1] + pm2
        qn = b * q[-1] + qm2
        pm2, qm2 = p[-1], q[-1]
        p.append(pn)
        q.append(qn)
        if n == N:
            break
    return Expansion(surd, triplets, p, q)


def iter_partial_quotients(surd: Surd) -> Iterator[int]:
    """Stream b_0, b_1, ... without retaining the triplets."""
    for _, b in _complete_quotients(surd):
        yield b


# ---------------------------------------------------------------------------
# Classical identities, checked exactly on generated data
# ---------------------------------------------------------------------------

def complete_quotient_identity(exp: Expansion, n: int, *, allow_formal: bool = False) -> bool:
    """xi_n == -(p_{n-2} - q_{n-2} xi) / (p_{n-1} - q_{n-1} xi).

    Stated for n >= 2.  With ``allow_formal`` the case n = 1 is also accepted,
    using the formal convergent p_{-1}/q_{-1} = 1/0.
    """
    lowest = 1 if allow_formal else 2
    if not lowest <= n <= exp.N:
        raise IndexOutOfRange(f"n={n} outside [{lowest}, {exp.N}]")
    xi = exp.xi
    rhs = -(exp.p(n - 2) - exp.q(n - 2) * xi) / (exp.p(n - 1) - exp.q(n - 1) * xi)
    return exp[n].xi == rhs


def determinant_identity(exp: Expansion, n: int) -> bool:
    """p_n q_{n-1} - p_{n-1} q_n == (-1)^(n-1)."""
    if not 0 <= n <= exp.N:
        raise IndexOutOfRange(f"n={n} outside [0, {exp.N}]")
    expected = 1 if n % 2 else -1
    return exp.p(n) * exp.q(n - 1) - exp.p(n - 1) * exp.q(n) == expected


def _surd_of(surd) -> Surd:
    return surd if isinstance(surd, Surd) else Surd(*surd)


def delta(p: int, q: int, surd) -> CubicNumber:
    """(p/q - xi) * q^2 as an exact field element."""
    if q < 1:
        raise ValueError("q must be >= 1")
    xi = _surd_of(surd).value()
    return p * q - (q * q) * xi


def is_convergent_sufficient(p: int, q: int, surd) -> bool:
    """|delta| < 1/2, which guarantees p/q is a convergent."""
    return (1 - 2 * abs(delta(p, q, surd))).sign() > 0


def delta_bounds_check(p: int, q: int, surd, b: int) -> bool:
    """1/(b+2) < |delta| < 1/b, for a convergent whose next partial quotient is b."""
    d = abs(delta(p, q, surd))
    return (1 - b * d).sign() > 0 and ((b + 2) * d - 1).sign() > 0


def _signed_error(exp: Expansion, n: int) -> CubicNumber:
    return exp.p(n) - exp.q(n) * exp.xi


def sandwich_check(exp: Expansion) -> bool:
    """Even convergents lie below xi, odd ones above, for every stored index."""
    for j in range(exp.N + 1):
        s = _signed_error(exp, j).sign()
        if s != (-1 if j % 2 == 0 else 1):
            return False
    return True


def sandwich_violations(exp: Expansion) -> list[int]:
    return [j for j in range(exp.N + 1)
            if _signed_error(exp, j).sign() != (-1 if j % 2 == 0 else 1)]


def _abs_errors(exp: Expansion) -> list[CubicNumber]:
    # |p_n - q_n xi|; the sign alternates starting negative at n = 0
    return [_signed_error(exp, n) * (-1 if n % 2 == 0 else 1) for n in range(exp.N + 1)]


def relative_error_violations(exp: Expansion) -> list[int]:
    """Indices n where |1 - xi/(p_n/q_n)| fails to exceed its successor."""
    errs = _abs_errors(exp)
    bad = []
    for n in range(exp.N):
        # |p_n - q_n xi| / p_n > |p_{n+1} - q_{n+1} xi| / p_{n+1}
        if (errs[n] * exp.p(n + 1) - errs[n + 1] * exp.p(n)).sign() <= 0:
            bad.append(n)
    return bad


def relative_error_decreasing(exp: Expansion) -> bool:
    return not relative_error_violations(exp)


def monotonicity_violations(exp: Expansion) -> list[str]:
    """Check that p_n, q_n grow and |p_n/q_n - xi| shrinks with n."""
    bad = []
    for n in range(exp.N):
        if not exp.p(n) < exp.p(n + 1):
            bad.append(f"p not increasing at n={n}")
        if n >= 1 and not exp.q(n) < exp.q(n + 1):
            bad.append(f"q not increasing at n={n}")
    errs = _abs_errors(exp)
    for n in range(exp.N):
        # |p_n/q_n - xi| > |p_{n+1}/q_{n+1} - xi|
        if (errs[n] * exp.q(n + 1) - errs[n + 1] * exp.q(n)).sign() <= 0:
            bad.append(f"approximation error not decreasing at n={n}")
    return bad
