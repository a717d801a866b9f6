"""Connections between the expansions of cbrt(m) and cbrt(m^2).

Triplet n of the cbrt(m) expansion and triplet k of the cbrt(m^2) expansion
are connected when p_{n-1}/q_{n-1} * P_{k-1}/Q_{k-1} = m.  Every connection
carries integer certificates r = p_{n-1}/Q_{k-1}, s = P_{k-1}/q_{n-1} and
t = r*xi_n - s*eta_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cf_engine import Expansion, Surd, expand
from .errors import CertificateFailure, MixedField, NotConsecutive


@dataclass(frozen=True)
class Certificate:
    r: int
    s: int
    t: int


@dataclass(frozen=True)
class Connection:
    n: int
    k: int
    r: int
    s: int
    t: int
    b_n: int
    B_k: int

    @property
    def bound_value(self) -> int:
        """r*b_n - s*B_k, the quantity bracketed by the main bound."""
        return self.r * self.b_n - self.s * self.B_k

    @property
    def quotient_ratio(self) -> Fraction:
        """b_n / B_k, recorded for inspection only (nothing is asserted about it)."""
        return Fraction(self.b_n, self.B_k)


@dataclass
class Ladder:
    xi_exp: Expansion
    eta_exp: Expansion
    connections: list[Connection] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.xi_exp.m

    @property
    def N(self) -> int:
        return min(self.xi_exp.N, self.eta_exp.N)

    def __len__(self):
        return len(self.connections)

    def __iter__(self):
        return iter(self.connections)


def _check_pair(xi_exp: Expansion, eta_exp: Expansion):
    if xi_exp.m != eta_exp.m:
        raise MixedField(f"expansions of different fields: m={xi_exp.m} vs m={eta_exp.m}")
    if xi_exp.surd.power != 1 or eta_exp.surd.power != 2:
        raise ValueError("expected the expansions of cbrt(m) and cbrt(m^2), in that order")


def _exact_div(num: int, den: int, what: str) -> int:
    qt, rem = divmod(num, den)
    if rem:
        raise CertificateFailure(f"{what}: {num}/{den} is not an integer")
    return qt


def certify(conn, xi_exp: Expansion, eta_exp: Expansion) -> Certificate:
    """Recompute r, s, t for the pair ``(conn.n, conn.k)`` from raw convergents.

    t is computed in both of its integer forms, which must agree, and the
    identity r*xi_n - s*eta_k == t is then checked in the cubic field.
    """
    n, k = (conn.n, conn.k) if hasattr(conn, "n") else conn
    m = xi_exp.m
    p1, q1, p2, q2 = xi_exp.p(n - 1), xi_exp.q(n - 1), xi_exp.p(n - 2), xi_exp.q(n - 2)
    P1, Q1, P2, Q2 = eta_exp.p(k - 1), eta_exp.q(k - 1), eta_exp.p(k - 2), eta_exp.q(k - 2)
    if p1 * P1 != m * q1 * Q1:
        raise CertificateFailure(f"({n}, {k}) is not a connection")
    r = _exact_div(p1, Q1, "r")
    s = _exact_div(P1, q1, "s")
    if r * s != m:
        raise CertificateFailure(f"r*s = {r * s} != m = {m} at ({n}, {k})")
    t_first = _exact_div(P2 - r * q2, q1, "t (first form)")
    t_second = _exact_div(m * Q2 - r * p2, p1, "t (second form)")
    if t_first != t_second:
        raise CertificateFailure(f"t forms disagree at ({n}, {k}): {t_first} != {t_second}")
    if r * xi_exp[n].xi - s * eta_exp[k].xi != t_first:
        raise CertificateFailure(f"r*xi_n - s*eta_k != t at ({n}, {k})")
    return Certificate(r, s, t_first)


def find_connections(xi_exp: Expansion, eta_exp: Expansion) -> Ladder:
    """All certified connections with 1 <= n, k <= N, sorted by n."""
    _check_pair(xi_exp, eta_exp)
    m = xi_exp.m
    table = {(eta_exp.p(k - 1), eta_exp.q(k - 1)): k for k in range(1, eta_exp.N + 1)}
    connections = []
    for n in range(1, xi_exp.N + 1):
        num, den = m * xi_exp.q(n - 1), xi_exp.p(n - 1)
        g = gcd(num, den)
        k = table.get((num // g, den // g))
        if k is None:
            continue
        cert = certify((n, k), xi_exp, eta_exp)
        connections.append(Connection(n, k, cert.r, cert.s, cert.t,
                                      xi_exp[n].b, eta_exp[k].b))
    return Ladder(xi_exp, eta_exp, connections)


def build_ladder(m: int, N: int) -> Ladder:
    """Expand both cube roots of m to triplet index N and connect them."""
    return find_connections(expand(Surd(m, 1), N), expand(Surd(m, 2), N))


def brute_force_pairs(xi_exp: Expansion, eta_exp: Expansion) -> list[tuple[int, int]]:
    """Exhaustive O(N^2) scan for p_{n-1} P_{k-1} == m q_{n-1} Q_{k-1}."""
    m = xi_exp.m
    return [(n, k)
            for n in range(1, xi_exp.N + 1)
            for k in range(1, eta_exp.N + 1)
            if xi_exp.p(n - 1) * eta_exp.p(k - 1) == m * xi_exp.q(n - 1) * eta_exp.q(k - 1)]


# ---------------------------------------------------------------------------
# Per-connection checks
# ---------------------------------------------------------------------------

def theorem_bound_check(conn: Connection, xi_exp: Expansion = None, eta_exp: Expansion = None) -> bool:
    """-2r + 2 <= r*b_n - s*B_k <= 2s - 2."""
    b = xi_exp[conn.n].b if xi_exp is not None else conn.b_n
    B = eta_exp[conn.k].b if eta_exp is not None else conn.B_k
    v = conn.r * b - conn.s * B
    return -2 * conn.r + 2 <= v <= 2 * conn.s - 2


def parity_check(conn) -> bool:
    """n and k have different parity."""
    return (conn.n - conn.k) % 2 == 1


def t_range_check(conn: Connection) -> bool:
    return -conn.r + 1 <= conn.t <= conn.s - 1


def _consecutive(a, b) -> bool:
    return b.n == a.n + 1 and b.k == a.k + 1


def exchange_check(c1: Connection, c2: Connection) -> bool:
    """For consecutive connections (n-1, k-1), (n, k): r and s swap roles."""
    if not _consecutive(c1, c2):
        raise NotConsecutive(f"({c1.n}, {c1.k}) and ({c2.n}, {c2.k}) are not consecutive")
    return c1.r == c2.s and c1.s == c2.r


def middle_zero_check(c1: Connection, c2: Connection, c3: Connection) -> bool:
    """r*b_n - s*B_k == 0 for the middle of three consecutive connections."""
    if not (_consecutive(c1, c2) and _consecutive(c2, c3)):
        raise NotConsecutive("connections are not three consecutive rungs")
    return c2.bound_value == 0


def consecutive_pairs(ladder: Ladder) -> list[tuple[Connection, Connection]]:
    cs = ladder.connections
    return [(a, b) for a, b in zip(cs, cs[1:]) if _consecutive(a, b)]


def consecutive_triples(ladder: Ladder) -> list[tuple[Connection, Connection, Connection]]:
    cs = ladder.connections
    return [(a, b, c) for a, b, c in zip(cs, cs[1:], cs[2:])
            if _consecutive(a, b) and _consecutive(b, c)]


def noncrossing_check(ladder: Ladder) -> bool:
    ordered = sorted(ladder.connections, key=lambda c: c.n)
    return all(a.k < b.k for a, b in zip(ordered, ordered[1:]))


@dataclass
class CoverageReport:
    """Outcome of the big-quotient scan.

    ``violations`` and ``unresolved`` hold (side, index, quotient) tuples,
    side being "xi" or "eta".
    """

    violations: list[tuple[str, int, int]] = field(default_factory=list)
    unresolved: list[tuple[str, int, int]] = field(default_factory=list)
    checked: int = 0

    def __bool__(self):
        return not self.violations


def big_quotient_coverage(ladder: Ladder) -> CoverageReport:
    """Every triplet with partial quotient >= 2m+1 must be connected.

    A triplet whose partner m*q/p (in lowest terms) has a denominator beyond
    the last convergent of the other side is reported as unresolved at the
    horizon rather than as a violation.
    """
    m = ladder.m
    threshold = 2 * m + 1
    report = CoverageReport()
    connected = {"xi": {c.n for c in ladder.connections},
                 "eta": {c.k for c in ladder.connections}}
    sides = (("xi", ladder.xi_exp, ladder.eta_exp), ("eta", ladder.eta_exp, ladder.xi_exp))
    for side, exp, other in sides:
        horizon_q = other.q(other.N - 1)
        for i in range(1, exp.N + 1):
            b = exp[i].b
            if b < threshold:
                continue
            report.checked += 1
            if i in connected[side]:
                continue
            num, den = m * exp.q(i - 1), exp.p(i - 1)
            partner_q = den // gcd(num, den)
            if partner_q > horizon_q:
                report.unresolved.append((side, i, b))
            else:
                report.violations.append((side, i, b))
    return report
