"""Run every identity and ladder property for one m and collect a report."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from . import cf_engine as cf
from . import ladder as ld
from .cubic_field import lemma_zveza_check
from .oracle import oracle_expand

ORACLE_CAP = 500


@dataclass
class CheckResult:
    name: str
    scope: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerificationReport:
    m: int
    N: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def _run(report: VerificationReport, name: str, scope: str, body: Callable[[CheckResult], None]):
    res = CheckResult(name, scope)
    try:
        body(res)
    except Exception as exc:  # a crash inside a check is a failed check, not an abort
        res.failures.append(f"exception: {type(exc).__name__}: {exc}")
    report.results.append(res)


def _expansion_checks(report: VerificationReport, exp: cf.Expansion):
    scope = f"power={exp.surd.power}"
    N = exp.N

    def triplets(res):
        for tr in exp.triplets:
            res.checked += 1
            if gcd(tr.p_prev, tr.q_prev) != 1:
                res.failures.append(f"n={tr.n}: convergent not in lowest terms")
            if tr.b != tr.xi.floor():
                res.failures.append(f"n={tr.n}: b != floor(xi)")
            if tr.n >= 1 and not (tr.xi > 1 and tr.b >= 1):
                res.failures.append(f"n={tr.n}: complete quotient not > 1")
        for n in range(N + 1):
            b = exp[n].b
            if exp.p(n) != b * exp.p(n - 1) + (exp.p(n - 2) if n >= 1 else 0):
                res.failures.append(f"n={n}: p recurrence")
            if exp.q(n) != b * exp.q(n - 1) + (exp.q(n - 2) if n >= 1 else 1):
                res.failures.append(f"n={n}: q recurrence")

    def complete_quotients(res):
        for n in range(1, N + 1):
            res.checked += 1
            if not cf.complete_quotient_identity(exp, n, allow_formal=True):
                res.failures.append(f"n={n}")

    def determinant(res):
        for n in range(N + 1):
            res.checked += 1
            if not cf.determinant_identity(exp, n):
                res.failures.append(f"n={n}")

    def sandwich(res):
        res.checked = N + 1
        res.failures.extend(f"j={j}" for j in cf.sandwich_violations(exp))

    def delta_bounds(res):
        for n in range(N):
            res.checked += 1
            if not cf.delta_bounds_check(exp.p(n), exp.q(n), exp.surd, exp[n + 1].b):
                res.failures.append(f"n={n}")

    def relative_errors(res):
        res.checked = N
        res.failures.extend(f"n={n}" for n in cf.relative_error_violations(exp))

    def monotonicity(res):
        res.checked = N
        res.failures.extend(cf.monotonicity_violations(exp))

    _run(report, "triplet_invariants", scope, triplets)
    _run(report, "complete_quotient_identity", scope, complete_quotients)
    _run(report, "sandwich", scope, sandwich)
    _run(report, "determinant_identity", scope, determinant)
    _run(report, "delta_bounds", scope, delta_bounds)
    _run(report, "relative_error_decreasing", scope, relative_errors)
    _run(report, "convergent_monotonicity", scope, monotonicity)


def _ladder_checks(report: VerificationReport, ladder: ld.Ladder):
    xi_exp, eta_exp, m = ladder.xi_exp, ladder.eta_exp, ladder.m
    scope = "ladder"

    def zveza(res):
        for exp in (xi_exp, eta_exp):
            for i in range(exp.N + 1):
                res.checked += 1
                if not lemma_zveza_check(exp.p(i), exp.q(i), m):
                    res.failures.append(f"power={exp.surd.power} i={i}")

    def per_connection(check, label):
        def body(res):
            for c in ladder.connections:
                res.checked += 1
                if not check(c):
                    res.failures.append(f"{label} at (n={c.n}, k={c.k})")
        return body

    def certificates(res):
        for c in ladder.connections:
            res.checked += 1
            cert = ld.certify(c, xi_exp, eta_exp)
            if (cert.r, cert.s, cert.t) != (c.r, c.s, c.t):
                res.failures.append(f"(n={c.n}, k={c.k}) certificate mismatch")
            elif not ld.t_range_check(c):
                res.failures.append(f"(n={c.n}, k={c.k}) t={c.t} outside [{1 - c.r}, {c.s - 1}]")

    def noncrossing(res):
        res.checked = len(ladder)
        if not ld.noncrossing_check(ladder):
            res.failures.append("connections cross")

    def exchange(res):
        for c1, c2 in ld.consecutive_pairs(ladder):
            res.checked += 1
            if not ld.exchange_check(c1, c2):
                res.failures.append(f"(n={c2.n}, k={c2.k})")

    def middle_zero(res):
        for c1, c2, c3 in ld.consecutive_triples(ladder):
            res.checked += 1
            if not ld.middle_zero_check(c1, c2, c3):
                res.failures.append(f"(n={c2.n}, k={c2.k})")

    def coverage(res):
        cov = ld.big_quotient_coverage(ladder)
        res.checked = cov.checked
        res.failures.extend(f"{side} index {i} (quotient {b}) unconnected"
                            for side, i, b in cov.violations)

    _run(report, "lemma_zveza", scope, zveza)
    _run(report, "rs_equals_m", scope, per_connection(lambda c: c.r * c.s == m, "r*s != m"))
    _run(report, "parity", scope, per_connection(ld.parity_check, "same parity"))
    _run(report, "t_certificate", scope, certificates)
    _run(report, "theorem_bound", scope,
         per_connection(lambda c: ld.theorem_bound_check(c, xi_exp, eta_exp), "bound violated"))
    _run(report, "noncrossing", scope, noncrossing)
    _run(report, "exchange", scope, exchange)
    _run(report, "middle_zero", scope, middle_zero)
    _run(report, "big_quotient_coverage", scope, coverage)


def _oracle_checks(report: VerificationReport, exps, cap: int):
    for exp in exps:
        n = min(exp.N, cap)

        def agree(res, exp=exp, n=n):
            res.checked = n + 1
            ref = oracle_expand(exp.m, exp.surd.power, n)
            for i, (b, o) in enumerate(zip(exp.partial_quotients[: n + 1], ref)):
                if b != o:
                    res.failures.append(f"n={i}: {b} != oracle {o}")

        _run(report, "oracle_agreement", f"power={exp.surd.power}", agree)


def run_verification(m: int, N: int, oracle_cap: int = ORACLE_CAP) -> VerificationReport:
    """Build both expansions to length N and run every check on them.

    The oracle comparison is capped at ``min(N, oracle_cap)`` quotients.
    """
    xi_exp = cf.expand(cf.Surd(m, 1), N)
    eta_exp = cf.expand(cf.Surd(m, 2), N)
    report = VerificationReport(xi_exp.m, N)
    for exp in (xi_exp, eta_exp):
        _expansion_checks(report, exp)
    ladder = None

    def build(res):
        nonlocal ladder
        ladder = ld.find_connections(xi_exp, eta_exp)
        res.checked = len(ladder)

    _run(report, "find_connections", "ladder", build)
    if ladder is not None:
        _ladder_checks(report, ladder)
    _oracle_checks(report, (xi_exp, eta_exp), oracle_cap)
    return report
