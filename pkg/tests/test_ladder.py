from fractions import Fraction
from types import SimpleNamespace

import mpmath
import pytest
from sympy import isprime

from cfladder import ladder as ld
from cfladder.cf_engine import Surd, expand
from cfladder.errors import CertificateFailure, MixedField, NotConsecutive
from cfladder.oracle import oracle_expand


@pytest.fixture(scope="module")
def ladder2():
    return ld.build_ladder(2, 1000)


@pytest.fixture(scope="module")
def ladder6():
    return ld.build_ladder(6, 500)


def by_pair(ladder):
    return {(c.n, c.k): c for c in ladder.connections}


def mp_complete_quotient(m, power, index, dps=100):
    with mpmath.workdps(dps):
        x = mpmath.cbrt(mpmath.mpf(m) ** power)
        for _ in range(index):
            x = 1 / (x - mpmath.floor(x))
        return x


def oracle_pairs(m, N):
    """O(N^2) scan over convergents rebuilt from the independent oracle."""
    def convergents(power):
        p, q, pp, qq = 1, 0, 0, 1
        out = [(p, q)]
        for b in oracle_expand(m, power, N):
            p, pp = b * p + pp, p
            q, qq = b * q + qq, q
            out.append((p, q))
        return out  # out[i] = (p_{i-1}, q_{i-1})

    xs, ys = convergents(1), convergents(2)
    return [(n, k) for n in range(1, N + 1) for k in range(1, N + 1)
            if Fraction(*xs[n]) * Fraction(*ys[k]) == m]


# --- detection ----------------------------------------------------------------

def test_small_connections():
    pairs = by_pair(ld.build_ladder(2, 4))
    assert (2, 3) in pairs and (3, 4) in pairs
    # 4/3 * 3/2 = 2 and 5/4 * 8/5 = 2
    assert Fraction(4, 3) * Fraction(3, 2) == 2 and Fraction(5, 4) * Fraction(8, 5) == 2


def test_first_rung_uses_b0_convergent():
    # p_0/q_0 = 1 and P_1/Q_1 = 2: 1 * 2 = m
    pairs = by_pair(ld.build_ladder(2, 4))
    assert sorted(pairs) == oracle_pairs(2, 4) == [(1, 2), (2, 3), (3, 4)]


def test_no_connection_at_length_one():
    assert len(ld.build_ladder(2, 1)) == 0


def test_mixed_field():
    with pytest.raises(MixedField):
        ld.find_connections(expand(Surd(2, 1), 5), expand(Surd(3, 2), 5))


@pytest.mark.parametrize("m", [2, 3, 5, 6, 10, 12, 20])
def test_matches_brute_force(m):
    xi, eta = expand(Surd(m, 1), 50), expand(Surd(m, 2), 50)
    found = [(c.n, c.k) for c in ld.find_connections(xi, eta)]
    assert found == ld.brute_force_pairs(xi, eta) == oracle_pairs(m, 50)


def test_count_m2_length_1000(ladder2):
    assert len(ladder2) == 665


# --- certificates ---------------------------------------------------------------

def test_certify_examples():
    xi, eta = expand(Surd(2, 1), 6), expand(Surd(2, 2), 6)
    c23 = ld.certify((2, 3), xi, eta)
    assert (c23.r, c23.s) == (2, 1)
    c34 = ld.certify((3, 4), xi, eta)
    assert (c34.r, c34.s) == (1, 2)
    assert c23.t in (-1, 0)
    with mpmath.workdps(100):
        t_float = 2 * mp_complete_quotient(2, 1, 2) - mp_complete_quotient(2, 2, 3)
        assert abs(t_float - c23.t) < mpmath.mpf(10) ** -50


def test_certify_rejects_non_connection():
    xi, eta = expand(Surd(2, 1), 6), expand(Surd(2, 2), 6)
    with pytest.raises(CertificateFailure):
        ld.certify((2, 2), xi, eta)


def test_certificates_against_high_precision(ladder6):
    with mpmath.workdps(400):
        for c in ladder6.connections[:40]:
            value = (c.r * mp_complete_quotient(6, 1, c.n, 400)
                     - c.s * mp_complete_quotient(6, 2, c.k, 400))
            assert abs(value - c.t) < mpmath.mpf(10) ** -100


@pytest.mark.parametrize("fixture", ["ladder2", "ladder6"])
def test_connection_invariants(request, fixture):
    ladder = request.getfixturevalue(fixture)
    for c in ladder.connections:
        assert c.r * c.s == ladder.m
        assert ld.parity_check(c)
        assert ld.t_range_check(c)
        assert ld.theorem_bound_check(c, ladder.xi_exp, ladder.eta_exp)
        assert ladder.xi_exp.p(c.n - 1) * ladder.eta_exp.p(c.k - 1) == \
            ladder.m * ladder.xi_exp.q(c.n - 1) * ladder.eta_exp.q(c.k - 1)


def test_theorem_bound_examples():
    xi, eta = expand(Surd(2, 1), 6), expand(Surd(2, 2), 6)
    pairs = by_pair(ld.find_connections(xi, eta))
    c = pairs[2, 3]
    assert (c.r, c.s, c.b_n, c.B_k, c.bound_value) == (2, 1, 1, 2, 0)
    assert ld.theorem_bound_check(c, xi, eta)
    c = pairs[3, 4]
    assert (c.r, c.s, c.b_n, c.B_k, c.bound_value) == (1, 2, 5, 2, 1)
    assert ld.theorem_bound_check(c, xi, eta)


def test_bound_collapses_when_r_equals_s():
    c = ld.Connection(n=1, k=2, r=1, s=1, t=0, b_n=4, B_k=4)
    assert ld.theorem_bound_check(c)
    assert not ld.theorem_bound_check(ld.Connection(1, 2, 1, 1, 0, 4, 5))


@pytest.mark.parametrize("m", [2, 3, 5, 7, 11, 13])
def test_prime_m_certificates(m):
    assert isprime(m)
    for c in ld.build_ladder(m, 300).connections:
        assert {c.r, c.s} == {1, m}
        assert abs(c.bound_value) <= 2 * m - 2


# --- parity / exchange / middle zero ----------------------------------------------

def test_parity_examples():
    assert ld.parity_check(SimpleNamespace(n=2, k=3))
    assert ld.parity_check(SimpleNamespace(n=3, k=4))
    assert not ld.parity_check(SimpleNamespace(n=2, k=2))


def test_exchange_examples(ladder2):
    pairs = by_pair(ladder2)
    assert (pairs[2, 3].r, pairs[2, 3].s) == (2, 1)
    assert ld.exchange_check(pairs[2, 3], pairs[3, 4])
    with pytest.raises(NotConsecutive):
        ld.exchange_check(pairs[2, 3], pairs[5, 6])


@pytest.mark.parametrize("fixture", ["ladder2", "ladder6"])
def test_exchange_every_consecutive_pair(request, fixture):
    ladder = request.getfixturevalue(fixture)
    pairs = ld.consecutive_pairs(ladder)
    assert pairs
    assert all(ld.exchange_check(a, b) for a, b in pairs)


@pytest.mark.parametrize("fixture", ["ladder2", "ladder6"])
def test_middle_zero_every_consecutive_triple(request, fixture):
    ladder = request.getfixturevalue(fixture)
    triples = ld.consecutive_triples(ladder)
    assert triples
    assert all(ld.middle_zero_check(*t) for t in triples)


def test_middle_zero_not_consecutive(ladder2):
    pairs = by_pair(ladder2)
    with pytest.raises(NotConsecutive):
        ld.middle_zero_check(pairs[1, 2], pairs[2, 3], pairs[5, 6])


# --- ladder-wide ----------------------------------------------------------------

@pytest.mark.parametrize("fixture", ["ladder2", "ladder6"])
def test_noncrossing(request, fixture):
    assert ld.noncrossing_check(request.getfixturevalue(fixture))


def test_noncrossing_detects_crossing():
    crossed = ld.Ladder(None, None, [ld.Connection(2, 5, 1, 2, 0, 1, 1),
                                     ld.Connection(3, 4, 2, 1, 0, 1, 1)])
    assert not ld.noncrossing_check(crossed)
    assert ld.noncrossing_check(ld.Ladder(None, None, []))


@pytest.mark.parametrize("fixture", ["ladder2", "ladder6"])
def test_big_quotient_coverage(request, fixture):
    ladder = request.getfixturevalue(fixture)
    report = ld.big_quotient_coverage(ladder)
    assert report.violations == []
    assert report.checked > 0
    # horizon cases only ever sit near the end of the computed range
    assert all(i > ladder.N - 20 for _, i, _ in report.unresolved)


def test_big_quotient_coverage_length_one():
    report = ld.big_quotient_coverage(ld.build_ladder(2, 1))
    assert report.violations == []


def test_big_quotient_coverage_flags_missing_rung():
    ladder = ld.build_ladder(2, 200)
    target = next(c for c in ladder.connections if c.b_n >= 5 and c.n < 150)
    broken = ld.Ladder(ladder.xi_exp, ladder.eta_exp,
                       [c for c in ladder.connections if c is not target])
    report = ld.big_quotient_coverage(broken)
    assert ("xi", target.n, target.b_n) in report.violations


def test_quotient_ratio_recorded(ladder2):
    c = by_pair(ladder2)[3, 4]
    assert c.quotient_ratio == Fraction(5, 2)
