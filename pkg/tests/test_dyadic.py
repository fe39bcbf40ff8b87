import math

import numpy as np
import pytest

from sparse_expanders.combinatorics import log_p_max, shannon_entropy as H
from sparse_expanders.dyadic import (DyadicProfile, constrained_profile, cubic_forward,
                                     expected_cardinality, expected_profile, psi,
                                     rip1_failure_bound, tail_bound)
from sparse_expanders.errors import DomainError, InfeasibleError, SolverError
from sparse_expanders.montecarlo import draw_cardinalities, exact_union_distribution


def cubic_residual(a_i, a_2i, a_4i):
    return a_2i ** 3 - 2 * a_i * a_2i ** 2 + 2 * a_i ** 2 * a_2i - a_i ** 2 * a_4i


def test_expected_profile_first_levels():
    p = expected_profile(2, 8, 1024)
    assert p.levels == ((1, 8.0), (2, 15.9375))
    p4 = expected_profile(4, 8, 1024)
    assert p4.top == pytest.approx(15.9375 * (2 - 15.9375 / 1024), rel=1e-15)
    assert p4.top == pytest.approx(31.62695, abs=1e-5)
    assert expected_profile(2, 16, 16).top == 16


def test_expected_top_matches_monte_carlo_mean():
    samples = draw_cardinalities(1024, 8, 4, 10 ** 5, seed=12)
    sigma = samples.std() / math.sqrt(samples.size)
    assert abs(samples.mean() - expected_profile(4, 8, 1024).top) < 3 * sigma


@pytest.mark.parametrize("s", [2, 3, 5, 8, 12, 64, 100, 1000])
def test_expected_profile_equals_closed_form_expectation(s):
    for d, n in [(2, 16), (8, 1024), (3, 50)]:
        p = expected_profile(s, d, n)
        for i, a in p.levels:
            assert a == pytest.approx(n * (1 - (1 - d / n) ** i), rel=1e-12)
        values = p.values
        assert values[0] == d
        assert all(b >= a for a, b in zip(values, values[1:]))


def test_expected_profile_rejects_single_column():
    with pytest.raises(DomainError):
        expected_profile(1, 4, 10)
    with pytest.raises(InfeasibleError):
        expected_profile(2, 11, 10)


def test_cubic_forward_examples():
    assert cubic_forward(8, 12) == pytest.approx(15.0, abs=1e-12)
    assert cubic_forward(7.5, 7.5) == pytest.approx(7.5, rel=1e-15)
    a, n = 20.0, 300.0
    a2 = a * (2 - a / n)
    assert cubic_forward(a, a2) == pytest.approx(a2 * (2 - a2 / n), rel=1e-14)


def test_cubic_forward_errors():
    with pytest.raises(DomainError):
        cubic_forward(0, 1)
    with pytest.raises(InfeasibleError):
        cubic_forward(8, 15.9, n=20)
    with pytest.raises(InfeasibleError):
        cubic_forward(4, 12)


def test_constrained_at_expected_top_reproduces_expected_profile():
    for s in (2, 4, 6, 16, 37):
        exp = expected_profile(s, 8, 1024)
        con = constrained_profile(s, 8, 1024, exp.top)
        assert con.constrained
        for (i, a), (j, b) in zip(exp.levels, con.levels):
            assert i == j and b == pytest.approx(a, rel=1e-8)


def test_constrained_total_collision():
    p = constrained_profile(16, 5, 200, 5)
    assert p.values == [5.0] * 5


def test_constrained_s4_root_matches_polynomial_oracle():
    p = constrained_profile(4, 8, 1024, 28)
    a1, a2, a4 = p.values
    assert a1 == 8 and a4 == 28
    # cubic_forward(8, x) = 28  <=>  x^3 - 16 x^2 + 128 x - 28*64 = 0
    roots = np.roots([1, -16, 128, -28 * 64])
    real = [r.real for r in roots if abs(r.imag) < 1e-9 and 8 <= r.real <= 15.9375]
    assert len(real) == 1
    assert a2 == pytest.approx(real[0], rel=1e-10)
    assert abs(cubic_residual(a1, a2, a4)) < 1e-9


@pytest.mark.parametrize("s", [8, 32, 64])
def test_constrained_profile_satisfies_cubic_at_every_triple(s):
    n, d = 1024, 4
    top = 0.85 * expected_profile(s, d, n).top
    p = constrained_profile(s, d, n, top)
    v = p.values
    assert v[-1] == pytest.approx(top, abs=1e-10 * n)
    for a, b, c in zip(v, v[1:], v[2:]):
        assert abs(cubic_residual(a, b, c)) < 1e-9 * n ** 3
        assert a <= b <= c


def test_constrained_profile_errors():
    with pytest.raises(InfeasibleError) as info:
        constrained_profile(4, 8, 1024, 7.9)
    assert info.value.side == "below"
    with pytest.raises(DomainError):
        constrained_profile(4, 8, 1024, 32.0)


def test_non_power_of_two_partner_is_the_remaining_block():
    exp = expected_profile(6, 8, 1024)
    assert [i for i, _ in exp.levels] == [1, 2, 4, 6]
    assert exp.partner == pytest.approx(expected_cardinality(2, 8, 1024), rel=1e-14)
    con = constrained_profile(6, 8, 1024, 40.0)
    assert con.partner == pytest.approx(con.levels[1][1], rel=1e-9)


def test_psi_hand_evaluation_disjoint_pair():
    profile = DyadicProfile(n=8, d=2, s=2, levels=((1, 2.0), (2, 4.0)), partner=2.0)
    bracket = 6 * (math.log(3) - 2 / 3 * math.log(2)) + 0 - 8 * (
        -0.25 * math.log(0.25) - 0.75 * math.log(0.75))
    assert bracket == pytest.approx(-0.67959, abs=1e-5)
    assert psi(profile) == pytest.approx((6 * math.log(10) + bracket) / 8, rel=1e-14)
    assert psi(profile) == pytest.approx(1.6420, abs=1e-4)


def test_psi_total_collision_pair():
    n, d = 64, 3
    profile = DyadicProfile(n=n, d=d, s=2, levels=((1, 3.0), (2, 3.0)), partner=3.0)
    assert psi(profile) == pytest.approx((6 * math.log(5 * d) - n * H(d / n)) / n,
                                         rel=1e-14)


def test_psi_term_by_term_for_power_of_two():
    n, d, s = 512, 4, 8
    p = expected_profile(s, d, n)
    v = p.values
    total = 3 * s * math.log(5 * d)
    for (i, a), b in zip(p.levels, v[1:]):
        total += s / (2 * i) * ((n - a) * H((b - a) / (n - a)) + a * H((b - a) / a)
                                - n * H(a / n))
    assert psi(p) == pytest.approx(total / n, rel=1e-14)


def test_psi_expected_not_below_constrained():
    for s in (2, 3, 4, 7, 8, 16, 33, 64):
        for d in (2, 4, 8, 16):
            n = 1024
            exp = expected_profile(s, d, n)
            con = constrained_profile(s, d, n, max(d, 0.8 * exp.top))
            assert psi(con) <= psi(exp) + 1e-12


def test_psi_is_continuous_across_powers_of_two():
    for k in (4, 8, 16, 32):
        below = rip1_failure_bound(k - 1e-7, 8, 1024, 1 / 6).psi
        above = rip1_failure_bound(k + 1e-7, 8, 1024, 1 / 6).psi
        assert abs(below - above) < 1e-6


def test_psi_rejects_impossible_profile():
    bad = DyadicProfile(n=8, d=2, s=2, levels=((1, 2.0), (2, 5.0)), partner=2.0)
    with pytest.raises(InfeasibleError):
        psi(bad)


def test_tail_bound_log_identity_and_case_dispatch():
    r = tail_bound(4, 8, 1024, 40)
    assert r.case == "expected"
    assert r.log_bound == log_p_max(4, 8) + 1024 * r.psi
    r2 = tail_bound(4, 8, 1024, 28)
    assert r2.case == "constrained" and r2.profile.top == 28
    assert r2.log_bound < r.log_bound


def test_tail_bound_certain_event_is_not_an_error():
    r = tail_bound(3, 2, 8, 6)
    assert r.case == "expected"
    assert math.isfinite(r.log_bound)


def test_tail_bound_dominates_identical_support_probability():
    r = tail_bound(2, 2, 8, 2)
    assert math.log(1 / 28) <= r.log_bound
    assert r.vacuous


def test_tail_bound_dominates_exact_chain_probabilities():
    # log-domain comparison, so vacuous bounds are still checked
    nonvacuous = 0
    for n in (64, 256):
        for d in (2, 4, 8):
            for s in (2, 3, 4, 6, 8, 16):
                cdf = np.cumsum(exact_union_distribution(n, d, s, "chain"))
                top = expected_profile(s, d, n).top
                for a in range(d, int(top) + 1):
                    r = tail_bound(s, d, n, a)
                    if cdf[a] > 0:
                        assert math.log(cdf[a]) <= r.log_bound
                    nonvacuous += r.log_bound < 0
    assert nonvacuous > 50


def test_rip1_bound_against_hypergeometric_oracle():
    r = rip1_failure_bound(2, 2, 8, 1 / 6)
    assert r.a_s == pytest.approx(10 / 3)
    assert r.eps == 1 / 6
    exact = math.comb(2, 1) * math.comb(6, 1) / 28 + 1 / 28
    assert exact == pytest.approx(13 / 28)
    assert math.log(exact) <= r.log_bound


def test_rip1_bound_monotone_in_eps():
    for s, d, n in [(8, 8, 1024), (16, 4, 512), (5, 6, 300)]:
        values = [rip1_failure_bound(s, d, n, e).log_bound
                  for e in np.arange(0.05, 0.451, 0.05)]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_rip1_small_eps_approaches_expected_case():
    r = rip1_failure_bound(8, 8, 1024, 1e-9)
    assert r.case == "expected"


@pytest.mark.parametrize("eps", [0.0, 0.5, 0.7, -0.1])
def test_rip1_eps_domain(eps):
    with pytest.raises(DomainError):
        rip1_failure_bound(4, 8, 1024, eps)


def test_shooting_reports_solver_failure_when_bracket_is_bad(monkeypatch):
    import sparse_expanders.dyadic as dy
    real = dy._shoot
    monkeypatch.setattr(dy, "_shoot", lambda s, d, n, a2: (
        real(s, d, n, a2)[0][:-1] + [(s, 0.5 * real(s, d, n, a2)[0][-1][1])], 1.0))
    with pytest.raises(SolverError) as info:
        dy.constrained_profile(4, 8, 1024, 30)
    assert "residuals" in info.value.diagnostics
