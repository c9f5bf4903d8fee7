import math

import pytest

import smoothrmf as sr


@pytest.fixture(scope="module")
def table():
    return sr.sieve(100_000, spf=True)


def test_version():
    assert sr.__version__ == "0.1.0"


def test_sieve(table):
    assert len(table) == 9592
    assert table.primes()[:5] == [2, 3, 5, 7, 11]
    assert table.is_prime(99991)


def test_psi_small(table):
    assert sr.psi(100, 3, table) == 20
    assert sr.psi(10, 2, table) == 4
    assert sr.psi(100, 3, table, strategy="recursive") == sr.psi(100, 3, table, strategy="scan")


def test_psi_against_brute_force(table):
    def largest(n):
        p, d = 1, 2
        while d * d <= n:
            while n % d == 0:
                p, n = d, n // d
            d += 1
        return max(p, n) if n > 1 else p

    brute = sum(1 for n in range(1, 5001) if largest(n) <= 13)
    assert sr.psi(5000, 13, table) == brute


def test_factorize(table):
    assert sr.factorize(360, table) == [(2, 3), (3, 2), (5, 1)]


def test_special_functions():
    assert sr.xi(1.0) == 0.0
    assert sr.dickman_rho(2.0) == pytest.approx(1 - math.log(2), rel=1e-14)
    u = 5.0
    x = sr.xi(u)
    assert math.exp(x) == pytest.approx(1 + u * x, rel=1e-12)


def test_saddle_point(table):
    sp = sr.saddle_point(1e6, 100, table)
    lhs = sum(math.log(p) / (p ** sp["alpha"] - 1) for p in table.primes() if p <= 100)
    assert lhs == pytest.approx(math.log(1e6), rel=1e-10)


def test_ep_moment_matches_exact(table):
    est = sr.ep_moment(2.0, 50, 1.0, 0.0, table, samples=4000, seed=3)
    exact = math.exp(sr.log_exact_ep_moment(2.0, 50, 1.0, table))
    assert abs(est["mean"] - exact) <= 4 * est["stderr"]


def test_monte_carlo_reproducible(table):
    a = sr.abs_moment(2000, 20, table, samples=300, seed=11, threads=1)
    b = sr.abs_moment(2000, 20, table, samples=300, seed=11, threads=3)
    assert a == b


def test_report_rows(table):
    rows = sr.cancellation_report(100_000, [2, 3], table, samples=200, seed=1)
    assert [r["u"] for r in rows] == [2.0, 3.0]
    assert all(r["predicted_saving"] == pytest.approx(math.exp(-r["u"] * math.log(2) / 2)) for r in rows)


def test_plancherel():
    r = sr.plancherel([1.0, 0.5, 0.25], 1.0, 200.0)
    assert r["gap"] <= r["tail_bound"] + r["quadrature_error"] + 1e-9


def test_errors(table):
    with pytest.raises(sr.DomainError):
        sr.xi(0.5)
    with pytest.raises(ValueError):
        sr.psi(10, 3, table, strategy="fast")
    with pytest.raises(sr.Error):
        sr.psi(10**12, 10**6, table, strategy="scan")
