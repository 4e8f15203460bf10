import math
import random

import pytest

from digitsieve.bounds import (
    BoundParams,
    congruence_lattice_basis,
    gauss_reduce,
    measure_cong_decay,
    measure_dyadic_square_sum,
    predicted_med_q_exponent,
    predicted_two_window_exponent,
    tau,
    theta,
)
from digitsieve.errors import ValidationError
from digitsieve.patterns import DigitSymbol, enumerate_members, make_pattern

F0, F1, FR = DigitSymbol.FIXED0, DigitSymbol.FIXED1, DigitSymbol.FREE


def test_tau_kappa_zero_collapses():
    for rho in (0.1, 0.25, 0.5, 0.8, 1.0):
        assert tau(0.0, rho) == pytest.approx(rho, abs=1e-14)
        assert theta(0.0, rho) == pytest.approx(1.0, abs=1e-12)


def test_known_exponent_values():
    assert theta(0.4, 0.4) == pytest.approx(0.5, abs=1e-12)
    assert tau(0.4, 0.4) == pytest.approx(0.2, abs=1e-12)
    assert tau(0.25, 1.0) == pytest.approx(0.5, abs=1e-12)
    for k in (0.09, 0.25, 0.49, 0.81):
        assert theta(k, 1.0) == pytest.approx(1.0 - math.sqrt(k), abs=1e-12)


def test_tau_domain_errors():
    with pytest.raises(ValidationError):
        tau(-0.1, 0.5)
    with pytest.raises(ValidationError):
        tau(1.0, 0.5)
    with pytest.raises(ValidationError):
        tau(0.5, 0.0)
    with pytest.raises(ValidationError):
        tau(0.5, 1.5)


def test_quadratic_residual_on_grid():
    for i in range(1, 100):
        for j in range(1, 100):
            kappa, rho = i / 100, j / 100
            params = BoundParams.from_ratios(kappa, rho)
            assert abs(params.residual()) <= 1e-12
            assert -1e-15 <= params.tau <= rho + 1e-15
            assert -1e-15 <= params.theta <= 1.0 + 1e-15


def test_theta_monotone_decreasing_in_rho():
    for i in range(1, 100):
        kappa = i / 100
        prev = None
        for j in range(1, 101):
            rho = j / 100
            t = theta(kappa, rho)
            if prev is not None:
                assert t <= prev + 1e-12
            prev = t


def test_med_q_exponent():
    assert predicted_med_q_exponent(0.4, 0.4) == pytest.approx(0.5, abs=1e-12)
    assert predicted_med_q_exponent(0.0, 0.7) == pytest.approx(1.0, abs=1e-12)
    # independent evaluation: solve the quadratic numerically by bisection
    kappa, rho = 0.3, 0.5
    lo, hi = 0.0, rho
    for _ in range(80):
        mid = (lo + hi) / 2
        if mid * mid - mid * (1 + rho) + rho * (1 - kappa) >= 0:
            lo = mid
        else:
            hi = mid
    assert predicted_med_q_exponent(kappa, rho) == pytest.approx(lo / rho, abs=1e-10)


def test_two_window_exponent():
    assert predicted_two_window_exponent(0.4, 0.25) == pytest.approx(-0.2, abs=1e-12)
    assert predicted_two_window_exponent(0.4, 0.5) == pytest.approx(-0.6, abs=1e-12)
    assert predicted_two_window_exponent(0.0, 0.5) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(ValidationError):
        predicted_two_window_exponent(0.4, 0.1)
    with pytest.raises(ValidationError):
        predicted_two_window_exponent(0.4, 0.6)


def test_measure_cong_decay():
    pat = make_pattern(3, [F1, FR, FR])
    rows = measure_cong_decay(pat, [3])
    assert rows[0].count == 1
    assert rows[0].predicted_exponent == pytest.approx(theta(1 / 3, math.log2(3) / 3))
    with pytest.raises(ValidationError):
        measure_cong_decay(pat, [1])
    with pytest.raises(ValidationError):
        measure_cong_decay(pat, [])
    allfree = make_pattern(12, [FR] * 12)
    row = measure_cong_decay(allfree, [5])[0]
    assert abs(row.count - 4096 / 5) <= 1


def test_dyadic_examples():
    allfree = make_pattern(8, [FR] * 8)
    assert measure_dyadic_square_sum(allfree, 4).value == 29
    odd = make_pattern(3, [F1, FR, FR])
    assert measure_dyadic_square_sum(odd, 2).value == 0
    deg = make_pattern(3, [F1, F0, F1], allow_degenerate=True)
    assert measure_dyadic_square_sum(deg, 2).value == 0
    with pytest.raises(ValidationError):
        measure_dyadic_square_sum(odd, 1)


def test_dyadic_matches_enumeration():
    random_pat = make_pattern(10, [F1, FR, FR, F0, FR, FR, FR, FR, F1, FR])
    members = list(enumerate_members(random_pat))
    for a in (2, 3, 5):
        oracle = sum(
            1 for q in range(a + 1, 2 * a + 1) for m in members if m % (q * q) == 0
        )
        assert measure_dyadic_square_sum(random_pat, a).value == oracle


def test_empirical_decay_conformance_reported():
    # Fitted constant C with measured count <= C * total * q^(-theta); the
    # implied constant is never quantified, so this reports rather than
    # asserting a specific ceiling.
    rng = random.Random(73)
    from digitsieve.patterns import random_pattern

    worst = 0.0
    for _ in range(50):
        k = rng.randint(2, 8)
        pat = random_pattern(rng, 20, k, starred=True)
        total = pat.member_count()
        rows = measure_cong_decay(pat, list(range(3, 102, 2)))
        for row in rows:
            ceiling = total * row.q ** (-row.predicted_exponent)
            worst = max(worst, row.count / ceiling)
    print(f"decay conformance: fitted constant C = {worst:.3f} over 50 patterns, odd q in [3, 101]")
    assert worst > 0


def _shortest_by_search(u, v):
    # provably sufficient coefficient window from Minkowski's bound
    det = abs(u[0] * v[1] - u[1] * v[0])
    longer = max(math.hypot(*u), math.hypot(*v))
    bound = int(1.2 * longer / math.sqrt(det)) + 2
    best = None
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if a == 0 and b == 0:
                continue
            w = (a * u[0] + b * v[0], a * u[1] + b * v[1])
            n = w[0] * w[0] + w[1] * w[1]
            if best is None or n < best:
                best = n
    return best


def test_gauss_reduce_trivial():
    res = gauss_reduce([(1, 0), (0, 1)])
    assert res.lambda1_sq == res.lambda2_sq == 1
    res = gauss_reduce([(2, 0), (0, 3)])
    assert res.lambda1_sq == 4 and res.lambda2_sq == 9


def test_gauss_reduce_known_case():
    res = gauss_reduce(congruence_lattice_basis(2, 3))
    assert res.lambda1_sq == 5
    assert res.shortest_vector in ((2, 1), (-2, -1))
    # oracle: exhaustive over |a|, |c| <= 9
    pts = {
        (a + 0 * c, -4 * a + 9 * c)
        for a in range(-9, 10)
        for c in range(-9, 10)
        if (a, c) != (0, 0)
    }
    assert min(x * x + y * y for x, y in pts) == 5


def test_gauss_reduce_degenerate():
    with pytest.raises(ValidationError):
        gauss_reduce([(2, 4), (1, 2)])


def test_gauss_reduce_against_exhaustive_search():
    rng = random.Random(67)
    done = 0
    while done < 60:
        u = (rng.randint(-50, 50), rng.randint(-50, 50))
        v = (rng.randint(-50, 50), rng.randint(-50, 50))
        if u[0] * v[1] - u[1] * v[0] == 0:
            continue
        res = gauss_reduce([u, v])
        assert res.lambda1_sq == _shortest_by_search(u, v)
        assert res.lambda1_sq <= res.lambda2_sq
        det = abs(u[0] * v[1] - u[1] * v[0])
        assert res.lambda1_sq * res.lambda2_sq >= det * det
        # Minkowski: lambda1 * lambda2 <= 2 * det in the Euclidean norm
        assert res.lambda1_sq * res.lambda2_sq <= 4 * det * det
        done += 1
