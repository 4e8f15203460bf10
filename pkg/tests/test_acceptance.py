"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they complete.  Every corpus is seeded, so results are reproducible.
"""

import json
import math
import random
import time
from itertools import product

import numpy as np
import pytest

from digitsieve import (
    SQUAREFREE_DENSITY,
    CharContext,
    DigitSetFamily,
    FieldContext,
    compute_f_and_F,
    congruence_histogram,
    euler_ratio_sum,
    exp_sum,
    gauss_reduce,
    max_cube_dimension_brute,
    qr_split,
    quad_char,
    qr_split_W,
    random_pattern,
    squarefree_count_direct,
    squarefree_count_moebius,
    subset_sums_k,
    theta,
)
from digitsieve import primes
from digitsieve.cli import main as cli_main
from digitsieve.patterns import pattern_from_string
from digitsieve.reporting import strip_timing

SEED = 0xD161751E


def _report(num, name, t0, detail=""):
    elapsed = time.time() - t0
    suffix = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {num:>2} ({name}): PASS in {elapsed:.1f}s{suffix}")


def test_01_squarefree_method_equivalence():
    t0 = time.time()
    rng = random.Random(SEED + 1)
    for i in range(200):
        n = rng.randint(6, 18)
        k = rng.randint(1, n - 1)
        pat = random_pattern(rng, n, k)
        direct = squarefree_count_direct(pat).count
        moebius = squarefree_count_moebius(pat).count
        assert direct == moebius, f"pattern {i}: {direct} != {moebius}"
    assert time.time() - t0 < 60
    _report(1, "squarefree method equivalence", t0, "200 patterns, exact")


def test_02_squarefree_density():
    t0 = time.time()
    headline = pattern_from_string("*" * 23 + "1")
    assert headline.n == 24 and headline.k == 1
    rep = squarefree_count_direct(headline)
    assert abs(rep.ratio - 0.810569) <= 0.01, rep.ratio
    rng = random.Random(SEED + 2)
    worst = 0.0
    for _ in range(20):
        k = rng.randint(1, 9)  # kappa = k/24 <= 0.375 < 0.4
        pat = random_pattern(rng, 24, k, starred=True)
        r = squarefree_count_direct(pat)
        worst = max(worst, abs(r.ratio - SQUAREFREE_DENSITY))
        assert abs(r.ratio - SQUAREFREE_DENSITY) <= 0.05, (pat, r.ratio)
    assert time.time() - t0 < 180
    _report(2, "squarefree density at n=24", t0, f"worst deviation {worst:.4f}")


def test_03_euler_average():
    t0 = time.time()
    rng = random.Random(SEED + 3)
    worst = 0.0
    modes = set()
    for _ in range(20):
        k = rng.randint(1, 14)  # kappa <= 14/24 = 0.583 <= 0.6
        pat = random_pattern(rng, 24, k, starred=True)
        rep = euler_ratio_sum(pat)
        modes.add(rep.method)
        assert rep.agreement <= 1e-9
        worst = max(worst, abs(rep.ratio - SQUAREFREE_DENSITY))
        assert abs(rep.ratio - SQUAREFREE_DENSITY) <= 0.05, (pat, rep.ratio)
    assert modes == {"rational", "float"}  # both summation modes exercised
    assert time.time() - t0 < 180
    _report(3, "Euler ratio average at n=24", t0, f"worst deviation {worst:.4f}")


def test_04_bound_exponent_identities():
    t0 = time.time()
    assert abs(theta(2 / 5, 2 / 5) - 0.5) <= 1e-12
    for i in range(1, 100):
        kappa = i / 100
        assert abs(theta(kappa, 1.0) - (1.0 - math.sqrt(kappa))) <= 1e-12
    violations = 0
    for i in range(1, 101):
        kappa = i / 101
        prev = None
        for j in range(1, 101):
            rho = j / 100
            t = theta(kappa, rho)
            if prev is not None and t > prev + 1e-12:
                violations += 1
            prev = t
    assert violations == 0
    assert time.time() - t0 < 1
    _report(4, "bound exponent identities", t0, "100x100 grid, zero violations")


def test_05_orthogonality_parseval():
    t0 = time.time()
    rng = random.Random(SEED + 5)
    for _ in range(50):
        n = rng.randint(4, 16)
        k = rng.randint(1, n - 1)
        pat = random_pattern(rng, n, k)
        q = rng.randint(2, 101)
        prof = congruence_histogram(pat, q)
        sums = [exp_sum(pat, a, q).value for a in range(q)]
        lhs = sum(sums)
        scale = q * pat.member_count()
        assert abs(lhs.real - q * prof.multiples) <= 1e-6 * scale
        assert abs(lhs.imag) <= 1e-6 * scale
        power = sum(abs(s) ** 2 for s in sums)
        rhs = q * int((prof.counts.astype(np.int64) ** 2).sum())
        assert abs(power - rhs) <= 1e-6 * max(rhs, 1)
    assert time.time() - t0 < 30
    _report(5, "orthogonality and Parseval", t0, "50 pattern-modulus pairs")


def test_06_qr_equidistribution():
    t0 = time.time()
    rng = random.Random(SEED + 6)
    prime_list = []
    while len(prime_list) < 10:
        cand = primes.next_prime(rng.randrange(1 << 20, 1 << 21))
        if cand < (1 << 21) and cand not in prime_list:
            prime_list.append(cand)
    pats = []
    for _ in range(10):
        k = rng.randint(2, 6)  # kappa <= 0.3 <= 0.45
        pats.append(random_pattern(rng, 20, k))
    worst = 0.0
    for p in prime_list:
        for pat in pats:
            split = qr_split(pat, p)
            worst = max(worst, split.deviation)
            assert split.deviation <= 0.01, (p, pat, split.deviation)
    assert time.time() - t0 < 300
    _report(6, "QR equidistribution", t0, f"100 splits, worst deviation {worst:.5f}")


def test_07_subset_sum_bounds():
    t0 = time.time()
    rng = random.Random(SEED + 7)
    plist = [p for p in range(3, 102) if primes.is_prime(p)]
    for _ in range(300):
        p = rng.choice(plist)
        size = rng.randint(1, p - 1)
        s = rng.sample(range(p), size)
        k = rng.randint(1, size)
        got = len(subset_sums_k(s, k, p))
        assert got >= min(p, k * size - k * k + 1)
    assert time.time() - t0 < 30
    _report(7, "subset-sum lower bounds", t0, "300 exhaustive triples")


def test_08_cube_searches():
    t0 = time.time()
    results = {}
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        res = compute_f_and_F(p)
        assert res.f.exact and res.F.exact
        nonresidues = {x for x in range(1, p) if pow(x, (p - 1) // 2, p) == p - 1}
        brute_f = max_cube_dimension_brute(p, nonresidues)
        assert brute_f.dimension == res.f.dimension, p
        from digitsieve.hilbert import primitive_roots

        brute_F = max_cube_dimension_brute(p, primitive_roots(p))
        assert brute_F.dimension == res.F.dimension, p
        assert res.f.dimension <= res.F.dimension
        assert res.f.dimension < 12 * p**0.25
        results[p] = (res.f.dimension, res.F.dimension)
    assert time.time() - t0 < 600
    detail = ", ".join(f"{p}:{f}/{F}" for p, (f, F) in results.items())
    _report(8, "cube searches f(p), F(p)", t0, detail)


def _shortest_vector_oracle(u, v):
    """Exhaustive search over the provably sufficient coefficient window.

    Minkowski gives lambda1 <= 1.13*sqrt(det); the first coefficient of a
    vector w is det(w, v)/det(u, v), so |a| <= 1.13*|v|/sqrt(det).  For
    each a the integer b minimizing the quadratic |a*u + b*v|^2 is one of
    the two integers around the real minimizer.
    """
    det = abs(u[0] * v[1] - u[1] * v[0])
    norm_v = v[0] * v[0] + v[1] * v[1]
    bound_a = int(1.14 * math.sqrt(norm_v / det)) + 2
    best = norm_v  # a=0, b=1
    uu = u[0] * u[0] + u[1] * u[1]
    best = min(best, uu)  # a=1, b=0
    uv = u[0] * v[0] + u[1] * v[1]
    for a in range(1, bound_a + 1):
        b_real = -a * uv / norm_v
        for b in (math.floor(b_real), math.ceil(b_real)):
            if a == 0 and b == 0:
                continue
            w0 = a * u[0] + b * v[0]
            w1 = a * u[1] + b * v[1]
            best = min(best, w0 * w0 + w1 * w1)
    return best


def test_09_lattice_reduction():
    t0 = time.time()
    rng = random.Random(SEED + 9)
    done = 0
    while done < 500:
        u = (rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        v = (rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        if u[0] * v[1] - u[1] * v[0] == 0:
            continue
        res = gauss_reduce([u, v])
        assert res.lambda1_sq == _shortest_vector_oracle(u, v), (u, v)
        done += 1
    assert time.time() - t0 < 10
    _report(9, "lattice reduction vs exhaustive search", t0, "500 bases, exact")


def test_10_finite_field_counts():
    t0 = time.time()
    for p, n in ((3, 2), (5, 2), (3, 3), (7, 2), (3, 4), (11, 2), (5, 3)):
        ctx = FieldContext(p, n)
        plus = sum(1 for e in product(range(p), repeat=n) if quad_char(e, ctx) == 1)
        assert plus == (p**n - 1) // 2, (p, n)
    ctx = FieldContext(101, 3)
    worst = 0.0
    for seed in range(10):
        rng = random.Random(SEED + 100 + seed)
        family = DigitSetFamily.of([rng.sample(range(101), 60) for _ in range(3)], 101)
        split = qr_split_W(family, ctx)
        worst = max(worst, split.deviation)
        assert split.deviation <= 0.02, (seed, split.deviation)
    assert time.time() - t0 < 120
    _report(10, "finite-field counts", t0, f"7 exhaustive fields, worst W deviation {worst:.5f}")


def test_11_cli_determinism(tmp_path):
    t0 = time.time()
    runs = [
        ["squarefree", "--random", "4", "--n", "16", "--seed", "11"],
        ["euler", "--pattern", "*" * 11 + "1", "--seed", "11"],
        ["qrsplit", "--random", "3", "--n", "14", "--seed", "11"],
        ["bounds", "--kappa", "0.4", "--rho", "0.4", "--seed", "11"],
        ["cong", "--pattern", "********1", "--q", "3,5,7,9,11", "--format", "csv", "--seed", "11"],
    ]
    for args in runs:
        assert cli_main(args + ["--out", str(tmp_path / "a")]) == 0
        assert cli_main(args + ["--out", str(tmp_path / "b")]) == 0
    for path_a in sorted((tmp_path / "a").iterdir()):
        path_b = tmp_path / "b" / path_a.name
        if path_a.suffix == ".json":
            doc_a = strip_timing(json.loads(path_a.read_text()))
            doc_b = strip_timing(json.loads(path_b.read_text()))
            blob_a = json.dumps(doc_a, sort_keys=True)
            blob_b = json.dumps(doc_b, sort_keys=True)
            assert blob_a == blob_b, path_a.name
        else:
            assert path_a.read_bytes() == path_b.read_bytes(), path_a.name
    _report(11, "CLI determinism", t0, f"{len(runs)} commands, byte-identical")
