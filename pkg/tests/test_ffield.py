import random
from itertools import product

import pytest

from digitsieve.errors import ValidationError
from digitsieve.ffield import (
    DigitSetFamily,
    FieldContext,
    build_W,
    check_conditions,
    find_irreducible,
    is_irreducible,
    qr_split_W,
    quad_char,
    split_largest_index_set,
)


def test_find_irreducible_examples():
    assert find_irreducible(3, 2, 0) == (1, 0, 1)  # x^2 + 1
    assert find_irreducible(2, 2, 0) == (1, 1, 1)  # x^2 + x + 1, the only one
    assert not is_irreducible((2, 0, 1), 3)  # x^2 - 1 = (x-1)(x+1)


def test_find_irreducible_seeded_and_valid():
    for seed in (0, 1, 17, 12345):
        f = find_irreducible(5, 3, seed)
        assert len(f) == 4 and f[-1] == 1
        assert is_irreducible(f, 5)
    assert find_irreducible(5, 3, 7) == find_irreducible(5, 3, 7)


def test_is_irreducible_matches_root_check_deg2():
    # degree 2: irreducible iff no root in F_p
    for p in (3, 5, 7, 11):
        for a in range(p):
            for b in range(p):
                f = (b, a, 1)
                has_root = any((x * x + a * x + b) % p == 0 for x in range(p))
                assert is_irreducible(f, p) == (not has_root), (p, f)


def test_field_axioms_random():
    rng = random.Random(7)
    for p, n in ((3, 2), (5, 3), (7, 2), (2, 4)):
        ctx = FieldContext(p, n)
        elems = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(60)]
        for _ in range(200):
            a, b, c = rng.choice(elems), rng.choice(elems), rng.choice(elems)
            assert ctx.mul(a, b) == ctx.mul(b, a)
            assert ctx.mul(a, ctx.mul(b, c)) == ctx.mul(ctx.mul(a, b), c)
            assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        order = p**n - 1
        for _ in range(20):
            a = rng.choice(elems)
            if any(a):
                assert ctx.pow(a, order) == ctx.one


def test_frobenius_is_pth_power():
    rng = random.Random(11)
    for p, n in ((3, 2), (5, 3), (7, 2)):
        ctx = FieldContext(p, n)
        for _ in range(30):
            a = tuple(rng.randrange(p) for _ in range(n))
            assert ctx.frobenius(a) == ctx.pow(a, p)


def test_norm_multiplicative_and_in_base_field():
    rng = random.Random(13)
    ctx = FieldContext(5, 3)
    for _ in range(50):
        a = tuple(rng.randrange(5) for _ in range(3))
        b = tuple(rng.randrange(5) for _ in range(3))
        na, nb = ctx.norm(a), ctx.norm(b)
        assert ctx.norm(ctx.mul(a, b)) == na * nb % 5


def test_quad_char_basics():
    ctx = FieldContext(3, 2)  # F_9 with modulus x^2 + 1
    assert quad_char(ctx.zero, ctx) == 0
    assert quad_char(ctx.one, ctx) == 1
    assert quad_char((0, 1), ctx) == 1  # chi(x) = x^4 = (-1)^2 = 1


def test_quad_char_rejects_char2():
    ctx = FieldContext(2, 2)
    with pytest.raises(ValidationError):
        quad_char(ctx.one, ctx)


def test_quad_char_multiplicative():
    rng = random.Random(17)
    ctx = FieldContext(7, 2)
    elems = [t for t in product(range(7), repeat=2) if any(t)]
    for _ in range(200):
        a, b = rng.choice(elems), rng.choice(elems)
        assert quad_char(ctx.mul(a, b), ctx) == quad_char(a, ctx) * quad_char(b, ctx)


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3)])
def test_quad_char_split_is_even(p, n):
    ctx = FieldContext(p, n)
    vals = [quad_char(t, ctx) for t in product(range(p), repeat=n)]
    assert vals.count(1) == (p**n - 1) // 2
    assert vals.count(-1) == (p**n - 1) // 2
    assert vals.count(0) == 1


def test_build_w_examples():
    ctx = FieldContext(3, 2)
    full = DigitSetFamily.of([range(3), range(3)], 3)
    w = build_W(full, ctx)
    assert len(w) == 9
    zeros = DigitSetFamily.of([[0], [0]], 3)
    assert build_W(zeros, ctx) == {(0, 0)}
    fam = DigitSetFamily.of([[0, 1], [1]], 3)
    assert build_W(fam, ctx) == {(0, 1), (1, 1)}


def test_build_w_with_alternative_basis():
    # basis rows are coordinates of omega_i in the power basis
    ctx = FieldContext(3, 2, basis=[(1, 1), (0, 1)])
    fam = DigitSetFamily.of([[0, 1], [0, 1]], 3)
    w = build_W(fam, ctx)
    assert w == {(0, 0), (1, 1), (0, 1), (1, 2)}
    with pytest.raises(ValidationError):
        FieldContext(3, 2, basis=[(1, 1), (2, 2)])  # singular


def test_family_validation():
    with pytest.raises(ValidationError):
        DigitSetFamily.of([[0], []], 5)
    with pytest.raises(ValidationError):
        DigitSetFamily.of([[0], [5]], 5)


def test_qr_split_w_full_space():
    for p, n in ((3, 2), (5, 2)):
        ctx = FieldContext(p, n)
        fam = DigitSetFamily.of([range(p)] * n, p)
        split = qr_split_W(fam, ctx)
        assert split.plus == split.minus == (p**n - 1) // 2
        assert split.zero == 1


def test_qr_split_w_example_trace():
    ctx = FieldContext(3, 2)
    fam = DigitSetFamily.of([[0, 1], [1]], 3)
    split = qr_split_W(fam, ctx)
    assert (split.plus, split.minus, split.zero) == (1, 1, 0)


def test_qr_split_w_matches_scalar_route():
    rng = random.Random(19)
    for p, n in ((5, 2), (7, 2), (3, 3)):
        ctx = FieldContext(p, n)
        for _ in range(5):
            sizes = [rng.randint(1, p) for _ in range(n)]
            fam = DigitSetFamily.of([rng.sample(range(p), s) for s in sizes], p)
            split = qr_split_W(fam, ctx)
            w = build_W(fam, ctx)
            plus = sum(1 for e in w if quad_char(e, ctx) == 1)
            minus = sum(1 for e in w if quad_char(e, ctx) == -1)
            zero = sum(1 for e in w if quad_char(e, ctx) == 0)
            assert (split.plus, split.minus, split.zero) == (plus, minus, zero)
            assert split.total == fam.product()


def test_qr_split_w_chunked_matches_unchunked():
    rng = random.Random(23)
    ctx = FieldContext(11, 2)
    fam = DigitSetFamily.of([rng.sample(range(11), 7), rng.sample(range(11), 9)], 11)
    a = qr_split_W(fam, ctx)
    b = qr_split_W(fam, ctx, chunk=8)
    assert (a.plus, a.minus, a.zero) == (b.plus, b.minus, b.zero)


def test_check_conditions_examples():
    # n=2, full digit sets: product condition needs epsilon <= 0, so it fails
    ctx2 = FieldContext(5, 2)
    full2 = DigitSetFamily.of([range(5)] * 2, 5)
    rep = check_conditions(full2, ctx2, 0.1)
    assert not rep.product_ok
    assert not rep.in_proved_range
    # n=3, full digit sets: holds up to epsilon = 1/6
    ctx3 = FieldContext(5, 3)
    full3 = DigitSetFamily.of([range(5)] * 3, 5)
    assert check_conditions(full3, ctx3, 0.1).product_ok
    assert not check_conditions(full3, ctx3, 0.2).product_ok
    # min size 1 fails the minimum condition for any eps > 0
    tiny = DigitSetFamily.of([range(5), range(5), [2]], 5)
    rep = check_conditions(tiny, ctx3, 0.1)
    assert not rep.min_ok
    with pytest.raises(ValidationError):
        check_conditions(full3, ctx3, 0.0)


def test_check_conditions_linear_threshold():
    ctx = FieldContext(101, 2)
    big = DigitSetFamily.of([range(101), range(80)], 101)
    rep = check_conditions(big, ctx, 0.05)
    # (sqrt(5)-1)/2 * 101 ~ 62.4; +0.05*101 ~ 67.5; min is 80
    assert rep.linear_ok
    small = DigitSetFamily.of([range(101), range(40)], 101)
    assert not check_conditions(small, ctx, 0.05).linear_ok


def test_split_largest_index_set():
    fam = DigitSetFamily.of([range(4)] * 10, 7)
    res = split_largest_index_set(fam, 0.5)
    assert res.m == 8
    assert res.large == tuple(range(1, 9))
    fam3 = DigitSetFamily.of([range(3)] * 3, 7)
    res3 = split_largest_index_set(fam3, 0.5)
    assert res3.m == 2
    assert res3.large == (1, 2)
    assert res3.small == (3,)
    assert res3.product_bound_ok


def test_split_orders_by_cardinality():
    fam = DigitSetFamily.of([range(2), range(5), range(3)], 7)
    res = split_largest_index_set(fam, 0.5)  # n=3 <= n0 -> m = 2
    assert res.large == (2, 3)
    assert res.small == (1,)
    assert res.large_product == 15
    assert res.product_bound_ok


def test_context_serialization_roundtrip():
    ctx = FieldContext(5, 3, seed=3)
    clone = FieldContext.from_json(ctx.to_json())
    assert clone.p == ctx.p and clone.n == ctx.n
    assert clone.modulus == ctx.modulus
    assert clone.basis == ctx.basis


def test_context_validation():
    with pytest.raises(ValidationError):
        FieldContext(4, 2)
    with pytest.raises(ValidationError):
        FieldContext(3, 1)
    with pytest.raises(ValidationError):
        FieldContext(3, 2, modulus=(2, 0, 1))  # reducible x^2 - 1
