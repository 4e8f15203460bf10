"""Arithmetic in F_{p^n} over a polynomial basis, and quadratic-residue
splits of restricted-digit sets.

Field elements are coefficient tuples in the power basis of a monic
irreducible modulus, low degree first.  A restricted-digit set W is built
from a basis omega_1..omega_n and per-coordinate digit sets A_1..A_n as
all combinations a_1*omega_1 + ... + a_n*omega_n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from itertools import product as iter_product
from typing import Iterable, Sequence

import numpy as np

from .charsums import CharContext
from .errors import ResourceCapError, ValidationError
from . import primes

Element = tuple[int, ...]

DEFAULT_W_CAP = 1 << 26
BATCH_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (lists, low degree first)


def _poly_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    # f monic
    r = [x % p for x in a]
    df = len(f) - 1
    while len(r) - 1 >= df and any(r):
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - df
            for i, fi in enumerate(f):
                r[i + shift] = (r[i + shift] - lead * fi) % p
        _poly_trim(r)
    return _poly_trim(r)


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    x, y = _poly_trim([v % p for v in a]), _poly_trim([v % p for v in b])
    while any(y):
        # make y monic before reducing
        inv = pow(y[-1], p - 2, p)
        y = [v * inv % p for v in y]
        x, y = y, _poly_mod(x, y, p)
    inv = pow(x[-1], p - 2, p) if any(x) else 1
    return [v * inv % p for v in x]


def _poly_x_pow(e: int, f: Sequence[int], p: int) -> list[int]:
    """x^e mod f by square and multiply."""
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _frobenius_matrix(f: Sequence[int], p: int) -> list[list[int]]:
    """Row i = coefficients of x^(i*p) mod f; the p-power map is F_p-linear."""
    n = len(f) - 1
    xp = _poly_x_pow(p, f, p)
    rows = [[1] + [0] * (n - 1)]
    cur = [1]
    for _ in range(1, n):
        cur = _poly_mod(_poly_mul(cur, xp, p), f, p)
        rows.append(cur + [0] * (n - len(cur)))
    return rows


def _apply_matrix(vec: Sequence[int], m: list[list[int]], p: int) -> list[int]:
    n = len(m)
    out = [0] * n
    for i, c in enumerate(vec):
        if c:
            row = m[i]
            for j in range(n):
                out[j] = (out[j] + c * row[j]) % p
    return out


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p of a monic polynomial, by the Frobenius criterion:
    x^(p^n) = x mod f and gcd(x^(p^(n/l)) - x, f) = 1 for every prime l | n."""
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise ValidationError("modulus must be monic of degree >= 1")
    if n == 1:
        return True
    if f[0] == 0:
        return False  # divisible by x
    frob = _frobenius_matrix(f, p)
    x_vec = [0, 1] + [0] * (n - 2)
    powers = {0: x_vec}
    cur = x_vec
    for k in range(1, n + 1):
        cur = _apply_matrix(cur, frob, p)
        powers[k] = cur
    if _poly_trim(list(powers[n])) != [0, 1]:
        return False
    for ell in primes.distinct_prime_factors(n):
        w = list(powers[n // ell])
        w[1] = (w[1] - 1) % p
        g = _poly_gcd(w, f, p)
        if len(_poly_trim(g)) > 1:
            return False
    return True


def find_irreducible(p: int, n: int, seed: int = 0) -> tuple[int, ...]:
    """Deterministic-from-seed monic irreducible of degree n over F_p.

    Scans candidates in a fixed cyclic order starting at an offset derived
    from the seed, so seed 0 returns the lexicographically first hit.
    """
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    if not 2 <= n <= 8:
        raise ValidationError(f"degree must be in [2, 8], got {n}")
    space = p**n
    start = seed % space
    for idx in range(space):
        c = (start + idx) % space
        coeffs = []
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue  # root at 0
        f = tuple(coeffs) + (1,)
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found; this cannot happen")


# ---------------------------------------------------------------------------


class FieldContext:
    """F_{p^n} with a fixed modulus and a (possibly non-power) working basis."""

    def __init__(
        self,
        p: int,
        n: int,
        modulus: Sequence[int] | None = None,
        basis: Sequence[Sequence[int]] | None = None,
        *,
        seed: int = 0,
    ):
        if not primes.is_prime(p):
            raise ValidationError(f"p must be prime, got {p}")
        if n < 2:
            raise ValidationError(f"extension degree must be >= 2, got {n}")
        self.p = p
        self.n = n
        if modulus is None:
            modulus = find_irreducible(p, n, seed)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValidationError(f"modulus must be monic of degree {n}")
        if not is_irreducible(modulus, p):
            raise ValidationError("modulus is reducible")
        self.modulus = modulus
        if basis is None:
            rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        else:
            rows = [[int(c) % p for c in row] for row in basis]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise ValidationError(f"basis must be {n}x{n}")
            if not self._invertible(rows):
                raise ValidationError("basis matrix is singular mod p")
        self.basis = tuple(tuple(r) for r in rows)
        # x^(n+j) mod modulus, used to fold products back below degree n
        self._reduction = []
        cur = list(self.modulus[:-1])
        cur = [(-c) % p for c in cur]  # x^n = -(lower part)
        self._reduction.append(cur[:])
        for _ in range(n - 2):
            cur = [0] + cur
            over = cur[n:]
            cur = cur[:n]
            for k, c in enumerate(over):
                if c:
                    red = self._reduction[k]
                    for j in range(n):
                        cur[j] = (cur[j] + c * red[j]) % p
            self._reduction.append(cur[:])
        self._frobenius = _frobenius_matrix(self.modulus, p)

    def _invertible(self, rows: list[list[int]]) -> bool:
        m = [row[:] for row in rows]
        p = self.p
        n = self.n
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] % p != 0), None)
            if pivot is None:
                return False
            m[col], m[pivot] = m[pivot], m[col]
            inv = pow(m[col][col], p - 2, p)
            m[col] = [v * inv % p for v in m[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    factor = m[r][col]
                    m[r] = [(a - factor * b) % p for a, b in zip(m[r], m[col])]
        return True

    # -- element arithmetic (power-basis coefficient tuples) ----------------

    @property
    def zero(self) -> Element:
        return (0,) * self.n

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.n - 1)

    def element(self, coeffs: Sequence[int]) -> Element:
        if len(coeffs) != self.n:
            raise ValidationError(f"element needs {self.n} coefficients")
        return tuple(c % self.p for c in coeffs)

    def add(self, u: Element, v: Element) -> Element:
        return tuple((a + b) % self.p for a, b in zip(u, v))

    def sub(self, u: Element, v: Element) -> Element:
        return tuple((a - b) % self.p for a, b in zip(u, v))

    def mul(self, u: Element, v: Element) -> Element:
        p, n = self.p, self.n
        conv = [0] * (2 * n - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    conv[i + j] = (conv[i + j] + a * b) % p
        out = conv[:n]
        for k in range(n, 2 * n - 1):
            c = conv[k]
            if c:
                red = self._reduction[k - n]
                for j in range(n):
                    out[j] = (out[j] + c * red[j]) % p
        return tuple(out)

    def pow(self, u: Element, e: int) -> Element:
        if e < 0:
            raise ValidationError("negative exponents not supported")
        result = self.one
        base = u
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, u: Element) -> Element:
        return tuple(_apply_matrix(u, self._frobenius, self.p))

    def norm(self, u: Element) -> int:
        """Norm down to F_p: the product of all n Frobenius conjugates."""
        acc = u
        cur = u
        for _ in range(self.n - 1):
            cur = self.frobenius(cur)
            acc = self.mul(acc, cur)
        if any(acc[1:]):
            raise AssertionError("norm is not in the base field; this is a bug")
        return acc[0]

    def combine(self, digits: Sequence[int]) -> Element:
        """Map digit coordinates (a_1..a_n) through the working basis."""
        out = [0] * self.n
        for a, row in zip(digits, self.basis):
            if a:
                for j in range(self.n):
                    out[j] = (out[j] + a * row[j]) % self.p
        return tuple(out)

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "n": self.n,
                "modulus": list(self.modulus),
                "basis": [list(r) for r in self.basis],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FieldContext":
        data = json.loads(text)
        return cls(data["p"], data["n"], data["modulus"], data["basis"])


def quad_char(w: Element, ctx: FieldContext) -> int:
    """Quadratic character of F_{p^n}: w^((p^n - 1)/2) mapped to {-1, 0, +1}."""
    if ctx.p == 2:
        raise ValidationError("no quadratic character in characteristic 2")
    if not any(w):
        return 0
    r = ctx.pow(w, (ctx.p**ctx.n - 1) // 2)
    if r == ctx.one:
        return 1
    minus_one = ((ctx.p - 1),) + (0,) * (ctx.n - 1)
    if r == minus_one:
        return -1
    raise AssertionError("character value outside {-1, 0, 1}; this is a bug")


@dataclass(frozen=True)
class DigitSetFamily:
    """Per-coordinate digit sets A_1..A_n inside F_p."""

    sets: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], p: int) -> "DigitSetFamily":
        rows = []
        for i, s in enumerate(sets, start=1):
            vals = sorted({int(x) for x in s})
            if not vals:
                raise ValidationError(f"digit set {i} is empty")
            if vals[0] < 0 or vals[-1] >= p:
                raise ValidationError(f"digit set {i} has residues outside [0, {p})")
            rows.append(tuple(vals))
        if not rows:
            raise ValidationError("family needs at least one digit set")
        return cls(sets=tuple(rows))

    @property
    def n(self) -> int:
        return len(self.sets)

    def product(self) -> int:
        return reduce(lambda a, b: a * len(b), self.sets, 1)

    def minimum(self) -> int:
        return min(len(s) for s in self.sets)

    def to_json(self) -> str:
        return json.dumps([list(s) for s in self.sets])


def build_W(family: DigitSetFamily, ctx: FieldContext, *, cap: int = DEFAULT_W_CAP) -> set[Element]:
    """Materialize the restricted-digit set; its size is exactly the product
    of the digit-set sizes because the basis combinations are all distinct."""
    if family.n != ctx.n:
        raise ValidationError(f"family has {family.n} digit sets, field degree is {ctx.n}")
    total = family.product()
    if total > cap:
        raise ResourceCapError(f"W would have {total} elements, cap is {cap}")
    out = {ctx.combine(digits) for digits in iter_product(*family.sets)}
    if len(out) != total:
        raise AssertionError("digit combinations collided; basis is not a basis")
    return out


@dataclass(frozen=True)
class WSplit:
    """Quadratic-character census of a restricted-digit set."""

    plus: int
    minus: int
    zero: int
    deviation: float  # |plus/total - 1/2|

    @property
    def total(self) -> int:
        return self.plus + self.minus + self.zero


def _batch_mul(u: np.ndarray, v: np.ndarray, red: np.ndarray, p: int) -> np.ndarray:
    n = u.shape[1]
    conv = np.zeros((u.shape[0], 2 * n - 1), dtype=np.int64)
    for i in range(n):
        col = u[:, i : i + 1]
        conv[:, i : i + n] += col * v
    conv %= p
    out = (conv[:, :n] + conv[:, n:] @ red) % p
    return out


def qr_split_W(
    family: DigitSetFamily,
    ctx: FieldContext,
    *,
    cap: int = DEFAULT_W_CAP,
    chunk: int = BATCH_CHUNK,
) -> WSplit:
    """Count quadratic residues / non-residues / zeros across W.

    Streams coordinate combinations in fixed-size chunks and evaluates the
    character as the Legendre symbol of the field norm, which vectorizes;
    the scalar quad_char route is used for small inputs and in tests to
    pin the two evaluations together.
    """
    if ctx.p == 2:
        raise ValidationError("no quadratic character in characteristic 2")
    if family.n != ctx.n:
        raise ValidationError(f"family has {family.n} digit sets, field degree is {ctx.n}")
    total = family.product()
    if total > cap:
        raise ResourceCapError(f"W would have {total} elements, cap is {cap}")
    p, n = ctx.p, ctx.n
    sizes = [len(s) for s in family.sets]
    value_arrays = [np.array(s, dtype=np.int64) for s in family.sets]
    basis = np.array(ctx.basis, dtype=np.int64)
    red = np.array(ctx._reduction, dtype=np.int64)
    frob = np.array(ctx._frobenius, dtype=np.int64)
    chi = CharContext(p)
    plus = minus = zero = 0
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((stop - start, n), dtype=np.int64)
        for i in range(n - 1, -1, -1):
            digits[:, i] = value_arrays[i][idx % sizes[i]]
            idx //= sizes[i]
        rows = (digits @ basis) % p
        acc = rows
        cur = rows
        for _ in range(n - 1):
            cur = (cur @ frob) % p
            acc = _batch_mul(acc, cur, red, p)
        if np.any(acc[:, 1:]):
            raise AssertionError("norm left the base field; this is a bug")
        chis = chi.chi_array(acc[:, 0])
        plus += int(np.count_nonzero(chis == 1))
        minus += int(np.count_nonzero(chis == -1))
        zero += int(np.count_nonzero(chis == 0))
    return WSplit(plus=plus, minus=minus, zero=zero, deviation=abs(plus / total - 0.5))


GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ConditionsReport:
    """Which size conditions the digit-set family meets, for a given epsilon."""

    epsilon: float
    product: int
    minimum: int
    product_logp: float  # log_p of the product
    required_product_logp: float  # (1/2 + eps) * n^2 / (n - 1)
    required_min: float  # p^eps
    required_linear_min: float  # ((sqrt(5)-1)/2 + eps) * p
    product_ok: bool
    min_ok: bool
    linear_ok: bool  # the older linear-in-p threshold

    @property
    def in_proved_range(self) -> bool:
        return self.product_ok and self.min_ok


def check_conditions(family: DigitSetFamily, ctx: FieldContext, epsilon: float) -> ConditionsReport:
    """Evaluate the product/minimum size conditions and the older linear one."""
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    p, n = ctx.p, family.n
    product = family.product()
    minimum = family.minimum()
    product_logp = math.log(product) / math.log(p)
    required = (0.5 + epsilon) * n * n / (n - 1)
    required_min = p**epsilon
    required_linear = (GOLDEN_FRACTION + epsilon) * p
    return ConditionsReport(
        epsilon=epsilon,
        product=product,
        minimum=minimum,
        product_logp=product_logp,
        required_product_logp=required,
        required_min=required_min,
        required_linear_min=required_linear,
        product_ok=product_logp >= required,
        min_ok=minimum >= required_min,
        linear_ok=minimum >= required_linear,
    )


@dataclass(frozen=True)
class IndexSplit:
    """Large/small coordinate split used to factor W into a sumset."""

    m: int
    large: tuple[int, ...]  # 1-based positions of the m largest digit sets
    small: tuple[int, ...]
    large_product: int
    product_bound: float  # (total product)^(m/n)

    @property
    def product_bound_ok(self) -> bool:
        return self.large_product >= self.product_bound * (1 - 1e-12)


def split_largest_index_set(family: DigitSetFamily, epsilon: float) -> IndexSplit:
    """Pick the m largest digit sets (ties to the lower index).

    m = ceil((1 + eps) * n / (1 + 2*eps)) for n above the threshold
    ceil(4/eps); below it, m = n - 1.  Positions are 1-based, matching
    the usual numbering of the sets.
    """
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    n = family.n
    n0 = math.ceil(4.0 / epsilon)
    if n > n0:
        m = math.ceil((1.0 + epsilon) * n / (1.0 + 2.0 * epsilon))
    else:
        m = n - 1
    m = max(1, min(m, n))
    order = sorted(range(n), key=lambda i: (-len(family.sets[i]), i))
    large = tuple(sorted(i + 1 for i in order[:m]))
    small = tuple(sorted(i + 1 for i in order[m:]))
    large_product = 1
    for i in large:
        large_product *= len(family.sets[i - 1])
    bound = family.product() ** (m / n)
    return IndexSplit(m=m, large=large, small=small, large_product=large_product, product_bound=bound)
