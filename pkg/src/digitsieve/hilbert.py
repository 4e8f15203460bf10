"""Hilbert cubes in F_p: construction, subset sums, progressions, and the
largest cube dimensions f(p) / F(p).

f(p) is the largest d admitting a cube H(a0; a1..ad), with pairwise
distinct generators, whose elements avoid every quadratic non-residue;
F(p) is the analogue avoiding every primitive root.  Element sets are
kept as bitmasks over residues, so extending a cube by a generator is a
single shift-or.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ResourceCapError, ValidationError
from . import primes

MAX_CUBE_DIM = 30
DEFAULT_EXACT_CAP = 40
DEFAULT_RESTARTS = 10_000


@dataclass(frozen=True)
class HilbertCube:
    """A materialized cube H(a0; gens) in F_p."""

    p: int
    a0: int
    gens: tuple[int, ...]
    elements: frozenset[int]

    @property
    def dimension(self) -> int:
        return len(self.gens)


def _rotate(mask: int, g: int, p: int) -> int:
    """Add g to every residue of a p-bit element mask (cyclic shift)."""
    if g == 0:
        return mask
    full = (1 << p) - 1
    return ((mask << g) | (mask >> (p - g))) & full


def _mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def build_cube(p: int, a0: int, gens: Sequence[int], *, dim_cap: int = MAX_CUBE_DIM) -> HilbertCube:
    """Materialize H(a0; gens) incrementally: E_i = E_{i-1} union (E_{i-1} + a_i)."""
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    gens_t = tuple(g % p for g in gens)
    if len(set(gens_t)) != len(gens_t):
        raise ValidationError(f"generators must be pairwise distinct mod {p}")
    if len(gens_t) > dim_cap:
        raise ResourceCapError(f"dimension {len(gens_t)} exceeds cap {dim_cap}")
    mask = 1 << (a0 % p)
    for g in gens_t:
        mask |= _rotate(mask, g, p)
    return HilbertCube(p=p, a0=a0 % p, gens=gens_t, elements=_mask_to_set(mask))


def subset_sums_k(s: Iterable[int], k: int, p: int) -> frozenset[int]:
    """All sums of k-element subsets of s, exactly (bitset dynamic program)."""
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    elems = sorted({x % p for x in s})
    if not 0 <= k <= len(elems):
        raise ValidationError(f"k must be in [0, {len(elems)}], got {k}")
    # dp[c] = bitmask of sums reachable with exactly c chosen elements
    dp = [0] * (k + 1)
    dp[0] = 1
    for x in elems:
        for c in range(min(k, len(dp) - 1), 0, -1):
            dp[c] |= _rotate(dp[c - 1], x, p)
    result = _mask_to_set(dp[k])
    # Dias da Silva-Hamidoune lower bound; a violation means a DP bug
    assert len(result) >= min(p, k * len(elems) - k * k + 1)
    return result


def sigma_star(s: Iterable[int], p: int) -> frozenset[int]:
    """Union of k-element subset sums over all k (the closure 0 -> +x)."""
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    elems = sorted({x % p for x in s})
    if not elems:
        raise ValidationError("empty set")
    mask = 1
    for x in elems:
        mask |= _rotate(mask, x, p)
    result = _mask_to_set(mask)
    half = len(elems) // 2
    assert len(result) >= min(p, half * (len(elems) - half) + 1)
    return result


@dataclass(frozen=True)
class ArithmeticProgression:
    start: int
    difference: int
    length: int

    def elements(self, p: int) -> list[int]:
        return [(self.start + i * self.difference) % p for i in range(self.length)]


def longest_ap(s: Iterable[int], p: int) -> ArithmeticProgression:
    """Maximum-length arithmetic progression (mod p, wraparound allowed) in s.

    Scans every difference 1..(p-1)/2 with a linear pass along the cycle
    x -> x + delta; differences above (p-1)/2 repeat earlier progressions
    reversed.  Ties prefer the smaller difference, then the smaller start.
    """
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    elems = {x % p for x in s}
    if not elems:
        raise ValidationError("empty set")
    if len(elems) == p:
        return ArithmeticProgression(start=0, difference=1, length=p)
    best = ArithmeticProgression(start=min(elems), difference=1, length=1)
    for delta in range(1, max(1, (p - 1) // 2) + 1):
        # two passes along the cycle so runs through the seam at x=0 are seen whole
        run = 0
        x = 0
        for step in range(2 * p):
            if x in elems:
                run += 1
                length = min(run, p)
                start = (x - (run - 1) * delta) % p
                if length > best.length or (
                    length == best.length and delta == best.difference and start < best.start
                ):
                    best = ArithmeticProgression(start=start, difference=delta, length=length)
            else:
                run = 0
                if step >= p:
                    break
            x = (x + delta) % p
    return best


@dataclass(frozen=True)
class CubeSearchResult:
    """Outcome of a largest-cube search against a forbidden set."""

    p: int
    dimension: int
    witness: HilbertCube
    exact: bool
    forbidden: frozenset[int]


def max_cube_dimension(
    p: int,
    forbidden: Iterable[int],
    *,
    allow_zero_gen: bool = True,
    exact_cap: int = DEFAULT_EXACT_CAP,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> CubeSearchResult:
    """Largest cube dimension whose element set avoids ``forbidden``.

    For p <= exact_cap the search is an exhaustive depth-first scan over
    base points and ascending generator tuples, pruning as soon as a
    forbidden element appears, so the result is exact.  Beyond the cap a
    seeded randomized greedy provides a lower bound (exact=False).
    """
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    fset = frozenset(x % p for x in forbidden)
    if len(fset) >= p:
        raise ValidationError("forbidden set covers all of F_p")
    fmask = 0
    for x in fset:
        fmask |= 1 << x
    if p <= exact_cap:
        dim, a0, gens = _search_exact(p, fmask, allow_zero_gen)
        exact = True
    else:
        dim, a0, gens = _search_greedy(p, fmask, allow_zero_gen, restarts, seed)
        exact = False
    witness = build_cube(p, a0, gens, dim_cap=max(MAX_CUBE_DIM, dim))
    if witness.elements & fset:
        raise AssertionError("witness touches the forbidden set; this is a bug")
    return CubeSearchResult(p=p, dimension=dim, witness=witness, exact=exact, forbidden=fset)


def _search_exact(p: int, fmask: int, allow_zero_gen: bool) -> tuple[int, int, tuple[int, ...]]:
    best_d = -1
    best_witness: tuple[int, tuple[int, ...]] = (0, ())
    first_gen = 0 if allow_zero_gen else 1
    gens: list[int] = []

    def dfs(a0: int, emask: int, next_g: int) -> None:
        nonlocal best_d, best_witness
        d = len(gens)
        if d > best_d:
            best_d = d
            best_witness = (a0, tuple(gens))
        for g in range(next_g, p):
            if d + (p - g) <= best_d:
                break  # not enough candidates left to improve
            new = emask | _rotate(emask, g, p)
            if new & fmask:
                continue
            gens.append(g)
            dfs(a0, new, g + 1)
            gens.pop()

    for a0 in range(p):
        if (1 << a0) & fmask:
            continue
        dfs(a0, 1 << a0, first_gen)
    if best_d < 0:
        raise ValidationError("no base point avoids the forbidden set")
    return best_d, best_witness[0], best_witness[1]


def _search_greedy(
    p: int, fmask: int, allow_zero_gen: bool, restarts: int, seed: int
) -> tuple[int, int, tuple[int, ...]]:
    rng = random.Random(seed)
    allowed = [x for x in range(p) if not ((1 << x) & fmask)]
    if not allowed:
        raise ValidationError("no base point avoids the forbidden set")
    candidates = list(range(0 if allow_zero_gen else 1, p))
    best: tuple[int, int, tuple[int, ...]] = (0, allowed[0], ())
    for _ in range(restarts):
        a0 = rng.choice(allowed)
        emask = 1 << a0
        order = candidates[:]
        rng.shuffle(order)
        gens: list[int] = []
        for g in order:
            new = emask | _rotate(emask, g, p)
            if new & fmask:
                continue
            emask = new
            gens.append(g)
        if len(gens) > best[0]:
            best = (len(gens), a0, tuple(sorted(gens)))
    return best


def _cube_avoids_brute(p: int, a0: int, gens: tuple[int, ...], fset: frozenset[int]) -> bool:
    """Literal definition check: visit all 2^d indicator vectors in Gray order."""
    v = a0 % p
    if v in fset:
        return False
    state = 0
    for c in range(1, 1 << len(gens)):
        flip = (c ^ (c >> 1)) ^ state  # Gray code of c differs from state in one bit
        state ^= flip
        i = flip.bit_length() - 1
        if state & flip:
            v = (v + gens[i]) % p
        else:
            v = (v - gens[i]) % p
        if v in fset:
            return False
    return True


def max_cube_dimension_brute(
    p: int,
    forbidden: Iterable[int],
    *,
    allow_zero_gen: bool = True,
    dim_limit: int | None = None,
) -> CubeSearchResult:
    """Independent oracle for :func:`max_cube_dimension`.

    Iterates dimensions upward; for each, tries every (a0, generator
    combination) and walks all 2^d indicator vectors of the cube in Gray
    order, aborting on the first forbidden element.  No incremental
    element sets and no pruning are shared with the main search.
    """
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    fset = frozenset(x % p for x in forbidden)
    if len(fset) >= p:
        raise ValidationError("forbidden set covers all of F_p")
    candidates = range(0 if allow_zero_gen else 1, p)
    best: tuple[int, int, tuple[int, ...]] | None = None
    for a0 in range(p):
        if a0 not in fset:
            best = (0, a0, ())
            break
    if best is None:
        raise ValidationError("no base point avoids the forbidden set")
    d = 1
    exhausted = True
    while dim_limit is None or d <= dim_limit:
        found = None
        for gens in combinations(candidates, d):
            for a0 in range(p):
                if a0 in fset:
                    continue
                if _cube_avoids_brute(p, a0, gens, fset):
                    found = (d, a0, gens)
                    break
            if found:
                break
        if not found:
            break
        best = found
        d += 1
    else:
        exhausted = False  # stopped by dim_limit, not by failure to extend
    dim, a0, gens = best
    witness = build_cube(p, a0, gens)
    return CubeSearchResult(p=p, dimension=dim, witness=witness, exact=exhausted, forbidden=fset)


def primitive_root_test(g: int, p: int) -> bool:
    """True when g generates the multiplicative group mod p."""
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    g %= p
    if g == 0:
        raise ValidationError("0 is not a unit mod p")
    if p == 2:
        return g == 1
    for ell in primes.distinct_prime_factors(p - 1):
        if pow(g, (p - 1) // ell, p) == 1:
            return False
    return True


def primitive_roots(p: int) -> frozenset[int]:
    """All primitive roots mod p, via powers of one generator."""
    if not primes.is_prime(p):
        raise ValidationError(f"p must be prime, got {p}")
    if p == 2:
        return frozenset({1})
    g = 2
    while not primitive_root_test(g, p):
        g += 1
    out = set()
    x = 1
    for k in range(1, p - 1):
        x = x * g % p
        if math.gcd(k, p - 1) == 1:
            out.add(x)
    return frozenset(out)


@dataclass(frozen=True)
class FAndF:
    """f(p) and F(p) with the reference bounds they are compared against."""

    p: int
    f: CubeSearchResult
    F: CubeSearchResult
    bound_12_p14: float  # 12 * p^(1/4)
    bound_p_319: float  # p^(3/19)

    def record(self) -> dict:
        return {
            "p": self.p,
            "f": self.f.dimension,
            "f_exact": self.f.exact,
            "f_witness": {"a0": self.f.witness.a0, "gens": list(self.f.witness.gens)},
            "F": self.F.dimension,
            "F_exact": self.F.exact,
            "F_witness": {"a0": self.F.witness.a0, "gens": list(self.F.witness.gens)},
            "bound_12p14": self.bound_12_p14,
            "bound_p319": self.bound_p_319,
        }


def compute_f_and_F(
    p: int,
    *,
    allow_zero_gen: bool = True,
    exact_cap: int = DEFAULT_EXACT_CAP,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
) -> FAndF:
    """Largest cube dimensions avoiding non-residues (f) and primitive roots (F).

    0 is neither residue nor non-residue, so the f-search forbids only the
    (p-1)/2 proper non-residues.  Every primitive root is a non-residue,
    hence f <= F whenever both searches are exact.
    """
    primes.require_odd_prime(p)
    nonresidues = {x for x in range(1, p) if pow(x, (p - 1) // 2, p) == p - 1}
    proots = primitive_roots(p)
    f_res = max_cube_dimension(
        p, nonresidues, allow_zero_gen=allow_zero_gen, exact_cap=exact_cap, restarts=restarts, seed=seed
    )
    big_f_res = max_cube_dimension(
        p, proots, allow_zero_gen=allow_zero_gen, exact_cap=exact_cap, restarts=restarts, seed=seed
    )
    if f_res.exact and big_f_res.exact and f_res.dimension > big_f_res.dimension:
        raise AssertionError("f(p) > F(p); this contradicts forbidden-set inclusion and is a bug")
    return FAndF(
        p=p,
        f=f_res,
        F=big_f_res,
        bound_12_p14=12.0 * p**0.25,
        bound_p_319=p ** (3.0 / 19.0),
    )
