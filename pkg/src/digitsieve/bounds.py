"""Decay exponents for congruence counts, and 2-D lattice reduction.

The central quantity is the exponent pair: tau(kappa, rho) is the root
in [0, rho] of  t^2 - t(1 + rho) + rho(1 - kappa) = 0, and
theta = tau / rho governs the predicted ceiling  total * q^(-theta)
for the number of members divisible by q = 2^(rho * n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .patterns import DigitPattern, count_multiples


def tau(kappa: float, rho: float) -> float:
    """The root (1 + rho - sqrt((1 - rho)^2 + 4*rho*kappa)) / 2."""
    if not 0.0 <= kappa < 1.0:
        raise ValidationError(f"kappa must be in [0, 1), got {kappa}")
    if not 0.0 < rho <= 1.0:
        raise ValidationError(f"rho must be in (0, 1], got {rho}")
    disc = (1.0 - rho) ** 2 + 4.0 * rho * kappa
    return (1.0 + rho - math.sqrt(disc)) / 2.0


def theta(kappa: float, rho: float) -> float:
    """tau / rho; decreasing in rho, with limit 1 - kappa as rho -> 0."""
    return tau(kappa, rho) / rho


def predicted_med_q_exponent(kappa: float, rho: float) -> float:
    """Exponent theta in the ceiling  total * q^(-theta)  for medium q."""
    return theta(kappa, rho)


def predicted_two_window_exponent(kappa: float, rho: float) -> float:
    """Signed decay exponent -1 + kappa/(2*rho), valid for kappa/2 <= rho <= 1/2."""
    if not 0.0 <= kappa < 1.0:
        raise ValidationError(f"kappa must be in [0, 1), got {kappa}")
    if not kappa / 2.0 <= rho <= 0.5:
        raise ValidationError(f"rho must be in [kappa/2, 1/2], got rho={rho} for kappa={kappa}")
    return -1.0 + kappa / (2.0 * rho)


@dataclass(frozen=True)
class BoundParams:
    """(kappa, rho) with the derived exponents."""

    kappa: float
    rho: float
    tau: float
    theta: float

    @classmethod
    def from_ratios(cls, kappa: float, rho: float) -> "BoundParams":
        t = tau(kappa, rho)
        return cls(kappa=kappa, rho=rho, tau=t, theta=t / rho)

    def residual(self) -> float:
        """Value of the defining quadratic at tau; ~0 up to rounding."""
        return self.tau**2 - self.tau * (1.0 + self.rho) + self.rho * (1.0 - self.kappa)


@dataclass(frozen=True)
class CongDecayRow:
    """One measured-vs-predicted entry of the decay table."""

    q: int
    rho: float
    count: int
    predicted_exponent: float
    measured_exponent: float

    CSV_FIELDS = ("q", "rho", "count", "predicted_exponent", "measured_exponent")

    def row(self) -> dict:
        return {
            "q": self.q,
            "rho": self.rho,
            "count": self.count,
            "predicted_exponent": self.predicted_exponent,
            "measured_exponent": self.measured_exponent,
        }


def measure_cong_decay(pattern: DigitPattern, q_list: Sequence[int]) -> list[CongDecayRow]:
    """Exact divisibility counts against the predicted decay exponent.

    The measured exponent is log_q(total / max(count, 1)); the predicted
    one is theta(kappa, rho) with rho = log2(q)/n.
    """
    if not q_list:
        raise ValidationError("empty modulus list")
    rows = []
    total = pattern.member_count()
    for q in q_list:
        if q < 2:
            raise ValidationError(f"modulus must be >= 2, got {q}")
        rho = math.log2(q) / pattern.n
        count = count_multiples(pattern, q).count
        measured = math.log(total / max(count, 1)) / math.log(q)
        predicted = theta(pattern.kappa, min(rho, 1.0))
        rows.append(
            CongDecayRow(q=q, rho=rho, count=count, predicted_exponent=predicted, measured_exponent=measured)
        )
    return rows


@dataclass(frozen=True)
class DyadicSquareSum:
    """Exact sum of #{members divisible by q^2} over a dyadic window."""

    a: int
    value: int
    reference: float  # total * a^(-epsilon/2)
    epsilon: float


def measure_dyadic_square_sum(pattern: DigitPattern, a: int, *, epsilon: float = 0.1) -> DyadicSquareSum:
    """Sum #{members divisible by q^2} over A < q <= 2A."""
    if a < 2:
        raise ValidationError(f"window start must be >= 2, got {a}")
    value = 0
    for q in range(a + 1, 2 * a + 1):
        value += count_multiples(pattern, q * q).count
    reference = pattern.member_count() * a ** (-epsilon / 2.0)
    return DyadicSquareSum(a=a, value=value, reference=reference, epsilon=epsilon)


Vec = tuple[int, int]


def _norm_sq(v: Vec) -> int:
    return v[0] * v[0] + v[1] * v[1]


def _dot(u: Vec, v: Vec) -> int:
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True)
class LatticeMinima2D:
    """Gauss-reduced basis with successive minima in the Euclidean norm."""

    basis: tuple[Vec, Vec]  # reduced; basis[0] realizes lambda1, basis[1] lambda2
    lambda1_sq: int
    lambda2_sq: int
    shortest_vector: Vec

    @property
    def lambda1(self) -> float:
        return math.sqrt(self.lambda1_sq)

    @property
    def lambda2(self) -> float:
        return math.sqrt(self.lambda2_sq)

    @property
    def determinant(self) -> int:
        (a, b), (c, d) = self.basis
        return abs(a * d - b * c)


def gauss_reduce(basis: Sequence[Vec]) -> LatticeMinima2D:
    """Gauss-Lagrange reduction in exact integer arithmetic.

    The reduced basis of a 2-D lattice realizes both successive minima:
    the first vector is a shortest nonzero vector, the second a shortest
    one independent of it.
    """
    if len(basis) != 2:
        raise ValidationError("need exactly two basis vectors")
    u = (int(basis[0][0]), int(basis[0][1]))
    v = (int(basis[1][0]), int(basis[1][1]))
    if u[0] * v[1] - u[1] * v[0] == 0:
        raise ValidationError("basis vectors are linearly dependent")
    if _norm_sq(u) > _norm_sq(v):
        u, v = v, u
    while True:
        # nearest-integer quotient, exact: floor(dot/norm + 1/2)
        n = _norm_sq(u)
        t = (2 * _dot(u, v) + n) // (2 * n)
        v = (v[0] - t * u[0], v[1] - t * u[1])
        if _norm_sq(v) >= n:
            break
        u, v = v, u
    return LatticeMinima2D(
        basis=(u, v),
        lambda1_sq=_norm_sq(u),
        lambda2_sq=_norm_sq(v),
        shortest_vector=u,
    )


def congruence_lattice_basis(r: int, q: int) -> tuple[Vec, Vec]:
    """Basis {(1, -2^r), (0, q^2)} of the solution lattice of 2^r * a + c = 0 (mod q^2)."""
    return ((1, -(1 << r)), (0, q * q))
