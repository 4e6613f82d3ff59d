"""Characterized subgroups of the circle group T = R/Z

For a strictly increasing sequence B = (n_k) of positive integers,
`t_B(T) = {x in T : n_k x → 0 in T}`. For a rational point x = p/q the
question is exact: it reduces to the residues of n_k modulo q. For a real
point it can only be probed up to a horizon, at a declared precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Sequence, Tuple

import mpmath

from ..core.errors import ParseError, PrecisionExceededError, PreconditionError
from .measure_category import EstimateReport
from .misc import logger
from .sampling import tally
from .sequences import Polynomial, Recurrence, SequenceFamily


@dataclass(frozen=True)
class RationalPoint:
    """The point p/q of T, with gcd(p, q) = 1 and 0 <= p < q"""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise PreconditionError("point", f"denominator must be >= 1, got {self.q}")
        if not 0 <= self.p < self.q or gcd(self.p, self.q) != 1:
            raise PreconditionError(
                "point", f"{self.p}/{self.q} is not reduced into [0, 1)"
            )

    @classmethod
    def of(cls, value: Fraction | int | str) -> "RationalPoint":
        """Reduce any rational into [0, 1)"""
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(
                f"expected a rational 'p/q', got {value!r}", field="point"
            ) from None
        frac -= frac.numerator // frac.denominator
        return cls(frac.numerator, frac.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


class Membership(str, Enum):
    MEMBER = "MEMBER"
    NON_MEMBER = "NON_MEMBER"


@dataclass(frozen=True)
class MembershipResult:
    """Exact membership of a rational point

    Attributes:
        verdict: MEMBER or NON_MEMBER
        index: For members, the least n0 with n_k x = 0 in T for all k >= n0
        cycle_start: Index where the residues of n_k mod q start to repeat
        cycle: The repeating residues of n_k mod q
    """

    verdict: Membership
    index: int | None
    cycle_start: int
    cycle: Tuple[int, ...]

    @property
    def cycle_length(self) -> int:
        return len(self.cycle)


def check_sequence(
    sequence: SequenceFamily,
    terms: int = 1,
    field: str = "sequence",
) -> None:
    """A sequence for characterized subgroups: positive, increasing from n_0

    Raises:
        PreconditionError: The sequence is not such a sequence, or has fewer
            than `terms` terms; `field` names the parameter asking for them
    """
    if sequence.length == 0:
        raise PreconditionError("sequence", "must not be empty")
    if sequence.length is not None and sequence.length < terms:
        raise PreconditionError(
            field, f"needs {terms} term(s), the sequence has {sequence.length}"
        )
    if isinstance(sequence, Polynomial) and sequence.strict_from:
        raise PreconditionError(
            "sequence",
            f"terms must increase from the first one, "
            f"they do from k={sequence.strict_from}",
        )
    if sequence.term(0) < 1:
        raise PreconditionError(
            "sequence", f"terms must be positive, the first is {sequence.term(0)}"
        )


def rational_membership(
    x: RationalPoint,
    sequence: SequenceFamily,
    max_states: int = 10**6,
) -> MembershipResult:
    """Decide whether x = p/q lies in t_B(T)

    n_k p/q is 0 in T iff q divides n_k (p is coprime to q). The residues of
    n_k mod q are eventually periodic, so x is a member iff the cycle is all
    zeros, and then the members index is one past the last non-zero residue.

    Raises:
        UnsupportedFamilyError: The family has no exact residue dynamics
    """
    check_sequence(sequence)
    orbit = sequence.residue_orbit(x.q, max_states)
    if isinstance(sequence, Recurrence):
        sequence.verify_increasing(orbit.cycle_start + len(orbit.cycle))
    logger.debug(
        "%s mod %s: preperiod %s, cycle %s",
        sequence, x.q, orbit.preperiod, orbit.cycle,
    )
    if any(orbit.cycle):
        return MembershipResult(
            Membership.NON_MEMBER, None, orbit.cycle_start, orbit.cycle
        )
    index = 0
    for k, residue in enumerate(orbit.preperiod):
        if residue:
            index = k + 1
    return MembershipResult(
        Membership.MEMBER, index, orbit.cycle_start, orbit.cycle
    )


class FloatVerdict(str, Enum):
    APPEARS_MEMBER = "APPEARS_MEMBER"
    APPEARS_NON_MEMBER = "APPEARS_NON_MEMBER"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ProbeReport:
    """Distances ‖n_k x‖ for k <= horizon and a tail verdict

    The verdict never claims membership; it only says what the probed range
    looks like.
    """

    verdict: FloatVerdict
    horizon: int
    epsilon: Fraction
    precision: int
    required_bits: int
    distances: Tuple[float, ...]
    tail_from: int
    excursions: int

    @property
    def max_distance(self) -> float:
        return max(self.distances)

    @property
    def tail_max(self) -> float:
        return max(self.distances[self.tail_from:])

    @property
    def conclusive(self) -> bool:
        return False


def required_bits(sequence: SequenceFamily, horizon: int, guard_bits: int) -> int:
    """Bits needed to keep the fractional part of n_K x: log2(n_K) + guard"""
    return sequence.term(horizon).bit_length() + guard_bits


def float_membership(
    x: Any,
    sequence: SequenceFamily,
    horizon: int,
    epsilon: Fraction,
    precision: int = 256,
    guard_bits: int = 32,
) -> ProbeReport:
    """Probe ‖n_k x‖ for k = 0..horizon at `precision` bits

    The tail is the last quarter of the probed indices. The point appears to
    be a member when the tail stays below epsilon, and a non-member when at
    least two tail distances reach epsilon.

    Args:
        x: A point of T as anything mpmath takes (a string keeps all digits),
            or a Fraction
        sequence: B
        horizon: K, the last index probed
        epsilon: The threshold, in (0, 1/2)
        precision: Working precision in bits
        guard_bits: Bits kept beyond those eaten by n_K

    Raises:
        PrecisionExceededError: precision < log2(n_K) + guard_bits
    """
    if horizon < 0:
        raise PreconditionError("horizon", "must be >= 0")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 2):
        raise PreconditionError("epsilon", "must be in (0, 1/2)")
    check_sequence(sequence, horizon + 1, "horizon")
    needed = required_bits(sequence, horizon, guard_bits)
    if needed > precision:
        raise PrecisionExceededError(needed, precision)

    with mpmath.workprec(precision):
        if isinstance(x, Fraction):
            point = mpmath.mpf(x.numerator) / x.denominator
        else:
            point = mpmath.mpf(x)
        point -= mpmath.floor(point)
        eps = mpmath.mpf(epsilon.numerator) / epsilon.denominator
        raw = []
        for n in sequence.terms():
            if len(raw) > horizon:
                break
            frac = mpmath.frac(n * point)
            raw.append(min(frac, 1 - frac))

        tail_from = horizon + 1 - max(1, (horizon + 1) // 4)
        tail = raw[tail_from:]
        excursions = sum(1 for d in tail if d >= eps)
        if max(tail) < eps:
            verdict = FloatVerdict.APPEARS_MEMBER
        elif excursions >= 2:
            verdict = FloatVerdict.APPEARS_NON_MEMBER
        else:
            verdict = FloatVerdict.INCONCLUSIVE
        distances = tuple(float(d) for d in raw)

    return ProbeReport(
        verdict=verdict,
        horizon=horizon,
        epsilon=epsilon,
        precision=precision,
        required_bits=needed,
        distances=distances,
        tail_from=tail_from,
        excursions=excursions,
    )


def _measure_kernel(stream: Any, rows: int, args: Tuple[Any, ...]) -> int:
    terms, num, den, bits = args
    modulus = 1 << bits
    # ‖n X / 2^bits‖ <= num / den  <=>  dist * den <= num * 2^bits
    bound = num * modulus
    hits = 0
    for X in stream.integers(rows, bits):
        for n in terms:
            r = n * X % modulus
            if min(r, modulus - r) * den > bound:
                break
        else:
            hits += 1
    return hits


def measure_probe(
    sequence: SequenceFamily,
    epsilon: Fraction,
    constraints: int,
    samples: int,
    seed: int,
    precision: int = 256,
    guard_bits: int = 32,
    block_size: int = 4096,
    workers: int = 1,
) -> EstimateReport:
    """Estimate the Lebesgue measure of {x : ‖n_k x‖ <= epsilon, k < K}

    Points are dyadic, X / 2^precision with X uniform, and every comparison
    is exact integer arithmetic. With the same seed the sample points do not
    depend on K or epsilon, so the estimate is non-increasing in K and
    non-decreasing in epsilon.
    """
    if constraints < 0:
        raise PreconditionError("constraints", "must be >= 0")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 2):
        raise PreconditionError("epsilon", "must be in (0, 1/2)")
    check_sequence(sequence, constraints, "constraints")
    if constraints:
        needed = required_bits(sequence, constraints - 1, guard_bits)
        if needed > precision:
            raise PrecisionExceededError(needed, precision)
    terms: Sequence[int] = tuple(sequence.term(k) for k in range(constraints))

    exact = None
    if constraints == 0:
        exact = Fraction(1)
    elif constraints == 1:
        exact = 2 * epsilon

    hits = tally(
        _measure_kernel,
        (terms, epsilon.numerator, epsilon.denominator, precision),
        samples,
        seed,
        block_size,
        workers,
    )
    return EstimateReport.from_hits(hits, samples, seed, exact)
