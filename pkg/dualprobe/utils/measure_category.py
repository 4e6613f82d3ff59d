"""Measure and category of the thin-support group at desk scale

For m >= 1 and N >= 2,
`O_{m,N} = {x : |supp(x) ∩ k| / k >= 1/N for some k >= m}` is open and dense,
its complement `F_{m,N}` is closed and nowhere dense, and every element with
thin support lies in some `F_{m,N}`. The events are truncated at a horizon H,
so membership in `O_{m,N}` can be witnessed but never refuted.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, sqrt
from typing import Any, List, Sequence, Tuple, Union

import numpy as np

from ..core.errors import PreconditionError
from .gf2_core import (
    ExplicitSupport,
    SupportSpec,
    Thinness,
    count_below,
    thinness_report,
)
from .misc import logger
from .sampling import BlockStream, tally


@dataclass(frozen=True)
class OmnParams:
    """Parameters of O_{m,N} truncated at horizon H"""

    m: int
    N: int
    H: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise PreconditionError("m", f"must be >= 1, got {self.m}")
        if self.N < 2:
            raise PreconditionError("N", f"must be >= 2, got {self.N}")
        if self.H < self.m:
            raise PreconditionError(
                "horizon", f"must be >= m={self.m}, got {self.H}"
            )

    def __str__(self) -> str:
        return f"O_{{{self.m},{self.N}}}@{self.H}"


@dataclass(frozen=True)
class EstimateReport:
    """A Monte Carlo estimate of the Haar measure of an event

    Attributes:
        estimate: hits / samples
        samples: Number of samples
        seed: The sampling seed
        std_error: Normal-approximation standard error of the estimate
        exact: The exact measure, when the event has a closed form
    """

    estimate: Fraction
    samples: int
    seed: int
    std_error: float
    exact: Fraction | None = None

    @classmethod
    def from_hits(
        cls,
        hits: int,
        samples: int,
        seed: int,
        exact: Fraction | None = None,
    ) -> "EstimateReport":
        p = hits / samples
        return cls(
            Fraction(hits, samples),
            samples,
            seed,
            sqrt(p * (1 - p) / samples),
            exact,
        )

    def within(self, sigmas: float = 3.0) -> bool | None:
        """Whether the exact value lies within `sigmas` standard errors"""
        if self.exact is None:
            return None
        # a zero standard error only accepts an exact hit
        return abs(float(self.estimate - self.exact)) <= sigmas * self.std_error


class OVerdict(str, Enum):
    WITNESS = "WITNESS"
    NOT_FOUND_UP_TO = "NOT_FOUND_UP_TO"


@dataclass(frozen=True)
class InOResult:
    verdict: OVerdict
    # the witness k, or the horizon searched
    k: int

    @property
    def conclusive(self) -> bool:
        return self.verdict is OVerdict.WITNESS


@dataclass(frozen=True)
class DensityEvent:
    """The event F_{m,N} (or O_{m,N} with `complement`) up to the horizon"""

    params: OmnParams
    complement: bool = False

    @property
    def exact(self) -> Fraction | None:
        # one horizon only: |supp ∩ H| * N < H, i.e. fewer than ceil(H/N) ones
        if self.params.m != self.params.H:
            return None
        H, N = self.params.H, self.params.N
        in_o = binomial_tail_exact(H, -(-H // N))
        return in_o if self.complement else 1 - in_o

    def __str__(self) -> str:
        p = self.params
        name = "O" if self.complement else "F"
        return f"{name}_{{{p.m},{p.N}}} up to {p.H}"


@dataclass(frozen=True)
class ThresholdEvent:
    """The event |supp(x) ∩ k| >= t at the single horizon k"""

    k: int
    t: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise PreconditionError("k", "must be >= 0")
        if not 0 <= self.t <= self.k + 1:
            raise PreconditionError("t", f"must be in [0, {self.k + 1}]")

    @property
    def exact(self) -> Fraction:
        return binomial_tail_exact(self.k, self.t)

    def __str__(self) -> str:
        return f"|supp ∩ {self.k}| >= {self.t}"


Event = Union[DensityEvent, ThresholdEvent]


@dataclass(frozen=True)
class CoverAssignment:
    """The outcome of `cover_check` for one sample

    `params` is None when no grid entry placed the sample in some F_{m,N}
    up to its horizon; `skipped` is set when the sample is not certified thin.
    """

    sample: SupportSpec
    params: OmnParams | None
    skipped: str | None = None

    @property
    def assigned(self) -> bool:
        return self.params is not None


def in_O(x: SupportSpec, params: OmnParams) -> InOResult:
    """Search the least m <= k <= H with count_below(x, k) * N >= k"""
    count = count_below(x, params.m)
    k = params.m
    while True:
        if count * params.N >= k:
            return InOResult(OVerdict.WITNESS, k)
        if k == params.H:
            return InOResult(OVerdict.NOT_FOUND_UP_TO, params.H)
        if x.contains(k):
            count += 1
        k += 1


def dense_extension(prefix: Sequence[int], params: OmnParams) -> ExplicitSupport:
    """Extend a finite prefix into O_{m,N}

    The prefix is kept on its length L and followed by ones on {L, ..., k-1}
    for the least k >= max(m, L) reaching density 1/N. Such k exists because
    the appended ones push the density towards 1 > 1/N. The horizon of
    `params` is ignored for the search; the result is verified with in_O at
    horizon k.
    """
    for i, b in enumerate(prefix):
        if b not in (0, 1):
            raise PreconditionError("prefix", f"item {i} is not a bit: {b!r}")
    L = len(prefix)
    ones = sum(prefix)
    k = max(params.m, L)
    # density of prefix + ones on [L, k): (ones + k - L) / k
    while (ones + k - L) * params.N < k:
        k += 1
    support = ExplicitSupport(
        tuple(i for i, b in enumerate(prefix) if b) + tuple(range(L, k))
    )
    check = in_O(support, OmnParams(params.m, params.N, k))
    if not check.conclusive:  # pragma: no cover
        raise AssertionError(f"dense extension {support} is not in {params}")
    return support


def binomial_tail_exact(k: int, t: int) -> Fraction:
    """P(at least t ones among k fair bits) = sum_{j>=t} C(k, j) / 2^k"""
    if k < 0:
        raise PreconditionError("k", "must be >= 0")
    if not 0 <= t <= k + 1:
        raise PreconditionError("t", f"must be in [0, {k + 1}]")
    return Fraction(sum(comb(k, j) for j in range(t, k + 1)), 2**k)


def _density_event_kernel(
    stream: BlockStream,
    rows: int,
    args: Tuple[Any, ...],
) -> int:
    m, N, H, complement = args
    ks = np.arange(m, H + 1, dtype=np.int64)
    hits = 0
    for bits in stream.bit_rows(rows, H):
        counts = np.cumsum(bits, axis=1, dtype=np.int64)
        # counts[:, k-1] = |supp ∩ k|
        low = counts[:, m - 1:] * N < ks
        in_f = np.all(low, axis=1)
        hits += int(np.count_nonzero(~in_f if complement else in_f))
    return hits


def _threshold_event_kernel(
    stream: BlockStream,
    rows: int,
    args: Tuple[Any, ...],
) -> int:
    k, t = args
    if k == 0:
        # nothing to draw, the count is 0
        return rows if t == 0 else 0
    hits = 0
    for bits in stream.bit_rows(rows, k):
        counts = bits.sum(axis=1, dtype=np.int64)
        hits += int(np.count_nonzero(counts >= t))
    return hits


def haar_estimate(
    event: Event,
    samples: int,
    seed: int,
    block_size: int = 4096,
    workers: int = 1,
) -> EstimateReport:
    """Estimate the Haar measure of an event by uniform bit prefixes

    The Haar measure of Z(2)^ω is the product of fair coin flips. The result
    is a function of (event, samples, seed, block_size) only.
    """
    if isinstance(event, DensityEvent):
        p = event.params
        kernel, args = _density_event_kernel, (p.m, p.N, p.H, event.complement)
    else:
        kernel, args = _threshold_event_kernel, (event.k, event.t)

    logger.debug("estimating %s with %s samples, seed %s", event, samples, seed)
    hits = tally(kernel, args, samples, seed, block_size, workers)
    return EstimateReport.from_hits(hits, samples, seed, event.exact)


def cover_check(
    samples: Sequence[SupportSpec],
    grid: Sequence[OmnParams],
) -> List[CoverAssignment]:
    """Place each thin sample in some F_{m,N} of the grid, up to the horizon

    A sample is assigned to the first grid entry whose in_O search finds no
    witness. Samples that are not certified thin are reported as skipped.
    An unassigned sample only means the grid or horizon was insufficient.
    """
    out = []
    for x in samples:
        horizon = max((p.H for p in grid), default=1)
        thin = thinness_report(x, horizon)
        if thin.verdict is not Thinness.CERTIFIED_THIN:
            out.append(CoverAssignment(x, None, f"{thin.verdict.value}"))
            continue
        for params in grid:
            if not in_O(x, params).conclusive:
                out.append(CoverAssignment(x, params))
                break
        else:
            out.append(CoverAssignment(x, None))
    return out
