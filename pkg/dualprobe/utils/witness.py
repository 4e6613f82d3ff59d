"""Refute convergence of a sequence of characters to the identity

Given distinct non-identity characters A_0, A_1, ... of a subgroup of Z(2)^ω,
select a subsequence whose new coordinates have geometrically growing maxima
(the pivots), then build an element x* supported on the pivots on which every
selected character takes the value -1. The pivot set K is thin, so x* belongs
to the group of thin-support elements, and the selected characters stay
outside the neighborhood O(x*) of the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Set, Tuple

from ..core.errors import (
    DuplicateInputError,
    ExhaustedError,
    InternalContradictionError,
    PreconditionError,
)
from .gf2_core import Character, ExplicitSupport, Sign, count_below, evaluate
from .misc import logger


@dataclass(frozen=True)
class SelectionResult:
    """The pivoted subsequence

    Attributes:
        selected: `(original index, character)` of every selected character
        pivots: k_n, the largest coordinate of A_n not in any earlier A_m
        skipped: Input characters read and rejected
        growth_factor: The factor g with k_{n+1} >= g * max(k_n, 1)
    """

    selected: Tuple[Tuple[int, Character], ...]
    pivots: Tuple[int, ...]
    skipped: int
    growth_factor: Fraction

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.selected)

    @property
    def characters(self) -> Tuple[Character, ...]:
        return tuple(c for _, c in self.selected)


@dataclass(frozen=True)
class WitnessElement:
    """x* with finite support inside the pivot set

    `guarantees` holds `(original index, evaluate(A_n, x*))` for every
    selected character, each re-evaluated after construction.
    """

    support: ExplicitSupport
    guarantees: Tuple[Tuple[int, Sign], ...]


@dataclass(frozen=True)
class RefutationReport:
    """The outcome of `refute_convergence`

    Attributes:
        selection: The selection, partial when `exhausted`
        witness: The element refuting convergence of the selection
        exhausted: Whether the input ended before `max_select` selections
        horizon: H of the density bound
        pivots_below: count_below(K, H)
        density_bound: floor(log_g H) + 1
        note: A remark for the exhausted case
    """

    selection: SelectionResult
    witness: WitnessElement
    exhausted: bool
    horizon: int
    pivots_below: int
    density_bound: int
    note: str | None = None

    @property
    def bound_holds(self) -> bool:
        return self.pivots_below <= self.density_bound

    @property
    def pivot_density(self) -> Fraction:
        return Fraction(self.pivots_below, self.horizon)


def _check_growth(growth_factor: Fraction) -> Fraction:
    growth_factor = Fraction(growth_factor)
    if growth_factor < 2:
        raise PreconditionError("growth_factor", "must be a rational >= 2")
    return growth_factor


def select_subsequence(
    chars: Iterable[Character],
    target_count: int,
    growth_factor: Fraction = Fraction(2),
) -> SelectionResult:
    """Greedily select characters with fresh, fast-growing pivots

    A candidate A is accepted when `A \\ (union of accepted sets)` is not
    empty and its maximum k reaches `growth_factor * max(previous pivot, 1)`;
    the first acceptance only needs a fresh coordinate. The input is read
    lazily and reading stops at `target_count` selections, so infinite
    streams are fine.

    Raises:
        ExhaustedError: The input ended first; `partial` holds the selection
        DuplicateInputError: Two input characters are equal
        PreconditionError: The identity character is in the input
    """
    if target_count < 0:
        raise PreconditionError("max_select", "must be >= 0")
    growth_factor = _check_growth(growth_factor)

    selected: List[Tuple[int, Character]] = []
    pivots: List[int] = []
    covered: Set[int] = set()
    seen: Dict[Character, int] = {}
    skipped = 0

    if target_count == 0:
        return SelectionResult((), (), 0, growth_factor)

    for index, chi in enumerate(chars):
        if chi.is_identity:
            raise PreconditionError(
                "chars", f"character #{index} is the identity"
            )
        if chi in seen:
            raise DuplicateInputError(index, seen[chi])
        seen[chi] = index

        fresh = [c for c in chi.coords if c not in covered]
        pivot = fresh[-1] if fresh else None
        if pivot is None or (
            pivots and pivot < growth_factor * max(pivots[-1], 1)
        ):
            skipped += 1
            continue

        selected.append((index, chi))
        pivots.append(pivot)
        covered.update(chi.coords)
        logger.debug("selected #%s with pivot %s", index, pivot)
        if len(selected) == target_count:
            break

    result = SelectionResult(
        tuple(selected), tuple(pivots), skipped, growth_factor
    )
    if len(selected) < target_count:
        raise ExhaustedError(len(selected), result)
    return result


def build_witness(selection: SelectionResult) -> WitnessElement:
    """Build x* with evaluate(A_n, x*) = -1 for every selected A_n

    Stage n fixes every coordinate of A_n other than the pivot (earlier stages
    or the default +1), then sets the pivot to -1 iff the parity of the -1
    coordinates so far is even. Each coordinate is assigned once.

    Raises:
        InternalContradictionError: A pivot was already assigned, or a
            guarantee does not re-verify
    """
    bits: Dict[int, Sign] = {}
    for (index, chi), pivot in zip(selection.selected, selection.pivots):
        if pivot not in chi or pivot in bits:
            raise InternalContradictionError(
                f"pivot {pivot} of character #{index} is already assigned "
                "or not in the character"
            )
        parity = 0
        for c in chi.coords:
            if c == pivot:
                continue
            bit = bits.setdefault(c, Sign.PLUS)
            if bit is Sign.MINUS:
                parity ^= 1
        bits[pivot] = Sign.MINUS if parity == 0 else Sign.PLUS

    support = ExplicitSupport(
        tuple(sorted(c for c, bit in bits.items() if bit is Sign.MINUS))
    )
    if not set(support.elements) <= set(selection.pivots):
        raise InternalContradictionError(  # pragma: no cover
            "witness support is not inside the pivot set"
        )

    guarantees = []
    for index, chi in selection.selected:
        sign = evaluate(chi, support)
        if sign is not Sign.MINUS:
            raise InternalContradictionError(
                f"character #{index} evaluates to {sign} on the witness"
            )
        guarantees.append((index, sign))
    return WitnessElement(support, tuple(guarantees))


def floor_log(base: Fraction, value: int) -> int:
    """The largest e with base^e <= value, for base > 1 and value >= 1"""
    e = 0
    power = Fraction(base)
    while power <= value:
        e += 1
        power *= base
    return e


def refute_convergence(
    chars: Iterable[Character],
    max_select: int,
    growth_factor: Fraction = Fraction(2),
    horizon: int = 2**20,
) -> RefutationReport:
    """Select, build the witness and bound the density of the pivot set

    A finite input may run out before `max_select` selections; the partial
    witness is returned then, since finitely many characters can not form a
    non-trivial convergent sequence anyway.
    """
    if horizon < 1:
        raise PreconditionError("horizon", "must be >= 1")
    growth_factor = _check_growth(growth_factor)
    note = None
    try:
        selection = select_subsequence(chars, max_select, growth_factor)
        exhausted = False
    except ExhaustedError as err:
        selection = err.partial
        exhausted = True
        note = (
            f"input exhausted after {err.selected} of {max_select} selections; "
            "a finite set of characters can not form a non-trivial "
            "convergent sequence"
        )
        logger.info(note)

    witness = build_witness(selection)
    pivots = ExplicitSupport(selection.pivots)
    return RefutationReport(
        selection=selection,
        witness=witness,
        exhausted=exhausted,
        horizon=horizon,
        pivots_below=count_below(pivots, horizon),
        density_bound=floor_log(growth_factor, horizon) + 1,
        note=note,
    )


def translate_sequence(
    chars: Iterable[Character],
    limit: Character,
) -> Iterator[Tuple[int, Character]]:
    """Multiply every character by the inverse of a candidate limit

    Characters of Z(2)^ω are their own inverses. χ_n → χ iff χ_n·χ → e, so
    refuting convergence to `limit` is refuting convergence to the identity
    for the translated sequence. A term equal to the limit becomes the
    identity and is dropped, so every translated character comes with its
    index in the input.
    """
    for index, chi in enumerate(chars):
        moved = chi * limit
        if moved.is_identity:
            logger.debug("dropping #%s, equal to the limit", index)
            continue
        yield index, moved
