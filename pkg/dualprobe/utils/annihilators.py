"""Annihilators and diagonal images inside a finite window

Everything is GF(2) linear algebra on the first W coordinates. A character A
with max(A) < W is a vector of GF(2)^W; an element x restricted to the window
is the indicator vector of supp(x) ∩ W; and χ_A(x) = +1 iff the two vectors
have an even inner product. Annihilators are therefore kernels, computed by
row reduction.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Sequence, Set, Tuple

import numpy as np

from ..core.errors import CharOutsideWindowError, PreconditionError
from .gf2_core import (
    Character,
    ExplicitSupport,
    Sign,
    SupportSpec,
    evaluate,
)
from .misc import logger


@dataclass(frozen=True)
class Window:
    """The coordinates {0, ..., width-1}"""

    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise PreconditionError("window", f"must be >= 1, got {self.width}")

    def holds(self, chi: Character) -> bool:
        return chi.is_identity or chi.max < self.width

    def row(self, x: SupportSpec) -> np.ndarray:
        """The indicator vector of supp(x) ∩ window"""
        return np.fromiter(
            (x.contains(n) for n in range(self.width)),
            dtype=np.uint8,
            count=self.width,
        )

    def char_row(self, chi: Character) -> np.ndarray:
        row = np.zeros(self.width, dtype=np.uint8)
        row[list(chi.coords)] = 1
        return row


@dataclass(frozen=True)
class CharBasis:
    """A basis of the characters inside a window that annihilate some elements"""

    window: Window
    basis: Tuple[Character, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        """Number of characters in the span"""
        return 2**self.rank

    def span(self) -> Iterator[Character]:
        """Every character of the span, the identity first"""
        for mask in range(self.size):
            chi = Character.identity()
            for i, b in enumerate(self.basis):
                if mask >> i & 1:
                    chi = chi * b
            yield chi


@dataclass(frozen=True)
class ElementSolution:
    """The elements annihilated by some characters

    Coordinates inside the window are given by the basis vectors; every
    coordinate from `free_tail_from` on is unconstrained.
    """

    window: Window
    basis: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def free_tail_from(self) -> int:
        return self.window.width

    def supports(self) -> List[ExplicitSupport]:
        """The basis vectors as finite supports"""
        return [
            ExplicitSupport(tuple(i for i, b in enumerate(vec) if b))
            for vec in self.basis
        ]


def gf2_rref(rows: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(2) and its pivot columns

    The lowest column with a one is pivoted first, on the first row that has
    it, so the result only depends on the row space.
    """
    A = (np.asarray(rows) & 1).astype(np.uint8, copy=True)
    m, n = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        below = np.where(A[r:, c] == 1)[0]
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            A[[r, p], :] = A[[p, r], :]
        ones = np.where(A[:, c] == 1)[0]
        ones = ones[ones != r]
        if ones.size:
            A[ones, :] ^= A[r, :]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def gf2_rank(rows: np.ndarray) -> int:
    if len(rows) == 0:
        return 0
    return len(gf2_rref(rows)[1])


def gf2_kernel(rows: np.ndarray, width: int) -> np.ndarray:
    """A basis of {v in GF(2)^width : rows @ v = 0}, one vector per row

    There is one basis vector per free column, in increasing column order.
    """
    rows = np.asarray(rows, dtype=np.uint8).reshape(-1, width)
    reduced, pivots = gf2_rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(width) if c not in pivot_set]
    basis = np.zeros((len(free), width), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, p in enumerate(pivots):
            basis[t, p] = reduced[i, f]
    return basis


def annihilator_of_elements(
    generators: Sequence[SupportSpec],
    window: Window,
) -> CharBasis:
    """A basis of the characters inside the window that are +1 on the generators

    The rank is `window.width - rank(generators restricted to the window)`.
    """
    rows = np.array(
        [window.row(x) for x in generators], dtype=np.uint8
    ).reshape(len(generators), window.width)
    kernel = gf2_kernel(rows, window.width)
    basis = tuple(
        Character(tuple(int(i) for i in np.flatnonzero(vec))) for vec in kernel
    )
    logger.debug(
        "annihilator of %s element(s) in window %s: rank %s",
        len(generators), window.width, len(basis),
    )
    return CharBasis(window, basis)


def annihilator_of_characters(
    chars: Sequence[Character],
    window: Window,
) -> ElementSolution:
    """A basis of the window part of the elements on which all chars are +1

    Raises:
        CharOutsideWindowError: A character reaches beyond the window
    """
    for i, chi in enumerate(chars):
        if not window.holds(chi):
            raise CharOutsideWindowError(i, chi, window.width)
    rows = np.array(
        [window.char_row(chi) for chi in chars], dtype=np.uint8
    ).reshape(len(chars), window.width)
    kernel = gf2_kernel(rows, window.width)
    return ElementSolution(
        window, tuple(tuple(int(b) for b in vec) for vec in kernel)
    )


class CharacterSequence(ABC):
    """A sequence of characters A_0, A_1, ... given by a rule

    A sequence may declare a lower bound L(n) <= min(A_n), non-decreasing with
    limit infinity. Stabilization is exact for such sequences.
    """

    @abstractmethod
    def character(self, n: int) -> Character:
        """A_n"""

    def min_lower_bound(self, n: int) -> int | None:
        return None

    @property
    def length(self) -> int | None:
        return None

    def certificate_horizon(self, support_max: int | None) -> int | None:
        """The least n with L(n) > support_max, when L is declared

        From there on A_n misses a support with maximum `support_max`.
        """
        if support_max is None:
            return 0
        if self.min_lower_bound(0) is None:
            return None
        if self.min_lower_bound(0) > support_max:
            return 0
        # L is non-decreasing and unbounded: bracket, then bisect
        lo, hi = 0, 1
        while self.min_lower_bound(hi) <= support_max:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.min_lower_bound(mid) <= support_max:
                lo = mid
            else:
                hi = mid
        return hi

    def take(self, n: int) -> List[Character]:
        if self.length is not None:
            n = min(n, self.length)
        return [self.character(i) for i in range(n)]


@dataclass(frozen=True)
class CoordinateCharacters(CharacterSequence):
    """A_n = {n}, the coordinate projections"""

    def character(self, n: int) -> Character:
        return Character((n,))

    def min_lower_bound(self, n: int) -> int:
        return n


@dataclass(frozen=True)
class ShiftedCharacters(CharacterSequence):
    """A_n = {step * n + o : o in offsets}"""

    step: int
    offsets: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.step < 1:
            raise PreconditionError("step", f"must be >= 1, got {self.step}")
        if not self.offsets or min(self.offsets) < 0:
            raise PreconditionError(
                "offsets", "must be a non-empty list of non-negative integers"
            )
        object.__setattr__(self, "offsets", tuple(sorted(set(self.offsets))))

    def character(self, n: int) -> Character:
        return Character(tuple(self.step * n + o for o in self.offsets))

    def min_lower_bound(self, n: int) -> int:
        return self.step * n + self.offsets[0]


@dataclass(frozen=True)
class ListCharacters(CharacterSequence):
    """A finite list of characters, with no declared lower bound"""

    chars: Tuple[Character, ...]

    @property
    def length(self) -> int:
        return len(self.chars)

    def character(self, n: int) -> Character:
        return self.chars[n]


class Exactness(str, Enum):
    EXACT = "EXACT"
    EMPIRICAL = "EMPIRICAL"


@dataclass(frozen=True)
class StabilizationResult:
    """The least n with χ_m(x) = +1 for every probed m >= n

    Attributes:
        index: n(x)
        exactness: EXACT when a lower bound certifies the tail
        probed: Number of characters evaluated
        horizon: Index from which the lower bound rules out -1 values
    """

    index: int
    exactness: Exactness
    probed: int
    horizon: int | None = None


def stabilization_index(
    sequence: CharacterSequence,
    x: SupportSpec,
    budget: int,
) -> StabilizationResult:
    """The stabilization index n(x) of a diagonal image

    With a finite support and a declared lower bound L(n) on min(A_n), every
    A_n with L(n) > max(supp(x)) misses the support, so probing up to that
    horizon (or the budget, if larger) gives the exact index.
    """
    if budget < 1:
        raise PreconditionError("budget", "must be >= 1")
    horizon = None
    if x.is_finite:
        support = x if isinstance(x, ExplicitSupport) else x.restrict(
            len(x.prefix)  # type: ignore[attr-defined]
        )
        horizon = sequence.certificate_horizon(support.max)
    probed = budget if horizon is None else max(budget, horizon)
    if sequence.length is not None:
        probed = min(probed, sequence.length)

    last_minus = -1
    for n in range(probed):
        if evaluate(sequence.character(n), x) is Sign.MINUS:
            last_minus = n

    exact = horizon is not None and probed >= horizon
    return StabilizationResult(
        last_minus + 1,
        Exactness.EXACT if exact else Exactness.EMPIRICAL,
        probed,
        horizon,
    )


@dataclass(frozen=True)
class DiagonalImage:
    """The values (χ_0(x), ..., χ_{n-1}(x)) and where they settle to +1"""

    signs: Tuple[Sign, ...]

    @property
    def stabilized_at(self) -> int:
        """1 + the last index with value -1, 0 if there is none"""
        for i in range(len(self.signs) - 1, -1, -1):
            if self.signs[i] is Sign.MINUS:
                return i + 1
        return 0


def diagonal_image(chars: Sequence[Character], x: SupportSpec) -> DiagonalImage:
    """The image of x under the diagonal map, truncated to the given characters"""
    return DiagonalImage(tuple(evaluate(chi, x) for chi in chars))


def quotient_image_count(
    chars: Sequence[Character],
    points: Sequence[SupportSpec],
) -> int:
    """Number of distinct truncated diagonal images among the points

    Points with the same image are identified modulo the common annihilator
    of the characters, so this is the size of the image of the points in the
    quotient.
    """
    images: Set[Tuple[Sign, ...]] = {
        diagonal_image(chars, x).signs for x in points
    }
    return len(images)


@dataclass(frozen=True)
class Separation:
    """A character telling two points apart, or None if none does"""

    pair: int
    character: Character | None
    position: int | None = None

    @property
    def separated(self) -> bool:
        return self.character is not None


def separating_check(
    chars: Sequence[Character],
    pairs: Sequence[Tuple[SupportSpec, SupportSpec]],
) -> List[Separation]:
    """For each pair (x, y), the first character with χ(x) != χ(y)"""
    out = []
    for i, (x, y) in enumerate(pairs):
        for pos, chi in enumerate(chars):
            if evaluate(chi, x) is not evaluate(chi, y):
                out.append(Separation(i, chi, pos))
                break
        else:
            out.append(Separation(i, None))
    return out
