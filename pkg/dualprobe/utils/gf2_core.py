"""Elements of Z(2)^ω and their continuous characters

Z(2) is identified with {+1, -1}. An element x is given by its support
`supp(x) = {n : x(n) = -1}` in one of three decidable forms (`SupportSpec`).
A continuous character is a finite set A of coordinates acting by
`χ_A(x) = (-1)^|A ∩ supp(x)|` (`Character`). Everything here is exact.
"""
from __future__ import annotations

import bisect
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from itertools import count, accumulate
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Tuple

from ..core.errors import ParseError, PreconditionError
from .sequences import Explicit, Factorial, SequenceFamily


class Sign(IntEnum):
    """An element of Z(2) = {+1, -1} inside the circle group"""

    PLUS = 1
    MINUS = -1

    def __mul__(self, other: Any) -> "Sign":  # type: ignore[override]
        if isinstance(other, Sign):
            return Sign(int(self) * int(other))
        return NotImplemented

    def __str__(self) -> str:
        return "+1" if self is Sign.PLUS else "-1"


@dataclass(frozen=True, order=True)
class Character:
    """A continuous character of Z(2)^ω, the finite set of its coordinates

    The empty set is the identity character.
    """

    coords: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        previous = -1
        for i, c in enumerate(self.coords):
            if c <= previous:
                raise ParseError(
                    f"coordinates must be strictly increasing non-negative "
                    f"integers (item {i}: {c})"
                )
            previous = c

    @classmethod
    def of(cls, coords: Iterable[int]) -> "Character":
        """Build from any collection of distinct non-negative integers"""
        coords = list(coords)
        unique = sorted(set(coords))
        if len(unique) != len(coords):
            raise ParseError("coordinates of a character must be distinct")
        return cls(tuple(unique))

    @classmethod
    def identity(cls) -> "Character":
        return cls(())

    @classmethod
    def from_index(cls, index: int) -> "Character":
        """The character whose coordinates are the binary digits of index

        Together with `index` this is a bijection between ω and the dual group.
        """
        if index < 0:
            raise PreconditionError("index", "must be non-negative")
        return cls(tuple(i for i in range(index.bit_length()) if index >> i & 1))

    @property
    def index(self) -> int:
        return self.to_bits()

    @property
    def is_identity(self) -> bool:
        return not self.coords

    @property
    def max(self) -> int | None:
        return self.coords[-1] if self.coords else None

    @property
    def min(self) -> int | None:
        return self.coords[0] if self.coords else None

    def to_bits(self) -> int:
        """The indicator vector packed into an integer (bit i = coordinate i)"""
        bits = 0
        for c in self.coords:
            bits |= 1 << c
        return bits

    def __mul__(self, other: "Character") -> "Character":
        if not isinstance(other, Character):
            return NotImplemented
        return char_mul(self, other)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int):
            return False
        i = bisect.bisect_left(self.coords, n)
        return i < len(self.coords) and self.coords[i] == n

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.coords)) + "}"


class SupportSpec(ABC):
    """The support of an element of Z(2)^ω in a decidable form"""

    kind: str

    @abstractmethod
    def contains(self, n: int) -> bool:
        """Whether n is in the support"""

    @abstractmethod
    def count_below(self, k: int) -> int:
        """|supp ∩ {0, ..., k-1}|"""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """The JSON object form"""

    @property
    def is_finite(self) -> bool:
        return False

    def restrict(self, width: int) -> "ExplicitSupport":
        """supp ∩ {0, ..., width-1} as an explicit support"""
        return ExplicitSupport(tuple(n for n in range(width) if self.contains(n)))


@dataclass(frozen=True)
class ExplicitSupport(SupportSpec):
    """A finite support listed element by element"""

    elements: Tuple[int, ...] = ()
    kind = "explicit"

    def __post_init__(self) -> None:
        previous = -1
        for i, n in enumerate(self.elements):
            if n <= previous:
                raise ParseError(
                    f"elements must be strictly increasing non-negative "
                    f"integers (item {i}: {n})",
                    field="elements",
                )
            previous = n

    @classmethod
    def of(cls, elements: Iterable[int]) -> "ExplicitSupport":
        return cls(tuple(sorted(set(elements))))

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def max(self) -> int | None:
        return self.elements[-1] if self.elements else None

    def contains(self, n: int) -> bool:
        i = bisect.bisect_left(self.elements, n)
        return i < len(self.elements) and self.elements[i] == n

    def count_below(self, k: int) -> int:
        return bisect.bisect_left(self.elements, k)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "elements": list(self.elements)}

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


@dataclass(frozen=True)
class EnumeratedSupport(SupportSpec):
    """The support {s_0 < s_1 < ...} of an infinite sequence family"""

    sequence: SequenceFamily
    kind = "enumerated"

    def __post_init__(self) -> None:
        if isinstance(self.sequence, Explicit):
            raise ParseError(
                "finite supports use kind 'explicit'", field="family"
            )
        if isinstance(self.sequence, Factorial) and self.sequence.offset < 1:
            # 0! = 1! would list the coordinate 1 twice
            raise ParseError(
                "factorial supports need offset >= 1", field="params.offset"
            )

    def contains(self, n: int) -> bool:
        return self.sequence.contains(n)

    def count_below(self, k: int) -> int:
        return self.sequence.count_below(k)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.sequence.to_dict()}

    def __str__(self) -> str:
        return str(self.sequence)


@dataclass(frozen=True)
class PeriodicSupport(SupportSpec):
    """The support whose indicator is `prefix` followed by `pattern` repeated"""

    prefix: Tuple[int, ...]
    pattern: Tuple[int, ...]
    kind = "periodic"
    _prefix_sums: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _pattern_sums: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.pattern:
            raise ParseError("pattern must not be empty", field="pattern")
        for name, bits in (("prefix", self.prefix), ("pattern", self.pattern)):
            for i, b in enumerate(bits):
                if b not in (0, 1):
                    raise ParseError(f"item {i} is not a bit: {b!r}", field=name)
        object.__setattr__(
            self, "_prefix_sums", (0, *accumulate(self.prefix))
        )
        object.__setattr__(
            self, "_pattern_sums", (0, *accumulate(self.pattern))
        )

    @property
    def ones_per_period(self) -> int:
        return self._pattern_sums[-1]

    @property
    def is_finite(self) -> bool:
        return self.ones_per_period == 0

    def contains(self, n: int) -> bool:
        if n < len(self.prefix):
            return self.prefix[n] == 1
        return self.pattern[(n - len(self.prefix)) % len(self.pattern)] == 1

    def count_below(self, k: int) -> int:
        if k <= len(self.prefix):
            return self._prefix_sums[k]
        periods, rest = divmod(k - len(self.prefix), len(self.pattern))
        return (
            self._prefix_sums[-1]
            + periods * self.ones_per_period
            + self._pattern_sums[rest]
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "prefix": list(self.prefix),
            "pattern": list(self.pattern),
        }

    def __str__(self) -> str:
        prefix = "".join(map(str, self.prefix))
        pattern = "".join(map(str, self.pattern))
        return f"{prefix}({pattern})*"


class Thinness(str, Enum):
    CERTIFIED_THIN = "CERTIFIED_THIN"
    NOT_THIN = "NOT_THIN"
    EMPIRICAL = "EMPIRICAL"


@dataclass(frozen=True)
class ThinnessReport:
    """The verdict of `thinness_report`

    Attributes:
        verdict: The classification
        reason: Where the verdict comes from
        limit_density: The exact limit density when it is known
        profile: `(k, count_below(x, k) / k)` at doubling checkpoints
    """

    verdict: Thinness
    reason: str
    limit_density: Fraction | None
    profile: Tuple[Tuple[int, Fraction], ...]

    @property
    def conclusive(self) -> bool:
        return self.verdict is not Thinness.EMPIRICAL


def membership(x: SupportSpec, n: int) -> bool:
    """Whether coordinate n is in supp(x)"""
    if n < 0:
        raise PreconditionError("n", "coordinate index must be non-negative")
    return x.contains(n)


def evaluate(chi: Character, x: SupportSpec) -> Sign:
    """χ(x) = (-1)^|χ ∩ supp(x)|, with |χ| membership queries"""
    parity = sum(1 for n in chi.coords if x.contains(n)) & 1
    return Sign.MINUS if parity else Sign.PLUS


def char_mul(a: Character, b: Character) -> Character:
    """The product of two characters, the symmetric difference of their sets"""
    out: List[int] = []
    i = j = 0
    ac, bc = a.coords, b.coords
    while i < len(ac) and j < len(bc):
        if ac[i] < bc[j]:
            out.append(ac[i])
            i += 1
        elif ac[i] > bc[j]:
            out.append(bc[j])
            j += 1
        else:
            i += 1
            j += 1
    out.extend(ac[i:])
    out.extend(bc[j:])
    return Character(tuple(out))


def element_mul(x: ExplicitSupport, y: ExplicitSupport) -> ExplicitSupport:
    """The product of two finite-support elements (symmetric difference)"""
    return ExplicitSupport(
        char_mul(Character(x.elements), Character(y.elements)).coords
    )


def in_basic_nbhd(chi: Character, points: Sequence[SupportSpec]) -> bool:
    """Whether chi is in the basic neighborhood O(x_1, ..., x_n) of e

    On {+1, -1} the arc V_1 only contains +1.
    """
    return all(evaluate(chi, x) is Sign.PLUS for x in points)


def count_below(x: SupportSpec, k: int) -> int:
    """|supp(x) ∩ {0, ..., k-1}|"""
    if k < 0:
        raise PreconditionError("k", "horizon must be non-negative")
    return x.count_below(k)


def density_profile(
    x: SupportSpec,
    checkpoints: Sequence[int],
) -> List[Fraction]:
    """The exact densities count_below(x, k) / k at each checkpoint"""
    for k in checkpoints:
        if k < 1:
            raise PreconditionError("checkpoints", f"must be >= 1, got {k}")
    return [Fraction(x.count_below(k), k) for k in checkpoints]


def doubling_checkpoints(horizon: int) -> List[int]:
    """1, 2, 4, ... up to horizon, with horizon itself last"""
    points = []
    k = 1
    while k < horizon:
        points.append(k)
        k *= 2
    points.append(horizon)
    return points


def thinness_report(x: SupportSpec, horizon: int) -> ThinnessReport:
    """Classify whether supp(x) is thin

    Thinness can not be decided from membership alone, so the verdict comes
    from the representation: finite and fast-growing families are certified,
    periodic supports with one-bits are refuted with their exact density,
    and anything else only gets its density profile.
    """
    if horizon < 1:
        raise PreconditionError("horizon", "must be >= 1")
    checkpoints = doubling_checkpoints(horizon)
    profile = tuple(zip(checkpoints, density_profile(x, checkpoints)))

    if x.is_finite:
        return ThinnessReport(
            Thinness.CERTIFIED_THIN, "finite support", Fraction(0), profile
        )
    if isinstance(x, PeriodicSupport):
        return ThinnessReport(
            Thinness.NOT_THIN,
            "periodic support",
            Fraction(x.ones_per_period, len(x.pattern)),
            profile,
        )
    if isinstance(x, EnumeratedSupport):
        cert = x.sequence.thin_certificate()
        if cert.thin is True:
            return ThinnessReport(
                Thinness.CERTIFIED_THIN, cert.reason, cert.density, profile
            )
        if cert.thin is False:
            return ThinnessReport(
                Thinness.NOT_THIN, cert.reason, cert.density, profile
            )
        return ThinnessReport(Thinness.EMPIRICAL, cert.reason, None, profile)
    return ThinnessReport(  # pragma: no cover
        Thinness.EMPIRICAL, "no certificate", None, profile
    )


def all_characters() -> Iterator[Character]:
    """Every non-identity character, each exactly once"""
    for index in count(1):
        yield Character.from_index(index)


def character_from_index(index: int) -> Character:
    """The character whose coordinates are the binary digits of index"""
    return Character.from_index(index)


def character_index(chi: Character) -> int:
    """The inverse of `character_from_index`"""
    return chi.index
