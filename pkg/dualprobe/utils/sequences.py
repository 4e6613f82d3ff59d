"""Strictly increasing integer sequences given by a family and parameters

The families back both enumerated supports (`gf2_core.EnumeratedSupport`) and the
sequences B of characterized subgroups (`circle_char`). Each family gives exact
terms, an exact count of terms below a bound, a growth class and, where the
family allows it, the residue dynamics of its terms modulo an integer.
"""
from __future__ import annotations

import bisect
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import (
    Any,
    ClassVar,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Sequence,
    Tuple,
    Type,
)

from ..core.errors import ParseError, PreconditionError, UnsupportedFamilyError
from .misc import logger


@dataclass(frozen=True)
class ResidueOrbit:
    """The residues of a sequence modulo q, as a preperiod and a cycle

    The residue of term k is `preperiod[k]` for `k < len(preperiod)` and
    `cycle[(k - len(preperiod)) % len(cycle)]` afterwards.
    """

    modulus: int
    preperiod: Tuple[int, ...]
    cycle: Tuple[int, ...]

    @property
    def cycle_start(self) -> int:
        return len(self.preperiod)

    def residue(self, k: int) -> int:
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.cycle[(k - len(self.preperiod)) % len(self.cycle)]


@dataclass(frozen=True)
class ThinCertificate:
    """What the family alone says about the density of its terms

    `thin` is True/False when the family decides it, None otherwise.
    `density` is the exact limit density when it is known.
    """

    thin: bool | None
    density: Fraction | None
    reason: str


def _int_param(
    params: Mapping[str, Any],
    name: str,
    family: str,
    minimum: int | None = None,
    default: int | None = None,
) -> int:
    if name not in params:
        if default is not None:
            return default
        raise ParseError(f"missing parameter for family {family!r}", field=name)
    value = params[name]
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            value = int(str(value))
        except ValueError:
            raise ParseError(
                f"expected an integer, got {value!r}", field=name
            ) from None
    if minimum is not None and value < minimum:
        raise ParseError(f"must be >= {minimum}, got {value}", field=name)
    return value


def _int_list_param(
    params: Mapping[str, Any],
    name: str,
    family: str,
) -> Tuple[int, ...]:
    if name not in params:
        raise ParseError(f"missing parameter for family {family!r}", field=name)
    values = params[name]
    if not isinstance(values, (list, tuple)):
        raise ParseError(f"expected a list of integers, got {values!r}", field=name)
    out = []
    for i, value in enumerate(values):
        if isinstance(value, bool):
            raise ParseError(f"item {i} is not an integer", field=name)
        try:
            out.append(int(str(value)))
        except ValueError:
            raise ParseError(f"item {i} is not an integer", field=name) from None
    return tuple(out)


class SequenceFamily(ABC):
    """Base class of the integer sequence families"""

    family: ClassVar[str]
    # Terms are strictly increasing from this index on
    strict_from: ClassVar[int] = 0

    @abstractmethod
    def term(self, k: int) -> int:
        """The k-th term"""

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """The parameters, as accepted by `from_params`"""

    @classmethod
    @abstractmethod
    def from_params(cls, params: Mapping[str, Any]) -> "SequenceFamily":
        """Build the family member from its parameters"""

    @abstractmethod
    def thin_certificate(self) -> ThinCertificate:
        """What the family says about the density of its term set"""

    def residue_orbit(self, q: int, max_states: int = 10**6) -> ResidueOrbit:
        raise UnsupportedFamilyError(
            f"no exact residue dynamics for family {self.family!r}"
        )

    @property
    def length(self) -> int | None:
        """Number of terms, None for infinite sequences"""
        return None

    def terms(self, start: int = 0) -> Iterator[int]:
        k = start
        while self.length is None or k < self.length:
            yield self.term(k)
            k += 1

    def count_below(self, bound: int) -> int:
        """Number of indices k >= strict_from with term(k) < bound

        Terms are strictly increasing from `strict_from`, so this is a
        binary search over a doubling bracket.
        """
        lo = self.strict_from
        if self.length is not None and lo >= self.length:
            return 0
        if self.term(lo) >= bound:
            return 0
        # invariant: term(lo) < bound <= term(hi)
        step = 1
        hi = lo + step
        while True:
            if self.length is not None and hi >= self.length:
                hi = self.length
                if self.term(hi - 1) < bound:
                    return hi - self.strict_from
                break
            if self.term(hi) >= bound:
                break
            lo = hi
            step *= 2
            hi = lo + step
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.term(mid) < bound:
                lo = mid
            else:
                hi = mid
        return lo + 1 - self.strict_from

    def contains(self, n: int) -> bool:
        """Whether n is one of the terms (from `strict_from` on)"""
        return self.count_below(n + 1) > self.count_below(n)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "params": self.params()}

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.family}({args})"


@dataclass(frozen=True)
class Geometric(SequenceFamily):
    """s_k = c * r^k with c >= 1 and r >= 2"""

    c: int
    r: int

    family: ClassVar[str] = "geometric"

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ParseError(f"must be >= 1, got {self.c}", field="c")
        if self.r < 2:
            raise ParseError(f"must be >= 2, got {self.r}", field="r")

    def term(self, k: int) -> int:
        return self.c * self.r**k

    def params(self) -> Dict[str, Any]:
        return {"c": self.c, "r": self.r}

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "Geometric":
        return cls(
            c=_int_param(params, "c", cls.family, default=1),
            r=_int_param(params, "r", cls.family),
        )

    def thin_certificate(self) -> ThinCertificate:
        return ThinCertificate(True, Fraction(0), "geometric growth")

    def residue_orbit(self, q: int, max_states: int = 10**6) -> ResidueOrbit:
        # r^k mod q is eventually periodic; find the first repeated power
        seen: Dict[int, int] = {}
        powers = []
        state = 1 % q
        while state not in seen:
            seen[state] = len(powers)
            powers.append(state)
            state = state * self.r % q
        start = seen[state]
        residues = tuple(self.c * p % q for p in powers)
        logger.debug(
            "geometric r=%s mod %s: preperiod %s, cycle length %s",
            self.r, q, start, len(powers) - start,
        )
        return ResidueOrbit(q, residues[:start], residues[start:])


def _trim(poly: Iterable[Any]) -> List[Any]:
    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return out


def _horner(poly: Sequence[Any], x: Any) -> Any:
    value = 0
    for a in reversed(poly):
        value = value * x + a
    return value


def _poly_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    rem = list(a)
    while len(rem) >= len(b):
        factor = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = _trim(rem)
    return rem


def _sturm_chain(poly: Sequence[int]) -> List[List[Fraction]]:
    chain = [_trim(Fraction(a) for a in poly)]
    chain.append(_trim(i * a for i, a in enumerate(chain[0]))[1:])
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _sign_changes(chain: Sequence[Sequence[Fraction]], x: int) -> int:
    values = (_horner(p, x) for p in chain)
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def last_nonpositive(poly: Sequence[int]) -> int:
    """The largest integer k >= 0 with poly(k) <= 0, or -1 if there is none

    `poly` lists integer coefficients from the constant term up, with a
    positive leading one. Real roots are located with a Sturm chain, so the
    work grows with the logarithm of the coefficients.
    """
    poly = _trim(poly)
    if poly[-1] <= 0:
        raise ValueError("leading coefficient must be positive")
    if poly[0] > 0 and min(poly) >= 0:
        return -1
    # every real root lies below the Cauchy bound
    hi = int(max(Fraction(abs(a), poly[-1]) for a in poly[:-1])) + 2
    chain = _sturm_chain(poly)
    # poly(hi) > 0 and poly(k) > 0 for every integer k >= hi
    while True:
        changes_hi = _sign_changes(chain, hi)

        def root_from(k: int) -> bool:
            # a real root in [k, hi)
            return _horner(poly, k) == 0 or _sign_changes(chain, k) > changes_hi

        if not root_from(0):
            return -1
        lo, top = 0, hi
        while top - lo > 1:
            mid = (lo + top) // 2
            if root_from(mid):
                lo = mid
            else:
                top = mid
        # no root in [lo + 1, hi), at least one in [lo, lo + 1)
        if _horner(poly, lo) <= 0:
            return lo
        hi = lo


@dataclass(frozen=True)
class Polynomial(SequenceFamily):
    """s_k = a_0 + a_1 k + ... + a_d k^d, eventually strictly increasing

    The terms are those from `strict_from` on, the first index from which
    P(k+1) - P(k) stays positive. It is found once for all k from the real
    roots of that difference polynomial.
    """

    coefficients: Tuple[int, ...]

    family: ClassVar[str] = "polynomial"

    def __post_init__(self) -> None:
        coefs = _trim(self.coefficients)
        if len(coefs) < 2:
            raise ParseError(
                "polynomial must have degree >= 1", field="coefficients"
            )
        object.__setattr__(self, "coefficients", tuple(coefs))
        if coefs[-1] <= 0:
            raise ParseError(
                "leading coefficient must be positive", field="coefficients"
            )
        strict_from = last_nonpositive(self._difference()) + 1
        object.__setattr__(self, "strict_from", strict_from)
        first = self.term(strict_from)
        if first < 0:
            raise ParseError(
                f"terms must be non-negative, P({strict_from}) = {first}",
                field="coefficients",
            )
        if strict_from:
            logger.debug("%s increases from k=%s", self, strict_from)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def _difference(self) -> Tuple[int, ...]:
        # coefficients of P(k+1) - P(k)
        d = self.degree
        diff = [0] * d
        for i, a in enumerate(self.coefficients):
            # (k+1)^i - k^i = sum_{j<i} C(i,j) k^j
            binom = 1
            for j in range(i):
                diff[j] += a * binom
                binom = binom * (i - j) // (j + 1)
        return tuple(diff)

    def term(self, k: int) -> int:
        value = 0
        for a in reversed(self.coefficients):
            value = value * k + a
        return value

    def params(self) -> Dict[str, Any]:
        return {"coefficients": list(self.coefficients)}

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "Polynomial":
        return cls(_int_list_param(params, "coefficients", cls.family))

    def thin_certificate(self) -> ThinCertificate:
        if self.degree >= 2:
            return ThinCertificate(
                True, Fraction(0), f"polynomial of degree {self.degree}"
            )
        slope = self.coefficients[1]
        return ThinCertificate(
            False,
            Fraction(1, slope),
            f"arithmetic progression with difference {slope}",
        )

    def residue_orbit(self, q: int, max_states: int = 10**6) -> ResidueOrbit:
        residues = tuple(self.term(k) % q for k in range(q))
        # P(k + q) = P(k) mod q, take the least period dividing q
        for period in range(1, q + 1):
            if q % period == 0 and all(
                residues[k] == residues[k % period] for k in range(q)
            ):
                return ResidueOrbit(q, (), residues[:period])
        raise AssertionError("unreachable")  # pragma: no cover


@dataclass(frozen=True)
class Factorial(SequenceFamily):
    """s_k = (k + offset)!

    With offset 0 the first two terms coincide (0! = 1! = 1); the sequence is
    strictly increasing from index 1.
    """

    offset: int

    family: ClassVar[str] = "factorial"

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise ParseError(f"must be >= 0, got {self.offset}", field="offset")

    @property
    def strict_from(self) -> int:  # type: ignore[override]
        return 1 if self.offset == 0 else 0

    def term(self, k: int) -> int:
        return factorial(k + self.offset)

    def params(self) -> Dict[str, Any]:
        return {"offset": self.offset}

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "Factorial":
        return cls(_int_param(params, "offset", cls.family, default=0))

    def thin_certificate(self) -> ThinCertificate:
        return ThinCertificate(True, Fraction(0), "factorial growth")

    def residue_orbit(self, q: int, max_states: int = 10**6) -> ResidueOrbit:
        # m! | (m+1)!, so once q divides a term it divides all later ones;
        # this happens at the latest for m = q
        residues = []
        value = factorial(self.offset) % q
        k = 0
        while value != 0:
            residues.append(value)
            k += 1
            value = value * (k + self.offset) % q
        return ResidueOrbit(q, tuple(residues), (0,))


@dataclass(frozen=True)
class Recurrence(SequenceFamily):
    """s_{k+d} = a_1 s_{k+d-1} + ... + a_d s_k with given initial terms

    Strict increase can not be decided for the family in general; it is
    checked over every range that is queried.
    """

    coefficients: Tuple[int, ...]
    initial: Tuple[int, ...]

    family: ClassVar[str] = "recurrence"

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ParseError("order must be >= 1", field="coefficients")
        if len(self.initial) != len(self.coefficients):
            raise ParseError(
                f"expected {len(self.coefficients)} initial terms, "
                f"got {len(self.initial)}",
                field="initial",
            )
        if self.initial[0] < 0:
            raise ParseError("terms must be non-negative", field="initial")

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def _step(self, window: Sequence[int], modulus: int | None = None) -> int:
        # window holds (s_k, ..., s_{k+d-1})
        value = sum(
            a * s for a, s in zip(self.coefficients, reversed(window))
        )
        return value if modulus is None else value % modulus

    def terms(self, start: int = 0) -> Iterator[int]:
        window = list(self.initial)
        k = 0
        while True:
            if k >= start:
                yield window[0]
            window = window[1:] + [self._step(window)]
            k += 1

    def term(self, k: int) -> int:
        for i, value in enumerate(self.terms()):
            if i == k:
                return value
        raise AssertionError("unreachable")  # pragma: no cover

    def count_below(self, bound: int) -> int:
        count = 0
        previous = None
        for k, value in enumerate(self.terms()):
            if previous is not None and value <= previous:
                raise PreconditionError(
                    "recurrence",
                    f"terms are not strictly increasing at index {k} "
                    f"({previous} then {value})",
                )
            if value >= bound:
                return count
            count += 1
            previous = value
        raise AssertionError("unreachable")  # pragma: no cover

    def verify_increasing(self, upto: int) -> None:
        """Check strict increase of the terms with index <= upto"""
        previous = None
        for k, value in enumerate(self.terms()):
            if k > upto:
                return
            if previous is not None and value <= previous:
                raise PreconditionError(
                    "recurrence",
                    f"terms are not strictly increasing at index {k} "
                    f"({previous} then {value})",
                )
            previous = value

    def params(self) -> Dict[str, Any]:
        return {
            "coefficients": list(self.coefficients),
            "initial": list(self.initial),
        }

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "Recurrence":
        return cls(
            _int_list_param(params, "coefficients", cls.family),
            _int_list_param(params, "initial", cls.family),
        )

    def thin_certificate(self) -> ThinCertificate:
        return ThinCertificate(None, None, "linear recurrence, no growth class")

    def residue_orbit(self, q: int, max_states: int = 10**6) -> ResidueOrbit:
        # the state (s_k, ..., s_{k+d-1}) mod q lives in a finite set,
        # so it eventually enters a cycle
        seen: Dict[Tuple[int, ...], int] = {}
        residues = []
        state = tuple(s % q for s in self.initial)
        while state not in seen:
            if len(seen) >= max_states:
                raise UnsupportedFamilyError(
                    f"residue cycle of the recurrence mod {q} not found within "
                    f"{max_states} states"
                )
            seen[state] = len(residues)
            residues.append(state[0])
            state = state[1:] + (self._step(state, q),)
        start = seen[state]
        logger.debug(
            "recurrence mod %s: preperiod %s, cycle length %s",
            q, start, len(residues) - start,
        )
        return ResidueOrbit(q, tuple(residues[:start]), tuple(residues[start:]))


@dataclass(frozen=True)
class Explicit(SequenceFamily):
    """A finite strictly increasing list of terms"""

    values: Tuple[int, ...]

    family: ClassVar[str] = "explicit"

    def __post_init__(self) -> None:
        for i in range(1, len(self.values)):
            if self.values[i] <= self.values[i - 1]:
                raise ParseError(
                    f"values must be strictly increasing (item {i})",
                    field="values",
                )
        if self.values and self.values[0] < 0:
            raise ParseError("values must be non-negative", field="values")

    @property
    def length(self) -> int:
        return len(self.values)

    def term(self, k: int) -> int:
        return self.values[k]

    def count_below(self, bound: int) -> int:
        return bisect.bisect_left(self.values, bound)

    def params(self) -> Dict[str, Any]:
        return {"values": list(self.values)}

    @classmethod
    def from_params(cls, params: Mapping[str, Any]) -> "Explicit":
        return cls(_int_list_param(params, "values", cls.family))

    def thin_certificate(self) -> ThinCertificate:
        return ThinCertificate(True, Fraction(0), "finite set")


FAMILIES: Dict[str, Type[SequenceFamily]] = {
    klass.family: klass
    for klass in (Geometric, Polynomial, Factorial, Recurrence, Explicit)
}


def sequence_from_dict(
    obj: Mapping[str, Any],
    source: str | None = None,
) -> SequenceFamily:
    """Build a sequence from `{"family": ..., "params": {...}}`"""
    if not isinstance(obj, Mapping):
        raise ParseError("expected an object", source=source)
    family = obj.get("family")
    if family not in FAMILIES:
        raise ParseError(
            f"unknown family {family!r}, expected one of {sorted(FAMILIES)}",
            source=source,
            field="family",
        )
    params = obj.get("params", {})
    if not isinstance(params, Mapping):
        raise ParseError("expected an object", source=source, field="params")
    try:
        return FAMILIES[family].from_params(params)
    except ParseError as err:
        raise ParseError(
            err.reason,
            source=source,
            field=f"params.{err.field}" if err.field else "params",
        ) from None
