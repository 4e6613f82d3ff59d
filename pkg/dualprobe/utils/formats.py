"""Reading inputs and writing reports

Characters come one per line as whitespace-separated coordinates; an empty
line is the identity. Supports and sequences are JSON objects. Reports are
JSON objects carrying a schema version; integers beyond 2^53 are written as
decimal strings so that JavaScript readers do not round them.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from .. import __version__
from ..core.defaults import JS_SAFE_INT, REPORT_SCHEMA
from ..core.errors import ParseError
from .gf2_core import (
    Character,
    EnumeratedSupport,
    ExplicitSupport,
    PeriodicSupport,
    Sign,
    SupportSpec,
    evaluate,
)
from .sequences import SequenceFamily, _int_list_param, sequence_from_dict


def parse_character(
    text: str,
    source: str | None = None,
    line: int | None = None,
) -> Character:
    """One line of a character file, strictly increasing coordinates"""
    coords = []
    for token in text.split():
        try:
            value = int(token)
        except ValueError:
            raise ParseError(
                f"not an integer: {token!r}", source=source, line=line
            ) from None
        if value < 0:
            raise ParseError(
                f"coordinates must be non-negative, got {value}",
                source=source,
                line=line,
            )
        coords.append(value)
    try:
        return Character(tuple(coords))
    except ParseError as err:
        raise ParseError(err.reason, source=source, line=line) from None


def read_characters(path: str | Path) -> List[Character]:
    """All characters of a file, in order"""
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ParseError(f"can not read: {err.strerror}", source=str(path)) from None
    return [
        parse_character(line, source=str(path), line=i)
        for i, line in enumerate(text.splitlines(), start=1)
    ]


def support_from_dict(
    obj: Any,
    source: str | None = None,
    prefix: str = "",
) -> SupportSpec:
    """Build a support from its JSON object form"""
    if not isinstance(obj, Mapping):
        raise ParseError("expected an object", source=source, field=prefix or None)
    kind = obj.get("kind")
    try:
        if kind == "explicit":
            return ExplicitSupport(_int_list_param(obj, "elements", kind))
        if kind == "periodic":
            return PeriodicSupport(
                _int_list_param(obj, "prefix", kind) if "prefix" in obj else (),
                _int_list_param(obj, "pattern", kind),
            )
        if kind == "enumerated":
            return EnumeratedSupport(sequence_from_dict(obj))
    except ParseError as err:
        field = err.field or ""
        raise ParseError(
            err.reason, source=source, field=f"{prefix}{field}" or None
        ) from None
    raise ParseError(
        f"unknown kind {kind!r}, expected explicit, enumerated or periodic",
        source=source,
        field=f"{prefix}kind",
    )


def _load_json(path_or_text: str | Path) -> Tuple[Any, str]:
    text = str(path_or_text)
    source = "<inline>"
    if not text.lstrip().startswith(("{", "[")):
        source = text
        try:
            text = Path(text).read_text()
        except OSError as err:
            raise ParseError(f"can not read: {err.strerror}", source=source) from None
    try:
        return json.loads(text), source
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, source=source, line=err.lineno) from None


def read_supports(path_or_text: str | Path) -> List[SupportSpec]:
    """A support object, or a list of them, from a file or inline JSON"""
    obj, source = _load_json(path_or_text)
    if isinstance(obj, list):
        return [
            support_from_dict(item, source, prefix=f"[{i}].")
            for i, item in enumerate(obj)
        ]
    return [support_from_dict(obj, source)]


def read_support_pairs(
    path_or_text: str | Path,
) -> List[Tuple[SupportSpec, SupportSpec]]:
    """A list of [x, y] support pairs"""
    obj, source = _load_json(path_or_text)
    if not isinstance(obj, list):
        raise ParseError("expected a list of pairs", source=source)
    pairs = []
    for i, item in enumerate(obj):
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("expected a pair", source=source, field=f"[{i}]")
        pairs.append(
            (
                support_from_dict(item[0], source, prefix=f"[{i}][0]."),
                support_from_dict(item[1], source, prefix=f"[{i}][1]."),
            )
        )
    return pairs


def read_sequence(path_or_text: str | Path) -> SequenceFamily:
    """A sequence object from a file or inline JSON"""
    obj, source = _load_json(path_or_text)
    return sequence_from_dict(obj, source)


def parse_bits(text: str, field: str = "prefix") -> List[int]:
    """'0110' as [0, 1, 1, 0]"""
    bits = []
    for i, ch in enumerate(text.strip()):
        if ch not in "01":
            raise ParseError(f"item {i} is not a bit: {ch!r}", field=field)
        bits.append(int(ch))
    return bits


def to_jsonable(value: Any) -> Any:
    """Plain JSON values, with exact rationals and safe integers"""
    if isinstance(value, Sign):
        return int(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, int):
        return str(value) if abs(value) > JS_SAFE_INT else value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Character):
        return list(value.coords)
    if isinstance(value, SupportSpec):
        return to_jsonable(value.to_dict())
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def make_report(
    command: str,
    payload: Mapping[str, Any],
    meta: bool = True,
) -> Dict[str, Any]:
    """Wrap a payload into a report object

    Reports are deterministic given the inputs, except for the `meta` block,
    which can be left out.
    """
    report: Dict[str, Any] = {"schema": REPORT_SCHEMA, "command": command}
    report.update(to_jsonable(payload))
    if meta:
        report["meta"] = {
            "version": __version__,
            "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
    return report


def dump_report(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2)


def witness_report_mismatches(
    report: Mapping[str, Any],
    chars: Sequence[Character],
) -> int:
    """Re-evaluate the guarantees of a witness report against the characters

    The characters are those of the input file; a report made against a
    candidate limit is checked on the characters translated by that limit.
    Returns the number of guarantees that do not hold; 0 means the report
    verifies.
    """
    support = ExplicitSupport(
        tuple(int(n) for n in report["witness"]["support"]["elements"])
    )
    limit = Character(tuple(int(n) for n in report.get("limit") or ()))
    mismatches = 0
    for row in report["witness"]["guarantees"]:
        chi = chars[int(row["index"])] * limit
        if int(evaluate(chi, support)) != int(row["sign"]):
            mismatches += 1
    return mismatches
