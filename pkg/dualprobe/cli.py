"""The dualprobe command line

Every subcommand prints a report on stdout, as text or as JSON with --json.
Exit status: 0 on success, 2 on input errors, 3 on inconclusive verdicts
with --strict.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence

from argx import ArgumentParser, Namespace
from diot import Diot

from . import __version__
from .core.config import config
from .core.errors import DualProbeError, ParseError, PreconditionError
from .utils import logger, set_loglevel
from .utils.annihilators import (
    CoordinateCharacters,
    Exactness,
    ShiftedCharacters,
    Window,
    annihilator_of_characters,
    annihilator_of_elements,
    diagonal_image,
    quotient_image_count,
    separating_check,
    stabilization_index,
)
from .utils.circle_char import (
    RationalPoint,
    float_membership,
    measure_probe,
    rational_membership,
)
from .utils.formats import (
    dump_report,
    make_report,
    parse_bits,
    parse_character,
    read_characters,
    read_sequence,
    read_support_pairs,
    read_supports,
)
from .utils.gf2_core import thinness_report
from .utils.measure_category import (
    DensityEvent,
    OmnParams,
    ThresholdEvent,
    cover_check,
    dense_extension,
    haar_estimate,
    in_O,
)
from .utils.witness import refute_convergence, translate_sequence

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


class RunConfig(Diot):
    """The parsed command line of one run

    `command` is the subcommand (`charsub member` for nested ones); the other
    keys are the flags, dashes turned into underscores.
    """


@dataclass
class Outcome:
    """What a subcommand produced

    Attributes:
        payload: The report body
        lines: The human-readable report
        conclusive: False when a verdict is bounded by a horizon or budget
    """

    payload: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    conclusive: bool = True


def _fraction(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational, got {value!r}") from None


def _grid_entry(value: str) -> OmnParams:
    parts = value.split(",")
    if len(parts) != 3:
        raise ParseError(f"expected m,N,H, got {value!r}", field="grid")
    try:
        m, N, H = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"expected integers, got {value!r}", field="grid") from None
    return OmnParams(m, N, H)


def _sign_row(signs: Sequence[Any]) -> str:
    return " ".join(f"{int(s):+d}" for s in signs)


# witness ---------------------------------------------------------------


def _cmd_witness(args: RunConfig) -> Outcome:
    chars = read_characters(args.chars)
    if not chars:
        raise PreconditionError("chars", "no characters")
    stream = chars
    # positions in the stream, as line indices of the input
    origin = list(range(len(chars)))
    limit = None
    if args.limit is not None:
        limit = parse_character(args.limit, source="--limit")
        translated = list(translate_sequence(chars, limit))
        origin = [i for i, _ in translated]
        stream = [chi for _, chi in translated]

    report = refute_convergence(
        stream,
        args.max_select,
        _fraction(args.growth_factor),
        args.horizon,
    )
    sel = report.selection
    payload = {
        "selected": [origin[i] for i in sel.indices],
        "pivots": list(sel.pivots),
        "skipped": sel.skipped,
        "growth_factor": sel.growth_factor,
        "limit": limit,
        "witness": {
            "support": report.witness.support,
            "guarantees": [
                {"index": origin[i], "character": chi, "sign": sign}
                for (i, sign), chi in zip(
                    report.witness.guarantees, sel.characters
                )
            ],
        },
        "exhausted": report.exhausted,
        "note": report.note,
        "density": {
            "horizon": report.horizon,
            "pivots_below": report.pivots_below,
            "bound": report.density_bound,
            "holds": report.bound_holds,
        },
    }
    lines = [
        f"selected {len(sel.selected)} of {args.max_select} "
        f"(skipped {sel.skipped}), growth factor {sel.growth_factor}",
        f"witness support: {report.witness.support}",
        "index\tpivot\tcharacter\tsign",
    ]
    for ((i, sign), chi), pivot in zip(
        zip(report.witness.guarantees, sel.characters), sel.pivots
    ):
        lines.append(f"{origin[i]}\t{pivot}\t{chi}\t{sign}")
    lines.append(
        f"pivots below {report.horizon}: {report.pivots_below} "
        f"<= {report.density_bound}"
    )
    if report.note:
        lines.append(f"note: {report.note}")
    return Outcome(payload, lines, not report.exhausted)


def _cmd_thinness(args: RunConfig) -> Outcome:
    payload = {"horizon": args.horizon, "supports": []}
    lines = []
    conclusive = True
    for x in read_supports(args.supports):
        rep = thinness_report(x, args.horizon)
        conclusive = conclusive and rep.conclusive
        payload["supports"].append(
            {
                "support": x,
                "verdict": rep.verdict,
                "reason": rep.reason,
                "limit_density": rep.limit_density,
                "profile": [{"k": k, "density": d} for k, d in rep.profile],
            }
        )
        last_k, last_d = rep.profile[-1]
        lines.append(
            f"{x}: {rep.verdict.value} ({rep.reason}), "
            f"density at {last_k}: {last_d}"
        )
    return Outcome(payload, lines, conclusive)


# annihilators ----------------------------------------------------------


def _cmd_annihilate_elements(args: RunConfig) -> Outcome:
    window = Window(args.window)
    basis = annihilator_of_elements(read_supports(args.generators), window)
    payload = {
        "window": window.width,
        "rank": basis.rank,
        "size": basis.size,
        "basis": list(basis.basis),
    }
    lines = [f"window {window.width}, rank {basis.rank}"]
    lines.extend(str(chi) for chi in basis.basis)
    return Outcome(payload, lines)


def _cmd_annihilate_chars(args: RunConfig) -> Outcome:
    window = Window(args.window)
    solution = annihilator_of_characters(read_characters(args.chars), window)
    payload = {
        "window": window.width,
        "rank": solution.rank,
        "basis": [list(vec) for vec in solution.basis],
        "free_tail_from": solution.free_tail_from,
    }
    lines = [
        f"window {window.width}, rank {solution.rank}, "
        f"coordinates >= {solution.free_tail_from} unconstrained"
    ]
    lines.extend("".join(map(str, vec)) for vec in solution.basis)
    return Outcome(payload, lines)


def _cmd_diagonal(args: RunConfig) -> Outcome:
    chars = read_characters(args.chars)
    points = read_supports(args.supports)
    images = [diagonal_image(chars, x) for x in points]
    payload = {
        "images": [
            {"support": x, "signs": list(img.signs), "stabilized_at": img.stabilized_at}
            for x, img in zip(points, images)
        ],
        "distinct": quotient_image_count(chars, points),
    }
    lines = [
        f"{x}: {_sign_row(img.signs)} (stable from {img.stabilized_at})"
        for x, img in zip(points, images)
    ]
    lines.append(f"distinct images: {payload['distinct']}")
    return Outcome(payload, lines)


def _cmd_stabilize(args: RunConfig) -> Outcome:
    if args.offsets:
        sequence = ShiftedCharacters(args.step, tuple(args.offsets))
    else:
        sequence = CoordinateCharacters()
    payload = {"budget": args.budget, "results": []}
    lines = []
    conclusive = True
    for x in read_supports(args.supports):
        res = stabilization_index(sequence, x, args.budget)
        conclusive = conclusive and res.exactness is Exactness.EXACT
        payload["results"].append(
            {
                "support": x,
                "index": res.index,
                "exactness": res.exactness,
                "probed": res.probed,
                "horizon": res.horizon,
            }
        )
        lines.append(
            f"{x}: STABILIZED({res.index}) {res.exactness.value}, "
            f"probed {res.probed}"
        )
    return Outcome(payload, lines, conclusive)


def _cmd_separate(args: RunConfig) -> Outcome:
    chars = read_characters(args.chars)
    pairs = read_support_pairs(args.pairs)
    checks = separating_check(chars, pairs)
    payload = {
        "pairs": [
            {
                "x": pairs[c.pair][0],
                "y": pairs[c.pair][1],
                "separated": c.separated,
                "character": c.character,
                "position": c.position,
            }
            for c in checks
        ]
    }
    lines = [
        f"pair {c.pair}: "
        + (f"separated by {c.character}" if c.separated else "NOT_SEPARATED")
        for c in checks
    ]
    return Outcome(payload, lines)


# measure and category --------------------------------------------------


def _estimate_payload(rep: Any) -> Dict[str, Any]:
    return {
        "estimate": rep.estimate,
        "estimate_float": float(rep.estimate),
        "samples": rep.samples,
        "seed": rep.seed,
        "std_error": rep.std_error,
        "exact": rep.exact,
        "within_3se": rep.within(3.0),
    }


def _estimate_lines(rep: Any) -> List[str]:
    lines = [
        f"estimate {float(rep.estimate):.6f} ({rep.estimate}) "
        f"± {rep.std_error:.6f}, {rep.samples} samples, seed {rep.seed}"
    ]
    if rep.exact is not None:
        lines.append(f"exact {float(rep.exact):.6f} ({rep.exact})")
    return lines


def _cmd_measure(args: RunConfig) -> Outcome:
    if args.threshold is not None:
        k, t = args.threshold
        event: Any = ThresholdEvent(k, t)
    else:
        event = DensityEvent(
            OmnParams(args.m, args.N, args.horizon), args.complement
        )
    rep = haar_estimate(
        event, args.samples, args.seed, args.block_size, args.workers
    )
    payload = {"event": str(event), **_estimate_payload(rep)}
    return Outcome(payload, [f"event {event}", *_estimate_lines(rep)])


def _cmd_cover(args: RunConfig) -> Outcome:
    grid = [_grid_entry(g) for g in args.grid]
    if not grid:
        raise PreconditionError("grid", "at least one m,N,H entry is required")
    results = cover_check(read_supports(args.supports), grid)
    payload = {
        "grid": [{"m": p.m, "N": p.N, "H": p.H} for p in grid],
        "samples": [
            {
                "support": r.sample,
                "assigned": r.assigned,
                "params": None if r.params is None else {
                    "m": r.params.m, "N": r.params.N, "H": r.params.H
                },
                "skipped": r.skipped,
            }
            for r in results
        ],
    }
    lines = []
    for r in results:
        if r.skipped:
            lines.append(f"{r.sample}: skipped, {r.skipped}")
        elif r.assigned:
            p = r.params
            lines.append(f"{r.sample}: in F_{{{p.m},{p.N}}} up to {p.H}")
        else:
            lines.append(f"{r.sample}: not assigned within the grid")
    return Outcome(payload, lines, all(r.assigned for r in results))


def _cmd_dense_ext(args: RunConfig) -> Outcome:
    bits = parse_bits(args.prefix)
    params = OmnParams(args.m, args.N, max(args.m, args.horizon))
    support = dense_extension(bits, params)
    end = max(args.m, len(bits), 0 if support.max is None else support.max + 1)
    check = in_O(support, OmnParams(args.m, args.N, end))
    payload = {"support": support, "witness_k": check.k}
    return Outcome(payload, [f"support {support}, witness k={check.k}"])


# characterized subgroups -----------------------------------------------


def _cmd_charsub_member(args: RunConfig) -> Outcome:
    point = RationalPoint.of(args.point)
    sequence = read_sequence(args.sequence)
    res = rational_membership(point, sequence, args.max_states)
    payload = {
        "point": str(point),
        "sequence": sequence.to_dict(),
        "verdict": res.verdict,
        "index": res.index,
        "cycle_start": res.cycle_start,
        "cycle": list(res.cycle),
    }
    line = f"{point}: {res.verdict.value}"
    if res.index is not None:
        line += f" from index {res.index}"
    else:
        line += f", residue cycle {list(res.cycle)} from index {res.cycle_start}"
    return Outcome(payload, [line])


def _cmd_charsub_probe(args: RunConfig) -> Outcome:
    sequence = read_sequence(args.sequence)
    point: Any = args.point
    if "/" in point:
        point = _fraction(point)
    rep = float_membership(
        point,
        sequence,
        args.horizon,
        _fraction(args.epsilon),
        args.precision,
        args.guard_bits,
    )
    payload = {
        "point": args.point,
        "sequence": sequence.to_dict(),
        "verdict": rep.verdict,
        "horizon": rep.horizon,
        "epsilon": rep.epsilon,
        "precision": rep.precision,
        "required_bits": rep.required_bits,
        "tail_from": rep.tail_from,
        "excursions": rep.excursions,
        "distances": list(rep.distances),
    }
    lines = [
        f"{args.point}: {rep.verdict.value} over k <= {rep.horizon}",
        f"max distance {rep.max_distance:.3e}, tail max {rep.tail_max:.3e}, "
        f"{rep.excursions} tail excursion(s) >= {rep.epsilon}",
    ]
    return Outcome(payload, lines, rep.conclusive)


def _cmd_charsub_measure(args: RunConfig) -> Outcome:
    sequence = read_sequence(args.sequence)
    rep = measure_probe(
        sequence,
        _fraction(args.epsilon),
        args.constraints,
        args.samples,
        args.seed,
        args.precision,
        args.guard_bits,
        args.block_size,
        args.workers,
    )
    payload = {
        "sequence": sequence.to_dict(),
        "epsilon": _fraction(args.epsilon),
        "constraints": args.constraints,
        **_estimate_payload(rep),
    }
    return Outcome(payload, _estimate_lines(rep))


COMMANDS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "witness": _cmd_witness,
    "thinness": _cmd_thinness,
    "annihilate-elements": _cmd_annihilate_elements,
    "annihilate-chars": _cmd_annihilate_chars,
    "diagonal": _cmd_diagonal,
    "stabilize": _cmd_stabilize,
    "separate": _cmd_separate,
    "measure": _cmd_measure,
    "cover": _cmd_cover,
    "dense-ext": _cmd_dense_ext,
    "charsub member": _cmd_charsub_member,
    "charsub probe": _cmd_charsub_probe,
    "charsub measure": _cmd_charsub_measure,
}


def _add_common(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--json", action="store_true", help="Print the report as JSON"
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="Exit with 3 when a verdict is bounded by a horizon or budget",
    )
    parser.add_argument(
        "--no-meta",
        dest="meta",
        action="store_false",
        default=bool(config.report.meta),
        help="Leave the version and timestamp out of JSON reports",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages"
    )


def _add_sampling(parser: ArgumentParser, samples: int) -> None:
    parser.add_argument("--samples", type=int, default=samples)
    parser.add_argument(
        "--seed",
        type=int,
        default=config.measure.seed,
        help="Sampling seed, defaults to $DUALPROBE_SEED or the config file",
    )
    parser.add_argument(
        "--block-size",
        type=int,
        default=config.measure.block_size,
        help="Samples per counter block; part of the sampling contract",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=config.measure.workers,
        help="Worker processes; the output does not depend on it",
    )


def build_parser() -> ArgumentParser:
    """The parser with all subcommands"""
    parser = ArgumentParser(
        prog="dualprobe",
        description="Probe duality of subgroups of Z(2)^ω and the circle group",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("witness", help="Refute convergence of characters to e")
    p.add_argument("chars", help="Character file, one character per line")
    p.add_argument("--max-select", type=int, default=config.witness.max_select)
    p.add_argument(
        "--growth-factor", default=str(config.witness.growth_factor),
        help="Rational pivot growth factor >= 2",
    )
    p.add_argument("--horizon", type=int, default=config.witness.horizon)
    p.add_argument(
        "--limit",
        help="Candidate limit character, e.g. '1 4'; the sequence is "
        "translated by it first",
    )
    _add_common(p)

    p = sub.add_parser("thinness", help="Classify supports as thin or not")
    p.add_argument("supports", help="Support JSON file or inline JSON")
    p.add_argument("--horizon", type=int, default=config.witness.horizon)
    _add_common(p)

    p = sub.add_parser(
        "annihilate-elements", help="Characters trivial on the generators"
    )
    p.add_argument("generators", help="Support JSON file or inline JSON")
    p.add_argument("--window", type=int, default=config.annihilators.window)
    _add_common(p)

    p = sub.add_parser(
        "annihilate-chars", help="Elements on which the characters are trivial"
    )
    p.add_argument("chars", help="Character file")
    p.add_argument("--window", type=int, default=config.annihilators.window)
    _add_common(p)

    p = sub.add_parser("diagonal", help="Diagonal images of elements")
    p.add_argument("chars", help="Character file")
    p.add_argument("supports", help="Support JSON file or inline JSON")
    _add_common(p)

    p = sub.add_parser("stabilize", help="Stabilization index of elements")
    p.add_argument("supports", help="Support JSON file or inline JSON")
    p.add_argument("--budget", type=int, default=config.annihilators.budget)
    p.add_argument(
        "--step", type=int, default=1, help="A_n = {step*n + o : o in offsets}"
    )
    p.add_argument(
        "--offsets", type=int, nargs="+",
        help="Offsets of the shifted blocks; coordinate characters {n} if absent",
    )
    _add_common(p)

    p = sub.add_parser("separate", help="Check that characters separate pairs")
    p.add_argument("chars", help="Character file")
    p.add_argument("pairs", help="JSON list of [x, y] support pairs")
    _add_common(p)

    p = sub.add_parser("measure", help="Haar measure of F_{m,N} up to H")
    p.add_argument("--m", type=int, default=config.measure.m)
    p.add_argument("--N", type=int, default=config.measure.N)
    p.add_argument("--horizon", type=int, default=config.measure.horizon)
    p.add_argument(
        "--complement", action="store_true", help="Estimate O_{m,N} instead"
    )
    p.add_argument(
        "--threshold", type=int, nargs=2, metavar=("K", "T"),
        help="Estimate P(|supp ∩ K| >= T) instead",
    )
    _add_sampling(p, config.measure.samples)
    _add_common(p)

    p = sub.add_parser("cover", help="Place thin elements into some F_{m,N}")
    p.add_argument("supports", help="Support JSON file or inline JSON")
    p.add_argument(
        "--grid", action="append", default=[], metavar="m,N,H",
        help="A grid entry; repeat for more",
    )
    _add_common(p)

    p = sub.add_parser("dense-ext", help="Extend a bit prefix into O_{m,N}")
    p.add_argument("--prefix", default="", help="Bits, e.g. 0110")
    p.add_argument("--m", type=int, default=config.measure.m)
    p.add_argument("--N", type=int, default=config.measure.N)
    p.add_argument("--horizon", type=int, default=config.measure.horizon)
    _add_common(p)

    charsub = sub.add_parser(
        "charsub", help="Characterized subgroups of the circle group"
    )
    charsub_sub = charsub.add_subparsers(dest="subcommand", required=True)

    p = charsub_sub.add_parser("member", help="Exact membership of p/q")
    p.add_argument("--point", required=True, help="Rational point p/q")
    p.add_argument("--sequence", required=True, help="Sequence JSON")
    p.add_argument("--max-states", type=int, default=config.charsub.max_states)
    _add_common(p)

    p = charsub_sub.add_parser("probe", help="Float probe of ‖n_k x‖")
    p.add_argument(
        "--point", required=True, help="A decimal string or a rational p/q"
    )
    p.add_argument("--sequence", required=True, help="Sequence JSON")
    p.add_argument("--horizon", type=int, default=config.charsub.horizon)
    p.add_argument("--epsilon", default=str(config.charsub.epsilon))
    p.add_argument("--precision", type=int, default=config.charsub.precision)
    p.add_argument("--guard-bits", type=int, default=config.charsub.guard_bits)
    _add_common(p)

    p = charsub_sub.add_parser(
        "measure", help="Measure of {x : ‖n_k x‖ <= epsilon for k < K}"
    )
    p.add_argument("--sequence", required=True, help="Sequence JSON")
    p.add_argument("--epsilon", default=str(config.charsub.epsilon))
    p.add_argument("--constraints", type=int, default=1)
    p.add_argument("--precision", type=int, default=config.charsub.precision)
    p.add_argument("--guard-bits", type=int, default=config.charsub.guard_bits)
    _add_sampling(p, config.measure.samples)
    _add_common(p)

    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    args: Namespace = build_parser().parse_args(argv)
    opts = RunConfig(vars(args))
    if opts.command == "charsub":
        opts.command = f"charsub {opts.pop('subcommand')}"
    return opts


# Positional inputs keep their names in error messages
POSITIONALS = {"chars", "supports", "generators", "pairs"}


@dataclass
class RunResult:
    """The exit status of a run, its report and the human-readable lines"""

    status: int
    report: Dict[str, Any] | None = None
    lines: List[str] = field(default_factory=list)


def run(opts: RunConfig) -> RunResult:
    """Dispatch a run to its subcommand"""
    try:
        outcome = COMMANDS[opts.command](opts)
    except PreconditionError as err:
        name = err.param
        if name not in POSITIONALS:
            name = f"--{name.replace('_', '-')}"
        logger.error("[%s] %s: %s", err.code, name, str(err).split(": ", 1)[-1])
        return RunResult(EXIT_INPUT)
    except DualProbeError as err:
        logger.error("[%s] %s", err.code, err)
        return RunResult(EXIT_INPUT)

    outcome.payload["conclusive"] = outcome.conclusive
    report = make_report(opts.command, outcome.payload, opts.meta)
    status = EXIT_OK
    if opts.strict and not outcome.conclusive:
        logger.warning("Inconclusive verdict under --strict")
        status = EXIT_INCONCLUSIVE
    return RunResult(status, report, outcome.lines)


def main(argv: Sequence[str] | None = None) -> int:
    opts = parse_args(argv)
    set_loglevel(opts.verbose)
    result = run(opts)
    if result.report is not None:
        if opts.json:
            print(dump_report(result.report))
        else:
            print("\n".join(result.lines))
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
