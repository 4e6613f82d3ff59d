"""Processes probing the duality of subgroups of Z(2)^ω and the circle group

Each process runs one `dualprobe` subcommand and keeps its JSON report.
"""
from ..core.proc import Proc
from ..core.config import config


class Witness(Proc):
    """Refute the convergence of a sequence of characters to the identity

    Selects characters with geometrically growing pivots and builds an element
    with thin support on which all of them take the value -1.

    Input:
        charfile: The character file, one character per line, coordinates
            separated by spaces

    Output:
        outfile: The witness report in JSON

    Envs:
        max_select (type=int): Number of characters to select
        growth_factor: The rational factor (>= 2) the pivots grow by
        horizon (type=int): The horizon for the density bound of the pivots
        limit: A candidate limit character such as `"1 4"`.
            The characters are translated by it before refuting.
    """
    input = "charfile:file"
    output = "outfile:file:{{in.charfile | stem}}.witness.json"
    envs = {
        "max_select": config.witness.max_select,
        "growth_factor": config.witness.growth_factor,
        "horizon": config.witness.horizon,
        "limit": None,
    }
    script = "file://../scripts/duality/Witness.py"


class AnnihilateElements(Proc):
    """Compute the characters inside a window annihilating some elements

    Input:
        genfile: A JSON file with one support object or a list of them

    Output:
        outfile: The annihilator report in JSON, with a basis of the characters

    Envs:
        window (type=int): The width W of the coordinate window {0, ..., W-1}
    """
    input = "genfile:file"
    output = "outfile:file:{{in.genfile | stem}}.annihilator.json"
    envs = {"window": config.annihilators.window}
    script = "file://../scripts/duality/AnnihilateElements.py"


class HaarMeasure(Proc):
    """Estimate the Haar measure of the low-density events F_{m,N}

    The result only depends on the seed, the number of samples and the block
    size, not on the number of workers.

    Input:
        seed: The sampling seed

    Output:
        outfile: The estimate report in JSON

    Envs:
        m (type=int): The least k in the density condition
        N (type=int): The density threshold is 1/N
        horizon (type=int): The events are truncated at this horizon
        complement (flag): Estimate O_{m,N} instead of F_{m,N}
        samples (type=int): Number of samples
        block_size (type=int): Samples per counter block
        workers (type=int): Worker processes
    """
    input = "seed:var"
    output = "outfile:file:haar-{{in.seed}}.json"
    envs = {
        "m": config.measure.m,
        "N": config.measure.N,
        "horizon": config.measure.horizon,
        "complement": False,
        "samples": config.measure.samples,
        "block_size": config.measure.block_size,
        "workers": config.measure.workers,
    }
    script = "file://../scripts/duality/HaarMeasure.py"


class CharsubMember(Proc):
    """Decide whether a rational point lies in a characterized subgroup

    Input:
        point: The rational point `p/q`
        sequence: The sequence, as a JSON file or an inline JSON object
            like `{"family": "geometric", "params": {"r": 2}}`

    Output:
        outfile: The membership report in JSON

    Envs:
        max_states (type=int): Upper bound of residue states explored for
            linear recurrences
    """
    input = "point:var, sequence:var"
    output = "outfile:file:{{in.point | replace: '/', '_'}}.member.json"
    envs = {"max_states": config.charsub.max_states}
    script = "file://../scripts/duality/CharsubMember.py"
