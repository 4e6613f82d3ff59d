from __future__ import annotations

import sys
import shlex
import logging
from os import PathLike
from pathlib import Path
from typing import Callable, List

logger = logging.getLogger("dualprobe")
logger.setLevel(logging.INFO)
_handler = logging.StreamHandler(sys.stderr)
# LEVEL   [YYYY-mm-dd HH:MM:SS] message
# so the logs of the job scripts can be populated by pipen-poplog
_handler.setFormatter(
    logging.Formatter(
        "%(levelname)-7s [%(asctime)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
)
logger.addHandler(_handler)
logger.propagate = False


def set_loglevel(verbose: bool) -> None:
    """Switch the dualprobe logger between INFO and DEBUG"""
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def run_command(
    cmd: List[str | PathLike],
    stdout: str | PathLike | None = None,
    print_command: bool = True,
    print_command_handler: Callable[[str], None] = logger.info,
) -> str | None:
    """Run a command and wait for it.

    Args:
        cmd: The command as a list of arguments.
        stdout: A file to write the standard output to.
            `"RETURN"` to return the output instead.
            `None` to pass it through to the current process.
        print_command: Whether to log the command before running it.
        print_command_handler: The function to log the command with.

    Returns:
        The standard output when `stdout` is `"RETURN"`, otherwise `None`.
    """
    from subprocess import run, PIPE

    cmd = [str(c) for c in cmd]
    if print_command:
        print_command_handler(f"RUNNING COMMAND: {shlex.join(cmd)}")

    if stdout in ("RETURN", "return"):
        proc = run(cmd, stdout=PIPE)
        out = proc.stdout.decode()
    elif stdout is not None:
        with Path(stdout).open("w") as fout:
            proc = run(cmd, stdout=fout)
        out = None
    else:
        proc = run(cmd)
        out = None

    if proc.returncode != 0:
        raise RuntimeError(
            f"Failed to run command (exit {proc.returncode}): {shlex.join(cmd)}"
        )

    return out
