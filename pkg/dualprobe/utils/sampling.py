"""Counter-based Monte Carlo sampling

Sample i belongs to block `i // block_size`. Block b draws its numbers from a
Philox stream keyed on the seed, with the counter starting at `b << 192`, so
every block is reproducible on its own. Blocks only report integer tallies,
which are summed; the total does not depend on which worker ran which block
or in what order.
"""
from __future__ import annotations

from math import ceil
from multiprocessing import Pool
from typing import Any, Callable, Iterator, List, Tuple

import numpy as np

from ..core.errors import PreconditionError
from .misc import logger

# Raw 64-bit words per chunk while drawing a block
CHUNK_WORDS = 1 << 20

BlockKernel = Callable[["BlockStream", int, Tuple[Any, ...]], int]


class BlockStream:
    """The raw Philox stream of one block"""

    def __init__(self, seed: int, block: int) -> None:
        self.seed = seed
        self.block = block
        self._bitgen = np.random.Philox(key=seed, counter=block << 192)

    def words(self, n: int) -> np.ndarray:
        """The next n raw uint64 words"""
        return self._bitgen.random_raw(n)

    def bit_rows(self, rows: int, width: int) -> Iterator[np.ndarray]:
        """Uniform bit matrices, `rows` rows of `width` bits in total

        Rows come in chunks; each row uses `ceil(width / 64)` whole words, so
        chunking does not change the bits.
        """
        per_row = max(1, ceil(width / 64))
        chunk = max(1, CHUNK_WORDS // per_row)
        done = 0
        while done < rows:
            n = min(chunk, rows - done)
            raw = self.words(n * per_row).reshape(n, per_row)
            bits = np.unpackbits(
                raw.view(np.uint8).reshape(n, per_row * 8),
                axis=1,
                bitorder="little",
            )
            yield bits[:, :width]
            done += n

    def integers(self, rows: int, bits: int) -> List[int]:
        """`rows` uniform integers in [0, 2^bits)"""
        per_row = max(1, ceil(bits / 64))
        raw = self.words(rows * per_row).reshape(rows, per_row)
        mask = (1 << bits) - 1
        out = []
        for row in raw.tolist():
            value = 0
            for i, word in enumerate(row):
                value |= int(word) << (64 * i)
            out.append(value & mask)
        return out


def check_seed(seed: int) -> None:
    if not 0 <= seed < 1 << 128:
        raise PreconditionError("seed", "must be in [0, 2^128)")


def _run_block(
    kernel: BlockKernel,
    seed: int,
    block: int,
    rows: int,
    args: Tuple[Any, ...],
) -> int:
    return kernel(BlockStream(seed, block), rows, args)


def tally(
    kernel: BlockKernel,
    args: Tuple[Any, ...],
    samples: int,
    seed: int,
    block_size: int,
    workers: int = 1,
) -> int:
    """Count the samples a kernel accepts

    Args:
        kernel: A module-level function `kernel(stream, rows, args)` returning
            how many of the `rows` samples it drew from `stream` are hits
        args: Extra arguments passed to the kernel
        samples: Total number of samples
        seed: The Philox key
        block_size: Samples per block
        workers: Worker processes; 1 runs the blocks in this process

    Returns:
        The number of hits over all samples
    """
    if samples < 1:
        raise PreconditionError("samples", "must be >= 1")
    if block_size < 1:
        raise PreconditionError("block_size", "must be >= 1")
    check_seed(seed)

    jobs = [
        (kernel, seed, block, min(block_size, samples - block * block_size), args)
        for block in range(ceil(samples / block_size))
    ]
    logger.debug(
        "sampling %s samples in %s block(s), %s worker(s)",
        samples, len(jobs), workers,
    )
    if workers > 1 and len(jobs) > 1:
        with Pool(min(workers, len(jobs))) as pool:
            hits = pool.starmap(_run_block, jobs)
    else:
        hits = [_run_block(*job) for job in jobs]
    return sum(hits)
