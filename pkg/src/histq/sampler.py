"""Seeded Monte Carlo realization of a certified family.

Each run draws one elementary history from the family's normalized weights
(a single categorical draw over whole histories; the weights already define
the full joint distribution).  Runs are partitioned into fixed-size chunks,
each driven by a generator derived from the master seed, so a report is
bit-identical whether the chunks execute on one worker or many.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .families import Family, ZERO_WEIGHT

#: Runs per deterministic chunk; workers take whole chunks.
CHUNK = 1 << 14

PRNG_NAME = "numpy-pcg64/seedseq(seed,chunk)"


@dataclass(frozen=True)
class SampleReport:
    """Counts and frequencies of elementary histories over n runs."""

    family: Optional[str]
    n_runs: int
    seed: int
    counts: Tuple[int, ...]           # one entry per elementary history
    frequencies: Tuple[float, ...]
    analytic: Tuple[float, ...]
    max_abs_dev: float
    prng: str = PRNG_NAME

    def counts_by_label(self, fam: Family) -> Dict[str, int]:
        return {
            " . ".join(h.labels()): c
            for h, c in zip(fam.elementary, self.counts)
        }

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n_runs": self.n_runs,
            "seed": self.seed,
            "prng": self.prng,
            "counts": list(self.counts),
            "frequencies": list(self.frequencies),
            "analytic": list(self.analytic),
            "max_abs_dev": self.max_abs_dev,
        }


def sample(f: Family, n: int, seed: int) -> SampleReport:
    """Draw n independent elementary histories; deterministic in (f, n, seed).

    Zero-weight histories carry exactly zero probability mass and are never
    drawn.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = np.array(f.certificate.weights, dtype=float)
    weights[weights <= ZERO_WEIGHT] = 0.0
    p = weights / weights.sum()

    counts = np.zeros(len(p), dtype=np.int64)
    chunk_index = 0
    remaining = n
    while remaining > 0:
        size = min(CHUNK, remaining)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, chunk_index])))
        counts += rng.multinomial(size, p)
        remaining -= size
        chunk_index += 1

    freqs = counts / n
    dev = float(np.max(np.abs(freqs - p)))
    return SampleReport(
        family=f.name,
        n_runs=n,
        seed=seed,
        counts=tuple(int(c) for c in counts),
        frequencies=tuple(float(x) for x in freqs),
        analytic=tuple(float(x) for x in p),
        max_abs_dev=dev,
    )
