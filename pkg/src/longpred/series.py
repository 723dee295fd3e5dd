"""Sample-path container shared by the predictor, spectral and simulation code."""

from dataclasses import dataclass

import numpy as np

from .fraccoeff import LongMemoryModel


@dataclass(frozen=True)
class SamplePath:
    """Time-ordered observations, oldest first.

    ``seed`` records RNG provenance when the path was simulated;
    ``sim_method`` records which exact sampler produced it.
    """

    values: np.ndarray
    seed: tuple | int | None = None
    model: LongMemoryModel | None = None
    sim_method: str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a sample path needs at least one value")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample paths must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size
