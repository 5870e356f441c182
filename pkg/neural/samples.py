# neural/samples.py - Training rows: reduced factor inputs paired with next-day returns

from dataclasses import dataclass

import numpy as np
import pandas as pd

from utils.errors import DimensionError, ValidationError


@dataclass(frozen=True, eq=False)
class TrainingSample:
    input: np.ndarray
    target: float


@dataclass(frozen=True, eq=False)
class TrainingSet:
    inputs: np.ndarray      # (d, k)
    targets: np.ndarray     # (d,)
    index: pd.Index = None  # optional (date, stock_id) labels

    def __post_init__(self):
        inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if len(targets) == 0:
            inputs = inputs.reshape(0, inputs.shape[-1] if inputs.size else 0)
        if inputs.shape[0] != targets.shape[0]:
            raise DimensionError(f"{inputs.shape[0]} inputs vs {targets.shape[0]} targets")
        if not (np.isfinite(inputs).all() and np.isfinite(targets).all()):
            raise ValidationError("training inputs and targets must be finite")
        object.__setattr__(self, 'inputs', inputs)
        object.__setattr__(self, 'targets', targets)

    @classmethod
    def from_samples(cls, samples):
        samples = list(samples)
        if not samples:
            return cls(np.empty((0, 0)), np.empty(0))
        return cls(np.vstack([s.input for s in samples]), np.array([s.target for s in samples]))

    @classmethod
    def from_frames(cls, features, targets):
        """
        Join (date, stock_id)-indexed features with a target series.

        Rows whose target is missing (the last day of a window, a stock without
        a next bar) are dropped.
        """
        joined = features.join(targets.rename('__target__'), how='inner')
        joined = joined[np.isfinite(joined['__target__'].to_numpy(dtype=float))]
        return cls(
            inputs=joined.drop(columns='__target__').to_numpy(dtype=float),
            targets=joined['__target__'].to_numpy(dtype=float),
            index=joined.index,
        )

    @property
    def width(self):
        return self.inputs.shape[1]

    def __len__(self):
        return len(self.targets)

    def __iter__(self):
        for row, target in zip(self.inputs, self.targets):
            yield TrainingSample(row, float(target))
