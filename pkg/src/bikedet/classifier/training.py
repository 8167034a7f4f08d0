"""Labeled feature matrices for training the single-frame fusers."""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigError
from ..features import (
    DEFAULT_FEATURE_LAYOUT,
    FeatureLayout,
    FeatureRow,
    FeatureVector,
    vectors_to_matrix,
)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """
    Positive (bicycle) and negative feature rows in `layout` column order.

    Unset speeds are stored as NaN.
    """

    layout: FeatureLayout
    positives: np.ndarray
    negatives: np.ndarray

    def __post_init__(self):
        for name in ("positives", "negatives"):
            rows = np.asarray(getattr(self, name), dtype=np.float64)
            if rows.size == 0:
                rows = rows.reshape(0, len(self.layout))
            if rows.ndim != 2 or rows.shape[1] != len(self.layout):
                raise ConfigError(
                    f"{name} have shape {rows.shape}, layout has {len(self.layout)} features"
                )
            object.__setattr__(self, name, rows)

    @classmethod
    def from_vectors(
        cls,
        positives: Iterable[FeatureVector],
        negatives: Iterable[FeatureVector],
        layout: FeatureLayout = DEFAULT_FEATURE_LAYOUT,
    ) -> "TrainingSet":
        return cls(
            layout, vectors_to_matrix(positives, layout), vectors_to_matrix(negatives, layout)
        )

    @classmethod
    def from_rows(
        cls, rows: Sequence[FeatureRow], layout: FeatureLayout = DEFAULT_FEATURE_LAYOUT
    ) -> "TrainingSet":
        """Split a feature dump into bicycle rows and everything else."""
        return cls.from_vectors(
            (r.features for r in rows if r.is_bicycle),
            (r.features for r in rows if not r.is_bicycle),
            layout,
        )

    def column(self, name: str) -> int:
        try:
            return self.layout.names.index(name)
        except ValueError:
            raise ConfigError(f"feature {name!r} is not in the training layout {self.layout}")

    def select(self, layout: FeatureLayout) -> "TrainingSet":
        """Same rows restricted (and reordered) to another layout."""
        cols = [self.column(n) for n in layout]
        return TrainingSet(layout, self.positives[:, cols], self.negatives[:, cols])

    def complete_rows(self) -> "TrainingSet":
        """Drop rows with any unset feature."""
        return TrainingSet(
            self.layout,
            self.positives[~np.isnan(self.positives).any(axis=1)],
            self.negatives[~np.isnan(self.negatives).any(axis=1)],
        )

    @property
    def balance(self) -> float:
        """Negatives per positive (about 2 is recommended)."""
        return len(self.negatives) / max(len(self.positives), 1)
