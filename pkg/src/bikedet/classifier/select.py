"""Train whichever fuser the classifier section asks for."""

import logging
from typing import Optional

from ..config import ClassifierParams
from ..features import FeatureLayout
from .cascade import calibrate_cascade
from .modelfile import Model
from .svm import train_svm
from .training import TrainingSet

logger = logging.getLogger(__name__)


def train_model(data: TrainingSet, params: Optional[ClassifierParams] = None) -> Model:
    """
    Train an SVM or calibrate a cascade on `data` restricted to the configured layout.

    Args:
        data: Labeled feature rows
        params: Method, layout and training parameters (defaults if None)

    Returns:
        Trained model
    """
    params = ClassifierParams.build(params)
    layout = FeatureLayout(tuple(params.layout))
    data = data.select(layout)
    logger.info(
        "training %s on %d positives, %d negatives (%.2f negatives per positive)",
        params.method,
        len(data.positives),
        len(data.negatives),
        data.balance,
    )
    if params.method == "svm":
        return train_svm(data, regularization=params.regularization, budget=params.budget)
    order = [n for n in params.stage_order if n in layout.names]
    return calibrate_cascade(data, per_stage_tpr=params.per_stage_tpr, stage_order=order)
