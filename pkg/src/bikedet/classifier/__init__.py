"""Single-frame fusers: linear SVM and attentional cascade."""

from .cascade import Cascade, CascadeStage, calibrate_cascade, cascade_decide
from .modelfile import Model, load_model, parse_model, render_model, save_model
from .select import train_model
from .svm import SvmModel, svm_decide, svm_objective, svm_score, train_svm
from .training import TrainingSet

__all__ = [
    "Cascade",
    "CascadeStage",
    "calibrate_cascade",
    "cascade_decide",
    "Model",
    "load_model",
    "parse_model",
    "render_model",
    "save_model",
    "train_model",
    "SvmModel",
    "svm_decide",
    "svm_objective",
    "svm_score",
    "train_svm",
    "TrainingSet",
]
