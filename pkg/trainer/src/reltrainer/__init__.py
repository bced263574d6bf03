"""reltrainer: transformer relation classifier over relstress dataset exports."""

__version__ = "0.1.0"

from .data import RelationExample, read_export
from .labels import ID2LABEL, LABEL2ID, LABELS
from .predict import predict, write_predictions
from .preprocess import MarkersMissing, to_model_text, truncate_around_entities
from .training import TrainConfig, TrainResult, train

__all__ = [
    "__version__",
    "ID2LABEL",
    "LABEL2ID",
    "LABELS",
    "MarkersMissing",
    "RelationExample",
    "TrainConfig",
    "TrainResult",
    "predict",
    "read_export",
    "to_model_text",
    "train",
    "truncate_around_entities",
    "write_predictions",
]
