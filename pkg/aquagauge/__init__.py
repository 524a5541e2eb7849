"""Water quality index calculation, four-month WQI forecasting and fish disease diagnosis."""
from .diseases import default_ruleset, diagnose, load_rules
from .forecast import build_features, build_supervised, split_by_station
from .gbm import GbmModel, Hyperparams, gbm_fit, gbm_predict
from .ingest import Dataset, WaterSample, impute_missing, load_dataset, parse_dataset
from .metrics import evaluate
from .model_io import deserialize_model, load_model, serialize_model
from .tree import FeatureMatrix
from .wqi import compute_wqi, sub_index

__all__ = [
    "Dataset",
    "FeatureMatrix",
    "GbmModel",
    "Hyperparams",
    "WaterSample",
    "build_features",
    "build_supervised",
    "compute_wqi",
    "default_ruleset",
    "deserialize_model",
    "diagnose",
    "evaluate",
    "gbm_fit",
    "gbm_predict",
    "impute_missing",
    "load_dataset",
    "load_model",
    "load_rules",
    "parse_dataset",
    "serialize_model",
    "split_by_station",
    "sub_index",
]
