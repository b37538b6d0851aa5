"""
Versioned JSON model files
"""

import json
from pathlib import Path
from typing import Union

from boosting.model import BoostedModel
from processors.curve_io import atomic_write
from utils.errors import DataFormatError
from utils.logger import get_logger

logger = get_logger("ModelStore")

MODEL_FORMAT = "funcboost-model"
MODEL_VERSION = 1


def dumps_model(model: BoostedModel) -> str:
    """Canonical text of a model file: sorted keys, fixed indentation, trailing newline"""
    document = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "model": model.to_dict()}
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads_model(text: str) -> BoostedModel:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"model file is not valid JSON: {e}") from e
    if not isinstance(document, dict) or document.get("format") != MODEL_FORMAT:
        raise DataFormatError("not a FuncBoost model file")
    if "version" not in document:
        raise DataFormatError("model file has no version field")
    if document["version"] != MODEL_VERSION:
        raise DataFormatError(f"unsupported model file version {document['version']}")
    return BoostedModel.from_dict(document["model"])


def save_model(model: BoostedModel, path: Union[str, Path]) -> Path:
    """Write the model file atomically"""
    path = Path(path)
    try:
        text = dumps_model(model)
    except ValueError as e:
        raise DataFormatError(f"model cannot be serialized: {e}") from e
    atomic_write(path, lambda handle: handle.write(text))
    logger.info(f"Saved {model.algorithm} model with {model.M} stages to {path}")
    return path


def load_model(path: Union[str, Path]) -> BoostedModel:
    path = Path(path)
    model = loads_model(path.read_text())
    logger.debug(f"Loaded {model.algorithm} model with {model.M} stages from {path}")
    return model
