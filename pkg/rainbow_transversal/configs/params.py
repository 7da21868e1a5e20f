from pathlib import Path
from typing import Optional, Type, TypeVar
from pydantic import BaseModel, ValidationError
from .logger import logging
from ..models import PipelineParams, ExperimentSpec

ModelT = TypeVar("ModelT", bound=BaseModel)


def _load(path: str, model: Type[ModelT], tag: str) -> ModelT:
    file_path = Path(path)
    if not file_path.is_file():
        raise ValueError(f"[{tag}] The file {path} does not exist.")
    try:
        logging.info(f"[{tag}] Loading {model.__name__} from {path}.")
        return model.model_validate_json(file_path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ValueError(f"[{tag}] Invalid {model.__name__} in {path} --> {e}")
    except Exception as e:
        raise ValueError(f"[{tag}] Could not read {path} --> {e}")


def load_params(path: Optional[str] = None) -> PipelineParams:
    """Pipeline parameters from a JSON file; fields left out keep their defaults."""
    if path is None:
        return PipelineParams()
    return _load(path, PipelineParams, "PARAMS")


def load_experiment_spec(path: str) -> ExperimentSpec:
    return _load(path, ExperimentSpec, "EXPERIMENT SPEC")
