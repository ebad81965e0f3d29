import configparser
import logging
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / 'configs' / 'pdist_config.ini'
DEFAULT_SEED = 20240917


class QuadratureConfig(BaseModel):
    method: Literal['exact', 'adaptive', 'fixed'] = 'adaptive'
    abs_tol: float = Field(1e-10, gt=0)
    max_subdivisions: int = Field(200_000, gt=0)
    grid_size: int = Field(4096, ge=8)


class HarnessConfig(BaseModel):
    seed: int = DEFAULT_SEED
    workers: int = Field(4, ge=1)
    instances: int = Field(20, ge=1)
    search_budget: int = Field(2000, ge=0)
    identity_tol: float = Field(1e-6, gt=0)
    inequality_tol: float = Field(1e-6, gt=0)
    include_timing: bool = False


class CompletionConfig(BaseModel):
    tolerance: float = Field(1e-6, gt=0)
    max_iterations: int = Field(10_000, ge=1)


class RenderConfig(BaseModel):
    canvas_width: int = Field(600, gt=0)
    canvas_height: int = Field(600, gt=0)
    stroke_width: float = Field(1.5, gt=0)
    precision: int = Field(4, ge=0)


class LoggingConfig(BaseModel):
    level: str = 'WARNING'
    format: str = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class AppConfig(BaseModel):
    quadrature: QuadratureConfig = QuadratureConfig()
    harness: HarnessConfig = HarnessConfig()
    completion: CompletionConfig = CompletionConfig()
    render: RenderConfig = RenderConfig()
    logging: LoggingConfig = LoggingConfig()


def load_config(path: Optional[str | Path] = None) -> AppConfig:
    """
    Read the INI file into an AppConfig.

    Missing sections or keys fall back to the model defaults; a missing file
    is only an error when the path was given explicitly.
    """
    configs = configparser.ConfigParser()
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH

    if not configs.read(config_path):
        if path is not None:
            raise ValueError(f"Config file not found: {config_path}")
        logger.debug("No config file at %s, using defaults", config_path)
        return AppConfig()

    sections = {}
    for name in AppConfig.model_fields:
        if configs.has_section(name):
            sections[name] = dict(configs.items(name))

    logger.debug("Loaded config from %s", config_path)
    return AppConfig.model_validate(sections)
