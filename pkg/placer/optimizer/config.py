import logging
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class Method(str, Enum):
    RBSM = "rbsm"
    GD = "gd"
    ADAM = "adam"


class RbsmConfig(BaseModel):
    """Knobs of one optimizer run; the same object drives rbsm, gd and adam."""

    model_config = ConfigDict(extra="forbid")

    iter_max: int = Field(200, ge=1)
    inner_steps: int = Field(25, ge=1)
    lr0: float = Field(0.1, gt=0)
    gamma0: float = Field(1000.0, ge=1)
    alpha: float = Field(5.0, ge=0)
    batch_fraction: float = Field(0.2, gt=0, le=1)
    # None picks max(1, mean net degree)
    temperature: Optional[float] = Field(None, gt=0)
    eps_hpwl: float = Field(1e-4, gt=0)
    eps_overlap: float = Field(0.02, gt=0)
    seed: int = 0
    perturb: bool = True

    # Ablation switches
    uniform_batch: bool = False
    adaptive_gamma: bool = True
    fixed_gamma: Optional[float] = Field(None, ge=1)
    # alpha / (n_movable * (W + H) / 2); False keeps the raw coefficient
    normalize_mean_field: bool = True
    full_penalty: bool = False

    bin_size: Optional[float] = Field(None, gt=0)
    log_every: int = Field(10, ge=1)

    # ADAM moments
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    adam_eps: float = Field(1e-8, gt=0)

    @model_validator(mode="after")
    def _fixed_gamma_disables_adaptation(self):
        if self.fixed_gamma is not None and self.adaptive_gamma:
            raise ValueError("fixed_gamma requires adaptive_gamma=False")
        return self

    def penalty_weight(self) -> float:
        """Constant overlap/boundary weight used whenever adaptation is off"""
        return self.fixed_gamma if self.fixed_gamma is not None else self.gamma0


def load_config_file(path: Union[str, Path], **overrides) -> RbsmConfig:
    """
    Read a KEY=VALUE file whose keys are RbsmConfig field names (any case).
    Values are coerced by pydantic; explicit overrides win over the file.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")

    raw = dotenv_values(path)
    values = {}
    for key, value in raw.items():
        name = key.strip().lower()
        if name not in RbsmConfig.model_fields:
            raise ValueError(f"{path}: unknown config key '{key}'")
        # empty values mean "use the default" (e.g. TEMPERATURE=)
        if value is None or value == "":
            continue
        values[name] = value

    values.update({k: v for k, v in overrides.items() if v is not None})
    logger.info(f"Loaded {len(raw)} config keys from {path}")
    return RbsmConfig(**values)
