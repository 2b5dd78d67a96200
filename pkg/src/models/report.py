from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config.settings import (
    DEFAULT_MAX_FACTOR_LENGTH,
    DEFAULT_OUTPUT_FORMAT,
    POLICY_GROWTH_FACTOR,
    POLICY_MAX_LENGTH,
)
from src.models.returns import StabilizationPolicy

OutputFormat = Literal['json', 'csv', 'text']


class PolicyConfig(BaseModel):
    initial: Optional[int] = None
    growth: int = POLICY_GROWTH_FACTOR
    cap: int = POLICY_MAX_LENGTH

    @model_validator(mode='after')
    def check_bounds(self):
        if self.initial is not None and self.cap < self.initial:
            raise ValueError(f"Policy cap {self.cap} is below the initial prefix length {self.initial}")
        if self.growth < 2:
            raise ValueError(f"Policy growth must be at least 2, got {self.growth}")
        return self

    @classmethod
    def from_policy(cls, policy: StabilizationPolicy) -> 'PolicyConfig':
        return cls(initial=policy.initial, growth=policy.growth, cap=policy.cap)


class RunConfig(BaseModel):
    """Everything needed to reproduce a report."""
    source: Optional[str] = None
    command: str
    max_factor_length: int = Field(DEFAULT_MAX_FACTOR_LENGTH, alias='maxFactorLength')
    policy: PolicyConfig = Field(default_factory=PolicyConfig)
    output_format: OutputFormat = Field(DEFAULT_OUTPUT_FORMAT, alias='format')
    output_path: Optional[str] = Field(None, alias='out')
    arguments: Dict[str, Any] = Field(default_factory=dict)

    model_config = {'populate_by_name': True}

    @field_validator('max_factor_length')
    @classmethod
    def check_max(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"Maximum factor length must be at least 1, got {value}")
        return value

    def echo(self) -> Dict[str, Any]:
        """The reproducible part of the config; the output path is left out so reports diff cleanly."""
        return self.model_dump(by_alias=True, exclude={'output_path'})


class Report(BaseModel):
    config: RunConfig
    version: str
    payload: Dict[str, Any]
    duration: Optional[float] = None

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            'config': self.config.echo(),
            'version': self.version,
            'payload': self.payload,
        }
        if include_timing and self.duration is not None:
            data['timing'] = {'durationSeconds': round(self.duration, 3)}
        return data
