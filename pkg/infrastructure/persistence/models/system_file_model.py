"""
System File Model - Infrastructure Layer
Pydantic models for the JSON SystemFile format.

Fractions are strict strings ("1/6", "-2", "0"): numbers in fraction fields
are rejected, so a finite system never enters the engine through a float.
Time values are non-negative integers or the "inf" sentinel.
"""
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, field_validator, model_validator

FORMAT_NAME = "bellman-system"
SCHEMA_VERSION = 1

Label = Union[StrictInt, StrictStr]
TimeEntry = Union[StrictInt, Literal["inf"]]


def _check_fractions(values: List[str]) -> List[str]:
    for value in values:
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{value!r} is not an exact fraction") from None
    return values


class ControlModel(BaseModel):
    """One control: law, information, payoff and the optional processes classes are derived from."""

    model_config = ConfigDict(extra="forbid")

    id: StrictStr = Field(..., min_length=1, description="Control identifier")
    measure: List[StrictStr] = Field(..., min_length=1, description="P^c, one fraction per outcome")
    filtration: List[List[List[StrictInt]]] = Field(..., min_length=1, description="Atom lists per stage")
    payoff: List[StrictStr] = Field(..., min_length=1, description="J(c), one fraction per outcome")
    path: Optional[List[List[Label]]] = Field(None, description="Control values, rows[ω][t]")
    observed: Optional[List[List[Label]]] = Field(None, description="Observed process, rows[ω][t]")

    @field_validator("measure", "payoff")
    @classmethod
    def validate_fractions(cls, v: List[str]) -> List[str]:
        return _check_fractions(v)


class ControlTimeModel(BaseModel):
    """A control time: per-control values, or one shared value list."""

    model_config = ConfigDict(extra="forbid")

    id: StrictStr = Field(..., min_length=1, description="Control time identifier")
    times: Optional[Dict[str, List[TimeEntry]]] = Field(None, description="S^c per control id")
    uniform: Optional[List[TimeEntry]] = Field(None, description="One random time shared by every control")

    @model_validator(mode="after")
    def exactly_one_form(self) -> "ControlTimeModel":
        if (self.times is None) == (self.uniform is None):
            raise ValueError(f"control time '{self.id}' needs exactly one of 'times' or 'uniform'")
        return self


class SystemFileModel(BaseModel):
    """
    Top-level document.

    classes maps control id -> control-time id -> member ids of D(c,S);
    alternatively derive = "prefix" computes them from the declared paths.
    extend adds the control times 0 and ∞ when the file lacks them.
    """

    model_config = ConfigDict(extra="forbid")

    format: Literal["bellman-system"] = FORMAT_NAME
    schema_version: Literal[1] = SCHEMA_VERSION
    outcomes: List[StrictStr] = Field(..., min_length=1, description="Outcome labels")
    controls: List[ControlModel] = Field(default_factory=list)
    control_times: List[ControlTimeModel] = Field(default_factory=list)
    classes: Optional[Dict[str, Dict[str, List[StrictStr]]]] = None
    derive: Optional[Literal["prefix"]] = None
    extend: bool = True

    @model_validator(mode="after")
    def classes_or_derive(self) -> "SystemFileModel":
        if self.classes is not None and self.derive is not None:
            raise ValueError("give either 'classes' or 'derive', not both")
        return self
