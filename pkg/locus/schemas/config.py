import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from locus.core.errors import ConfigError

_PAIR = re.compile(r"^([a-z_][a-z0-9_]*)\s*=\s*(.*)$")


class ExperimentConfig(BaseModel):
    """
    Parameters of one experiment run.

    File grammar: one `key = value` per line, `#` comments and blank lines
    ignored. Unknown keys are rejected.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    # Inputs
    code: Optional[str] = None  # path to a code file
    decoder: Optional[str] = None  # path to a nonadaptive decoder file
    field: str = "GF(2)"  # field of the built-in toy code
    target: Optional[str] = None

    # Parameters
    delta: Fraction = Fraction(1, 4)
    epsilon: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    q: int = 3
    repetitions: int = 2
    toys: int = 20

    # Line code
    t: int = 2
    n: int = 2
    d: int = 1
    r1: int = 2
    r2: int = 2
    reuse: bool = True
    corrector: bool = False
    rho: float = 0.005
    point: Optional[str] = None  # comma-separated coordinates of x*
    alpha_star: int = 1
    bit: int = 0
    line_decoder: str = "interpolating"
    action: str = "decode"

    # Two-query reduction
    variant: str = "rldc"  # rldc | rlcc

    # Run control
    mode: str = "exact"
    trials: int = 1000
    seed: int = 0

    @field_validator("delta", "epsilon", "alpha", mode="before")
    @classmethod
    def parse_fraction(cls, value: Any) -> Optional[Fraction]:
        if value is None or isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e

    @field_validator("mode")
    @classmethod
    def check_mode(cls, value: str) -> str:
        if value not in ("exact", "monte_carlo", "sample", "lower_bound"):
            raise ValueError(f"unknown mode {value!r}")
        return value

    @field_validator("variant")
    @classmethod
    def check_variant(cls, value: str) -> str:
        if value not in ("rldc", "rlcc"):
            raise ValueError(f"unknown variant {value!r}")
        return value

    @classmethod
    def parse_text(cls, text: str) -> Dict[str, str]:
        values: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            match = _PAIR.match(line)
            if not match:
                raise ConfigError(f"line {number}: expected key = value, got {raw!r}")
            key, value = match.groups()
            if key not in cls.model_fields:
                raise ConfigError(f"line {number}: unknown key {key!r}")
            values[key] = value.strip()
        return values

    @classmethod
    def build(cls, values: Dict[str, Any]) -> "ExperimentConfig":
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_file(cls, path: Optional[str], overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """Values from the file (if any), then non-None overrides."""
        values: Dict[str, Any] = {}
        if path:
            try:
                text = Path(path).read_text()
            except OSError as e:
                raise ConfigError(f"cannot read config {path}: {e}") from e
            values.update(cls.parse_text(text))
        for key, value in (overrides or {}).items():
            if value is not None:
                if key not in cls.model_fields:
                    raise ConfigError(f"unknown key {key!r}")
                values[key] = value
        return cls.build(values)

    def to_text(self) -> str:
        lines = []
        for key in sorted(type(self).model_fields):
            value = getattr(self, key)
            if value is None:
                continue
            if isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"
