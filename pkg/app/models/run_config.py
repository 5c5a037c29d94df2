"""
Run Configuration
-----------------

The validated settings of one command-line run. Command-line values
override the environment defaults from app.config.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from jsonschema import ValidationError, validate

from app.config import DEFAULT_NUMERIC_Q, DEFAULT_SEED, DEFAULT_TOL, LOG_LEVEL
from app.errors import ConfigError
from app.models.labels import parse_spin, spin_text
from app.models.scalar import NumericContext

logger = logging.getLogger(__name__)

VALID_COMMANDS = ("axioms", "induce", "pseries", "verify", "sweep")
VALID_BACKENDS = ("finite", "suq2")
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
MAX_TWICE_CUTOFF = 4

SWEEP_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "records": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "mu": {"type": "integer"},
                    "lambda": {"type": ["integer", "number", "string"]},
                    "cutoff": {"type": "string"},
                    "mode": {"enum": ["exact", "numeric"]},
                    "q": {"type": "number", "exclusiveMinimum": 0},
                },
                "required": ["mu", "cutoff"],
            },
        },
    },
    "required": ["records"],
}


def parse_lambda(text: Union[str, int, float, complex]) -> Union[int, complex]:
    """'1', '-1', '0.3+0.7i' -> int or complex."""
    if isinstance(text, (int, complex)):
        return text
    try:
        value = complex(str(text).strip().replace("i", "j"))
    except ValueError as e:
        raise ConfigError(f"Cannot parse lambda {text!r}: {str(e)}") from e
    if value.imag == 0 and value.real.is_integer():
        return int(value.real)
    return value


def parse_q(text: Union[str, float]) -> Optional[float]:
    """'exact' -> None, otherwise a numeric q in (0, 1]."""
    if isinstance(text, str) and text.strip().lower() == "exact":
        return None
    try:
        value = float(text)
    except ValueError as e:
        raise ConfigError(f"--q must be 'exact' or a number, got {text!r}") from e
    if not 0 < value <= 1:
        raise ConfigError(f"Numeric q must lie in (0, 1], got {value}")
    return value


class RunConfig:
    def __init__(
        self,
        command: str,
        backend: str = "finite:S3",
        q: Union[str, float] = "exact",
        cutoff: Optional[str] = None,
        mu: int = 0,
        lam: Union[str, int, complex] = 0,
        tol: float = DEFAULT_TOL,
        seed: int = DEFAULT_SEED,
        out: Optional[str] = None,
        log_level: str = LOG_LEVEL,
        window: Optional[str] = None,
        samples: int = 20,
        sweep_file: Optional[str] = None,
        subgroup: Optional[List[str]] = None,
        rep: str = "trivial",
    ):
        if command not in VALID_COMMANDS:
            raise ConfigError(f"Command must be one of: {', '.join(VALID_COMMANDS)}")
        kind, _, target = backend.partition(":")
        if kind not in VALID_BACKENDS or not target:
            raise ConfigError(f"Backend must be one of: finite:<preset|file>, suq2:<L> (got {backend!r})")
        if tol < 0:
            raise ConfigError("Tolerance must be nonnegative")
        if samples < 0:
            raise ConfigError("Sample count must be nonnegative")
        if log_level.upper() not in VALID_LOG_LEVELS:
            raise ConfigError(f"Log level must be one of: {', '.join(VALID_LOG_LEVELS)}")
        self.command = command
        self.backend = backend
        self.backend_kind = kind
        self.backend_target = target
        self.q_value = parse_q(q)
        self.twice_cutoff = self._spin(cutoff if cutoff is not None
                                       else (target if kind == "suq2" else "1"))
        if self.twice_cutoff > MAX_TWICE_CUTOFF:
            raise ConfigError(f"Cutoff L={spin_text(self.twice_cutoff)} exceeds the supported "
                              f"maximum {spin_text(MAX_TWICE_CUTOFF)}")
        self.twice_window = self._spin(window) if window is not None else None
        self.mu = int(mu)
        self.lam = parse_lambda(lam)
        self.tol = tol
        self.seed = seed
        self.out = Path(out) if out else None
        self.log_level = log_level.upper()
        self.samples = samples
        self.sweep_file = Path(sweep_file) if sweep_file else None
        self.subgroup = list(subgroup or [])
        self.rep = rep
        if command == "sweep" and self.sweep_file is None:
            raise ConfigError("sweep requires --sweep-file")
        if command == "pseries" and kind != "suq2":
            raise ConfigError("pseries requires a suq2:<L> backend")

    @staticmethod
    def _spin(text: str) -> int:
        try:
            return parse_spin(str(text))
        except ValueError as e:
            raise ConfigError(f"Invalid spin {text!r}: {str(e)}") from e

    @property
    def exact(self) -> bool:
        return self.q_value is None

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "numeric"

    def numeric_context(self) -> NumericContext:
        q_value = DEFAULT_NUMERIC_Q if self.q_value is None else self.q_value
        return NumericContext(q_value=q_value, tolerance=self.tol)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "backend": self.backend,
            "q": "exact" if self.exact else self.q_value,
            "cutoff": spin_text(self.twice_cutoff),
            "mu": self.mu,
            "lambda": self.lam if isinstance(self.lam, int) else str(self.lam),
            "tol": self.tol,
            "seed": self.seed,
            "samples": self.samples,
            "window": spin_text(self.twice_window) if self.twice_window is not None else None,
            "subgroup": self.subgroup,
            "rep": self.rep,
        }


def load_sweep(path: Union[str, Path]) -> List[Dict[str, Any]]:
    """
    Read and validate a sweep file of (μ, λ, L, mode) records.

    Raises:
        ConfigError: If the file is missing or does not match SWEEP_SCHEMA
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        validate(instance=data, schema=SWEEP_SCHEMA)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Error reading sweep file {path}: {type(e).__name__}: {str(e)}")
        raise ConfigError(f"Invalid sweep file {path}: {str(e)}") from e
    return data["records"]
