"""PPO with curiosity rewards scaled by a learned, state-dependent factor."""

from acwi.config import RunConfig, load_config
from acwi.errors import AcwiError, ConfigError, DegenerateInputError, NumericError, UsageError

__version__ = "0.1.0"

__all__ = [
    "AcwiError",
    "ConfigError",
    "DegenerateInputError",
    "NumericError",
    "RunConfig",
    "UsageError",
    "__version__",
    "load_config",
]
