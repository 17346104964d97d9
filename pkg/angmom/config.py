import os
import logging
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from angmom.errors import ConfigurationError

logger = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
PHI_READINGS = ('uniform', 'literal')
PHASE_CONVENTIONS = ('calibrated', 'printed')


@dataclass(frozen=True)
class Settings:
    log_level: str = 'INFO'
    workers: int = 1
    max_gf_degree: int = 16
    phi_reading: str = 'uniform'
    phase_convention: str = 'calibrated'

    def override(self, **changes):
        """
        Return a copy with the given fields replaced, skipping None values
        so that unset CLI flags leave the environment value in place.
        """
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _read_int(var, default, minimum):
    raw = os.getenv(var)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{var} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigurationError(f"{var} must be at least {minimum}, got {value}")
    return value


def _read_choice(var, default, choices):
    raw = os.getenv(var)
    if raw is None or raw == '':
        return default
    value = raw.strip()
    if var == 'ANGMOM_LOG_LEVEL':
        value = value.upper()
    if value not in choices:
        raise ConfigurationError(f"{var} must be one of {', '.join(choices)}, got {raw!r}")
    return value


def validate_env_variables():
    """
    Validate the ANGMOM_* environment variables and return the Settings
    they describe. Unset variables fall back to their defaults.
    """
    settings = Settings(
        log_level=_read_choice('ANGMOM_LOG_LEVEL', 'INFO', LOG_LEVELS),
        workers=_read_int('ANGMOM_WORKERS', 1, 1),
        max_gf_degree=_read_int('ANGMOM_MAX_GF_DEGREE', 16, 0),
        phi_reading=_read_choice('ANGMOM_PHI_READING', 'uniform', PHI_READINGS),
        phase_convention=_read_choice('ANGMOM_PHASE_CONVENTION', 'calibrated', PHASE_CONVENTIONS),
    )
    logger.debug(f"Loaded settings: {settings}")
    return settings


def load_settings(env_file=None):
    """Load an optional .env file, then validate the environment."""
    load_dotenv(env_file, override=False)
    return validate_env_variables()


def current_settings():
    """Settings as seen by library callers that did not go through main.py."""
    return validate_env_variables()
