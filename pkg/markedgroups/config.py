"""
Configuration management for markedgroups
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env(name: str, default: str) -> str:
    return os.getenv(f'MARKEDGROUPS_{name}', default)


class Config:
    """Application configuration"""

    # Logging
    LOG_LEVEL = _env('LOG_LEVEL', 'WARNING').upper()

    # Report schema (fixed)
    REPORT_SCHEMA_VERSION = '1.0'

    # Search budgets
    COXETER_NODE_LIMIT = int(_env('COXETER_NODE_LIMIT', '200000'))
    DEHN_MAX_STEPS = int(_env('DEHN_MAX_STEPS', '0'))  # 0 = bounded by |w| only

    # Chabauty sampling limits (desk scale)
    CHABAUTY_MAX_RANK = int(_env('CHABAUTY_MAX_RANK', '3'))
    CHABAUTY_MAX_INDEX = int(_env('CHABAUTY_MAX_INDEX', '7'))
    SEPARATOR_WORD_LENGTH = int(_env('SEPARATOR_WORD_LENGTH', '4'))

    # Independent families
    BRUTEFORCE_MAX_FAMILY = int(_env('BRUTEFORCE_MAX_FAMILY', '12'))

    # Abels eigenline sampling
    EIGENLINE_SAMPLES = int(_env('EIGENLINE_SAMPLES', '200'))
    RANDOM_SEED = int(_env('RANDOM_SEED', '0'))

    # Hard ceilings for the limits above
    MAX_RANK_CEILING = 3
    MAX_INDEX_CEILING = 7
    MAX_FAMILY_CEILING = 12

    @classmethod
    def validate(cls):
        """Validate configuration values"""
        if cls.LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"MARKEDGROUPS_LOG_LEVEL is not a logging level: {cls.LOG_LEVEL}")
        if cls.COXETER_NODE_LIMIT <= 0:
            raise ValueError("MARKEDGROUPS_COXETER_NODE_LIMIT must be positive")
        if cls.DEHN_MAX_STEPS < 0:
            raise ValueError("MARKEDGROUPS_DEHN_MAX_STEPS must be non-negative")
        if not 1 <= cls.CHABAUTY_MAX_RANK <= cls.MAX_RANK_CEILING:
            raise ValueError(f"MARKEDGROUPS_CHABAUTY_MAX_RANK must lie in 1..{cls.MAX_RANK_CEILING}")
        if not 1 <= cls.CHABAUTY_MAX_INDEX <= cls.MAX_INDEX_CEILING:
            raise ValueError(f"MARKEDGROUPS_CHABAUTY_MAX_INDEX must lie in 1..{cls.MAX_INDEX_CEILING}")
        if cls.SEPARATOR_WORD_LENGTH < 0:
            raise ValueError("MARKEDGROUPS_SEPARATOR_WORD_LENGTH must be non-negative")
        if not 0 <= cls.BRUTEFORCE_MAX_FAMILY <= cls.MAX_FAMILY_CEILING:
            raise ValueError(f"MARKEDGROUPS_BRUTEFORCE_MAX_FAMILY must lie in 0..{cls.MAX_FAMILY_CEILING}")
        if cls.EIGENLINE_SAMPLES <= 0:
            raise ValueError("MARKEDGROUPS_EIGENLINE_SAMPLES must be positive")
        return True
