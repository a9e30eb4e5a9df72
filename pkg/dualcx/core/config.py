import os
from typing import List

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() not in ("0", "false", "no", "off", "")


class Config:
    """Runtime configuration"""

    # Logging
    LOG_LEVEL = os.getenv("DUALCX_LOG_LEVEL", "WARNING").upper()
    LOG_FILE = os.getenv("DUALCX_LOG_FILE", "")
    DEBUG_MODULES = [m.strip() for m in os.getenv("DUALCX_DEBUG_MODULES", "").split(",") if m.strip()]

    # Reproducibility of sampled checks
    SEED = int(os.getenv("DUALCX_SEED", 0))

    # Arrangement certification
    ENUMERATION_LIMIT = int(os.getenv("DUALCX_ENUMERATION_LIMIT", 20000))
    SAMPLE_SIZE = int(os.getenv("DUALCX_SAMPLE_SIZE", 2000))

    # Surgery roundtrip
    ROUNDTRIP_EXHAUSTIVE_BITS = int(os.getenv("DUALCX_ROUNDTRIP_EXHAUSTIVE_BITS", 10))
    ROUNDTRIP_SAMPLES = int(os.getenv("DUALCX_ROUNDTRIP_SAMPLES", 256))

    # Blow-up engine
    HOMOLOGY_CROSS_CHECK = _flag("DUALCX_HOMOLOGY_CROSS_CHECK", "1")

    @classmethod
    def validate(cls) -> List[str]:
        """Validate configuration and return errors"""
        errors = []

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"DUALCX_LOG_LEVEL must be a logging level name, got {cls.LOG_LEVEL!r}")

        for module in cls.DEBUG_MODULES:
            if not module.startswith("dualcx"):
                errors.append(f"DUALCX_DEBUG_MODULES names a logger outside dualcx: {module!r}")

        if cls.ENUMERATION_LIMIT < 1:
            errors.append("DUALCX_ENUMERATION_LIMIT must be positive")

        if cls.SAMPLE_SIZE < 1:
            errors.append("DUALCX_SAMPLE_SIZE must be positive")

        if not 0 <= cls.ROUNDTRIP_EXHAUSTIVE_BITS <= 20:
            errors.append("DUALCX_ROUNDTRIP_EXHAUSTIVE_BITS must lie in 0..20")

        if cls.ROUNDTRIP_SAMPLES < 1:
            errors.append("DUALCX_ROUNDTRIP_SAMPLES must be positive")

        return errors
