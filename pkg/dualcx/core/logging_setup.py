import logging
import sys

from dualcx.core.config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_configured = False


class CellNoiseFilter(logging.Filter):
    """Drop per-cell chatter from dualcx loggers unless the root logger runs at DEBUG.

    Module loggers listed in DUALCX_DEBUG_MODULES emit DEBUG records on their own;
    this keeps their step-level lines and drops the per-cell ones.
    """

    def filter(self, record):
        if record.levelno > logging.DEBUG or not record.name.startswith("dualcx"):
            return True
        if logging.getLogger().getEffectiveLevel() <= logging.DEBUG:
            return True
        message = record.getMessage().lower()
        return not message.startswith(("cell ", "chart ", "subset "))


def setup_logging(level: str = None):
    """Setup logging configuration"""
    global _configured

    root = logging.getLogger()
    if not _configured:
        handlers = [logging.StreamHandler(sys.stderr)]
        if Config.LOG_FILE:
            handlers.append(logging.FileHandler(Config.LOG_FILE))
        for handler in handlers:
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            handler.addFilter(CellNoiseFilter())
            root.addHandler(handler)
        _configured = True

    root.setLevel(getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.WARNING))
    for module in Config.DEBUG_MODULES:
        logging.getLogger(module).setLevel(logging.DEBUG)

    # Reduce library verbosity
    logging.getLogger('sympy').setLevel(logging.ERROR)
    logging.getLogger('networkx').setLevel(logging.ERROR)
    logging.getLogger('pydantic').setLevel(logging.ERROR)
