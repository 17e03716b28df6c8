from .logging_setup import setup_logger
from .timer import BlockTimer

__all__ = ["BlockTimer", "setup_logger"]
