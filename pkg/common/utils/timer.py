from __future__ import annotations

import time
from typing import Optional

from common.utils.logging_setup import setup_logger

logger = setup_logger(__name__)


class BlockTimer:
    """
    Logs the wall time of a block at info level.

        with BlockTimer("delaunay build"):
            t = delaunay_build(config)
    """

    def __init__(self, label: str = "Block Timer") -> None:
        self.label = label
        self.start_time: Optional[float] = None
        self.total_time: Optional[float] = None

    def __enter__(self) -> "BlockTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.total_time = time.perf_counter() - self.start_time
        if exc_type is None:
            logger.info("%s: %.4f seconds", self.label, self.total_time)
        else:
            logger.info("%s: aborted after %.4f seconds", self.label, self.total_time)
        # falsy, so the exception keeps propagating
        return None
