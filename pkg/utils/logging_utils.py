# Copyright (c) 2024 by Jonathan AW
"""
Purpose: Logging setup for the command line entry point and the bin/ scripts.
"""

import logging
import os
from datetime import datetime
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

def setup_logging(level: str = "INFO", log_dir: Optional[str] = None, run_name: str = "amr") -> None:
    """
    Configure the root logger. When log_dir is given, a timestamped log file is written there as well
    (logs/<run_name>-YYYYmmdd_HHMMSS.log, following the bin/ test scripts).
    """
    handlers = [logging.StreamHandler()]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        handlers.append(logging.FileHandler(os.path.join(log_dir, f"{run_name}-{timestamp}.log")))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, handlers=handlers, force=True)
