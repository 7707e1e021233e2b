# Copyright (c) 2024 by Jonathan AW
# cli/main.py
# Summary: Entry point of the `amr` command; maps exceptions onto exit codes.

import logging
import sys
from typing import Optional, Sequence

from cli import create_parser
from utils.config_utils import get_configuration_value
from utils.error_handling import EXIT_OK, EXIT_USAGE, exit_code_for, log_error
from utils.logging_utils import setup_logging

logger = logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging(args.log_level, get_configuration_value('AMR_LOG_DIR', '') or None, run_name=args.command)
    try:
        return args.handler(args)
    except Exception as e:
        code = exit_code_for(e)
        log_error(f"{args.command} failed ({type(e).__name__}): {e}")
        logger.debug("Traceback", exc_info=True)
        return code


if __name__ == "__main__":
    sys.exit(main())
