"""
Metallic Tiler - exact computations with the metallic mean Wang tiles.
"""
import sys

from script.cli import run
from script.config import load_config, setting
from script.logger import logger, setup_logging


def main():
    """Main entry point for the application."""
    # Load configuration
    config = load_config()

    setup_logging(
        level=setting(config, 'logging.level', 'INFO'),
        to_file=bool(setting(config, 'logging.to_file', False)),
        log_dir=setting(config, 'logging.directory', 'logs'),
        max_files=int(setting(config, 'logging.max_files', 10)),
    )

    try:
        sys.exit(run(sys.argv[1:], config))
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        sys.exit(1)


if __name__ == "__main__":
    # Start the application
    main()
