import logging
import os

# Enable basic logging for development debugging
logging.basicConfig(format="%(name)s - %(asctime)s - {%(pathname)s:%(lineno)d} - %(message)s",
                    level=logging.WARNING)

APP_LOGGER_NAME = "perimeter-app"


# Get a logger for the counting code, with a level enabled for our own logging but not other libraries
def get_logger(name: str = APP_LOGGER_NAME) -> logging.Logger:
    level = os.environ.get("PERIMETER_APP_LOG_LEVEL", "INFO").upper()
    logger = logging.getLogger(name)
    logger.setLevel(level)
    return logger


def set_verbosity(verbose: int) -> None:
    """Raise the app logger to DEBUG (-v) or silence it to WARNING (-q, negative)."""
    logger = logging.getLogger(APP_LOGGER_NAME)
    if verbose > 0:
        logger.setLevel(logging.DEBUG)
    elif verbose < 0:
        logger.setLevel(logging.WARNING)
