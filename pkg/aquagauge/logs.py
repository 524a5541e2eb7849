import logging
import sys

from colorama import Fore, Style, init

init(autoreset=True)

LEVEL_COLORS = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Style.BRIGHT + Fore.RED,
}


class ColorFormatter(logging.Formatter):
    def format(self, record):
        message = super().format(record)
        color = LEVEL_COLORS.get(record.levelno, "")
        return f"{color}{message}{Style.RESET_ALL}"


def get_logger(name):
    return logging.getLogger(f"aquagauge.{name}")


# Called once from the CLI. verbosity: -1 quiet, 0 normal, 1 verbose
def configure_logging(verbosity=0, stream=None):
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)

    root = logging.getLogger("aquagauge")
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    return root
