# logger.py
#
# Console logging with colored level names.

import logging
import sys

from termcolor import colored

_LEVEL_COLORS = {
    logging.DEBUG: "blue",
    logging.WARNING: "yellow",
    logging.ERROR: "red",
    logging.CRITICAL: "red",
}


class _ColorfulFormatter(logging.Formatter):
    def __init__(self, *args, color=True, **kwargs):
        super().__init__(*args, **kwargs)
        self._color = color

    def formatMessage(self, record):
        log = super().formatMessage(record)
        color = _LEVEL_COLORS.get(record.levelno)
        if not self._color or color is None:
            return log
        attrs = ["bold"] if record.levelno >= logging.ERROR else None
        return colored(record.levelname, color, attrs=attrs) + " " + log


def setup_logger(name=None, level=logging.INFO, color=True):
    """
    Attach one stream handler (stderr) to the named logger, or the root logger.
    Calling it again only updates the level.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    for handler in logger.handlers:
        if getattr(handler, "_vertex_net", False):
            handler.setLevel(level)
            return logger
    handler = logging.StreamHandler(stream=sys.stderr)
    handler._vertex_net = True
    handler.setLevel(level)
    handler.setFormatter(_ColorfulFormatter("[%(asctime)s %(name)s]: %(message)s", datefmt="%H:%M:%S", color=color))
    logger.addHandler(handler)
    return logger
