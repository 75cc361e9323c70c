import logging

from pythonjsonlogger.json import JsonFormatter

from src.config import config

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def configure_logging(level=None, json_output=None):
    """Install a root handler; JSON lines when requested."""
    level = level or config.logging.level
    if json_output is None:
        json_output = config.logging.json_format
    handler = logging.StreamHandler()
    if json_output:
        handler.setFormatter(JsonFormatter(LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)
