import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "WARNING") -> None:
    """
    Route all library logging to stderr.

    Standard output carries data only (tables, reports), so the handler is
    always bound to sys.stderr. Calling this twice replaces the handler.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_lgi_pt", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._lgi_pt = True
    root.addHandler(handler)
    root.setLevel(level.upper())
