import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: str = "INFO") -> None:
    """Point one stderr handler at the ``app`` logger. Safe to call twice;
    a later call replaces the handler so it writes to the current stderr."""
    root = logging.getLogger("app")
    root.setLevel(level)
    for h in [h for h in root.handlers if getattr(h, "_voltarget", False)]:
        root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._voltarget = True  # type: ignore[attr-defined]
    root.addHandler(handler)
