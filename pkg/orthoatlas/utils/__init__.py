import logging
import math

import numpy as np

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level="WARNING"):
    """Install a single stream handler on the package logger."""
    logger = logging.getLogger("orthoatlas")
    if not any(getattr(h, "_orthoatlas", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._orthoatlas = True
        logger.addHandler(handler)
    logger.setLevel(level if isinstance(level, int) else str(level).upper())
    return logger


def wrap_angle(angle):
    """Map an angle (scalar or array) into (-pi, pi]."""
    if np.ndim(angle) == 0:
        wrapped = math.remainder(float(angle), 2.0 * math.pi)
        return math.pi if wrapped == -math.pi else wrapped
    wrapped = np.remainder(np.asarray(angle, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped <= -np.pi, np.pi, wrapped)


def torus_distance(a2, a3, b2, b3):
    """Euclidean distance on the (theta2, theta3) torus."""
    d2 = np.abs(wrap_angle(np.asarray(a2) - np.asarray(b2)))
    d3 = np.abs(wrap_angle(np.asarray(a3) - np.asarray(b3)))
    return np.hypot(d2, d3)
