import logging
import sys
from datetime import datetime
from fractions import Fraction
from functools import wraps

import click
import numpy as np
import pytz

from errors import RingFluxError

TWO_PI = 2.0 * np.pi


def exit_on_error(f):
    """Decorator turning ringflux errors into a message and an exit code"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except RingFluxError as exc:
            logging.debug("command failed", exc_info=True)
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)
    return decorated_function


def wrap_angle(angle):
    """Reduce angles to [0, 2π)"""
    wrapped = np.mod(angle, TWO_PI)
    # np.mod rounds tiny negatives up to exactly 2π
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def wrap_period(value, period):
    """Reduce values to [0, period)"""
    wrapped = np.mod(value, period)
    wrapped = np.where(wrapped >= period, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def signed_circular_difference(a, b, period=TWO_PI):
    """a − b reduced to [−period/2, period/2)"""
    diff = np.mod(np.asarray(a) - np.asarray(b) + period / 2.0, period) - period / 2.0
    if np.ndim(diff) == 0:
        return float(diff)
    return diff


def circular_mean(angles):
    """Mean direction of a sample of angles, in [0, 2π)"""
    angles = np.asarray(angles)
    return wrap_angle(np.arctan2(np.mean(np.sin(angles)), np.mean(np.cos(angles))))


def circular_distance(a, b, period=TWO_PI):
    """Shortest distance between two points on a circle of circumference period"""
    d = np.mod(np.abs(np.asarray(a) - np.asarray(b)), period)
    d = np.minimum(d, period - d)
    if np.ndim(d) == 0:
        return float(d)
    return d


def parse_tau(text):
    """Parse a dimensionless time such as '0.25' or '1/3'"""
    return float(Fraction(text.strip()))


def parse_tau_grid(text):
    """Parse a comma-separated list of dimensionless times"""
    if isinstance(text, (list, tuple)):
        return [float(Fraction(str(t))) for t in text]
    items = [item for item in str(text).split(",") if item.strip()]
    return [parse_tau(item) for item in items]


def format_float(value):
    """17 significant digits, scientific notation"""
    return f"{float(value):.16e}"


def get_timezone(name="UTC"):
    return pytz.timezone(name)


def now_local(name="UTC"):
    """Get current datetime in the configured timezone"""
    return datetime.now(get_timezone(name))

