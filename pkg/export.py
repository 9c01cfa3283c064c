import csv
import io
import json
import logging
from pathlib import Path

import click

from errors import OutputError
from utils import format_float

HEADER_PREFIX = "# config: "

SIMULATE_COLUMNS = ("tau", "phi", "density")
TRIAL_COLUMNS = ("trial", "seed", "sampled_angle", "alpha_true_mod", "alpha_est", "circular_error")
ORACLE_COLUMNS = ("tau", "l2_distance")
CONVERGENCE_COLUMNS = ("tau", "l2_distance", "l2_distance_half_step", "error_ratio")


def config_header(config):
    return HEADER_PREFIX + json.dumps(config, sort_keys=True, separators=(",", ":"))


def _cell(value):
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def render_csv(config, columns, rows):
    buffer = io.StringIO()
    buffer.write(config_header(config) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def render_json(config, result):
    payload = {"config": config, "result": result}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_text(path, text):
    """Write to path, or to stdout when path is None or '-'"""
    if path is None or str(path) == "-":
        click.echo(text, nl=False)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OutputError(path, exc.strerror or exc) from exc
    logging.info("wrote %s", path)


def write_csv(path, config, columns, rows):
    write_text(path, render_csv(config, columns, rows))


def write_json(path, config, result):
    write_text(path, render_json(config, result))


def read_header(path):
    """Configuration embedded in a CSV or JSON output"""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return json.loads(text)["config"]
    first = text.split("\n", 1)[0]
    if not first.startswith(HEADER_PREFIX):
        raise ValueError("no embedded configuration header")
    return json.loads(first[len(HEADER_PREFIX):])
