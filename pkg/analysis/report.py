# analysis/report.py - Per-year by per-strategy comparison of metrics files

from pathlib import Path

import jsonschema
import pandas as pd
from loguru import logger

from backtest.metrics import METRIC_FIELDS
from utils.errors import ParseError, ValidationError
from utils.jsonio import read_json

MISSING = 'n/a'
OVERALL = 'overall'

_period = {'type': ['object', 'null']}
METRICS_SCHEMA = {
    'type': 'object',
    'properties': {
        'name': {'type': 'string'},
        'overall': _period,
        'yearly': {'type': 'object', 'additionalProperties': _period},
    },
    'anyOf': [{'required': ['overall']}, {'required': ['yearly']}],
}


def load_metrics(path):
    """Read one metrics document; its name defaults to the file stem."""
    data = read_json(path)
    try:
        jsonschema.validate(data, METRICS_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ParseError(f"not a metrics document: {exc.message}", path) from None
    return data.get('name') or Path(path).stem, data


def _cell(period_metrics, field):
    if not period_metrics:
        return MISSING
    value = period_metrics.get(field)
    if value is None:
        return MISSING
    return f"{value:.4f}" if isinstance(value, (int, float)) else str(value)


def build_report(paths):
    """
    Args:
        paths: One or more metrics JSON files

    Returns:
        DataFrame with period and metric columns followed by one column per
        strategy, strategies ordered by name
    """
    if not paths:
        raise ValidationError("report needs at least one metrics file")
    documents = {}
    for path in paths:
        name, data = load_metrics(path)
        if name in documents:
            raise ValidationError(f"duplicate strategy name '{name}' ({path})")
        documents[name] = data

    names = sorted(documents)
    years = sorted({year for data in documents.values() for year in (data.get('yearly') or {})})
    periods = years + [OVERALL]

    rows = []
    for period in periods:
        for field in METRIC_FIELDS:
            row = {'period': period, 'metric': field}
            for name in names:
                data = documents[name]
                block = data.get(OVERALL) if period == OVERALL else (data.get('yearly') or {}).get(period)
                row[name] = _cell(block, field)
            rows.append(row)
    logger.info(f"Report: {len(names)} strategies, {len(periods)} periods")
    return pd.DataFrame(rows, columns=['period', 'metric'] + names)


def write_report(table, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / 'report.csv'
    txt_path = out_dir / 'report.txt'
    table.to_csv(csv_path, index=False)
    txt_path.write_text(table.to_string(index=False) + '\n', encoding='utf-8')
    return csv_path, txt_path
