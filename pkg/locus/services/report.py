import json
import logging
from collections import Counter, defaultdict
from typing import Dict, Iterable, List

from locus.core.config import get_settings
from locus.core.errors import ConfigError
from locus.services.common import read_text

logger = logging.getLogger(__name__)


def load_records(paths: Iterable[str]) -> List[dict]:
    """Parse JSON-lines reports; every record must carry the current schema version."""
    schema = get_settings().LOCUS_REPORT_SCHEMA
    records = []
    for path in paths:
        for number, line in enumerate(read_text(path, "report").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}:{number}: not JSON: {e}") from e
            if record.get("schema") != schema:
                raise ConfigError(f"{path}:{number}: schema {record.get('schema')!r}, expected {schema}")
            records.append(record)
    logger.info(f"📊 Loaded {len(records)} records")
    return records


def _value(field):
    if isinstance(field, dict) and "value" in field:
        return field["value"]
    return field


def summarize(records: List[dict]) -> List[Dict[str, object]]:
    """Per kind: record count plus the largest probability-like value it carries, if any."""
    counts = Counter(r["kind"] for r in records)
    worst: Dict[str, float] = defaultdict(float)
    for record in records:
        for key in ("soundness", "exact_error", "error_rate", "worst_error", "success"):
            value = _value(record.get(key))
            if isinstance(value, (int, float)):
                worst[record["kind"]] = max(worst[record["kind"]], float(value))
    return [
        {"kind": kind, "records": counts[kind], "max_value": worst.get(kind)}
        for kind in sorted(counts)
    ]


def format_table(rows: List[Dict[str, object]]) -> str:
    lines = [f"{'kind':<16} {'records':>8} {'max value':>10}", "-" * 36]
    for row in rows:
        value = "-" if row["max_value"] is None else f"{row['max_value']:.4f}"
        lines.append(f"{row['kind']:<16} {row['records']:>8} {value:>10}")
    return "\n".join(lines) + "\n"


def run_report(paths: Iterable[str]) -> str:
    return format_table(summarize(load_records(paths)))
