"""Figure-ready tables written as CSV (with a ``#``-prefixed JSON header) or JSON."""

import csv
import dataclasses
import io
import json
import math
from pathlib import Path

from fock_phase import __version__

UNDEFINED = "undefined"


@dataclasses.dataclass
class Dataset:
    columns: list[str]
    rows: list[list] = dataclasses.field(default_factory=list)
    header: dict = dataclasses.field(default_factory=dict)

    def add_row(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def format_value(value, digits: int = 12) -> str:
    if value is None:
        return UNDEFINED
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return UNDEFINED if math.isnan(value) else ("inf" if value > 0 else "-inf")
        return format(value, f".{digits}g")
    return str(value)


def _json_value(value, digits):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    text = format_value(float(value), digits)
    return float(text) if text not in (UNDEFINED, "inf", "-inf") else text


def full_header(dataset: Dataset) -> dict:
    return {"version": __version__, **dataset.header}


def to_csv(dataset: Dataset, digits: int = 12) -> str:
    buffer = io.StringIO()
    buffer.write("# " + json.dumps(full_header(dataset), sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(dataset.columns)
    for row in dataset.rows:
        writer.writerow([format_value(value, digits) for value in row])
    return buffer.getvalue()


def to_json(dataset: Dataset, digits: int = 12) -> str:
    payload = {
        "header": full_header(dataset),
        "columns": dataset.columns,
        "rows": [[_json_value(value, digits) for value in row] for row in dataset.rows],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_dataset(dataset: Dataset, path: Path, output_format: str = "csv", digits: int = 12):
    text = to_csv(dataset, digits) if output_format == "csv" else to_json(dataset, digits)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def read_csv_header(path: Path) -> dict:
    with Path(path).open(encoding="utf-8") as f:
        first = f.readline()
    if not first.startswith("# "):
        raise ValueError(f"{path} has no JSON header line")
    return json.loads(first[2:])
