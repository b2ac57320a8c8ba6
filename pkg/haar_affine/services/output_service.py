import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from loguru import logger
from pydantic import BaseModel

from haar_affine.config import settings
from haar_affine.models import SpectrumCloud


def _json_float(x: float) -> str:
    return format(x, ".17g") if math.isfinite(x) else "null"


def _render(value: Any, level: int = 0) -> str:
    pad = "  " * (level + 1)
    close = "  " * level
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{close}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{_render(v, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{close}]"
    if isinstance(value, float):
        return _json_float(value)
    return json.dumps(value)


def _csv_cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


class OutputService:
    """Render reports as JSON, CSV or aligned tables and send them to --out or stdout."""

    def __init__(self, out: Optional[str] = None):
        self.out = out or settings.out

    def to_json(self, report: Any) -> str:
        """Floats with 17 significant digits, non-finite floats as null, keys in field order."""
        if isinstance(report, BaseModel):
            data = report.model_dump(mode="json")
        elif isinstance(report, (list, tuple)):
            data = [r.model_dump(mode="json") if isinstance(r, BaseModel) else r for r in report]
        else:
            data = report
        return _render(data) + "\n"

    def to_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buffer.getvalue()

    def cloud_csv(self, cloud: SpectrumCloud) -> str:
        return self.to_csv(("re", "im", "source"), ((pt.re, pt.im, pt.source) for pt in cloud.points))

    def table(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        cells: List[List[str]] = [list(header)] + [[str(v) for v in row] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(lines) + "\n"

    def emit(self, text: str, out: Optional[str] = None) -> None:
        target = out or self.out
        if target:
            Path(target).write_text(text)
            logger.info(f"Wrote {len(text)} characters to {target}")
        else:
            sys.stdout.write(text)
