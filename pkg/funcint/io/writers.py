# ================================================================================================
# 💾 WRITERS - Tablas CSV/JSON y resumen de malla
# ================================================================================================
# CSV: fixed column order, "." decimal separator, LF line endings, floats with
# a configurable number of significant digits (17 by default).

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..domain.entities.mesh import Mesh

Rows = Sequence[Mapping[str, float]]


def format_value(value: Any, float_format: str = "{:.17g}") -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return float_format.format(float(value))


def format_csv(columns: Sequence[str], rows: Rows, float_format: str = "{:.17g}") -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(row[c], float_format) for c in columns))
    return "\n".join(lines) + "\n"


def format_json(
    columns: Sequence[str],
    rows: Rows,
    meta: Optional[Dict[str, Any]] = None,
) -> str:
    document = {
        **(meta or {}),
        "columns": list(columns),
        "rows": [{c: float(row[c]) for c in columns} for row in rows],
    }
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


def write_table(
    path: Union[str, Path],
    columns: Sequence[str],
    rows: Rows,
    fmt: str = "csv",
    float_format: str = "{:.17g}",
    meta: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write the table once, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = format_csv(columns, rows, float_format) if fmt == "csv" else format_json(columns, rows, meta)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    return path


def format_mesh_info(mesh: Mesh, float_format: str = "{:.17g}") -> str:
    """Stable, line-oriented mesh summary."""
    lo, hi = mesh.bounding_box()

    def vec(values: Sequence[float]) -> str:
        return "(" + ", ".join(float_format.format(v) for v in values) + ")"

    counts: List[str] = [f"{kind}={count}" for kind, count in mesh.element_counts().items()]
    lines = [
        f"spatial_dim: {mesh.spatial_dim}",
        f"nodes: {len(mesh.nodes)}",
        f"elements: {len(mesh.elements)} ({', '.join(counts)})",
        f"h: {float_format.format(mesh.h)}",
        f"bounding_box: {vec(lo)} - {vec(hi)}",
    ]
    return "\n".join(lines) + "\n"
