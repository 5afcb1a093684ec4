"""CSV, JSON and SVG writers with byte-stable formatting."""

from __future__ import annotations

import io
import json
import math

SVG_SIZE = 800
SVG_MARGIN = 0.05


def fmt(v) -> str:
    """Shortest round-trip text for floats; plain str for everything else."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _plain(obj.item())
    return obj


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def svg_polyline(xs, ys, stroke="#1f4e9a") -> str:
    """800x800 SVG of the path (x, y); equal aspect, y up, 5% margin."""
    xs = [float(v) for v in xs]
    ys = [0.0 - float(v) for v in ys]  # SVG y grows downward
    if not xs:
        xs, ys = [0.0], [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0)
    if span == 0.0:
        span = 1.0
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    side = span * (1.0 + 2.0 * SVG_MARGIN)
    vb = (cx - 0.5 * side, cy - 0.5 * side, side, side)
    pts = " ".join(f"{x!r},{y!r}" for x, y in zip(xs, ys))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="{vb[0]!r} {vb[1]!r} {vb[2]!r} {vb[3]!r}">\n'
        f'<polyline fill="none" stroke="{stroke}" stroke-width="1" '
        f'vector-effect="non-scaling-stroke" points="{pts}"/>\n'
        "</svg>\n"
    )


def write_text(path, text: str):
    # newline="" keeps LF endings on every platform
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
