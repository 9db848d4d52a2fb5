"""Plain-text file formats: traces, map grids (csv/pgm/ppm).

Everything is line-oriented text so outputs diff cleanly and byte-identical
reruns are easy to verify. Floats are written with repr so a write/parse
round trip reproduces the exact values.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import GridSpec, Pose, ScalarGrid, TraceRecord

TRACE_HEADER = "# x_cm, y_cm, heading_rad, d1..d12_cm"


class TraceFormatError(ValueError):
    """Malformed trace or map file."""


def write_trace(path, records) -> None:
    """One record per line: 15 comma-separated numbers."""
    with open(path, "w") as f:
        f.write(TRACE_HEADER + "\n")
        for rec in records:
            fields = [repr(rec.pose.x), repr(rec.pose.y), repr(rec.pose.heading)]
            fields += [repr(r) for r in rec.ranges]
            f.write(",".join(fields) + "\n")


def parse_trace(path) -> list[TraceRecord]:
    """Ordered records; '#' lines are comments; malformed lines name their
    line number."""
    records = []
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 15:
                raise TraceFormatError(
                    f"{path}:{lineno}: expected 15 fields, got {len(parts)}")
            try:
                nums = [float(p) for p in parts]
            except ValueError:
                raise TraceFormatError(
                    f"{path}:{lineno}: non-numeric field") from None
            if any(not math.isfinite(v) for v in nums):
                raise TraceFormatError(f"{path}:{lineno}: non-finite value")
            pose = Pose(nums[0], nums[1], nums[2])
            try:
                rec = TraceRecord(pose, tuple(nums[3:]), len(records))
            except ValueError as exc:
                raise TraceFormatError(f"{path}:{lineno}: {exc}") from None
            records.append(rec)
    return records


# ---------------------------------------------------------------------------
# Map grids
# ---------------------------------------------------------------------------

def _geometry_comment(spec: GridSpec, range_tag: str) -> str:
    return (f"# antomap map origin_x={spec.origin_x!r} origin_y={spec.origin_y!r} "
            f"cell_size={spec.cell_size!r} rows={spec.rows} cols={spec.cols} "
            f"range_tag={range_tag}")


def export_map(grid: ScalarGrid, path, fmt: str = "csv") -> None:
    """Write a grid as csv (raw values), pgm (grayscale), or ppm (colorized).

    PGM maps the grid's declared range linearly onto 0..255. PPM paints
    signed/ternary maps red (+1) / green (0) / blue (-1) with linear blends.
    """
    if fmt == "csv":
        _export_csv(grid, path)
    elif fmt == "pgm":
        _export_pgm(grid, path)
    elif fmt == "ppm":
        _export_ppm(grid, path)
    else:
        raise ValueError(f"unknown map format {fmt!r}")


def _export_csv(grid: ScalarGrid, path) -> None:
    with open(path, "w") as f:
        f.write(_geometry_comment(grid.spec, grid.range_tag) + "\n")
        for row in grid.values:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def import_map(path) -> ScalarGrid:
    """Read a csv map written by export_map."""
    spec = None
    range_tag = "unit"
    rows = []
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# antomap map "):
                    fields = dict(kv.split("=", 1) for kv in line[14:].split())
                    spec = GridSpec(float(fields["origin_x"]),
                                    float(fields["origin_y"]),
                                    float(fields["cell_size"]),
                                    int(fields["rows"]), int(fields["cols"]))
                    range_tag = fields["range_tag"]
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno}: non-numeric value") from None
    if spec is None:
        raise TraceFormatError(f"{path}: missing '# antomap map' header")
    values = np.array(rows)
    if values.shape != spec.shape:
        raise TraceFormatError(
            f"{path}: grid is {values.shape}, header says {spec.shape}")
    return ScalarGrid(spec, values, range_tag)


def _export_pgm(grid: ScalarGrid, path) -> None:
    lo, hi = (0.0, 1.0) if grid.range_tag == "unit" else (-1.0, 1.0)
    scaled = np.rint((grid.values - lo) / (hi - lo) * 255.0).astype(int)
    scaled = np.clip(scaled, 0, 255)
    with open(path, "w") as f:
        f.write("P2\n")
        f.write(_geometry_comment(grid.spec, grid.range_tag) + "\n")
        f.write(f"{grid.spec.cols} {grid.spec.rows}\n255\n")
        # image rows run top-down; grid rows run bottom-up (row 0 = min y)
        for row in scaled[::-1]:
            f.write(" ".join(str(v) for v in row) + "\n")


def _export_ppm(grid: ScalarGrid, path) -> None:
    if grid.range_tag == "unit":
        raise ValueError("ppm export needs a signed or ternary grid")
    v = grid.values
    red = np.rint(np.where(v > 0, v, 0.0) * 255.0).astype(int)
    blue = np.rint(np.where(v < 0, -v, 0.0) * 255.0).astype(int)
    green = np.rint((1.0 - np.abs(v)) * 255.0).astype(int)
    with open(path, "w") as f:
        f.write("P3\n")
        f.write(_geometry_comment(grid.spec, grid.range_tag) + "\n")
        f.write(f"{grid.spec.cols} {grid.spec.rows}\n255\n")
        for i in range(grid.spec.rows - 1, -1, -1):
            parts = []
            for j in range(grid.spec.cols):
                parts.append(f"{red[i, j]} {green[i, j]} {blue[i, j]}")
            f.write("  ".join(parts) + "\n")
