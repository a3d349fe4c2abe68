"""Report assembly: structured dicts, JSON and text rendering, plot-data CSV."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .decision import (
    DiscreteMap,
    RealLine,
    RegionPartition,
    evsi_direct,
)
from .fuzzy import ZERO, FuzzyNumber, alpha_cut, membership_at
from .ranking import kolodziejczyk_r
from .serialization import ProblemFile

SIG = 10
FILL_POINTS = 64


def num(x: float) -> float | None:
    """Round to 10 significant digits; infinities become ``None`` (JSON null)."""
    if x is None or math.isinf(x) or math.isnan(x):
        return None
    return float(f"{x:.{SIG}g}") + 0.0


def fuzzy_json(F: FuzzyNumber) -> list[list[float]]:
    return [[num(x), num(g)] for x, g in F.points]


def header(command: str, pf: ProblemFile, **options) -> dict[str, Any]:
    out: dict[str, Any] = {
        "tool": "fuzzy-voi",
        "version": __version__,
        "command": command,
        "problem": pf.name,
    }
    if options:
        out["options"] = {k: v for k, v in options.items() if v is not None}
    if pf.caveat:
        out["caveat"] = pf.caveat
    return out


def regions_json(regions: RegionPartition, pf: ProblemFile, exp) -> dict[str, Any]:
    actions = pf.problem.actions
    if isinstance(regions, DiscreteMap):
        return {
            "type": "discrete",
            "outcomes": {o: actions[a] for o, a in zip(exp.outcomes, regions.actions)},
        }
    assert isinstance(regions, RealLine)
    return {
        "type": "real-line",
        "cuts": [num(c) for c in regions.cuts],
        "intervals": [
            {"from": num(a), "to": num(b), "action": actions[act]} for a, b, act in regions.intervals()
        ],
    }


def matrix_json(m) -> list[list[float | None]]:
    return [[num(v) for v in row] for row in m]


def evsi_cross_check(pf: ProblemFile, exp, evsi_value: FuzzyNumber, regions, levels: int, grid: int) -> dict:
    """Largest alpha-cut endpoint gap between the region form and the direct integral."""
    direct = evsi_direct(pf.problem, exp, levels=levels, regions=regions, grid=grid)
    gap = 0.0
    for k in range(levels):
        a = k / (levels - 1)
        c1, c2 = alpha_cut(evsi_value, a), alpha_cut(direct, a)
        gap = max(gap, abs(c1.lo - c2.lo), abs(c1.hi - c2.hi))
    return {"levels": levels, "max_endpoint_gap": num(gap)}


# -- rendering ---------------------------------------------------------------


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.{SIG}g}"
    return str(v)


def _is_fuzzy(v) -> bool:
    return (
        isinstance(v, list)
        and bool(v)
        and all(isinstance(p, list) and len(p) == 2 and all(isinstance(q, float) for q in p) for p in v)
    )


def to_text(report: dict) -> str:
    """Indented plain-text rendering of a report dict."""
    lines: list[str] = []

    def walk(key, value, depth):
        pad = "  " * depth
        label = f"{pad}{key}: " if key is not None else pad
        if _is_fuzzy(value) and "matrix" not in str(key):
            body = " ".join(f"({_fmt(x)}, {_fmt(g)})" for x, g in value)
            lines.append(f"{label}{body}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:" if key is not None else pad.rstrip())
            for k, v in value.items():
                walk(k, v, depth + 1)
        elif isinstance(value, list) and value and all(isinstance(v, list) for v in value):
            lines.append(f"{pad}{key}:")
            for row in value:
                lines.append(f"{pad}  " + "  ".join(_fmt(v) for v in row))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                walk("-", item, depth + 1)
        elif isinstance(value, list):
            lines.append(f"{label}{', '.join(_fmt(v) for v in value) or 'none'}")
        else:
            lines.append(f"{label}{_fmt(value)}")

    for k, v in report.items():
        walk(k, v, 0)
    return "\n".join(line for line in lines if line.strip()) + "\n"


# -- plot data ---------------------------------------------------------------


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def plot_rows(series: str, F: FuzzyNumber) -> list[tuple[str, float, float]]:
    """Every breakpoint plus 64 uniform fill points across a padded support."""
    s = F.support()
    pad = 0.1 * (s.hi - s.lo) if s.hi > s.lo else 0.5
    fill = np.linspace(s.lo - pad, s.hi + pad, FILL_POINTS).tolist()
    keyed = [(x, 0, k, g) for k, (x, g) in enumerate(F.points)]
    keyed += [(x, 1, k, membership_at(F, x)) for k, x in enumerate(fill)]
    keyed.sort()
    return [(series, x, g) for x, _, _, g in keyed]


def write_plot_csv(out_dir: Path, series: str, F: FuzzyNumber) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{_safe(series)}.csv"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "w", "mu"])
    for name, x, g in plot_rows(series, F):
        w.writerow([name, f"{x:.{SIG}g}", f"{g:.{SIG}g}"])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path



def r_zero(U: FuzzyNumber) -> float | None:
    return num(kolodziejczyk_r(U, ZERO))
