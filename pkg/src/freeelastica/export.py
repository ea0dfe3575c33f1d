"""CSV, JSON and SVG artifacts.

Numbers are written with 15 significant digits so that identical inputs give
byte-identical files. SVG is generated as plain text on a fixed 800x600
canvas; no plotting library is involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SIG_DIGITS = 15
SVG_WIDTH = 800
SVG_HEIGHT = 600
N_TICKS = 5
_MARGIN = (80, 30, 40, 60)  # left, right, top, bottom


def fmt(value) -> str:
    """15-significant-digit text for a scalar."""
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.{SIG_DIGITS}g}"


def _round(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None
        return float(fmt(v))
    if isinstance(value, dict):
        return {str(k): _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_round(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def to_json(record: dict) -> str:
    """Deterministic JSON text (key order preserved, floats at 15 digits)."""
    return json.dumps(_round(record), indent=2, allow_nan=False) + "\n"


def csv_text(header, columns) -> str:
    cols = [np.asarray(c, dtype=float) for c in columns]
    n = {c.shape[0] for c in cols}
    if len(n) != 1:
        raise ValueError("CSV columns must have equal length")
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


# -- records -----------------------------------------------------------------

def constants_record(constants) -> dict:
    return constants.as_dict()


def angle_trace_csv(trace) -> str:
    return csv_text(["s", "x", "y", "kappa", "omega", "omega_s"],
                    [trace.s, trace.position[:, 0], trace.position[:, 1], trace.kappa,
                     trace.omega, trace.omega_s])


def branch_csv(branch) -> str:
    """Branch nodes with omega_star; the origin node carries omega* = 0."""
    c = branch.curve
    tr = branch.omega_star
    omega = np.concatenate([np.zeros(tr.start), tr.omega])
    return csv_text(["s", "x", "y", "kappa", "omega_star"],
                    [c.s, c.position[:, 0], c.position[:, 1], c.curvature, omega])


def solution_record(verdict) -> dict:
    sol = verdict.solution
    rec = {
        "h": verdict.h,
        "h_star": verdict.h_star,
        "classification": verdict.classification.value,
        "s_root": None,
        "lambda": None,
        "phi": None,
        "energy": None,
        "residuals": None,
    }
    if sol is not None:
        rec.update({
            "s_root": sol.s_root,
            "lambda": sol.lam,
            "phi": sol.phi,
            "energy": sol.energy,
            "residuals": {k: sol.residuals[k] for k in ("u_bc", "u2_bc", "apex", "ode")},
        })
    return rec


def solution_csv(solution) -> str:
    s = solution.samples
    return csv_text(["x", "u", "du", "d2u"], [s.x, s.u, s.du, s.d2u])


def oracle_record(report: dict) -> dict:
    keys = ("h", "grids", "extrapolated_energy", "analytic_energy", "rel_gap", "shape_sup_gap")
    rec = {k: report[k] for k in keys}
    rec["grids"] = [{"n": g["n"], "energy": g["energy"], "converged": g["converged"]}
                    for g in report["grids"]]
    return rec


# -- JSON schemas (draft 2020-12) for the records above ----------------------

_NUM = {"type": "number"}
_OPT_NUM = {"type": ["number", "null"]}


def _object(props, required=None):
    return {"type": "object", "properties": props,
            "required": list(required if required is not None else props),
            "additionalProperties": False}


CONSTANTS_SCHEMA = _object({k: _NUM for k in ("c_star", "h_star", "theta_star", "K_half_sqrt2")})

SOLUTION_SCHEMA = _object({
    "h": _NUM,
    "h_star": _NUM,
    "classification": {"enum": ["unique_symmetric", "no_minimizer"]},
    "s_root": _OPT_NUM,
    "lambda": _OPT_NUM,
    "phi": _OPT_NUM,
    "energy": _OPT_NUM,
    "residuals": {"oneOf": [{"type": "null"},
                            _object({k: _NUM for k in ("u_bc", "u2_bc", "apex", "ode")})]},
})

ORACLE_SCHEMA = _object({
    "h": _NUM,
    "grids": {"type": "array", "minItems": 1,
              "items": _object({"n": {"type": "integer"}, "energy": _NUM,
                                "converged": {"type": "boolean"}})},
    "extrapolated_energy": _NUM,
    "analytic_energy": _NUM,
    "rel_gap": _NUM,
    "shape_sup_gap": _NUM,
})

VERIFY_SCHEMA = _object({
    "seed": {"type": "integer"},
    "suites": {"type": "array",
               "items": _object({"name": {"type": "string"}, "passed": {"type": "boolean"},
                                 "metric": _OPT_NUM, "threshold": _NUM,
                                 "detail": {"type": "string"}})},
})


# -- SVG ---------------------------------------------------------------------

@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    color: str = "#1f4e9c"
    label: str = ""
    dash: str = ""


@dataclass
class Marker:
    x: float
    y: float
    label: str = ""
    color: str = "#c0392b"


@dataclass
class Figure:
    title: str
    xlabel: str
    ylabel: str
    series: list = field(default_factory=list)
    markers: list = field(default_factory=list)


def _ticks(lo, hi, n=N_TICKS):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _range(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def render_svg(fig: Figure) -> str:
    xs = np.concatenate([np.asarray(s.x, float) for s in fig.series] +
                        [np.array([m.x for m in fig.markers])])
    ys = np.concatenate([np.asarray(s.y, float) for s in fig.series] +
                        [np.array([m.y for m in fig.markers])])
    finite = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = _range(xs[finite])
    y0, y1 = _range(ys[finite])
    left, right, top, bottom = _MARGIN
    pw, ph = SVG_WIDTH - left - right, SVG_HEIGHT - top - bottom
    sx = lambda v: left + (v - x0) / (x1 - x0) * pw
    sy = lambda v: top + (y1 - v) / (y1 - y0) * ph
    stroke = 0.01 * SVG_HEIGHT
    c = lambda v: f"{v:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_esc(fig.title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black" '
        'stroke-width="1"/>',
    ]
    for t in _ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{c(px)}" y1="{top + ph}" x2="{c(px)}" y2="{top + ph + 6}" '
                   'stroke="black" stroke-width="1"/>')
        out.append(f'<text x="{c(px)}" y="{top + ph + 22}" text-anchor="middle" font-size="13" '
                   f'font-family="sans-serif">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{left - 6}" y1="{c(py)}" x2="{left}" y2="{c(py)}" '
                   'stroke="black" stroke-width="1"/>')
        out.append(f'<text x="{left - 10}" y="{c(py + 4)}" text-anchor="end" font-size="13" '
                   f'font-family="sans-serif">{t:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{SVG_HEIGHT - 12}" text-anchor="middle" '
               f'font-size="15" font-family="sans-serif">{_esc(fig.xlabel)}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="15" '
               f'font-family="sans-serif" transform="rotate(-90 18 {top + ph / 2:.1f})">'
               f'{_esc(fig.ylabel)}</text>')
    for s in fig.series:
        pts = " ".join(f"{c(sx(a))},{c(sy(b))}" for a, b in zip(s.x, s.y)
                       if math.isfinite(a) and math.isfinite(b))
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="{stroke:g}" '
                   f'stroke-linejoin="round"{dash} points="{pts}"><title>{_esc(s.label)}</title>'
                   '</polyline>')
    for m in fig.markers:
        out.append(f'<circle cx="{c(sx(m.x))}" cy="{c(sy(m.y))}" r="{1.5 * stroke:g}" '
                   f'fill="{m.color}"><title>{_esc(m.label)}</title></circle>')
        if m.label:
            out.append(f'<text x="{c(sx(m.x) + 12)}" y="{c(sy(m.y) - 10)}" font-size="13" '
                       f'font-family="sans-serif">{_esc(m.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))
