"""Hardy-Sobolev spaces on tube domains over convex cones."""

import json as _json

from . import _tubehs
from ._tubehs import TubeHSError, criterion_count, default_seed, run_criterion

__all__ = [
    "Cone",
    "TubeHSError",
    "criterion_count",
    "decompose",
    "default_seed",
    "embedding_estimate",
    "evaluate",
    "hs_norm",
    "kernel",
    "kernel_diag",
    "run_criterion",
]


def _text(obj):
    if obj is None:
        return ""
    return obj if isinstance(obj, str) else _json.dumps(obj)


def Cone(kind, dim=None, generators=None):
    """Cone from a spec dict, or from kind/dim/generators."""
    if isinstance(kind, dict):
        spec = kind
    else:
        spec = {"kind": kind, "dim": dim}
        if generators is not None:
            spec["generators"] = [list(map(float, g)) for g in generators]
    return _tubehs.Cone(_json.dumps(spec))


def _point(p):
    x, y = p
    return list(map(float, x)), list(map(float, y))


def kernel(cone, order, z, w, gauge=None):
    return _tubehs.kernel(cone, order, _point(z), _point(w), _text(gauge))


def kernel_diag(cone, order, z, gauge=None):
    return _tubehs.kernel_diag(cone, order, _point(z), _text(gauge))


def evaluate(cone, order, density, z, gauge=None):
    return _tubehs.evaluate(cone, order, _text(density), _point(z), _text(gauge))


def hs_norm(cone, order, density, gauge=None):
    return _tubehs.hs_norm(cone, order, _text(density), _text(gauge))


def decompose(cone, order, samples, period, gauge=None, tol=0.0):
    """Norm identity report for samples on a periodic grid (1D list or 2D nested list)."""
    rows = list(samples)
    dim = 2 if rows and isinstance(rows[0], (list, tuple)) else 1
    flat = [v for row in rows for v in row] if dim == 2 else rows
    grid = {
        "dim": dim,
        "points_per_axis": len(rows),
        "period": float(period),
        "samples": [[complex(v).real, complex(v).imag] for v in flat],
    }
    return _tubehs.decompose(cone, order, _json.dumps(grid), _text(gauge), float(tol))


def embedding_estimate(cone, order, measure, frame):
    """measure: list of (x, y, mass); frame: list of (x, y). Returns (lambda, gram condition)."""
    mu = [{"x": list(x), "y": list(y), "mass": float(m)} for x, y, m in measure]
    return _tubehs.embedding_estimate(cone, order, _json.dumps(mu), [_point(p) for p in frame])
