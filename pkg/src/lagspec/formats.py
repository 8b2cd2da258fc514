"""JSON planes and CSV reports.

A plane file holds ``{"n": n, "X": ..., "Y": ...}`` where every matrix is a
list of rows of ``[re, im]`` pairs.  ``{"P": ..., "Theta": ...}`` and the
co-frame ``{"A": ..., "B": ...}`` are accepted as well.
"""
from __future__ import annotations

import json
from typing import Any, Dict

import numpy as np

from .linalg import DEFAULT_TOL, ToleranceConfig
from .symplectic import CoFrame, LagrangianPlane, ProjectorTheta, plane_from_projector_theta


class PlaneFormatError(ValueError):
    """Malformed plane description."""


def encode_matrix(a) -> list:
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(obj: Any, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise PlaneFormatError(f"{name}: entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise PlaneFormatError(f"{name}: expected rows of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PlaneFormatError(f"{name}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def _square(m: np.ndarray, n: int, name: str) -> np.ndarray:
    if m.shape != (n, n):
        raise PlaneFormatError(f"{name} must be {n}x{n}, got {m.shape[0]}x{m.shape[1]}")
    return m


def plane_from_dict(d: Dict[str, Any], tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    if not isinstance(d, dict):
        raise PlaneFormatError("plane description must be a JSON object")
    keys = set(d) - {"n"}
    if keys == {"X", "Y"}:
        a, b, kind = "X", "Y", "frame"
    elif keys == {"P", "Theta"}:
        a, b, kind = "P", "Theta", "pt"
    elif keys == {"A", "B"}:
        a, b, kind = "A", "B", "coframe"
    else:
        raise PlaneFormatError(f"unrecognized plane fields {sorted(d)}; expected X/Y, P/Theta or A/B")
    first = decode_matrix(d[a], a)
    n = d.get("n", first.shape[0])
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise PlaneFormatError("n must be a positive integer")
    first, second = _square(first, n, a), _square(decode_matrix(d[b], b), n, b)
    if kind == "frame":
        return LagrangianPlane(first, second, tol=tol)
    if kind == "pt":
        return plane_from_projector_theta(ProjectorTheta(first, second), tol)
    return CoFrame(first, second).to_plane(tol)


def plane_to_dict(L: LagrangianPlane) -> Dict[str, Any]:
    return {"n": L.n, "X": encode_matrix(L.X), "Y": encode_matrix(L.Y)}


def load_plane(path: str, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PlaneFormatError(f"{path}: invalid JSON ({exc})") from exc
    return plane_from_dict(d, tol)


def dump_plane(L: LagrangianPlane, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(plane_to_dict(L), fh)
