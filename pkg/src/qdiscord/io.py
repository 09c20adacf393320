"""State files and report serialization.

A state file is a JSON object ``{"n": 4, "re": [[...]], "im": [[...]]}`` with
row-major n x n arrays. Floats are written with ``repr`` precision (17
significant digits), so a write/read round trip is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .discord import CorrelationReport, Povm
from .errors import ValidationError
from .states import RANK_TOL, TwoQubitState, validate


def state_to_dict(rho) -> dict:
    m = rho.matrix if isinstance(rho, TwoQubitState) else np.asarray(rho, dtype=complex)
    return {"n": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def state_from_dict(doc: dict, rank_tol: float = RANK_TOL) -> TwoQubitState:
    try:
        n = int(doc["n"])
        re = np.array(doc["re"], dtype=float)
        im = np.array(doc.get("im", np.zeros((n, n)).tolist()), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state document: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValidationError(f"arrays must be {n}x{n}, got {re.shape} and {im.shape}")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ValidationError("state entries must be finite")
    return validate(re + 1j * im, rank_tol=rank_tol)


def write_state(path, rho) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho), indent=1) + "\n")


def read_state(path, rank_tol: float = RANK_TOL) -> TwoQubitState:
    """Parse a state file. OSError propagates; bad content raises ValidationError."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"state file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("state file must hold a JSON object")
    return state_from_dict(doc, rank_tol=rank_tol)


def _povm_dict(m: Povm | None):
    if m is None:
        return None
    return {"weights": m.weights.tolist(), "directions": m.directions.tolist()}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    return x


def report_to_dict(rep: CorrelationReport) -> dict:
    return {
        "I": rep.mutual_information,
        "C": rep.classical_correlation,
        "D": rep.discord,
        "mae": rep.mae,
        "method": rep.method,
        "bounds": None if rep.bound_pair is None else list(rep.bound_pair),
        "discord_interval": None if rep.discord_interval is None else list(rep.discord_interval),
        "optimal_measurement": _povm_dict(rep.optimal_measurement),
        "metadata": _jsonable(rep.metadata),
    }


def report_to_json(rep: CorrelationReport) -> str:
    return json.dumps(report_to_dict(rep), indent=1)
