"""JSON formats for matrices, subspaces, forms, paths and experiment configs.

A matrix is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with the
``r * c`` entries in row-major order.  A subspace is the matrix of a spanning
set of columns.  A sampled path is ``{"tau": T, "samples": [{"t": t,
"matrix": M}, ...]}``; a path can instead be given by piecewise constant
Hamiltonians, ``{"breaks": [0, ..., T], "hamiltonians": [B_1, ...]}``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import scipy.linalg as sla

from .forms import HermitianForm
from .mean_index import ExperimentConfig, FieldSpec, FieldTerm
from .paths import LagrangianPath, PiecewiseExpPath, sampled_lagrangian_path
from .symplectic import DEFAULT_TOL, SubspaceFrame, SymplecticSpace, Tolerances, is_symplectic, orth


class InputError(ValueError):
    """Malformed or inconsistent input; the command line maps it to exit code 2."""


# ---------------------------------------------------------------- matrices


def matrix_to_json(M: np.ndarray) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def matrix_from_json(obj: Any, what: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= set(obj):
        raise InputError(f"malformed {what}: expected an object with rows, cols and data")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (TypeError, ValueError):
        raise InputError(f"malformed {what}: rows and cols must be integers") from None
    data = obj["data"]
    if rows < 0 or cols < 0 or not isinstance(data, list) or len(data) != rows * cols:
        raise InputError(f"malformed {what}: data must hold rows*cols = {rows * cols} entries")
    try:
        vals = np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
    except (TypeError, ValueError):
        raise InputError(f"malformed {what}: every entry must be a [re, im] pair of numbers") from None
    if not np.all(np.isfinite(vals)):
        raise InputError(f"malformed {what}: entries must be finite")
    return vals.reshape(rows, cols)


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


# ------------------------------------------------------------ spaces/frames


def space_from_json(obj: Optional[Any], dim: Optional[int] = None) -> SymplecticSpace:
    """``J`` from a matrix object, or the standard structure of dimension ``dim``."""
    if obj is None:
        if dim is None or dim % 2:
            raise InputError(f"dimension mismatch: cannot build a standard space of dimension {dim}")
        return SymplecticSpace.standard(dim // 2)
    J = matrix_from_json(obj, "J")
    try:
        return SymplecticSpace(J)
    except ValueError as exc:
        raise InputError(f"invalid J: {exc}") from None


def frame_from_json(obj: Any, space: SymplecticSpace, what: str = "subspace") -> SubspaceFrame:
    A = matrix_from_json(obj, what)
    if A.shape[0] != space.dim:
        raise InputError(f"dimension mismatch: {what} has {A.shape[0]} rows, the space has dimension {space.dim}")
    return SubspaceFrame(space, orth(A))


def frame_to_json(frame: SubspaceFrame) -> dict:
    return matrix_to_json(frame.cols)


def form_to_json(form: HermitianForm) -> dict:
    return {"basis": frame_to_json(form.basis), "matrix": matrix_to_json(form.matrix)}


def form_from_json(obj: Any, space: SymplecticSpace) -> HermitianForm:
    if not isinstance(obj, dict) or not {"basis", "matrix"} <= set(obj):
        raise InputError("malformed form: expected basis and matrix")
    basis = frame_from_json(obj["basis"], space, "form basis")
    H = matrix_from_json(obj["matrix"], "form matrix")
    if H.shape != (basis.k, basis.k):
        raise InputError(f"dimension mismatch: form matrix is {H.shape}, basis has {basis.k} vectors")
    return HermitianForm(basis, H)


# ------------------------------------------------------------------ paths


def _samples(obj: Any, what: str) -> tuple:
    if not isinstance(obj, dict) or "samples" not in obj:
        raise InputError(f"malformed {what}: expected samples")
    times, mats = [], []
    for k, smp in enumerate(obj["samples"]):
        if not isinstance(smp, dict) or "t" not in smp or "matrix" not in smp:
            raise InputError(f"malformed {what}: sample {k} needs t and matrix")
        times.append(float(smp["t"]))
        mats.append(matrix_from_json(smp["matrix"], f"{what} sample {k}"))
    if len(times) < 2 or np.any(np.diff(times) <= 0):
        raise InputError(f"malformed {what}: need two or more samples with increasing t")
    if "tau" in obj and abs(float(obj["tau"]) - (times[-1] - times[0])) > 1e-12 * max(1.0, times[-1]):
        raise InputError(f"malformed {what}: tau does not match the sample span")
    return np.array(times) - times[0], mats


def symplectic_path_from_json(obj: Any, space: Optional[SymplecticSpace] = None,
                              tol: Tolerances = DEFAULT_TOL) -> PiecewiseExpPath:
    """Sampled or piecewise-Hamiltonian symplectic path."""
    if isinstance(obj, dict) and "hamiltonians" in obj:
        breaks = [float(b) for b in obj.get("breaks", [])]
        Bs = [matrix_from_json(B, "hamiltonian") for B in obj["hamiltonians"]]
        if len(breaks) != len(Bs) + 1 or breaks[0] != 0.0 or np.any(np.diff(breaks) < 0):
            raise InputError("malformed path: breaks must start at 0, increase, and bracket every hamiltonian")
        space = space or space_from_json(obj.get("J"), Bs[0].shape[0] if Bs else None)
        for B in Bs:
            if B.shape != (space.dim, space.dim):
                raise InputError(f"dimension mismatch: hamiltonian is {B.shape}, the space has dimension {space.dim}")
            if np.linalg.norm(B - B.conj().T) > 1e-10 * max(1.0, np.linalg.norm(B)):
                raise InputError("hamiltonian is not Hermitian")
        gens = np.array([-space.Jinv @ B for B in Bs]) if Bs else np.zeros((0, space.dim, space.dim))
        return PiecewiseExpPath(space, breaks, gens)
    times, mats = _samples(obj, "path")
    space = space or space_from_json(obj.get("J") if isinstance(obj, dict) else None, mats[0].shape[0])
    for k, M in enumerate(mats):
        if M.shape != (space.dim, space.dim):
            raise InputError(f"dimension mismatch: sample {k} is {M.shape}, the space has dimension {space.dim}")
        if not is_symplectic(M, space, tol=tol):
            raise InputError(f"sample {k} is not symplectic within tolerance {tol.sympl:g}")
    gens = []
    for k in range(len(mats) - 1):
        inc = mats[k + 1] @ np.linalg.inv(mats[k])
        if np.linalg.norm(inc - np.eye(space.dim), 2) >= 1.0:
            raise InputError(f"path samples {k} and {k + 1} are too far apart to interpolate")
        gens.append(sla.logm(inc) / (times[k + 1] - times[k]))
    return PiecewiseExpPath(space, times, np.array(gens), start=mats[0])


def lagrangian_path_from_json(obj: Any, space: SymplecticSpace, what: str = "Lagrangian path") -> LagrangianPath:
    """Sampled frames, or a single frame read as a constant path."""
    if isinstance(obj, dict) and "samples" in obj:
        times, frames = _samples(obj, what)
        for k, F in enumerate(frames):
            if F.shape[0] != space.dim:
                raise InputError(f"dimension mismatch: {what} sample {k} has {F.shape[0]} rows")
        return sampled_lagrangian_path(space, times, frames)
    return LagrangianPath.constant_path(frame_from_json(obj, space, what))


def path_to_json(path, samples: int = 17) -> dict:
    times = np.linspace(0.0, path.tau, samples)
    return {"tau": float(path.tau),
            "samples": [{"t": float(t), "matrix": matrix_to_json(path(t))} for t in times]}


# --------------------------------------------------------- experiment config


def field_from_json(obj: Any, space: SymplecticSpace, torus_dim: int) -> FieldSpec:
    """Field as explicit terms, or one of the shortcuts ``zero``, ``scaled_abs_j``, ``random``."""
    if obj == "zero" or obj == {"zero": True}:
        return FieldSpec.zero(space, torus_dim)
    if not isinstance(obj, dict):
        raise InputError("malformed field: expected an object")
    if "scaled_abs_j" in obj:
        return FieldSpec.scaled_abs_j(space, float(obj["scaled_abs_j"]), torus_dim)
    if "random" in obj:
        r = obj["random"]
        return FieldSpec.random(space, torus_dim, int(r.get("seed", 0)), int(r.get("modes", 2)),
                                float(r.get("scale", 1.0)), float(r.get("offset", 0.0)))
    if "terms" not in obj:
        raise InputError("malformed field: expected terms, zero, scaled_abs_j or random")
    terms = []
    for j, t in enumerate(obj["terms"]):
        k = t.get("k")
        if not isinstance(k, list) or len(k) != torus_dim:
            raise InputError(f"dimension mismatch: term {j} frequency must have torus_dim = {torus_dim} entries")
        C = matrix_from_json(t["cos"], f"term {j} cos")
        S = matrix_from_json(t["sin"], f"term {j} sin") if "sin" in t else None
        if C.shape != (space.dim, space.dim):
            raise InputError(f"dimension mismatch: term {j} is {C.shape}, expected {(space.dim, space.dim)}")
        try:
            terms.append(FieldTerm(tuple(k), C, S))
        except ValueError as exc:
            raise InputError(f"term {j}: {exc}") from None
    return FieldSpec(space, terms)


def config_from_json(obj: Any) -> ExperimentConfig:
    required = ("n", "torus_dim", "velocity", "field", "xi", "schedule")
    if not isinstance(obj, dict) or any(k not in obj for k in required):
        raise InputError(f"malformed config: needs keys {', '.join(required)}")
    n, d = int(obj["n"]), int(obj["torus_dim"])
    if n < 1 or d < 1:
        raise InputError("malformed config: n and torus_dim must be positive")
    velocity = tuple(float(v) for v in obj["velocity"])
    if len(velocity) != d:
        raise InputError(f"dimension mismatch: velocity has {len(velocity)} entries, torus_dim is {d}")
    space = space_from_json(obj.get("J"), 2 * n)
    if space.n != n:
        raise InputError(f"dimension mismatch: J has dimension {space.dim}, n is {n}")
    field = field_from_json(obj["field"], space, d)
    xis = [tuple(float(x) for x in p) for p in obj["xi"]]
    if not xis or any(len(p) != d for p in xis):
        raise InputError(f"dimension mismatch: every xi needs torus_dim = {d} coordinates")
    schedule = [float(t) for t in obj["schedule"]]
    if not schedule or schedule[0] <= 0 or np.any(np.diff(schedule) <= 0):
        raise InputError("malformed config: schedule must be positive and strictly increasing")
    step = obj.get("step")
    if step is not None and float(step) <= 0:
        raise InputError("malformed config: step must be positive")
    cfg = ExperimentConfig(n, velocity, field, xis, schedule, None if step is None else float(step))
    try:
        cfg.validate()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return cfg


__all__ = [
    "InputError",
    "config_from_json",
    "dumps",
    "field_from_json",
    "form_from_json",
    "form_to_json",
    "frame_from_json",
    "frame_to_json",
    "lagrangian_path_from_json",
    "matrix_from_json",
    "matrix_to_json",
    "path_to_json",
    "read_json",
    "space_from_json",
    "symplectic_path_from_json",
]
