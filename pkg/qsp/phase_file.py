"""Plain-text phase-set files.

Line 1: `n tau eps_coeff`. Line 2: E0. Then one line per projector p_1..p_2n.
Every matrix line holds 8 floats, row-major, real and imaginary part of each
entry in turn, written with 17 significant digits so reading back is exact.
"""
import pathlib
from dataclasses import dataclass

import numpy as np

from core.errors import IoError
from qsp.phases import QspPhaseSet


@dataclass(frozen=True)
class PhaseFile:
    n: int
    tau: float
    eps_coeff: float
    phases: QspPhaseSet


def _matrix_line(m) -> str:
    flat = np.asarray(m, dtype=complex).reshape(-1)
    return " ".join(f"{v:.17g}" for z in flat for v in (z.real, z.imag))


def _parse_matrix(line: str, lineno: int) -> np.ndarray:
    values = [float(v) for v in line.split()]
    if len(values) != 8:
        raise IoError(f"line {lineno}: expected 8 floats, got {len(values)}")
    return (np.array(values[0::2]) + 1j * np.array(values[1::2])).reshape(2, 2)


def write_phase_file(path, phases: QspPhaseSet, tau: float, eps_coeff: float) -> pathlib.Path:
    path = pathlib.Path(path)
    lines = [f"{phases.n} {tau:.17g} {eps_coeff:.17g}", _matrix_line(phases.e0)]
    lines += [_matrix_line(p) for p in phases.projectors]
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def read_phase_file(path) -> PhaseFile:
    path = pathlib.Path(path)
    try:
        lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        head = lines[0].split()
        n, tau, eps = int(head[0]), float(head[1]), float(head[2])
        if len(lines) != 2 + 2 * n:
            raise IoError(f"{path}: header promises {2 * n} projectors, found {len(lines) - 2}")
        e0 = _parse_matrix(lines[1], 2)
        projectors = tuple(_parse_matrix(line, k + 3) for k, line in enumerate(lines[2:]))
        return PhaseFile(n, tau, eps, QspPhaseSet(e0, projectors))
    except (IndexError, ValueError) as exc:
        raise IoError(f"{path}: malformed phase file ({exc})") from exc
