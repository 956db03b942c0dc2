"""Dominant eigenpair of small dense Hermitian matrices, with a fixed phase gauge."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
GAUGE_FLOOR = 1e-12


class NumericError(RuntimeError):
    """Numerical failure in an eigen computation; carries the achieved residual."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigenResult:
    """Dominant eigenpair: matrix @ vector = value * vector, ||vector|| = 1.

    iterations is 0 for the direct dense solve used here.
    """

    value: float
    vector: np.ndarray
    residual: float
    iterations: int


def normalize_phase(v, floor=GAUGE_FLOOR):
    """Rotate v so its first component of modulus > floor is real nonnegative.

    Fixes the arbitrary global phase of an eigenvector deterministically;
    applying the gauge twice is a no-op.
    """
    v = np.asarray(v, dtype=complex)
    for i, comp in enumerate(v):
        mag = abs(comp)
        if mag > floor:
            if comp.imag == 0.0 and comp.real > 0.0:
                return v.copy()  # already gauged; keep the rotation a bit-exact no-op
            out = v * (comp.conjugate() / mag)
            # the pivot is |comp| by construction; writing it directly removes
            # the rounding residue in its imaginary part
            out[i] = mag
            return out
    return v.copy()


def principal_eigenpair(b) -> EigenResult:
    """Largest eigenpair of a Hermitian matrix (positive semidefinite here).

    Asymmetry up to HERMITIAN_TOL is absorbed by symmetrizing; anything larger
    is rejected as a genuine bug.  Uses a dense LAPACK solve: deterministic for
    identical input and robust to (near-)degenerate spectra, which matters
    because the position optimizer's monotone-ascent guarantee leans on exact
    eigenvalues at every iterate.
    """
    b = np.asarray(b, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] < 1:
        raise ValueError(f"expected a square matrix of order >= 1, got shape {b.shape}")
    asym = float(np.max(np.abs(b - b.conj().T)))
    if asym > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    b = 0.5 * (b + b.conj().T)
    try:
        values, vectors = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NumericError(f"eigensolver failed: {exc}") from exc
    value = float(values[-1])
    vector = vectors[:, -1]
    vector = normalize_phase(vector / np.linalg.norm(vector))
    residual = float(np.linalg.norm(b @ vector - value * vector))
    if residual > RESIDUAL_TOL:
        raise NumericError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_TOL}", residual
        )
    vector.flags.writeable = False
    return EigenResult(value=value, vector=vector, residual=residual, iterations=0)
