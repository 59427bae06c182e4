"""Dense linear algebra substrate: validated quantum states, Kronecker
products, partial traces and singular spectra.

All state-like objects are immutable; every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS_HERM = 1e-10
EPS_TRACE = 1e-10
EPS_NORM = 1e-10
EPS_PSD = 1e-9

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class ValidationError(ValueError):
    """Raised when a state fails one of its defining invariants."""


def _frozen_array(a, dtype):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def hermitize(m):
    """(m + m†)/2 — used before eigenvalue-based PSD checks."""
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class DensityMatrix:
    """A mixed state over parties with dimensions ``dims``.

    Validates Hermiticity, unit trace and positive semidefiniteness on
    construction; raises :class:`ValidationError` naming the violated
    invariant otherwise.
    """

    dims: tuple
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 2 for d in dims):
            raise ValidationError("every party dimension must be >= 2")
        side = int(np.prod(dims))
        data = _frozen_array(self.data, complex)
        object.__setattr__(self, "data", data)
        if data.shape != (side, side):
            raise ValidationError(
                f"matrix shape {data.shape} does not match dims {dims}"
            )
        herm_res = np.abs(data - data.conj().T).max()
        if herm_res > EPS_HERM:
            raise ValidationError(f"not Hermitian (residual {herm_res:.3e})")
        tr = data.trace()
        if abs(tr - 1) > EPS_TRACE:
            raise ValidationError(f"unit trace violated (trace {tr:.12g})")
        min_eig = np.linalg.eigvalsh(hermitize(data)).min()
        if min_eig < -EPS_PSD:
            raise ValidationError(
                f"not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def dim(self):
        return self.data.shape[0]


@dataclass(frozen=True)
class PureState:
    """A pure state vector over parties with dimensions ``dims``."""

    dims: tuple
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        amp = _frozen_array(self.amplitudes, complex)
        object.__setattr__(self, "amplitudes", amp)
        if amp.shape != (int(np.prod(dims)),):
            raise ValidationError("amplitude vector length does not match dims")
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1) > EPS_NORM:
            raise ValidationError(f"state vector not normalized (norm {nrm:.12g})")

    def to_density(self):
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class BlochVector:
    """A real 3-vector inside the closed Bloch ball."""

    r: np.ndarray

    def __post_init__(self):
        r = _frozen_array(self.r, float)
        object.__setattr__(self, "r", r)
        if r.shape != (3,):
            raise ValidationError("Bloch vector must have exactly 3 components")
        if np.linalg.norm(r) > 1 + EPS_NORM:
            raise ValidationError("Bloch vector lies outside the unit ball")


def kron(a, b):
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats):
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def partial_trace_raw(data, dims, keep):
    """Partial trace of a raw square matrix over the parties not in ``keep``.

    ``keep`` is an iterable of 0-based party indices; the result is ordered
    by ascending kept index. No state validation is performed.
    """
    dims = list(dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices must lie in 0..{n - 1}")
    t = np.asarray(data).reshape(dims + dims)
    cur = list(dims)
    for p in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=p, axis2=p + len(cur))
        cur.pop(p)
    side = int(np.prod([dims[k] for k in keep]))
    return t.reshape(side, side)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state of ``rho`` on the parties in ``keep``."""
    reduced = partial_trace_raw(rho.data, rho.dims, keep)
    kept_dims = tuple(rho.dims[k] for k in sorted(set(int(k) for k in keep)))
    return DensityMatrix(kept_dims, reduced)


def apply_local(op, data, parties, dims):
    """Conjugate the row/column axes of the listed parties by ``op``.

    ``op`` acts on the joint space of ``parties`` (ascending order); returns
    op_full @ data @ op_full† without materializing the embedded operator.
    """
    dims = list(dims)
    n = len(dims)
    parties = sorted(set(int(p) for p in parties))
    t = np.asarray(data).reshape(dims + dims)
    block = [dims[p] for p in parties]
    op_t = np.asarray(op).reshape(block + block)
    k = len(parties)
    # rows
    t = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), parties))
    t = np.moveaxis(t, list(range(k)), parties)
    # columns
    col_axes = [n + p for p in parties]
    t = np.tensordot(t, op_t.conj(), axes=(col_axes, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(-k, 0)), col_axes)
    side = int(np.prod(dims))
    return t.reshape(side, side)


def bloch_to_qubit(r: BlochVector) -> DensityMatrix:
    """Qubit state (1 + r·σ)/2 for a Bloch vector inside the unit ball."""
    if not isinstance(r, BlochVector):
        r = BlochVector(np.asarray(r, dtype=float))
    m = np.eye(2, dtype=complex)
    for comp, pauli in zip(r.r, (_PAULI["x"], _PAULI["y"], _PAULI["z"])):
        m = m + comp * pauli
    return DensityMatrix((2,), m / 2)


def singular_values(m):
    """Full singular spectrum of ``m``, sorted descending."""
    return np.linalg.svd(np.asarray(m), compute_uv=False)


def trace_distance(a, b):
    """(1/2)·||a - b||_1 for Hermitian matrices."""
    eig = np.linalg.eigvalsh(hermitize(np.asarray(a) - np.asarray(b)))
    return float(np.abs(eig).sum() / 2)


def pauli(which):
    """One of the Pauli matrices 'x', 'y', 'z' (unnormalized)."""
    return _PAULI[which].copy()
