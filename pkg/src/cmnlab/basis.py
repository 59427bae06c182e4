"""Orthonormal Hermitian operator bases (identity-first) and expectation
tensors of multipartite states."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .linalg import DensityMatrix

IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class OperatorBasis:
    """d² Hermitian d×d operators, orthonormal under the Hilbert–Schmidt
    inner product, with ops[0] = 1/√d and all later elements traceless."""

    dim: int
    ops: np.ndarray = field(repr=False)  # shape (d², d, d)

    def gram(self):
        flat = self.ops.reshape(self.dim**2, -1)
        return (flat @ flat.conj().T).real


def normalized_generalized_gell_mann(d: int) -> OperatorBasis:
    """Generalized Gell-Mann basis of dimension d, unit Hilbert–Schmidt norm.

    Order: identity/√d, then symmetric off-diagonal generators (j<k
    lexicographic), antisymmetric ones, then the diagonal generators.
    """
    if d < 2:
        raise ValueError("party dimension must be >= 2")
    ops = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        ops.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j / np.sqrt(2)
        m[k, j] = 1j / np.sqrt(2)
        ops.append(m)
    for l in range(1, d):
        diag = np.array([1.0] * l + [-l] + [0.0] * (d - l - 1))
        m = np.diag(diag).astype(complex) / np.sqrt(l * (l + 1))
        ops.append(m)
    arr = np.array(ops)
    arr.setflags(write=False)
    return OperatorBasis(d, arr)


@lru_cache(maxsize=None)
def canonical_bases(dims: tuple):
    """One canonical basis per party, cached by the dims profile."""
    return tuple(normalized_generalized_gell_mann(d) for d in dims)


def basis_expectations(rho: DensityMatrix, bases) -> np.ndarray:
    """Real N-way array of expectations ⟨B¹_{i₁} ⊗ … ⊗ Bᴺ_{i_N}⟩.

    Entry (i₁, …, i_N) is trace(ρ · ⊗ₖ bases[k].ops[iₖ]); the imaginary
    residue of every entry is checked against IMAG_RESIDUE_TOL before being
    discarded.
    """
    dims = rho.dims
    if len(bases) != len(dims):
        raise ValueError("need exactly one operator basis per party")
    for b, d in zip(bases, dims):
        if b.dim != d:
            raise ValueError(f"basis dimension {b.dim} does not match party dimension {d}")
    n = len(dims)
    # rho as a 2N-axis tensor; contract each party's (row, col) pair with its
    # operator stack, accumulating one basis-index axis per party.
    t = rho.data.reshape(tuple(dims) * 2)
    for k in range(n):
        # after k contractions the leading k axes are basis indices; party
        # k's row axis sits at position k and its column axis at position n.
        # tr(ρ·O) pairs O's first matrix index with the column axis.
        t = np.tensordot(bases[k].ops, t, axes=([1, 2], [n, k]))
        t = np.moveaxis(t, 0, k)
    residue = np.abs(t.imag).max()
    if residue > IMAG_RESIDUE_TOL:
        raise ValueError(f"imaginary residue {residue:.3e} exceeds tolerance")
    return np.ascontiguousarray(t.real)
