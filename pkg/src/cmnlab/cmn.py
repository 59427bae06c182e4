"""The correlation minor norm M_{h,p}: symmetric functions of h-fold
products of singular values of a matricized correlation tensor."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import singular_values

# Singular values below this fraction of the largest are clamped to zero
# before forming products, so near-rank-deficient h = d² cases reproduce.
SV_CLAMP = 1e-12


@dataclass(frozen=True)
class CmnParams:
    """Minor order h and Schatten exponent p (1, math.inf, or finite > 0)."""

    h: int
    p: float

    def __post_init__(self):
        object.__setattr__(self, "h", int(self.h))
        object.__setattr__(self, "p", float(self.p))
        if self.h < 1:
            raise ValueError("minor order h must be >= 1")
        if not self.p > 0:
            raise ValueError("p must be positive (or infinite)")

    def label(self):
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"h={self.h},p={p}"


def elementary_symmetric(h: int, xs) -> float:
    """h-th elementary symmetric polynomial S_h of the given values.

    Computed by the stable recursive product expansion (coefficient sweep),
    never by subset enumeration.
    """
    xs = np.asarray(xs, dtype=float)
    if not 1 <= h <= xs.size:
        raise ValueError(f"h={h} out of range for {xs.size} values")
    e = np.zeros(h + 1)
    e[0] = 1.0
    for x in xs:
        # descending sweep so each value enters every coefficient once
        for j in range(h, 0, -1):
            e[j] += x * e[j - 1]
    return float(e[h])


def clamp_singular_values(sigma):
    """Zero out singular values below SV_CLAMP times the largest."""
    sigma = np.asarray(sigma, dtype=float).copy()
    if sigma.size and sigma.max() > 0:
        sigma[sigma < SV_CLAMP * sigma.max()] = 0.0
    return sigma


def cmn_from_singular_values(sigma, params: CmnParams) -> float:
    """CMN from a precomputed singular spectrum (descending or not)."""
    sigma = clamp_singular_values(sigma)
    sigma = np.sort(sigma)[::-1]
    if params.h > sigma.size:
        raise ValueError(
            f"h={params.h} exceeds the {sigma.size}-value singular spectrum"
        )
    if math.isinf(params.p):
        return float(np.prod(sigma[: params.h]))
    if params.p == 1.0:
        return elementary_symmetric(params.h, sigma)
    return float(elementary_symmetric(params.h, sigma**params.p) ** (1 / params.p))


def cmn(m, params: CmnParams) -> float:
    """M_{h,p} of a matricized correlation tensor.

    p = ∞ gives the product of the h largest singular values; p = 1 the
    h-th elementary symmetric polynomial of the spectrum; finite p the
    corresponding power-sum combination (S_h(σᵖ))^{1/p}.
    """
    return cmn_from_singular_values(singular_values(m), params)


def cmn_power(m, params: CmnParams) -> float:
    """[M_{h,p}]^p as used by the discord measure; for p = ∞ this is the
    plain product of the h largest singular values."""
    sigma = clamp_singular_values(singular_values(m))
    sigma = np.sort(sigma)[::-1]
    if math.isinf(params.p):
        return float(np.prod(sigma[: params.h]))
    return float(elementary_symmetric(params.h, sigma**params.p))


def signed_det(m) -> float:
    """Signed determinant of a square matricization, exposed for
    diagnostics; the CMN itself only ever uses |det| via singular values."""
    m = np.asarray(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("signed determinant requires a square matrix")
    return float(np.linalg.det(m))
