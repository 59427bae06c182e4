"""Independent brute-force oracles (compound matrices, PPT) and Monte Carlo
soundness audits over the zoo's random state families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import zoo
from .bounds import (
    EPS_CMP,
    bisep_bound_inf,
    bisep_bound_p1,
    dvh_fullsep_bound,
    dvh_interior_sum,
    fullsep_bound_inf,
    fullsep_bound_p1,
)
from .cmn import CmnParams, cmn
from .linalg import DensityMatrix, hermitize
from .normal_form import filter_to_fnf
from .tensor import Bipartition, build, interior, matricize, matricize_interior


@dataclass(frozen=True)
class AuditReport:
    family: str
    criterion: str
    trials: int
    violations: int
    worst_margin: float  # max of (value - bound)/bound over trials
    seed: int


def compound_matrix(m, h):
    """h-th compound matrix: all h×h minors, subsets ordered lexicographically
    (Cauchy–Binet convention)."""
    m = np.asarray(m)
    rows, cols = m.shape
    if not 1 <= h <= min(rows, cols):
        raise ValueError(f"h={h} out of range for a {rows}x{cols} matrix")
    row_sets = list(combinations(range(rows), h))
    col_sets = list(combinations(range(cols), h))
    out = np.empty((len(row_sets), len(col_sets)), dtype=m.dtype)
    for a, rs in enumerate(row_sets):
        block = m[list(rs), :]
        for b, cs in enumerate(col_sets):
            out[a, b] = np.linalg.det(block[:, list(cs)])
    return out


def schatten_norm(m, p):
    sigma = np.linalg.svd(np.asarray(m), compute_uv=False)
    if math.isinf(p):
        return float(sigma.max()) if sigma.size else 0.0
    return float((sigma**p).sum() ** (1 / p))


def elementary_symmetric_bruteforce(h, xs):
    """Subset-enumeration oracle for S_h; exponential, test use only."""
    xs = list(xs)
    return float(sum(np.prod([xs[i] for i in subset])
                     for subset in combinations(range(len(xs)), h)))


def ppt_check(rho: DensityMatrix, part: Bipartition, tol=1e-10) -> bool:
    """True iff the partial transpose over side_b is positive semidefinite."""
    dims = list(rho.dims)
    n = len(dims)
    t = rho.data.reshape(dims + dims)
    axes = list(range(2 * n))
    for p in part.side_b:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    side = rho.dim
    pt = np.transpose(t, axes).reshape(side, side)
    return bool(np.linalg.eigvalsh(hermitize(pt)).min() >= -tol)


_PART_A_BC = lambda dims: Bipartition.of((0,), len(dims))


def _fullsep_sfnf_sampler(dims):
    def sample(seed):
        return zoo.random_fully_separable_sfnf(dims, seed)
    return sample


def _bisep_filtered_sampler(dims, part, k_terms=24):
    def sample(seed):
        for attempt in range(8):
            rho = zoo.random_biseparable(dims, part, k_terms, seed + 10_000_019 * attempt)
            try:
                return filter_to_fnf(rho, groups=[part.side_a, part.side_b])
            except Exception:
                continue
        raise RuntimeError("could not produce a filtered bi-separable sample")
    return sample


def _criterion_value_and_bound(rho, criterion, part):
    dims = rho.dims
    tensor = build(rho)
    d_a = int(np.prod([dims[i] for i in part.side_a]))
    d_b = int(np.prod([dims[i] for i in part.side_b]))
    d2 = min(d_a, d_b) ** 2
    if criterion == "cmn-bisep-inf":
        return cmn(matricize(tensor, part), CmnParams(d2, math.inf)), bisep_bound_inf(d_a, d_b, d2)
    if criterion == "cmn-bisep-p1":
        return cmn(matricize(tensor, part), CmnParams(d2, 1.0)), bisep_bound_p1(d_a, d_b, d2)
    if criterion == "cmn-full-inf":
        return cmn(matricize(tensor, part), CmnParams(d2, math.inf)), fullsep_bound_inf(dims, d2)
    if criterion == "cmn-full-p1":
        return cmn(matricize(tensor, part), CmnParams(d2, 1.0)), fullsep_bound_p1(dims, d2, d2)
    if criterion == "dvh-full":
        w = matricize_interior(interior(tensor), part)
        return dvh_interior_sum(w), dvh_fullsep_bound(dims)
    raise ValueError(f"unknown criterion {criterion!r}")


FAMILIES = {
    "fully-separable-sfnf-222": ((2, 2, 2), "full"),
    "fully-separable-sfnf-223": ((2, 2, 3), "full"),
    "biseparable-filtered-222": ((2, 2, 2), "bisep"),
    "biseparable-filtered-223": ((2, 2, 3), "bisep"),
    "ghz-mixtures-222": ((2, 2, 2), "entangled"),
}


def _ghz_mixture_sampler(dims):
    ghz_rho = zoo.ghz(len(dims), 2).to_density().data

    def sample(seed):
        rng = np.random.default_rng(seed)
        p = rng.uniform(0.6, 1.0)
        noise = np.eye(ghz_rho.shape[0]) / ghz_rho.shape[0]
        return DensityMatrix(dims, p * ghz_rho + (1 - p) * noise)
    return sample


def separability_audit(family: str, criterion: str, trials: int, seed: int) -> AuditReport:
    """Sample ``trials`` states from the family, apply the required normal
    form preprocessing, and count bound violations of the criterion."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; available: {', '.join(sorted(FAMILIES))}")
    dims, kind = FAMILIES[family]
    part = _PART_A_BC(dims)
    if kind == "full":
        sampler = _fullsep_sfnf_sampler(dims)
    elif kind == "bisep":
        sampler = _bisep_filtered_sampler(dims, part)
    else:
        sampler = _ghz_mixture_sampler(dims)

    violations = 0
    worst = -math.inf
    for t in range(trials):
        rho = sampler(seed + t)
        value, bound = _criterion_value_and_bound(rho, criterion, part)
        margin = (value - bound) / max(abs(bound), 1e-300)
        worst = max(worst, margin)
        if margin > EPS_CMP:
            violations += 1
    return AuditReport(family, criterion, trials, violations, worst, seed)
