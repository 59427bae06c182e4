"""CMN-based global quantum discord: projective measurement channels,
angle parametrization of product measurements, and the maximization over
measurement choices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cmn import CmnParams, cmn_power
from .linalg import DensityMatrix, apply_local, hermitize
from .tensor import Bipartition, build, matricize

PROJECTOR_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementFamily:
    """Per-party lists of rank-1 orthogonal projectors summing to 1."""

    dims: tuple
    projectors: tuple  # one ndarray of shape (d, d, d) per party

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        projs = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        object.__setattr__(self, "projectors", projs)
        for d, stack in zip(dims, projs):
            if stack.shape != (d, d, d):
                raise ValueError("need d rank-1 projectors of size d×d per party")
            total = stack.sum(axis=0)
            if np.abs(total - np.eye(d)).max() > PROJECTOR_TOL:
                raise ValueError("projectors do not sum to the identity")
            for p in stack:
                if np.abs(p - p.conj().T).max() > PROJECTOR_TOL:
                    raise ValueError("projector is not Hermitian")
                if np.abs(p @ p - p).max() > PROJECTOR_TOL:
                    raise ValueError("projector is not idempotent")


def unitary_from_angles(d, angles):
    """Unitary built from d(d-1)/2 Givens rotations, two angles each.

    For d = 2 this is the usual (θ, φ) Bloch parametrization of a
    measurement basis.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.size != d * (d - 1):
        raise ValueError(f"dimension {d} needs {d * (d - 1)} angles")
    u = np.eye(d, dtype=complex)
    idx = 0
    for j in range(d):
        for k in range(j + 1, d):
            theta, phi = angles[idx], angles[idx + 1]
            idx += 2
            g = np.eye(d, dtype=complex)
            c, s = math.cos(theta / 2), math.sin(theta / 2)
            g[j, j] = c
            g[k, k] = c
            g[j, k] = -s * np.exp(-1j * phi)
            g[k, j] = s * np.exp(1j * phi)
            u = g @ u
    return u


def n_angles(dims):
    return sum(d * (d - 1) for d in dims)


def measurement_from_angles(dims, angles) -> MeasurementFamily:
    """Product measurement whose per-party bases are the columns of
    angle-parametrized unitaries."""
    dims = tuple(int(d) for d in dims)
    angles = np.asarray(angles, dtype=float)
    stacks = []
    at = 0
    for d in dims:
        take = d * (d - 1)
        u = unitary_from_angles(d, angles[at : at + take])
        at += take
        stacks.append(np.array([np.outer(u[:, i], u[:, i].conj()) for i in range(d)]))
    if at != angles.size:
        raise ValueError("angle vector length does not match dims")
    return MeasurementFamily(dims, tuple(stacks))


def computational_measurement(dims) -> MeasurementFamily:
    return measurement_from_angles(dims, np.zeros(n_angles(dims)))


def measure_state(rho: DensityMatrix, family: MeasurementFamily, parties=None) -> DensityMatrix:
    """Dephasing channel Π[ρ] = Σ (⊗P) ρ (⊗P) over the selected parties'
    projectors (all parties by default). Trace is preserved exactly."""
    if family.dims != rho.dims:
        raise ValueError("measurement dims do not match the state")
    if parties is None:
        parties = range(len(rho.dims))
    data = rho.data
    for p in sorted(set(int(i) for i in parties)):
        if not 0 <= p < len(rho.dims):
            raise ValueError(f"party index {p} out of range")
        acc = np.zeros_like(data)
        for proj in family.projectors[p]:
            acc = acc + apply_local(proj, data, (p,), rho.dims)
        data = acc
    return DensityMatrix(rho.dims, hermitize(data))


@dataclass(frozen=True)
class OptimizerCfg:
    """Random-restart coordinate search over measurement angles."""

    restarts: int = 32
    seed: int = 0
    init_step: float = 0.3
    min_step: float = 1e-5
    opt_tol: float = 1e-6


@dataclass(frozen=True)
class DiscordResult:
    value: float
    best_measurement: MeasurementFamily
    evaluations: int
    converged: bool


def _coordinate_search(objective, x0, cfg):
    """Maximize by cyclic coordinate moves with a shrinking step."""
    x = np.array(x0, dtype=float)
    best = objective(x)
    evals = 1
    step = cfg.init_step
    while step >= cfg.min_step:
        improved = False
        for i in range(x.size):
            for delta in (step, -step):
                trial = x.copy()
                trial[i] += delta
                val = objective(trial)
                evals += 1
                if val > best:
                    best, x = val, trial
                    improved = True
                    break
        if not improved:
            step /= 2
    return best, x, evals


def _maximize(objective, n_params, cfg: OptimizerCfg):
    rng = np.random.default_rng(cfg.seed)
    results = []
    evals = 0
    for r in range(cfg.restarts):
        x0 = rng.uniform(0, 2 * math.pi, size=n_params) if r else np.zeros(n_params)
        val, x, n = _coordinate_search(objective, x0, cfg)
        evals += n
        results.append((val, r, x))
    results.sort(key=lambda t: (-t[0], t[1]))
    best_val, _, best_x = results[0]
    converged = len(results) > 1 and results[0][0] - results[1][0] <= cfg.opt_tol
    return best_val, best_x, evals, converged


def _discord(rho, part, params, opt, measured_parties):
    m0 = matricize(build(rho), part)
    base = cmn_power_from_matrix(m0, params)
    dims = rho.dims
    measured = sorted(set(int(p) for p in measured_parties))
    measured_dims = tuple(dims[p] for p in measured)

    def family_of(angles):
        # unmeasured parties get the computational basis; only measured
        # parties' angles are free parameters
        stacks = list(computational_measurement(dims).projectors)
        sub = measurement_from_angles(measured_dims, angles)
        for k, p in enumerate(measured):
            stacks[p] = sub.projectors[k]
        return MeasurementFamily(dims, tuple(stacks))

    def objective(angles):
        fam = family_of(angles)
        after = measure_state(rho, fam, measured)
        return cmn_power_from_matrix(matricize(build(after), part), params)

    best_val, best_x, evals, converged = _maximize(objective, n_angles(measured_dims), opt)
    return DiscordResult(base - best_val, family_of(best_x), evals, converged)


def cmn_power_from_matrix(m, params: CmnParams) -> float:
    return cmn_power(m, params)


def bipartite_discord_cmn(rho: DensityMatrix, part: Bipartition, side: str,
                          params: CmnParams, opt: OptimizerCfg = OptimizerCfg()) -> DiscordResult:
    """Discord with respect to one side of a bipartition: the CMN drop under
    the best projective measurement on that side's parties."""
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    parties = part.side_a if side == "a" else part.side_b
    return _discord(rho, part, params, opt, parties)


def global_discord_cmn(rho: DensityMatrix, part: Bipartition,
                       params: CmnParams, opt: OptimizerCfg = OptimizerCfg()) -> DiscordResult:
    """Global discord: the CMN drop under the best product measurement on
    all parties, evaluated on the matricization given by ``part``."""
    return _discord(rho, part, params, opt, range(len(rho.dims)))


def correlation_space_map(family: MeasurementFamily, party: int):
    """Matrix of the measurement channel acting on one party's correlation
    coordinates; its largest singular value is 1 for projective families."""
    from .basis import normalized_generalized_gell_mann

    d = family.dims[party]
    basis = normalized_generalized_gell_mann(d)
    stack = family.projectors[party]
    out = np.zeros((d * d, d * d))
    for i in range(d * d):
        for j in range(d * d):
            acc = 0.0
            for p in stack:
                acc += np.trace(basis.ops[i] @ p @ basis.ops[j] @ p).real
            out[i, j] = acc
    return out
