"""Classical-correlation measures of a bipartite state.

* ``psi``: mutual information minus relative entropy of entanglement.
* ``c1``: mutual information of the closest separable state.
* ``c2``: relative entropy from the closest separable state to the
  product of the original marginals.
* ``chi_projective`` / ``chi_povm_search``: information about B gained
  by measuring A (projective optimum on a qubit, and a heuristic POVM
  search).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .entanglement import ree as _ree
from .errors import DimMismatch, IncompleteMeasurement, UnsupportedDimension
from .families import complex_gaussian, make_rng
from .linalg import entropy_of_eigenvalues
from .states import (
    DensityMatrix,
    marginals,
    mutual_information,
    partial_trace,
    product_state,
    relative_entropy,
    von_neumann_entropy,
)

log = logging.getLogger(__name__)

COMPLETENESS_TOL = 1e-10
MIN_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Measurement operators ``A_i`` on subsystem A with sum A_i^dagger A_i = I."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.operators)
        object.__setattr__(self, "operators", ops)
        if not ops:
            raise IncompleteMeasurement("a measurement needs at least one operator")
        d = ops[0].shape[0]
        total = sum(a.conj().T @ a for a in ops)
        if any(a.shape != (d, d) for a in ops) or np.linalg.norm(total - np.eye(d)) > COMPLETENESS_TOL:
            raise IncompleteMeasurement("sum of A_i^dagger A_i differs from the identity")

    @property
    def dim(self):
        return self.operators[0].shape[0]

    @classmethod
    def from_effects(cls, effects):
        """Build operators ``A_i = sqrt(E_i)`` from POVM effects ``E_i``."""
        ops = []
        for e in effects:
            w, v = np.linalg.eigh(0.5 * (e + np.conj(e).T))
            ops.append((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)
        return cls(tuple(ops))

    @classmethod
    def projective(cls, theta, phi):
        """Qubit projector pair along the Bloch direction ``(theta, phi)``."""
        n = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
        p = np.outer(n, n.conj())
        return cls((p, np.eye(2) - p))


def apply_measurement(rho, m):
    """Outcome probabilities and conditional states of B.

    Returns ``(probs, post_states)``; ``post_states[i]`` is ``None`` for
    outcomes with probability below 1e-12.
    """
    if m.dim != rho.d_a:
        raise DimMismatch(f"measurement acts on dimension {m.dim}, subsystem A has {rho.d_a}")
    d_a, d_b = rho.dims
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    probs, posts = [], []
    for a in m.operators:
        e = a.conj().T @ a
        # Tr_A[(A (x) I) rho (A (x) I)^dagger] = Tr_A[(E (x) I) rho]
        unnorm = np.einsum("ca,ajcl->jl", e, t)
        p = float(np.trace(unnorm).real)
        probs.append(max(p, 0.0))
        if p < MIN_PROB:
            posts.append(None)
        else:
            post = unnorm / p
            posts.append(DensityMatrix(0.5 * (post + post.conj().T), (d_b, 1)))
    return np.array(probs), posts


def holevo_term(rho, m):
    """``S(rho_B) - sum_i p_i S(rho_B^i)`` for one fixed measurement on A."""
    probs, posts = apply_measurement(rho, m)
    s_b = von_neumann_entropy(partial_trace(rho, "A"))
    avg = sum(p * von_neumann_entropy(post) for p, post in zip(probs, posts) if post is not None)
    return max(0.0, s_b - avg)


def _batched_entropy(mats):
    w = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, -w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
    return terms.sum(axis=-1)


def _projective_holevo(rho, theta, phi):
    """Holevo term of the qubit projector pair, vectorized over angle arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    d_b = rho.d_b
    t = rho.matrix.reshape(2, d_b, 2, d_b)
    n = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)
    unnorm = np.einsum("...a,ajcl,...c->...jl", n.conj(), t, n)
    rho_b = np.einsum("ajal->jl", t)
    other = rho_b - unnorm
    p = np.trace(unnorm, axis1=-2, axis2=-1).real
    q = 1.0 - p
    safe_p = np.where(p > MIN_PROB, p, 1.0)
    safe_q = np.where(q > MIN_PROB, q, 1.0)
    s1 = np.where(p > MIN_PROB, _batched_entropy(unnorm / safe_p[..., None, None]), 0.0)
    s2 = np.where(q > MIN_PROB, _batched_entropy(other / safe_q[..., None, None]), 0.0)
    s_b = entropy_of_eigenvalues(np.linalg.eigvalsh(rho_b))
    return s_b - p * s1 - q * s2


def _pattern_search(fun, x0, step, min_step):
    """Compass search maximizing ``fun`` from ``x0``."""
    x = np.array(x0, dtype=float)
    fx = fun(x)
    dirs = np.vstack([np.eye(len(x)), -np.eye(len(x))])
    while step >= min_step:
        trial = x + step * dirs
        vals = np.array([fun(y) for y in trial])
        k = int(np.argmax(vals))
        if vals[k] > fx:
            x, fx = trial[k], vals[k]
        else:
            step *= 0.5
    return x, fx


def chi_projective(rho, grid_step=math.radians(1.0), refine_tol=1e-10, return_angles=False):
    """Largest Holevo term over rank-1 projective measurements on a qubit A.

    The projector pair for direction ``(theta, phi)`` equals the pair for
    ``(pi - theta, phi + pi)``, so the coarse grid covers only
    ``theta in [0, pi/2]`` with full ``phi``.  The best few grid points
    are polished by compass search until the step is below
    ``refine_tol`` radians.
    """
    if rho.d_a != 2:
        raise UnsupportedDimension(f"projective optimization needs d_a = 2, got {rho.d_a}")
    thetas = np.arange(0.0, math.pi / 2 + 1e-12, grid_step)
    phis = np.arange(0.0, 2 * math.pi - 1e-12, grid_step)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    vals = _projective_holevo(rho, tt, pp).ravel()
    order = np.argsort(-vals, kind="stable")[:3]

    def fun(x):
        return float(_projective_holevo(rho, x[0], x[1]))

    best_x, best = None, -math.inf
    for k in order:
        x0 = (tt.ravel()[k], pp.ravel()[k])
        x, fx = _pattern_search(fun, x0, grid_step, refine_tol)
        if fx > best:
            best_x, best = x, fx
    best = max(0.0, best)
    if return_angles:
        return best, (float(best_x[0]), float(best_x[1]))
    return best


def _povm_effects(x, outcomes):
    """Map a real vector to qubit POVM effects summing to the identity."""
    c = (x[: 4 * outcomes] + 1j * x[4 * outcomes:]).reshape(outcomes, 2, 2)
    raw = np.einsum("kji,kjl->kil", c.conj(), c)
    total = raw.sum(axis=0)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return inv_sqrt @ raw @ inv_sqrt


def _povm_holevo(rho, effects):
    d_b = rho.d_b
    t = rho.matrix.reshape(2, d_b, 2, d_b)
    unnorm = np.einsum("...ca,ajcl->...jl", effects, t)
    p = np.trace(unnorm, axis1=-2, axis2=-1).real
    safe = np.where(p > MIN_PROB, p, 1.0)
    s = np.where(p > MIN_PROB, _batched_entropy(unnorm / safe[..., None, None]), 0.0)
    s_b = entropy_of_eigenvalues(np.linalg.eigvalsh(np.einsum("ajal->jl", t)))
    return s_b - np.sum(p * s, axis=-1)


def chi_povm_search(rho, outcomes=4, trials=200, seed=0, polish=4):
    """Best Holevo term found by a random-restart search over qubit POVMs.

    Each trial draws effects ``C_i^dagger C_i`` from Gaussian ``C_i`` and
    closes them into a POVM with ``S^{-1/2} (.) S^{-1/2}``, where ``S`` is
    their sum.  The ``polish`` best trials are then improved locally with
    L-BFGS.  This is a heuristic: the value is the best found, not a
    certified supremum, and it may fall short of :func:`chi_projective`.

    Returns ``(value, MeasurementSet)``.
    """
    if rho.d_a != 2:
        raise UnsupportedDimension(f"POVM search needs d_a = 2, got {rho.d_a}")
    if not 2 <= outcomes <= 4:
        raise ValueError("outcomes must be between 2 and 4")
    rng = make_rng(seed)
    starts = []
    for _ in range(trials):
        z = complex_gaussian(rng, (4 * outcomes,))
        starts.append(np.concatenate([z.real, z.imag]))
    starts = np.array(starts)
    effects = np.array([_povm_effects(x, outcomes) for x in starts])
    vals = _povm_holevo(rho, effects)
    order = np.argsort(-vals, kind="stable")[:polish]

    def neg(x):
        return -float(_povm_holevo(rho, _povm_effects(x, outcomes)))

    best_x, best = starts[order[0]], vals[order[0]]
    for k in order:
        res = minimize(neg, starts[k], method="L-BFGS-B", options={"maxiter": 500, "ftol": 1e-14})
        if -res.fun > best:
            best_x, best = res.x, -res.fun
    m = MeasurementSet.from_effects(_povm_effects(best_x, outcomes))
    return max(0.0, float(best)), m


@dataclass
class SolverConfig:
    """Knobs shared by every measure that needs the nearest separable state."""

    tol: float = 1e-6
    max_iters: int = 5000
    seed: int = 0
    restarts: int = 20
    grid_step: float = math.radians(1.0)
    refine_tol: float = 1e-10
    povm_trials: int = 0
    povm_outcomes: int = 4

    def ree_kwargs(self):
        return {"tol": self.tol, "max_iters": self.max_iters, "seed": self.seed, "restarts": self.restarts}


def _solve(rho, config, strict=True):
    config = config or SolverConfig()
    return _ree(rho, strict=strict, **config.ree_kwargs())


def _psi_from(mutual, result, tol):
    raw = mutual - result.value
    if raw < 0.0:
        if raw < -tol:
            log.warning("psi = %.3e is below -tol; solver value may be inaccurate", raw)
        else:
            log.debug("clipping psi = %.3e to 0", raw)
        return 0.0, raw
    return raw, raw


def psi(rho, config=None):
    """Mutual information minus relative entropy of entanglement, in bits."""
    config = config or SolverConfig()
    return _psi_from(mutual_information(rho), _solve(rho, config), config.tol)[0]


def _c1_from(sigma):
    return mutual_information(sigma)


def _c2_from(rho, sigma):
    rho_a, rho_b = marginals(rho)
    return relative_entropy(sigma, product_state(rho_a, rho_b))


def c1(rho, config=None):
    """S(sigma* || sigma*_A (x) sigma*_B) for the closest separable state sigma*."""
    return _c1_from(_solve(rho, config).sigma_star)


def c2(rho, config=None):
    """S(sigma* || rho_A (x) rho_B) for the closest separable state sigma*."""
    return _c2_from(rho, _solve(rho, config).sigma_star)


@dataclass
class MeasureReport:
    mutual_info: float
    ree_value: float
    psi: float
    c1: float
    c2: float
    chi_projective: float | None
    chi_povm: float | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.diagnostics.get("converged", True)

    def as_dict(self):
        out = {
            "mutual_info": self.mutual_info,
            "ree": self.ree_value,
            "psi": self.psi,
            "c1": self.c1,
            "c2": self.c2,
            "chi_projective": self.chi_projective,
            "chi_povm": self.chi_povm,
        }
        out["diagnostics"] = dict(self.diagnostics)
        return out


def measure_all(rho, config=None):
    """Every measure for ``rho`` from a single nearest-separable-state solve.

    A solver that runs out of iterations does not raise here; the report's
    ``diagnostics["converged"]`` is False instead and the values are those
    of the best iterate.
    """
    config = config or SolverConfig()
    result = _solve(rho, config, strict=False)
    mutual = mutual_information(rho)
    psi_value, psi_raw = _psi_from(mutual, result, config.tol)
    diagnostics = {
        "ree_gap": result.gap,
        "ree_iterations": result.iterations,
        "converged": result.converged,
        "certified": result.certified,
        "psi_raw": psi_raw,
    }
    chi = None
    chi_povm = None
    if rho.d_a == 2:
        chi, angles = chi_projective(rho, config.grid_step, config.refine_tol, return_angles=True)
        diagnostics["chi_angles"] = angles
        if config.povm_trials > 0:
            chi_povm, _ = chi_povm_search(rho, config.povm_outcomes, config.povm_trials, config.seed)
    else:
        diagnostics["chi_projective"] = "unsupported for d_a != 2"
    return MeasureReport(
        mutual_info=mutual,
        ree_value=result.value,
        psi=psi_value,
        c1=_c1_from(result.sigma_star),
        c2=_c2_from(rho, result.sigma_star),
        chi_projective=chi,
        chi_povm=chi_povm,
        diagnostics=diagnostics,
    )
