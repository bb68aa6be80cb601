"""Bipartite density matrices and the entropic quantities built on them.

Index convention: the composite basis index is ``k = a * d_b + b``, i.e.
subsystem A is the major index.  All entropies are in bits.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotHermitian, NotPSD, NotUnitary, TraceNotOne
from .linalg import entropy_of_eigenvalues, is_hermitian

STATE_TOL = 1e-10
SUPPORT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix on ``C^d_a (x) C^d_b``.

    Instances should come from :func:`validate` (or the generators in
    :mod:`qcorrelations.families`); the constructor itself does no checks.
    Single-system states use ``dims = (d, 1)``.
    """

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        self.matrix.flags.writeable = False

    @property
    def d_a(self):
        return self.dims[0]

    @property
    def d_b(self):
        return self.dims[1]

    @property
    def dim(self):
        return self.dims[0] * self.dims[1]

    def eigenvalues(self):
        """Spectrum in descending order."""
        return np.linalg.eigvalsh(self.matrix)[::-1]


def validate(m, dims, tol=STATE_TOL):
    """Check that ``m`` is a density matrix with bipartite ``dims``.

    Eigenvalues in ``[-tol, 0)`` are clipped to zero and a trace within
    ``tol`` of one is renormalized, so solver iterates carrying float noise
    are accepted.

    Raises
    ------
    DimMismatch, NotHermitian, NotPSD, TraceNotOne
    """
    m = np.array(m, dtype=complex)
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a < 1 or d_b < 1:
        raise DimMismatch(f"dimensions must be positive, got {dims}")
    if m.ndim != 2 or m.shape != (d_a * d_b, d_a * d_b):
        raise DimMismatch(f"matrix shape {m.shape} does not match dims ({d_a}, {d_b})")
    if not np.all(np.isfinite(m)):
        raise NotHermitian("matrix has non-finite entries")
    if not is_hermitian(m, tol):
        raise NotHermitian("matrix is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr!r}, expected 1")
    w, v = np.linalg.eigh(m)
    if w[0] < -tol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        m = (v * w) @ v.conj().T
        tr = w.sum()
    m = m / tr
    return DensityMatrix(m, (d_a, d_b))


def _as_state(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    raise TypeError("expected a DensityMatrix; build one with validate()")


def _split(rho):
    d_a, d_b = rho.dims
    return rho.matrix.reshape(d_a, d_b, d_a, d_b)


def partial_trace(rho, subsystem="B"):
    """Trace out ``subsystem`` ("A" or "B") and return the other marginal.

    ``partial_trace(rho, "B")`` is rho_A; the result has dims ``(d, 1)``.
    """
    rho = _as_state(rho)
    t = _split(rho)
    if subsystem == "B":
        red = np.einsum("ajbj->ab", t)
    elif subsystem == "A":
        red = np.einsum("iaib->ab", t)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    red = 0.5 * (red + red.conj().T)
    return DensityMatrix(red, (red.shape[0], 1))


def marginals(rho):
    """``(rho_A, rho_B)``."""
    return partial_trace(rho, "B"), partial_trace(rho, "A")


def partial_transpose(rho, subsystem="B"):
    """Transpose the indices of one tensor factor; returns a plain array."""
    rho = _as_state(rho)
    t = _split(rho)
    if subsystem == "B":
        pt = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        pt = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return pt.reshape(rho.dim, rho.dim).copy()


def product_state(rho_a, rho_b):
    """``rho_a (x) rho_b`` for two single-system states."""
    m = np.kron(rho_a.matrix, rho_b.matrix)
    return DensityMatrix(m, (rho_a.dim, rho_b.dim))


def von_neumann_entropy(rho):
    rho = _as_state(rho)
    w = np.linalg.eigvalsh(rho.matrix)
    return entropy_of_eigenvalues(np.clip(w, 0.0, None))


def relative_entropy(rho, sigma, support_tol=SUPPORT_TOL):
    """S(rho || sigma) in bits.

    Returns ``math.inf`` when rho puts more than ``support_tol`` weight
    outside the support of sigma.
    """
    rho, sigma = _as_state(rho), _as_state(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatch(f"states have dimensions {rho.dim} and {sigma.dim}")
    w, v = np.linalg.eigh(sigma.matrix)
    # diagonal of rho in sigma's eigenbasis
    r = np.einsum("ij,ik,kj->j", v.conj(), rho.matrix, v).real
    keep = w > support_tol
    if r[~keep].sum() > support_tol:
        return math.inf
    cross = -float(np.sum(r[keep] * np.log2(w[keep])))
    return max(0.0, cross - von_neumann_entropy(rho))


def mutual_information(rho):
    """S(rho_A) + S(rho_B) - S(rho_AB)."""
    rho = _as_state(rho)
    rho_a, rho_b = marginals(rho)
    value = von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho)
    return max(0.0, value)


def mutual_information_relative(rho):
    """Mutual information as S(rho || rho_A (x) rho_B)."""
    rho = _as_state(rho)
    rho_a, rho_b = marginals(rho)
    return relative_entropy(rho, product_state(rho_a, rho_b))


def swap_subsystems(rho):
    """Exchange the roles of A and B."""
    rho = _as_state(rho)
    d_a, d_b = rho.dims
    m = _split(rho).transpose(1, 0, 3, 2).reshape(rho.dim, rho.dim)
    return DensityMatrix(m.copy(), (d_b, d_a))


def _check_unitary(u, d, name):
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise DimMismatch(f"{name} has shape {u.shape}, expected ({d}, {d})")
    if np.linalg.norm(u.conj().T @ u - np.eye(d)) > 1e-10:
        raise NotUnitary(f"{name} is not unitary")
    return u


def apply_local_unitary(rho, u_a, u_b):
    """``(U_A (x) U_B) rho (U_A (x) U_B)^dagger``."""
    rho = _as_state(rho)
    u = np.kron(_check_unitary(u_a, rho.d_a, "u_a"), _check_unitary(u_b, rho.d_b, "u_b"))
    m = u @ rho.matrix @ u.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T), rho.dims)


def state_to_dict(rho):
    """JSON-ready mapping ``{"d_a", "d_b", "re", "im"}``."""
    rho = _as_state(rho)
    return {
        "d_a": rho.d_a,
        "d_b": rho.d_b,
        "re": rho.matrix.real.tolist(),
        "im": rho.matrix.imag.tolist(),
    }


def state_from_dict(data):
    """Inverse of :func:`state_to_dict`; the result is validated."""
    try:
        d_a, d_b = int(data["d_a"]), int(data["d_b"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimMismatch(f"malformed state record: {exc}") from exc
    if re.shape != im.shape:
        raise DimMismatch(f"'re' has shape {re.shape} but 'im' has shape {im.shape}")
    return validate(re + 1j * im, (d_a, d_b))


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))


def save_state(rho, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(rho), fh)
        fh.write("\n")


def tensor_product(rho1, rho2):
    """``rho1 (x) rho2`` as one bipartite state across the (A1 A2) | (B1 B2) cut."""
    rho1, rho2 = _as_state(rho1), _as_state(rho2)
    (a1, b1), (a2, b2) = rho1.dims, rho2.dims
    t = np.kron(rho1.matrix, rho2.matrix).reshape(a1, b1, a2, b2, a1, b1, a2, b2)
    d = rho1.dim * rho2.dim
    m = t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(d, d)
    return DensityMatrix(m.copy(), (a1 * a2, b1 * b2))
