"""Small dense complex linear algebra.

Everything here works on square ``numpy`` arrays of modest size (the
largest problem in the package is 16 x 16).  Two Hermitian eigensolvers
are provided: a cyclic Jacobi solver written out explicitly and the
LAPACK routine exposed by ``numpy.linalg.eigh``.  They are interchangeable
behind :func:`hermitian_eig`; the test suite checks them against each
other and against characteristic-polynomial roots.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalue, NonHermitian, NonSquare

HERMITIAN_TOL = 1e-10
JACOBI_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 100
# eigenvalues in [-CLIP_TOL, 0) are float noise on a PSD matrix
CLIP_TOL = 1e-12


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigen-decomposition ``M = V diag(eigenvalues) V^dagger``.

    ``eigenvalues`` is sorted in descending order and the columns of
    ``eigenvectors`` are the matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _check_square(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    scale = max(1.0, np.linalg.norm(m))
    return np.linalg.norm(m - m.conj().T) <= tol * scale


def jacobi_eigh(m, threshold=JACOBI_THRESHOLD, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each 2 x 2 pivot block is first made real by a diagonal phase and then
    annihilated by a real plane rotation.  Sweeps stop once the
    off-diagonal Frobenius norm falls below ``threshold * ||m||_F``.

    Returns ``(eigenvalues, eigenvectors)`` in ascending order, like
    ``numpy.linalg.eigh``.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold * scale / n:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns p, q of U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    w = np.diag(a).real.copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def hermitian_eig(m, method="lapack", tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    m : array_like
        Square complex matrix with ``||m - m^dagger||_F <= tol * max(1, ||m||_F)``.
    method : {"lapack", "jacobi"}
        Backend.  ``"jacobi"`` uses :func:`jacobi_eigh`.

    Raises
    ------
    NonSquare, NonHermitian
    """
    m = _check_square(m)
    if not is_hermitian(m, tol):
        raise NonHermitian("matrix is not Hermitian within tolerance")
    h = 0.5 * (m + m.conj().T)
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = jacobi_eigh(h)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def kron(a, b):
    """Kronecker product with the first factor's index major."""
    a, b = _check_square(a), _check_square(b)
    return np.kron(a, b)


def clip_eigenvalues(w, tol=CLIP_TOL):
    """Zero out eigenvalues in ``[-tol, 0)``; leave everything else alone."""
    w = np.array(w, dtype=float)
    w[(w < 0) & (w >= -tol)] = 0.0
    return w


def matrix_log2(spec, support_tol=1e-10):
    """Base-2 logarithm restricted to the support of a PSD spectrum.

    Eigenvalues at or below ``support_tol`` contribute nothing, so the
    result is the logarithm on the support and zero on the kernel.

    Raises
    ------
    NegativeEigenvalue
        If some eigenvalue is below ``-support_tol``.
    """
    w = np.asarray(spec.eigenvalues, dtype=float)
    if np.any(w < -support_tol):
        raise NegativeEigenvalue(f"smallest eigenvalue {w.min():.3e} is negative")
    keep = w > support_tol
    v = spec.eigenvectors[:, keep]
    return (v * np.log2(w[keep])) @ v.conj().T


def entropy_of_eigenvalues(w):
    """Shannon entropy in bits of a probability vector, with 0 log 0 = 0."""
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def binary_entropy(x):
    """H2(x) in bits."""
    return entropy_of_eigenvalues([x, 1.0 - x])
