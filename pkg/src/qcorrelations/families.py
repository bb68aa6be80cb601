"""Named states and seeded random ensembles.

Randomness comes from numpy's PCG64 bit generator (a documented 64-bit
permuted congruential generator) seeded with a 64-bit unsigned integer.
Normal deviates are produced from its uniforms with the Box-Muller
transform, so every generator here is a pure function of its arguments.
"""

import numpy as np

from .errors import GammaOutOfRange, RankOutOfRange
from .states import DensityMatrix

BELL_VECTOR = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def make_rng(seed):
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def complex_gaussian(rng, shape):
    """Standard complex normal samples (real and imaginary parts N(0, 1)).

    One Box-Muller pair yields both parts: ``sqrt(-2 ln u1) * exp(2 pi i u2)``.
    """
    n = int(np.prod(shape))
    u1 = 1.0 - rng.random(n)  # (0, 1]
    u2 = rng.random(n)
    z = np.sqrt(-2.0 * np.log(u1)) * np.exp(2j * np.pi * u2)
    return z.reshape(shape)


def _pure(vec, dims):
    m = np.outer(vec, vec.conj())
    return DensityMatrix(m, tuple(dims))


def werner_state(gamma):
    """``(1 - gamma)/4 * I_4 + gamma |psi+><psi+|`` on two qubits."""
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise GammaOutOfRange(f"gamma must lie in [0, 1], got {gamma}")
    m = (1.0 - gamma) / 4.0 * np.eye(4, dtype=complex) + gamma * np.outer(BELL_VECTOR, BELL_VECTOR)
    return DensityMatrix(m, (2, 2))


def bell_state():
    return _pure(BELL_VECTOR, (2, 2))


def classically_correlated(p=None):
    """Perfectly correlated classical state ``sum_i p_i |ii><ii|``.

    Parameters
    ----------
    p : array_like, optional
        Probabilities of the ``d`` outcomes; default is a fair bit.
    """
    p = np.array([0.5, 0.5]) if p is None else np.asarray(p, dtype=float)
    d = len(p)
    m = np.zeros((d * d, d * d), dtype=complex)
    for i, w in enumerate(p):
        m[i * d + i, i * d + i] = w
    return DensityMatrix(m, (d, d))


def maximally_mixed(dims):
    d = dims[0] * dims[1]
    return DensityMatrix(np.eye(d, dtype=complex) / d, tuple(dims))


def random_unit_vector(d, rng):
    z = complex_gaussian(rng, (d,))
    return z / np.linalg.norm(z)


def random_density(dims, rank, seed):
    """``G G^dagger / Tr(G G^dagger)`` with ``G`` a ``d x rank`` Ginibre matrix."""
    d = dims[0] * dims[1]
    if not 1 <= rank <= d:
        raise RankOutOfRange(f"rank must be in [1, {d}], got {rank}")
    g = complex_gaussian(make_rng(seed), (d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real, tuple(dims))


def random_pure_product(dims, seed):
    rng = make_rng(seed)
    a = random_unit_vector(dims[0], rng)
    b = random_unit_vector(dims[1], rng)
    return _pure(np.kron(a, b), dims)


def haar_unitary(d, rng):
    """Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases removed."""
    q, r = np.linalg.qr(complex_gaussian(rng, (d, d)))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_local_unitary(dims, seed):
    """Independent Haar unitaries ``(U_A, U_B)`` of sizes ``d_a`` and ``d_b``."""
    rng = make_rng(seed)
    return haar_unitary(dims[0], rng), haar_unitary(dims[1], rng)


def random_ppt_states(count, seed, dims=(2, 2), rank=None):
    """The first ``count`` PPT states drawn from :func:`random_density`.

    Seeds ``seed, seed + 1, ...`` are tried in order and non-PPT draws are
    skipped.  For 2 x 2 and 2 x 3 these are exactly separable states.
    """
    from .entanglement import is_ppt

    rank = dims[0] * dims[1] if rank is None else rank
    found = []
    s = seed
    while len(found) < count:
        rho = random_density(dims, rank, s)
        if is_ppt(rho):
            found.append(rho)
        s += 1
    return found
