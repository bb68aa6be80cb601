"""Entanglement side: PPT test, negativity and the relative entropy of entanglement.

The relative entropy of entanglement ``min_sigma S(rho || sigma)`` over
separable ``sigma`` is solved with an away-step Frank-Wolfe method on the
convex hull of pure product states.  The linear minimization oracle over
that hull is a nonconvex problem; it is handled by alternating top
eigenvector iterations from several random starts (:func:`product_lmo`).
The Frank-Wolfe duality gap is returned as a certificate with every
result.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import NotConverged
from .families import make_rng, random_unit_vector
from .states import DensityMatrix, marginals, partial_transpose, validate, von_neumann_entropy

PPT_TOL = 1e-10
LN2 = math.log(2.0)

# weight kept on the maximally mixed atom so every iterate stays full rank
MIXED_FLOOR = 1e-8
LMO_VALUE_TOL = 1e-12
LMO_MAX_ALTERNATIONS = 200
LINE_SEARCH_TOL = 1e-10
# iterations without objective decrease before giving up
STALL_LIMIT = 20
STALL_DECREASE = 1e-14
SINGULAR_TOL = 1e-13
SUPPORT_TOL = 1e-10
BARRIER_VALUE = 1e6
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# PPT certifies separability exactly for these local dimensions
CERTIFIED_DIMS = {(2, 2), (2, 3), (3, 2)}


def is_ppt(rho, tol=PPT_TOL):
    """True iff the partial transpose has no eigenvalue below ``-tol``.

    For 2 x 2 and 2 x 3 systems this is exactly separability.
    """
    return bool(np.linalg.eigvalsh(partial_transpose(rho, "B"))[0] >= -tol)


def negativity(rho):
    """Twice the absolute sum of the negative partial-transpose eigenvalues."""
    w = np.linalg.eigvalsh(partial_transpose(rho, "B"))
    return float(2.0 * -np.sum(w[w < 0]))


@dataclass(frozen=True, eq=False)
class ProductVectorPair:
    a: np.ndarray
    b: np.ndarray
    value: float

    @property
    def vector(self):
        return np.kron(self.a, self.b)


def _top_vectors(m):
    w, v = np.linalg.eigh(m)
    return w[..., -1], v[..., -1]


def _alternate(h4, b):
    """Alternating maximization of <a (x) b| H |a (x) b>, batched over starts."""
    prev = None
    for _ in range(LMO_MAX_ALTERNATIONS):
        m_a = np.einsum("kj,ajcl,kl->kac", b.conj(), h4, b)
        _, a = _top_vectors(m_a)
        m_b = np.einsum("ka,ajcl,kc->kjl", a.conj(), h4, a)
        val, b = _top_vectors(m_b)
        if prev is not None and np.max(np.abs(val - prev)) < LMO_VALUE_TOL:
            break
        prev = val
    return a, b, val


def _lmo(h, dims, rng, restarts, warm_b=None):
    d_a, d_b = dims
    h4 = h.reshape(d_a, d_b, d_a, d_b)
    starts = [random_unit_vector(d_b, rng) for _ in range(restarts)]
    if warm_b is not None:
        starts.insert(0, warm_b)
    a, b, val = _alternate(h4, np.array(starts))
    best = np.max(val)
    k = int(np.argmax(val >= best - LMO_VALUE_TOL))
    return ProductVectorPair(a[k], b[k], float(val[k]))


def product_lmo(g, dims, restarts=20, seed=0, warm_start=None):
    """Locally optimal maximizer of ``<a (x) b| g |a (x) b>`` over unit vectors.

    Alternates between the top eigenvector of the operator obtained by
    contracting ``g`` with ``b`` (an ``d_a x d_a`` matrix) and the one
    obtained by contracting with ``a``, until the value changes by less
    than 1e-12.  The best of ``restarts`` random starts (plus
    ``warm_start``, a B-side vector, tried first) is returned; ties go to
    the earliest start.
    """
    g = np.asarray(g, dtype=complex)
    g = 0.5 * (g + g.conj().T)
    return _lmo(g, tuple(dims), make_rng(seed), restarts, warm_start)


@dataclass(frozen=True, eq=False)
class ReeResult:
    """Outcome of a relative-entropy-of-entanglement solve.

    ``value - gap`` is a lower bound on the true minimum whenever the
    oracle found the global maximizer, and ``value`` itself is always an
    upper bound since ``sigma_star`` is separable by construction.
    ``certified`` is False for local dimensions where PPT does not imply
    separability, so the PPT cross-check on ``sigma_star`` is weaker there.
    """

    value: float
    sigma_star: DensityMatrix
    gap: float
    iterations: int
    converged: bool
    certified: bool
    atoms: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def lower_bound(self):
        return self.value - self.gap


def _log_derivative_weights(w):
    """First divided differences of ln on the spectrum (1/lambda on the diagonal)."""
    lw = np.log(w)
    dw = w[:, None] - w[None, :]
    close = np.abs(dw) <= 1e-12 * np.maximum(w[:, None], w[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(close, 1.0 / np.sqrt(w[:, None] * w[None, :]), (lw[:, None] - lw[None, :]) / dw)


class _Objective:
    """f(sigma) = S(rho || sigma) in bits, with its matrix gradient."""

    def __init__(self, rho):
        self.rho = np.asarray(rho.matrix)
        self.entropy = von_neumann_entropy(rho)

    def value(self, sigma):
        w, v = np.linalg.eigh(sigma)
        r = np.einsum("ij,ik,kj->j", v.conj(), self.rho, v).real
        if w[0] <= 0.0:
            if np.any(r[w <= 0.0] > 1e-14):
                return math.inf
            keep = w > 0.0
            return float(-np.sum(r[keep] * np.log2(w[keep]))) - self.entropy
        return float(-np.sum(r * np.log2(w))) - self.entropy

    def value_and_gradient(self, sigma):
        """Value and Hermitian gradient of f at a full-rank sigma.

        The Frechet derivative of the matrix logarithm is applied to rho in
        sigma's eigenbasis (Daleckii-Krein formula).
        """
        w, v = np.linalg.eigh(sigma)
        w = np.maximum(w, 1e-150)
        x = v.conj().T @ self.rho @ v
        grad = -(v @ (x * _log_derivative_weights(w)) @ v.conj().T) / LN2
        grad = 0.5 * (grad + grad.conj().T)
        value = float(-np.sum(x.diagonal().real * np.log(w))) / LN2 - self.entropy
        return value, grad


def _golden_section(phi, hi, tol=LINE_SEARCH_TOL):
    """Minimize a convex function on [0, hi]; inf values are allowed."""
    lo = 0.0
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = phi(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = phi(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


class _Decomposition:
    """sigma = M / Tr M with M = sum_k |a_k b_k><a_k b_k| for unnormalized a_k, b_k.

    The weight of atom k is ``|a_k|^2 |b_k|^2 / Tr M``, so atoms and
    weights are optimized together as one unconstrained real vector.
    """

    def __init__(self, dims, a, b):
        self.dims = dims
        self.a = np.asarray(a, dtype=complex).reshape(-1, dims[0])
        self.b = np.asarray(b, dtype=complex).reshape(-1, dims[1])

    @property
    def size(self):
        return self.a.shape[0]

    def pack(self):
        return np.concatenate([self.a.real.ravel(), self.a.imag.ravel(), self.b.real.ravel(), self.b.imag.ravel()])

    def unpack(self, x):
        k = self.size
        d_a, d_b = self.dims
        n_a, n_b = k * d_a, k * d_b
        a = (x[:n_a] + 1j * x[n_a:2 * n_a]).reshape(k, d_a)
        b = (x[2 * n_a:2 * n_a + n_b] + 1j * x[2 * n_a + n_b:]).reshape(k, d_b)
        return a, b

    @staticmethod
    def matrix_of(a, b):
        psi = np.einsum("ki,kj->kij", a, b).reshape(a.shape[0], -1)
        m = psi.T @ psi.conj()
        return m / np.trace(m).real

    def matrix(self):
        return self.matrix_of(self.a, self.b)

    def weights(self):
        w = np.sum(np.abs(self.a) ** 2, axis=1) * np.sum(np.abs(self.b) ** 2, axis=1)
        return w / w.sum()

    def vectors(self):
        a = self.a / np.linalg.norm(self.a, axis=1, keepdims=True)
        b = self.b / np.linalg.norm(self.b, axis=1, keepdims=True)
        return np.einsum("ki,kj->kij", a, b).reshape(self.size, -1)

    def normalize(self):
        """Rescale so |a_k|^2 = |b_k|^2 = sqrt(weight_k) and Tr M = 1."""
        root = self.weights()[:, None] ** 0.25
        self.a = self.a / np.linalg.norm(self.a, axis=1, keepdims=True) * root
        self.b = self.b / np.linalg.norm(self.b, axis=1, keepdims=True) * root

    def mix_in(self, t, a_new, b_new):
        """(1 - t) sigma + t |a_new b_new><a_new b_new|."""
        self.normalize()
        shrink = (1.0 - t) ** 0.25
        self.a = np.vstack([self.a * shrink, t ** 0.25 * a_new])
        self.b = np.vstack([self.b * shrink, t ** 0.25 * b_new])

    def prune(self, eps=1e-13):
        keep = self.weights() > eps
        if not np.all(keep):
            self.a, self.b = self.a[keep], self.b[keep]


def _refine(obj, dec, max_steps):
    """Local L-BFGS refinement of all atoms and weights of ``dec``."""
    d_a, d_b = dec.dims
    k = dec.size

    def fun(x):
        a, b = dec.unpack(x)
        psi = np.einsum("ki,kj->kij", a, b).reshape(k, -1)
        m = psi.T @ psi.conj()
        tr = np.trace(m).real
        sigma = m / tr
        if not np.isfinite(tr) or np.linalg.eigvalsh(sigma)[0] <= SINGULAR_TOL:
            return BARRIER_VALUE, np.zeros_like(x)
        value, grad = obj.value_and_gradient(sigma)
        c = float(np.vdot(grad.ravel(), sigma.ravel()).real)
        g_t = (grad - c * np.eye(grad.shape[0])) / tr
        h = (psi @ g_t.T).reshape(k, d_a, d_b)  # rows are G~ |a_k b_k>
        g_a = np.einsum("kij,kj->ki", h, b.conj())
        g_b = np.einsum("kij,ki->kj", h, a.conj())
        # sigma is invariant under a_k -> c a_k, b_k -> b_k / c and under
        # global scaling; this penalty pins both gauges without moving sigma
        na = np.sum(np.abs(a) ** 2, axis=1)
        nb = np.sum(np.abs(b) ** 2, axis=1)
        diff = na - nb
        excess = tr - 1.0
        value += diff @ diff + excess * excess
        pa = 4.0 * diff + 4.0 * excess * nb
        pb = -4.0 * diff + 4.0 * excess * na
        g_a = g_a + 0.5 * pa[:, None] * a
        g_b = g_b + 0.5 * pb[:, None] * b
        jac = 2.0 * np.concatenate([g_a.real.ravel(), g_a.imag.ravel(), g_b.real.ravel(), g_b.imag.ravel()])
        return value, jac

    res = minimize(
        fun,
        dec.pack(),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_steps, "maxcor": 30, "ftol": 1e-16, "gtol": 1e-13},
    )
    a, b = dec.unpack(res.x)
    candidate = _Decomposition(dec.dims, a, b)
    return candidate


def _support_projector(m, tol=SUPPORT_TOL):
    w, v = np.linalg.eigh(m)
    keep = v[:, w > tol]
    return keep @ keep.conj().T


def _restrict_to_local_supports(rho, dec):
    """Compress every atom into supp(rho_A) (x) supp(rho_B).

    A minimizer can always be taken inside the product of the local
    supports (pinching onto that subspace fixes rho and cannot increase
    the relative entropy), and keeping it there leaves
    S(sigma* || rho_A (x) rho_B) finite.  Returns None when both
    marginals have full rank.
    """
    rho_a, rho_b = marginals(rho)
    p_a, p_b = _support_projector(rho_a.matrix), _support_projector(rho_b.matrix)
    if np.allclose(p_a, np.eye(len(p_a))) and np.allclose(p_b, np.eye(len(p_b))):
        return None
    a, b = dec.a @ p_a.T, dec.b @ p_b.T
    keep = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1) > 1e-300
    out = _Decomposition(dec.dims, a[keep], b[keep])
    out.normalize()
    return out


def ree(rho, tol=1e-6, max_iters=5000, seed=0, restarts=20, warm_start=None, strict=True,
        refine_steps=200):
    """Relative entropy of entanglement of ``rho`` in bits.

    Frank-Wolfe over the convex hull of pure product states, started from
    the maximally mixed state.  Every iteration calls the product-state
    oracle on the negative gradient, stops if the duality gap is at most
    ``tol``, and otherwise takes an exact (golden-section) line-search
    step towards the oracle's atom.  Each step is followed by a corrective
    local refinement that moves all atoms and weights of the current
    decomposition together (L-BFGS); the refinement only ever replaces
    the iterate by a separable state of lower objective, so the gap
    certificate is unaffected.

    Parameters
    ----------
    rho : DensityMatrix
    tol : float
        Target Frank-Wolfe duality gap in bits.
    max_iters : int
        Cap on Frank-Wolfe iterations.  The loop also ends, unconverged,
        after 20 consecutive iterations without any decrease of the
        objective.
    seed : int
        Seeds the random starts of the product-state oracle.
    restarts : int
        Random starts per oracle call; a warm start from the previous
        oracle answer is always added.
    warm_start : tuple of (vectors, weights), optional
        Initial decomposition into pure product vectors of length
        ``d_a * d_b``; the vectors must be products across the A|B cut.
    strict : bool
        Raise :class:`NotConverged` when ``max_iters`` is exhausted; with
        ``strict=False`` the unconverged result is returned instead.
    refine_steps : int
        L-BFGS iteration cap of each corrective refinement (0 disables it).

    Returns
    -------
    ReeResult
    """
    dims = tuple(rho.dims)
    d_a, d_b = dims
    obj = _Objective(rho)
    rng = make_rng(seed)

    # I/d is the uniform mixture of computational-basis product states
    a0 = np.repeat(np.eye(d_a, dtype=complex), d_b, axis=0)
    b0 = np.tile(np.eye(d_b, dtype=complex), (d_a, 1))
    if warm_start is None and _is_pure(rho):
        # minimizers are not unique for pure states; start from (and so
        # select) the Schmidt-basis dephasing, which is one of them
        warm_start = _schmidt_dephased(rho)
    if warm_start is not None:
        vecs, ws = warm_start
        ws = np.asarray(ws, dtype=float)
        va, vb = zip(*(_factor_product(v, dims) for v in vecs))
        a_w = np.array(va) * np.sqrt(ws / ws.sum())[:, None]
        a0 = np.vstack([a_w, a0 * np.sqrt(MIXED_FLOOR / (d_a * d_b))])
        b0 = np.vstack([np.array(vb), b0])
    dec = _Decomposition(dims, a0, b0)
    dec.normalize()

    sigma = dec.matrix()
    value = obj.value(sigma)
    warm_b = None
    gap = math.inf
    iterations = 0
    stalled = 0
    best = value
    converged = False
    while True:
        value, grad = obj.value_and_gradient(sigma)
        s = _lmo(-grad, dims, rng, restarts, warm_b)
        warm_b = s.b
        g_sigma = float(np.vdot(grad.ravel(), sigma.ravel()).real)
        gap = max(0.0, g_sigma + s.value)
        if gap <= tol:
            converged = True
            break
        if iterations >= max_iters or stalled >= STALL_LIMIT:
            break
        iterations += 1

        direction = np.outer(s.vector, s.vector.conj()) - sigma
        t, f_step = _golden_section(lambda t: obj.value(sigma + t * direction), 1.0)
        if f_step < value:
            dec.mix_in(t, s.a, s.b)
        if refine_steps:
            candidate = _refine(obj, dec, refine_steps)
            cand_sigma = candidate.matrix()
            if obj.value(cand_sigma) <= min(value, f_step):
                dec = candidate
        dec.prune()
        dec.normalize()
        sigma = dec.matrix()
        # below ~1e-8 the gap is limited by cancellation in f, not by the method
        current = obj.value(sigma)
        if current < best - STALL_DECREASE:
            best, stalled = current, 0
        else:
            stalled += 1

    value = obj.value(sigma)
    restricted = _restrict_to_local_supports(rho, dec)
    if restricted is not None and obj.value(restricted.matrix()) <= value + 1e-12:
        dec = restricted
        sigma = dec.matrix()
        value = obj.value(sigma)
    result = ReeResult(
        value=max(0.0, value),
        sigma_star=validate(sigma, dims),
        gap=gap,
        iterations=iterations,
        converged=converged,
        certified=dims in CERTIFIED_DIMS,
        atoms=dec.vectors(),
        weights=dec.weights(),
    )
    if strict and not converged:
        raise NotConverged(result)
    return result


def _is_pure(rho, tol=1e-10):
    return np.linalg.eigvalsh(rho.matrix)[-1] >= 1.0 - tol


def _schmidt_dephased(rho):
    """Schmidt product vectors and weights of a pure state."""
    w, v = np.linalg.eigh(rho.matrix)
    u, s, vh = np.linalg.svd(v[:, -1].reshape(rho.dims))
    keep = s**2 > 1e-14
    vecs = [np.kron(u[:, i], vh[i]) for i in np.flatnonzero(keep)]
    return vecs, s[keep] ** 2


def _factor_product(vec, dims):
    """Split a product vector into its A and B factors (rank-1 SVD)."""
    u, s, vh = np.linalg.svd(np.asarray(vec, dtype=complex).reshape(dims))
    return u[:, 0] * np.sqrt(s[0]), vh[0] * np.sqrt(s[0])


def closest_separable_state(rho, **kwargs):
    """The separable state minimizing S(rho || sigma); see :func:`ree`."""
    return ree(rho, **kwargs).sigma_star
