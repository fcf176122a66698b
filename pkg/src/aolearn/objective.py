"""Learning cost for the analysis operator and its gradients.

The operator is optimized in transposed form X = Omega^T on the oblique
manifold.  The cost is

    f(X) = J(X^T S) + kappa * h(X^T) + mu * r(X^T)

where J is the smoothed column-wise lp sparsity measure (squared, averaged
over training samples so that both mean and variance of the per-sample
sparsity are pushed down), h is a log-det penalty keeping the operator full
rank, and r is a log-barrier on pairwise row coherence that forbids linearly
dependent rows.

Barrier blow-ups are reported as +inf values rather than exceptions so the
line search can simply reject the step.
"""

from dataclasses import dataclass

import numpy as np

from . import oblique


@dataclass
class LearnParams:
    """Weights of the learning cost.

    p:     sparsity exponent, 0 < p <= 1
    nu:    smoothing of |v|^p at the origin, > 0
    kappa: weight of the rank penalty
    mu:    weight of the row-coherence barrier
    """

    p: float = 0.4
    nu: float = 1e-6
    kappa: float = 9000.0
    mu: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must lie in (0, 1]")
        if self.nu <= 0.0:
            raise ValueError("nu must be positive")
        if self.kappa < 0.0 or self.mu < 0.0:
            raise ValueError("kappa and mu must be nonnegative")


def sparsity_cost(V, p, nu):
    """(1/2M) sum_j ( (1/p) sum_i (v_ij^2 + nu)^(p/2) )^2."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.size == 0:
        raise ValueError("V must be a nonempty 2-d array")
    M = V.shape[1]
    col = np.sum((V * V + nu) ** (p / 2.0), axis=0) / p
    return float(col @ col) / (2.0 * M)


def _sparsity_grad_factor(V, p, nu):
    # shared by sparsity_grad and the fused cost+gradient path: the matrix
    # B with B_ij = (1/M) g_j * v_ij (v_ij^2 + nu)^(p/2 - 1), so that
    # d/dOmega J(Omega S) = B S^T.
    M = V.shape[1]
    sq = V * V + nu
    col = np.sum(sq ** (p / 2.0), axis=0) / p
    W = V * sq ** (p / 2.0 - 1.0)
    return col, W * (col / M)


def sparsity_grad(Omega, S, p, nu):
    """Gradient of sparsity_cost(Omega @ S) with respect to Omega."""
    Omega = np.asarray(Omega, dtype=float)
    S = np.asarray(S, dtype=float)
    if Omega.shape[1] != S.shape[0]:
        raise ValueError("Omega columns must match sample dimension")
    V = Omega @ S
    _, B = _sparsity_grad_factor(V, p, nu)
    return B @ S.T


def rank_penalty(Omega):
    """-(1/(n log n)) log det((1/k) Omega^T Omega).

    For Omega^T on the oblique manifold the value is >= 1, with equality
    exactly at uniformly normalized tight frames; returns +inf when
    Omega^T Omega is singular.
    """
    Omega = np.asarray(Omega, dtype=float)
    k, n = Omega.shape
    sign, logabs = np.linalg.slogdet(Omega.T @ Omega / k)
    if sign <= 0 or not np.isfinite(logabs):
        return np.inf
    return -logabs / (n * np.log(n))


def rank_penalty_grad(Omega):
    """Gradient of rank_penalty: -(2/(n log n)) Omega (Omega^T Omega)^{-1}."""
    Omega = np.asarray(Omega, dtype=float)
    k, n = Omega.shape
    gram = Omega.T @ Omega
    sol = np.linalg.solve(gram, Omega.T).T
    return -(2.0 / (n * np.log(n))) * sol


def coherence_penalty(Omega):
    """-sum_{i<j} log(1 - (w_i . w_j)^2) over distinct row pairs.

    +inf as soon as two rows are collinear (|w_i . w_j| >= 1).
    """
    Omega = np.asarray(Omega, dtype=float)
    G = Omega @ Omega.T
    k = G.shape[0]
    iu = np.triu_indices(k, 1)
    vals = 1.0 - G[iu] ** 2
    if np.any(vals <= 0.0):
        return np.inf
    return float(-np.sum(np.log(vals)))


def coherence_penalty_grad(Omega):
    """Gradient of coherence_penalty, assembled via the row Gram matrix."""
    Omega = np.asarray(Omega, dtype=float)
    G = Omega @ Omega.T
    denom = 1.0 - G * G
    np.fill_diagonal(denom, 1.0)
    if np.any(denom <= 0.0):
        raise FloatingPointError("coherence barrier is at or beyond its boundary")
    C = 2.0 * G / denom
    np.fill_diagonal(C, 0.0)
    return C @ Omega


def total_cost(X, S, params):
    """f(X) = J(X^T S) + kappa h(X^T) + mu r(X^T)."""
    f, _ = _cost_terms(X, S, params, want_grad=False)
    return f


def total_cost_and_grad(X, S, params):
    """Cost and Riemannian gradient in one pass (X^T S is formed once)."""
    return _cost_terms(X, S, params, want_grad=True)


def riemannian_grad(X, S, params):
    """Projection of the Euclidean gradient of f onto the tangent space at X."""
    _, G = _cost_terms(X, S, params, want_grad=True)
    return G


def _cost_terms(X, S, params, want_grad):
    X = np.asarray(X, dtype=float)
    S = np.asarray(S, dtype=float)
    n, k = X.shape
    V = X.T @ S  # analyzed training set, k x M

    col, B = _sparsity_grad_factor(V, params.p, params.nu)
    M = V.shape[1]
    f = float(col @ col) / (2.0 * M)

    gram_n = X @ X.T  # Omega^T Omega, n x n
    if params.kappa != 0.0:
        sign, logabs = np.linalg.slogdet(gram_n / k)
        h = -logabs / (n * np.log(n)) if sign > 0 and np.isfinite(logabs) else np.inf
        f += params.kappa * h

    if params.mu != 0.0:
        gram_k = X.T @ X  # row Gram of Omega, k x k
        iu = np.triu_indices(k, 1)
        vals = 1.0 - gram_k[iu] ** 2
        if np.any(vals <= 0.0):
            f = np.inf
        else:
            f += params.mu * float(-np.sum(np.log(vals)))

    if not want_grad:
        return f, None
    if not np.isfinite(f):
        raise FloatingPointError("cost is infinite at this point; gradient undefined")

    # Euclidean gradient with respect to X (terms transposed from the
    # Omega-space expressions).
    grad = S @ B.T
    if params.kappa != 0.0:
        grad += params.kappa * (-(2.0 / (n * np.log(n))) * np.linalg.solve(gram_n, X))
    if params.mu != 0.0:
        denom = 1.0 - gram_k * gram_k
        np.fill_diagonal(denom, 1.0)
        C = 2.0 * gram_k / denom
        np.fill_diagonal(C, 0.0)
        grad += params.mu * (X @ C)
    return f, oblique.project_tangent(X, grad)
