"""Geometry of the oblique manifold OB(n, k).

OB(n, k) is the set of full-rank n x k matrices whose columns all have unit
Euclidean norm (k >= n).  It is a Riemannian submanifold of a product of k
unit spheres, so geodesics and parallel transport are computed column by
column with the closed-form great-circle expressions.

Points and tangent vectors are plain float ndarrays; `check_point` and
`check_tangent` assert the invariants where needed.
"""

import numpy as np

POINT_TOL = 1e-10
RANK_TOL = 1e-12


def check_point(X, tol=POINT_TOL):
    """Raise ValueError unless X is a valid manifold point."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("manifold point must be a 2-d array")
    n, k = X.shape
    if k < n:
        raise ValueError(f"need k >= n, got n={n}, k={k}")
    norms = np.linalg.norm(X, axis=0)
    if np.max(np.abs(norms - 1.0)) > tol:
        raise ValueError("columns are not unit norm")
    if np.linalg.svd(X, compute_uv=False)[-1] <= RANK_TOL:
        raise ValueError("point is (numerically) rank deficient")
    return X


def check_tangent(X, Xi, tol=POINT_TOL):
    """Raise ValueError unless Xi is tangent at X (column-wise orthogonal)."""
    Xi = np.asarray(Xi, dtype=float)
    if Xi.shape != X.shape:
        raise ValueError("tangent vector shape does not match base point")
    if np.max(np.abs(np.sum(X * Xi, axis=0))) > tol:
        raise ValueError("vector is not tangent at the base point")
    return Xi


def project_tangent(X, Q):
    """Orthogonal projection of Q onto the tangent space at X.

    Returns Q - X ddiag(X^T Q), where ddiag keeps the diagonal of the
    column-pairing matrix; only the k column inner products are formed.
    """
    X = np.asarray(X, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if Q.shape != X.shape:
        raise ValueError(f"shape mismatch: point {X.shape}, matrix {Q.shape}")
    return Q - X * np.sum(X * Q, axis=0)


def sphere_geodesic(x, h, t):
    """Great circle through x in direction h (tangent at x), at parameter t."""
    nh = np.linalg.norm(h)
    if nh == 0.0:
        return np.array(x, dtype=float, copy=True)
    return x * np.cos(t * nh) + h * (np.sin(t * nh) / nh)


def sphere_transport(xi, x, h, t):
    """Parallel transport of xi along the great circle gamma(x, h, t)."""
    nh = np.linalg.norm(h)
    if nh == 0.0:
        return np.array(xi, dtype=float, copy=True)
    coef = np.dot(xi, h) / nh**2
    return xi - coef * (x * (nh * np.sin(t * nh)) + h * (1.0 - np.cos(t * nh)))


def geodesic(X, H, t):
    """Manifold geodesic: column j follows the great circle (x_j, h_j)."""
    X = np.asarray(X, dtype=float)
    H = np.asarray(H, dtype=float)
    if H.shape != X.shape:
        raise ValueError("direction shape does not match base point")
    nh = np.linalg.norm(H, axis=0)
    safe = np.where(nh > 0.0, nh, 1.0)
    out = X * np.cos(t * nh) + H * (np.sin(t * nh) / safe)
    # zero-direction columns stay put
    zero = nh == 0.0
    if np.any(zero):
        out[:, zero] = X[:, zero]
    return out


def transport(Xi, X, H, t):
    """Parallel transport of Xi along geodesic(X, H, t), column-wise.

    Columns with a zero direction are returned unchanged (the transport
    along a degenerate geodesic is the identity).
    """
    Xi = np.asarray(Xi, dtype=float)
    X = np.asarray(X, dtype=float)
    H = np.asarray(H, dtype=float)
    if Xi.shape != X.shape or H.shape != X.shape:
        raise ValueError("shape mismatch among tangent, point and direction")
    nh = np.linalg.norm(H, axis=0)
    safe = np.where(nh > 0.0, nh, 1.0)
    coef = np.sum(Xi * H, axis=0) / safe**2
    moved = X * (nh * np.sin(t * nh)) + H * (1.0 - np.cos(t * nh))
    out = Xi - coef * moved
    zero = nh == 0.0
    if np.any(zero):
        out[:, zero] = Xi[:, zero]
    return out


def random_point(n, k, seed=None):
    """Random manifold point: normal entries, columns normalized.

    Draws are rejected wholesale while the smallest singular value is below
    1e-6, which keeps the distribution simple and the result reproducible.
    """
    if k < n:
        raise ValueError(f"need k >= n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    while True:
        X = rng.standard_normal((n, k))
        norms = np.linalg.norm(X, axis=0)
        if np.any(norms == 0.0):
            continue
        X /= norms
        if np.linalg.svd(X, compute_uv=False)[-1] >= 1e-6:
            return X
