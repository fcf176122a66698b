"""Nonlinear conjugate gradient with Armijo backtracking.

One solver core serves two geometries: the oblique manifold (operator
learning; geodesics and parallel transport from `oblique`) and flat image
space (reconstruction; straight lines, identity transport).  The direction
update uses the hybrid max(0, min(beta_DY, beta_HS)) rule by default, with
Fletcher-Reeves available as a config option.
"""

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import oblique


class LineSearchError(RuntimeError):
    """Armijo condition never met; carries the best step found."""

    def __init__(self, best_t, best_f):
        super().__init__(f"line search failed; best step {best_t:.3e}")
        self.best_t = best_t
        self.best_f = best_f


class _Geometry(NamedTuple):
    project: Callable
    geodesic: Callable
    transport: Callable


OBLIQUE_GEOMETRY = _Geometry(
    project=oblique.project_tangent,
    geodesic=oblique.geodesic,
    transport=oblique.transport,
)

EUCLIDEAN_GEOMETRY = _Geometry(
    project=lambda x, q: q,
    geodesic=lambda x, h, t: x + t * h,
    transport=lambda xi, x, h, t: xi,
)


@dataclass
class SolverConfig:
    """Iteration limits, tolerances and line-search constants.

    tol is the Frobenius-norm step tolerance between consecutive iterates;
    cost_tol (if set) additionally stops on small relative cost decrease.
    """

    max_iters: int = 500
    tol: float = 1e-4
    c1: float = 0.9
    c2: float = 1e-2
    beta_rule: str = "hybrid"
    cost_tol: Optional[float] = None
    grad_tol: float = 1e-12
    max_shrink: int = 200
    t0_init: Optional[float] = None  # first trial step; default 1/||G0||

    def __post_init__(self):
        if not 0.0 < self.c1 < 1.0:
            raise ValueError("c1 must lie in (0, 1)")
        if not 0.0 < self.c2 < 0.5:
            raise ValueError("c2 must lie in (0, 0.5)")
        if self.beta_rule not in ("hybrid", "fr"):
            raise ValueError("beta_rule must be 'hybrid' or 'fr'")


@dataclass
class CGState:
    """Per-iteration snapshot handed to progress callbacks."""

    iteration: int
    f: float
    grad_norm: float
    alpha: float
    X: np.ndarray
    G: np.ndarray
    H: np.ndarray


@dataclass
class CGResult:
    x: np.ndarray
    f: float
    iterations: int
    status: str
    converged: bool = field(init=False)

    def __post_init__(self):
        self.converged = self.status == "converged"


def _inner(a, b):
    return float(np.sum(a * b))


def beta_fr(g_new, g_old):
    """Fletcher-Reeves coefficient <G+, G+> / <G, G>."""
    denom = _inner(g_old, g_old)
    if denom <= np.finfo(float).tiny:
        return 0.0
    return _inner(g_new, g_new) / denom


def cg_beta(g_new, g_old_transported, h_transported):
    """Hybrid max(0, min(beta_DY, beta_HS)) coefficient.

    Both formulas share the denominator <T(H), Y> with Y = G+ - T(G); a
    vanishing denominator degrades to 0, i.e. a steepest-descent restart.
    """
    y = g_new - g_old_transported
    denom = _inner(h_transported, y)
    if not np.isfinite(denom) or abs(denom) <= np.finfo(float).tiny:
        return 0.0
    b_hs = _inner(g_new, y) / denom
    b_dy = _inner(g_new, g_new) / denom
    return max(0.0, min(b_dy, b_hs))


def _armijo(f, x, h, f0, dphi, t0, c1, c2, geodesic, max_shrink):
    # largest t in {t0 c1^j} with f(geodesic(x,h,t)) <= f0 + t c2 dphi
    t = t0
    best_t, best_f = 0.0, f0
    for _ in range(max_shrink + 1):
        ft = f(geodesic(x, h, t))
        if ft < best_f:
            best_t, best_f = t, ft
        if ft <= f0 + t * c2 * dphi:
            return t, ft
        t *= c1
    raise LineSearchError(best_t, best_f)


def backtracking_linesearch(X, G, H, f, t0, c1=0.9, c2=1e-2,
                            geodesic=oblique.geodesic, max_shrink=200):
    """Armijo backtracking along the geodesic through X in direction H.

    Requires a descent direction (<G, H> < 0 up to the degenerate G = 0
    case); returns the accepted step size.
    """
    alpha, _ = _armijo(f, X, H, f(X), _inner(G, H), t0, c1, c2,
                       geodesic, max_shrink)
    return alpha


def minimize(f, f_and_grad, x0, cfg=None, geometry=OBLIQUE_GEOMETRY,
             callback=None):
    """Run the CG loop from x0 until the step or cost tolerance is met.

    f(x) evaluates the cost alone (used inside the line search);
    f_and_grad(x) returns (cost, Euclidean gradient).  The geometry
    namespace supplies projection, geodesic and transport.
    """
    if cfg is None:
        cfg = SolverConfig()
    project, geodesic, transport = geometry

    x = np.asarray(x0, dtype=float)
    fx, grad = f_and_grad(x)
    g = project(x, grad)
    gnorm = np.sqrt(_inner(g, g))
    if gnorm <= cfg.grad_tol:
        return CGResult(x, fx, 0, "converged")
    h = -g
    t0 = cfg.t0_init if cfg.t0_init is not None else 1.0 / gnorm

    status = "max_iters"
    it = 0
    for it in range(1, cfg.max_iters + 1):
        dphi = _inner(g, h)
        if dphi >= 0.0:
            # restart: non-descent direction can only come from a conjugate
            # update, fall back to steepest descent
            h = -g
            dphi = -gnorm * gnorm
        try:
            alpha, f_new = _armijo(f, x, h, fx, dphi, t0, cfg.c1, cfg.c2,
                                   geodesic, cfg.max_shrink)
        except LineSearchError:
            status = "linesearch_failed"
            break

        x_new = geodesic(x, h, alpha)
        f_new, grad_new = f_and_grad(x_new)
        g_new = project(x_new, grad_new)
        gnorm_new = np.sqrt(_inner(g_new, g_new))

        h_t = transport(h, x, h, alpha)
        if cfg.beta_rule == "fr":
            beta = beta_fr(g_new, g)
        else:
            beta = cg_beta(g_new, transport(g, x, h, alpha), h_t)
        h_new = -g_new + beta * h_t

        step = float(np.linalg.norm(x_new - x))
        rel_drop = (fx - f_new) / max(abs(fx), 1.0)
        x, fx, g, gnorm, h = x_new, f_new, g_new, gnorm_new, h_new
        t0 = alpha / cfg.c1

        if callback is not None:
            callback(CGState(it, fx, gnorm, alpha, x, g, h))
        if step < cfg.tol:
            status = "converged"
            break
        if cfg.cost_tol is not None and rel_drop < cfg.cost_tol:
            status = "converged"
            break
        if gnorm <= cfg.grad_tol:
            status = "converged"
            break

    return CGResult(x, fx, it, status)


@dataclass
class LearnResult:
    operator: np.ndarray  # k x n, rows are the learned atoms
    f: float
    iterations: int
    status: str
    converged: bool = field(init=False)

    def __post_init__(self):
        self.converged = self.status == "converged"


def learn_operator(S, params, cfg=None, init=None, callback=None):
    """Learn an analysis operator from unit-norm training columns.

    Runs the manifold CG loop on the transposed operator starting from
    `init` (an oblique-manifold point) and returns the final transposed
    iterate as the k x n operator.  A line-search failure terminates
    gracefully: the current iterate is still returned, with the status
    recording what happened.
    """
    from . import objective  # local import avoids a cycle at module load

    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[1] == 0:
        raise ValueError("training set must be a nonempty n x M array")
    norms = np.linalg.norm(S, axis=0)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise ValueError("training columns must have unit norm")
    if init is None:
        raise ValueError("an initial manifold point is required")
    X0 = oblique.check_point(init)
    if X0.shape[0] != S.shape[0]:
        raise ValueError("init rows must match the sample dimension")

    res = minimize(
        f=lambda X: objective.total_cost(X, S, params),
        f_and_grad=lambda X: objective.total_cost_and_grad(X, S, params),
        x0=X0,
        cfg=cfg,
        geometry=OBLIQUE_GEOMETRY,
        callback=callback,
    )
    return LearnResult(res.x.T.copy(), res.f, res.iterations, res.status)
