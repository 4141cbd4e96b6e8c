"""
Numerical search for zero curvature planes of the Wilking doubled Cheeger metric on Sp(3)//U.

The metric on Sp(3) is the submersion metric of (G x G, g_1 + g_1) -> G, where g_1 is the Cheeger
deformation of g0 toward K = Sp(1) x Sp(2). For U inside K x K a plane span{X, Y} at [p^-1] is flat iff

    1. X and Y are g0-orthogonal to Ad_p u_1 - u_2 for all (u_1, u_2) in u,
    2. [X, Y] = [X_k, Y_k] = [X_p, Y_p] = 0,
    3. [(Ad_p^-1 X)_k, (Ad_p^-1 Y)_k] = [(Ad_p^-1 X)_p, (Ad_p^-1 Y)_p] = 0.

The defect of a plane is the sum of the squared g0-norms of the five brackets on an orthonormal pair,
and it vanishes exactly on flat planes.
"""
from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy.linalg import block_diag, null_space
from scipy.optimize import least_squares

from .hlinalg import (HMatrix, UNITS, ad_p, adjoint, bracket, coordinates, from_coordinates, g0,
                      k_part, p_part, rotation_point)
from .reps import BiquotientSpec, phi3_algebra

logger = logging.getLogger(__name__)

POSITIVE = "positive"
ZERO_PLANE = "zero plane"
INCONCLUSIVE = "inconclusive"

HORIZONTAL_DIMENSION = 15
BLOCK_SIZES = {"1": 1, "p": 1, "q": 1, "phi3(p)": 2, "phi3(q)": 2}

ARMIJO = 1e-4
MIN_STEP = 1e-16
TINY = 1e-30


@dataclass(frozen=True)
class MetricConfig:
    """
    Cheeger parameter and numerical settings of a curvature run.

    Attributes
    ----------
    t : float
        Cheeger parameter; k-components are scaled by t/(t+1).
    positivity_threshold, zero_threshold : float
        A minimum defect above the first counts as positive, below the second as a zero plane.
    max_iterations, relative_tolerance, step : int, float, float
        Projected gradient settings.
    polish : int
        Number of best restarts refined by Levenberg-Marquardt.
    """
    t: float = 1.0
    positivity_threshold: float = 1e-6
    zero_threshold: float = 1e-10
    max_iterations: int = 5000
    relative_tolerance: float = 1e-14
    step: float = 0.1
    polish: int = 8

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError(f"Cheeger parameter t must be positive, got {self.t}.")
        if not 0 < self.zero_threshold <= self.positivity_threshold:
            raise ValueError(f"Need 0 < zero_threshold <= positivity_threshold, got {self.zero_threshold}, "
                             f"{self.positivity_threshold}.")

    @property
    def phi_scale(self) -> float:
        return self.t / (self.t + 1)

    def phi(self, Y: HMatrix) -> HMatrix:
        """Phi_1(Y) = Y_p + t/(t+1) Y_k."""
        return p_part(Y) + self.phi_scale*k_part(Y)

    def phi_inverse(self, Y: HMatrix) -> HMatrix:
        return p_part(Y) + k_part(Y)/self.phi_scale


def horizontal_lift(config: MetricConfig, p: HMatrix, X: HMatrix) -> tuple[HMatrix, HMatrix]:
    """Lift (-Phi^-1(Ad_p^-1 X), Phi^-1 X) of X to g + g under the doubling submersion."""
    return -config.phi_inverse(ad_p(adjoint(p), X)), config.phi_inverse(X)


def metric_inner(config: MetricConfig, p: HMatrix, X: HMatrix, Y: HMatrix) -> float:
    """Inner product of X and Y at [p^-1] in the doubled Cheeger metric, taken on their horizontal lifts."""
    lifts = zip(horizontal_lift(config, p, X), horizontal_lift(config, p, Y))
    return float(sum(g0(config.phi(A), B) for A, B in lifts))


@dataclass(frozen=True, eq=False)
class LieAlgebraPair:
    """Bases u1[m], u2[m] (m = p_i, p_j, p_k, q_i, q_j, q_k) of the embedded u in g + g."""
    u1: np.ndarray
    u2: np.ndarray


def _block(token: str, factor: str, unit) -> np.ndarray:
    if token not in BLOCK_SIZES:
        raise ValueError(f"Unknown block token {token!r}; use one of {', '.join(BLOCK_SIZES)}.")
    size = BLOCK_SIZES[token]
    # "phi3(q)" belongs to q
    owner = token[-2] if size == 2 else token
    if owner != factor:
        return np.zeros((2*size, 2*size), dtype=complex)
    return phi3_algebra(unit) if size == 2 else unit.as_block()


def lie_algebra_pair(spec: BiquotientSpec) -> LieAlgebraPair:
    """Builds u from the block tokens of the biquotient."""
    if spec.blocks is None:
        raise ValueError(f"{spec.name} has no Lie algebra block data.")
    for tokens in spec.blocks:
        if sum(BLOCK_SIZES.get(t, 0) for t in tokens) != 3:
            raise ValueError(f"Blocks {tokens} of {spec.name} do not fill a 3 x 3 matrix.")
    sides = [[], []]
    for factor in ("p", "q"):
        for unit in UNITS:
            for side, tokens in zip(sides, spec.blocks):
                side.append(block_diag(*[_block(t, factor, unit) for t in tokens]))
    return LieAlgebraPair(u1=np.array(sides[0]), u2=np.array(sides[1]))


@dataclass(frozen=True, eq=False)
class HorizontalSpace:
    """Orthonormal basis (columns, in SP3_BASIS coordinates) of the horizontal space at p."""
    basis: np.ndarray
    constraints: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    @property
    def matrices(self) -> np.ndarray:
        return from_coordinates(self.basis.T)

    def residual(self, X: HMatrix) -> float:
        """Norm of the component of X outside the space."""
        c = coordinates(X)
        return float(np.linalg.norm(c - self.basis @ (self.basis.T @ c)))


def horizontal_space(spec: BiquotientSpec, p: HMatrix) -> HorizontalSpace:
    """g0-orthogonal complement of {Ad_p u_1 - u_2} in sp(3)."""
    pair = lie_algebra_pair(spec)
    constraints = coordinates(ad_p(p, pair.u1) - pair.u2)
    basis = null_space(constraints)
    if basis.shape[1] > HORIZONTAL_DIMENSION:
        raise ValueError(f"{spec.name}: horizontal space has dimension {basis.shape[1]}; "
                         f"the constraints span only {21 - basis.shape[1]} directions.")
    return HorizontalSpace(basis=basis, constraints=constraints)


@dataclass(frozen=True, eq=False)
class ZeroPlaneDefect:
    X: HMatrix
    Y: HMatrix
    raw: float
    gram: float
    value: float

    @property
    def dependent(self) -> bool:
        return math.isinf(self.value)


def _brackets(p: HMatrix, X: HMatrix, Y: HMatrix) -> list[HMatrix]:
    AX, AY = ad_p(adjoint(p), X), ad_p(adjoint(p), Y)
    return [
        bracket(X, Y),
        bracket(k_part(X), k_part(Y)),
        bracket(p_part(X), p_part(Y)),
        bracket(k_part(AX), k_part(AY)),
        bracket(p_part(AX), p_part(AY)),
    ]


def plane_defect(p: HMatrix, X: HMatrix, Y: HMatrix) -> ZeroPlaneDefect:
    """Five-bracket defect of span{X, Y} at [p^-1], normalized by the Gram determinant."""
    raw = sum(g0(B, B) for B in _brackets(p, X, Y))
    xx, yy, xy = g0(X, X), g0(Y, Y), g0(X, Y)
    gram = xx*yy - xy**2
    if gram <= 1e-12*xx*yy or gram == 0:
        return ZeroPlaneDefect(X, Y, raw, gram, math.inf)
    return ZeroPlaneDefect(X, Y, raw, gram, raw/gram)


def defect(spec: BiquotientSpec, p: HMatrix, X: HMatrix, Y: HMatrix, tol: float = 1e-8) -> ZeroPlaneDefect:
    """plane_defect for a pair that must be horizontal for spec at p."""
    space = horizontal_space(spec, p)
    for label, Z in (("X", X), ("Y", Y)):
        if space.residual(Z) > tol*max(1.0, math.sqrt(abs(g0(Z, Z)))):
            raise ValueError(f"{label} is not horizontal for {spec.name} at this point.")
    return plane_defect(p, X, Y)


def bracket_tensor(space: HorizontalSpace, p: HMatrix) -> np.ndarray:
    """
    T[k, m, n] with sum_mn T[k, m, n] a_m b_n the coordinates of the five brackets of X = sum a_m E_m,
    Y = sum b_n E_n; shape (5*21, d, d).
    """
    E = space.matrices
    A = ad_p(adjoint(p), E)

    def pairwise(U: np.ndarray) -> np.ndarray:
        products = np.einsum('mij,njk->mnik', U, U)
        return coordinates(products - np.swapaxes(products, 0, 1))

    parts = [pairwise(E), pairwise(k_part(E)), pairwise(p_part(E)), pairwise(k_part(A)), pairwise(p_part(A))]
    T = np.concatenate([np.moveaxis(part, -1, 0) for part in parts])
    return np.ascontiguousarray(T)


def objective(T: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Raw defect |T(a, b)|^2 for stacked frames Y[..., :, 0] = a, Y[..., :, 1] = b."""
    v = np.einsum('kmn,...m,...n->...k', T, Y[..., 0], Y[..., 1], optimize=True)
    return np.sum(v**2, axis=-1), v


def gradient(T: np.ndarray, Y: np.ndarray, v: np.ndarray | None = None) -> np.ndarray:
    if v is None:
        v = objective(T, Y)[1]
    ga = 2*np.einsum('...k,kmn,...n->...m', v, T, Y[..., 1], optimize=True)
    gb = 2*np.einsum('...k,kmn,...m->...n', v, T, Y[..., 0], optimize=True)
    return np.stack([ga, gb], axis=-1)


def numerical_gradient(T: np.ndarray, Y: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central difference gradient of the raw defect for a single frame Y of shape (d, 2)."""
    out = np.zeros_like(Y)
    for index in np.ndindex(Y.shape):
        shift = np.zeros_like(Y)
        shift[index] = h
        out[index] = (objective(T, Y + shift)[0] - objective(T, Y - shift)[0]) / (2*h)
    return out


def _orthonormalize(Y: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Y)
    signs = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    signs[signs == 0] = 1
    return Q*signs[..., None, :]


def _project(Y: np.ndarray, G: np.ndarray) -> np.ndarray:
    # tangent space of the Stiefel manifold: G - Y sym(Y^T G)
    YtG = np.swapaxes(Y, -1, -2) @ G
    return G - Y @ ((YtG + np.swapaxes(YtG, -1, -2))/2)


def _polish(T: np.ndarray, Y: np.ndarray) -> np.ndarray:
    d = Y.shape[0]

    def residuals(z):
        a, b = z[:d], z[d:]
        v = np.einsum('kmn,m,n->k', T, a, b)
        return np.concatenate([v, [a @ a - 1, b @ b - 1, a @ b]])

    def jacobian(z):
        a, b = z[:d], z[d:]
        zeros = np.zeros(d)
        top = np.hstack([np.einsum('kmn,n->km', T, b), np.einsum('kmn,m->kn', T, a)])
        penalty = np.array([np.concatenate([2*a, zeros]), np.concatenate([zeros, 2*b]), np.concatenate([b, a])])
        return np.vstack([top, penalty])

    result = least_squares(residuals, np.concatenate([Y[:, 0], Y[:, 1]]), jac=jacobian, method='lm')
    return _orthonormalize(np.stack([result.x[:d], result.x[d:]], axis=-1))


@dataclass(frozen=True, eq=False)
class DefectMinimum:
    """
    Best plane found by min_defect.

    value is the defect of the orthonormal pair (a, b); gram is the Gram determinant of the returned
    matrices X, Y, which is 1 up to rounding. metric_gram is the area squared of span{X, Y} in the
    doubled Cheeger metric and depends on t.
    """
    name: str
    theta: float
    value: float
    a: np.ndarray
    b: np.ndarray
    X: HMatrix
    Y: HMatrix
    gram: float
    metric_gram: float
    converged: bool
    iterations: int
    restart: int


def min_defect(spec: BiquotientSpec, theta: float, restarts: int = 64, config: MetricConfig | None = None,
               seed: int = 42) -> DefectMinimum:
    """
    Multi-start minimization of the defect over orthonormal horizontal pairs at p(theta).

    All restarts run as one batch of projected gradient steps on the Stiefel manifold, each with its
    own Armijo step (doubled on success, halved on failure). A restart stops when an accepted step
    lowers the defect by less than relative_tolerance times its value, when its step underflows, or
    after max_iterations. The best `polish` restarts are then refined by Levenberg-Marquardt on the
    bilinear residuals plus orthonormality penalties. Ties are broken by the lowest restart index.

    Parameters
    ----------
    spec : BiquotientSpec
        Spec with block data.
    theta : float
        Angle of the rotation point, radians.
    restarts : int
        Number of random starts, uniform on the pair Stiefel set.
    config : MetricConfig | None
        Numerical settings; defaults apply when None.
    seed : int
        Seed of the numpy Generator drawing the starts.

    Returns
    -------
    DefectMinimum
    """
    if restarts < 1:
        raise ValueError(f"restarts must be at least 1, got {restarts}.")
    config = config or MetricConfig()
    p = rotation_point(theta)
    space = horizontal_space(spec, p)
    T = bracket_tensor(space, p)
    rng = np.random.default_rng(seed)
    Y = _orthonormalize(rng.standard_normal((restarts, space.dimension, 2)))
    f, v = objective(T, Y)
    step = np.full(restarts, config.step)
    active = np.ones(restarts, dtype=bool)
    iterations = np.zeros(restarts, dtype=int)
    for _ in range(config.max_iterations):
        if not active.any():
            break
        G = _project(Y, gradient(T, Y, v))
        g2 = np.sum(G**2, axis=(-2, -1))
        trial = _orthonormalize(Y - step[:, None, None]*G)
        f_trial, v_trial = objective(T, trial)
        accept = active & (f_trial <= f - ARMIJO*step*g2)
        done = (accept & (f - f_trial <= config.relative_tolerance*f)) | (step < MIN_STEP) | (f < TINY)
        Y = np.where(accept[:, None, None], trial, Y)
        f = np.where(accept, f_trial, f)
        v = np.where(accept[:, None], v_trial, v)
        step = np.where(active, np.where(accept, 2*step, step/2), step)
        iterations += active
        active &= ~done
    converged = ~active
    logger.debug(f"{spec.name} theta={theta}: {converged.sum()}/{restarts} restarts converged")

    for index in np.argsort(f, kind='stable')[:config.polish]:
        polished = _polish(T, Y[index])
        value = objective(T, polished)[0]
        if value < f[index]:
            Y[index], f[index] = polished, value

    best = int(np.argmin(f))
    a, b = Y[best, :, 0], Y[best, :, 1]
    X, Yb = from_coordinates(space.basis @ a), from_coordinates(space.basis @ b)
    gram = g0(X, X)*g0(Yb, Yb) - g0(X, Yb)**2
    metric_gram = metric_inner(config, p, X, X)*metric_inner(config, p, Yb, Yb) - metric_inner(config, p, X, Yb)**2
    return DefectMinimum(name=spec.name, theta=float(theta), value=float(f[best]), a=a, b=b, X=X, Y=Yb,
                         gram=float(gram), metric_gram=float(metric_gram), converged=bool(converged[best]),
                         iterations=int(iterations[best]), restart=best)


def classify_minimum(value: float, config: MetricConfig | None = None) -> str:
    config = config or MetricConfig()
    if value >= config.positivity_threshold:
        return POSITIVE
    if value <= config.zero_threshold:
        return ZERO_PLANE
    return INCONCLUSIVE


@dataclass(frozen=True)
class ScanRow:
    spec: str
    theta: float
    min_defect: float
    converged: bool
    verdict: str
    gram: float
    argmin: tuple[tuple[float, ...], tuple[float, ...]] = field(repr=False)
    metric_gram: float | None = None

    def to_json(self) -> dict:
        return {"spec": self.spec, "theta": self.theta, "min_defect": self.min_defect,
                "converged": self.converged, "verdict": self.verdict, "gram": self.gram,
                "metric_gram": self.metric_gram, "argmin": [list(self.argmin[0]), list(self.argmin[1])]}


def theta_scan(spec: BiquotientSpec, thetas, restarts: int = 64, config: MetricConfig | None = None,
               seed: int = 42) -> list[ScanRow]:
    """min_defect at each theta, every run drawing its starts from the same seed."""
    config = config or MetricConfig()
    rows = []
    for theta in thetas:
        result = min_defect(spec, theta, restarts, config, seed)
        verdict = classify_minimum(result.value, config)
        logger.info(f"{spec.name} theta={theta:.6f}: min defect {result.value:.3e} ({verdict})")
        rows.append(ScanRow(spec=spec.name, theta=float(theta), min_defect=result.value,
                            converged=result.converged, verdict=verdict, gram=result.gram,
                            argmin=(tuple(map(float, result.a)), tuple(map(float, result.b))),
                            metric_gram=result.metric_gram))
    return rows
