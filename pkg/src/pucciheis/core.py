"""Exact calculus on the Heisenberg group H^n = (R^{2n+1}, o).

Coordinates are xi = (x_1..x_n, y_1..y_n, t).  The horizontal frame consists
of the 2n left-invariant fields

    X_i     = d/dx_i + 2 y_i d/dt        (i = 1..n)
    X_{n+i} = d/dy_i - 2 x_i d/dt

whose span generates the missing vertical direction through brackets.  The
gauge norm rho(xi) = ((sum_i xi_i^2)^2 + t^2)^(1/4) is 1-homogeneous under the
anisotropic dilations (s x, s y, s^2 t), and d_H(xi, eta) = rho(eta^-1 o xi)
is the associated left-invariant distance.

Everything here is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np

RHO_SINGULAR = 1e-14


@dataclass(frozen=True)
class GroupPoint:
    """A point of H^n: group index n plus 2n+1 coordinates."""

    n: int
    coords: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("group index n must be a positive integer")
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (2 * self.n + 1,):
            raise ValueError(
                f"coords must have length {2 * self.n + 1} for n={self.n}, "
                f"got shape {c.shape}"
            )
        object.__setattr__(self, "coords", c)

    @property
    def q(self) -> int:
        """Homogeneous dimension Q = 2n + 2."""
        return 2 * self.n + 2

    @property
    def x(self) -> np.ndarray:
        return self.coords[: self.n]

    @property
    def y(self) -> np.ndarray:
        return self.coords[self.n : 2 * self.n]

    @property
    def t(self) -> float:
        return float(self.coords[2 * self.n])


def point(*coords, n=None) -> GroupPoint:
    """Convenience constructor; n is inferred from the coordinate count."""
    c = np.asarray(coords, dtype=float)
    if n is None:
        if c.size % 2 == 0:
            raise ValueError("coordinate count must be odd (2n+1)")
        n = (c.size - 1) // 2
    return GroupPoint(n, c)


def origin(n: int) -> GroupPoint:
    return GroupPoint(n, np.zeros(2 * n + 1))


@dataclass(frozen=True)
class SecondOrderData:
    """Value plus Euclidean gradient and (symmetric) Hessian of u at a point."""

    value: float
    euclid_gradient: np.ndarray
    euclid_hessian: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.euclid_gradient, dtype=float)
        h = np.asarray(self.euclid_hessian, dtype=float)
        if h.shape != (g.size, g.size):
            raise ValueError("hessian shape does not match gradient length")
        if not np.allclose(h, h.T, atol=1e-12 * (1.0 + np.abs(h).max(initial=0.0))):
            raise ValueError("euclid_hessian must be symmetric")
        object.__setattr__(self, "euclid_gradient", g)
        object.__setattr__(self, "euclid_hessian", 0.5 * (h + h.T))


def _check_same_n(a: GroupPoint, b: GroupPoint):
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: n={a.n} vs n={b.n}")


def group_compose(eta: GroupPoint, xi: GroupPoint) -> GroupPoint:
    """Group law eta o xi; the vertical coordinate picks up the symplectic twist
    2 sum_i (xi_i eta_{i+n} - xi_{i+n} eta_i)."""
    _check_same_n(eta, xi)
    n = eta.n
    out = np.empty(2 * n + 1)
    out[: 2 * n] = xi.coords[: 2 * n] + eta.coords[: 2 * n]
    twist = 2.0 * (np.dot(xi.x, eta.y) - np.dot(xi.y, eta.x))
    out[2 * n] = xi.t + eta.t + twist
    return GroupPoint(n, out)


def group_inverse(xi: GroupPoint) -> GroupPoint:
    """The inverse is coordinate negation."""
    return GroupPoint(xi.n, -xi.coords)


def dilate(s: float, xi: GroupPoint) -> GroupPoint:
    """Anisotropic dilation: horizontal coordinates scale by s, vertical by s^2."""
    if s <= 0:
        raise ValueError("dilation parameter must be positive")
    out = xi.coords.copy()
    out[: 2 * xi.n] *= s
    out[2 * xi.n] *= s * s
    return GroupPoint(xi.n, out)


def gauge_norm(xi: GroupPoint) -> float:
    """rho(xi) = ((sum_{i<=2n} xi_i^2)^2 + t^2)^(1/4)."""
    w = float(np.dot(xi.coords[: 2 * xi.n], xi.coords[: 2 * xi.n]))
    return (w * w + xi.t * xi.t) ** 0.25


def h_distance(xi: GroupPoint, eta: GroupPoint) -> float:
    """Left-invariant gauge distance rho(eta^-1 o xi)."""
    _check_same_n(xi, eta)
    return gauge_norm(group_compose(group_inverse(eta), xi))


def sigma_matrix(xi: GroupPoint) -> np.ndarray:
    """2n x (2n+1) horizontal frame: rows are the coefficients of X_1..X_{2n},
    block form [I_n | 0 | 2y ; 0 | I_n | -2x]."""
    n = xi.n
    sig = np.zeros((2 * n, 2 * n + 1))
    sig[: 2 * n, : 2 * n] = np.eye(2 * n)
    sig[:n, 2 * n] = 2.0 * xi.y
    sig[n:, 2 * n] = -2.0 * xi.x
    return sig


def horizontal_gradient(d: SecondOrderData, xi: GroupPoint) -> np.ndarray:
    """sigma(xi) @ euclidean gradient."""
    return sigma_matrix(xi) @ d.euclid_gradient


def heisenberg_hessian(d: SecondOrderData, xi: GroupPoint) -> np.ndarray:
    """Intrinsic Hessian sigma D^2u sigma^T, symmetrized."""
    sig = sigma_matrix(xi)
    h = sig @ d.euclid_hessian @ sig.T
    return 0.5 * (h + h.T)


def _gauge_parts(xi: GroupPoint):
    w = float(np.dot(xi.coords[: 2 * xi.n], xi.coords[: 2 * xi.n]))
    rho = (w * w + xi.t * xi.t) ** 0.25
    if rho < RHO_SINGULAR:
        raise ValueError("gauge derivatives are singular at rho = 0")
    return w, rho


def gauge_gradient(xi: GroupPoint) -> np.ndarray:
    """Closed-form horizontal gradient of the gauge norm (rho > 0):

        X_i rho     = x_i |grad|^2 / rho + y_i t / rho^3
        X_{n+i} rho = y_i |grad|^2 / rho - x_i t / rho^3

    with |grad|^2 = (sum_{i<=2n} xi_i^2) / rho^2.
    """
    w, rho = _gauge_parts(xi)
    a = w / rho**3  # |grad rho|^2 / rho
    b = xi.t / rho**3
    g = np.empty(2 * xi.n)
    g[: xi.n] = xi.x * a + xi.y * b
    g[xi.n :] = xi.y * a - xi.x * b
    return g


def gauge_coupling_blocks(xi: GroupPoint):
    """The n x n blocks B, C of the gauge Hessian:
    b_ij = x_i x_j + y_i y_j, c_ij = x_i y_j - x_j y_i (so C^T = -C)."""
    bmat = np.outer(xi.x, xi.x) + np.outer(xi.y, xi.y)
    cmat = np.outer(xi.x, xi.y) - np.outer(xi.y, xi.x)
    return bmat, cmat


def gauge_hessian(xi: GroupPoint) -> np.ndarray:
    """Closed-form intrinsic Hessian of rho (rho > 0):

        D^2 rho = -(3/rho) g (x) g + (|g|^2/rho) I_2n + (2/rho^3) [[B, C], [-C, B]]
    """
    w, rho = _gauge_parts(xi)
    g = gauge_gradient(xi)
    gnorm2 = w / rho**2
    bmat, cmat = gauge_coupling_blocks(xi)
    kmat = np.block([[bmat, cmat], [-cmat, bmat]])
    h = (
        -(3.0 / rho) * np.outer(g, g)
        + (gnorm2 / rho) * np.eye(2 * xi.n)
        + (2.0 / rho**3) * kmat
    )
    return 0.5 * (h + h.T)


def flow_step(xi: GroupPoint, i: int, h: float) -> GroupPoint:
    """Exact time-h flow of the field X_i (1-based index, i = 1..2n).

    The horizontal fields have affine coefficients, so flows are straight
    lines: for i <= n the i-th coordinate advances by h and t by 2 h y_i; for
    i > n the coordinate advances by h and t by -2 h x_{i-n}.
    """
    n = xi.n
    if not 1 <= i <= 2 * n:
        raise ValueError(f"field index must be in 1..{2 * n}")
    out = xi.coords.copy()
    out[i - 1] += h
    if i <= n:
        out[2 * n] += 2.0 * h * xi.coords[n + i - 1]
    else:
        out[2 * n] -= 2.0 * h * xi.coords[i - n - 1]
    return GroupPoint(n, out)


def flow_gradient(f, xi: GroupPoint, h: float = 1e-6) -> np.ndarray:
    """Central differences of f along the exact X_i flows; O(h^2) fallback for
    user-supplied functions without derivative data."""
    g = np.empty(2 * xi.n)
    for i in range(1, 2 * xi.n + 1):
        g[i - 1] = (f(flow_step(xi, i, h)) - f(flow_step(xi, i, -h))) / (2.0 * h)
    return g


def flow_hessian(f, xi: GroupPoint, h: float = 1e-4) -> np.ndarray:
    """Symmetrized second differences along the exact flows.

    Diagonal entries use the three-point second difference along one flow;
    off-diagonal entries average the two four-point cross differences, which
    reproduces (X_i X_j f)_sym to O(h^2) for smooth f.
    """
    m = 2 * xi.n
    out = np.empty((m, m))
    f0 = f(xi)
    for i in range(1, m + 1):
        out[i - 1, i - 1] = (
            f(flow_step(xi, i, h)) - 2.0 * f0 + f(flow_step(xi, i, -h))
        ) / (h * h)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            a = _cross_difference(f, xi, i, j, h)
            b = _cross_difference(f, xi, j, i, h)
            out[i - 1, j - 1] = out[j - 1, i - 1] = 0.5 * (a + b)
    return out


def _cross_difference(f, xi, i, j, h):
    # flow along X_i first, then X_j
    pp = f(flow_step(flow_step(xi, i, h), j, h))
    pm = f(flow_step(flow_step(xi, i, h), j, -h))
    mp = f(flow_step(flow_step(xi, i, -h), j, h))
    mm = f(flow_step(flow_step(xi, i, -h), j, -h))
    return (pp - pm - mp + mm) / (4.0 * h * h)


def is_characteristic(domain, xi0: GroupPoint, tol: float = 1e-10,
                      boundary_tol: float = 1e-8) -> bool:
    """True iff the horizontal gradient of the domain's defining function
    vanishes at the boundary point xi0 (within tol).

    `domain` must expose level_value(xi) and level_gradient(xi).
    """
    phi0 = domain.level_value(xi0)
    grad = np.asarray(domain.level_gradient(xi0), dtype=float)
    gnorm = float(np.linalg.norm(grad))
    if abs(phi0) > boundary_tol * (1.0 + gnorm):
        raise ValueError(f"xi0 is not on the boundary: Phi(xi0) = {phi0}")
    if gnorm < tol:
        raise ValueError("defining function has vanishing Euclidean gradient at xi0")
    hg = sigma_matrix(xi0) @ grad
    return float(np.linalg.norm(hg)) <= tol
