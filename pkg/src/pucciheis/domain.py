"""Level-set domains Omega = {Phi > 0} with exterior gauge-ball registries.

A DomainSpec carries the defining function Phi (positive inside, zero on the
boundary, nonvanishing Euclidean gradient there), a bounding box, and the
list of exterior gauge balls used by the barrier constructions: a ball
B_r0(eta0) outside the domain whose closure meets the closure of Omega only
at the boundary point xi0.

Gauge balls and annuli come with analytic derivatives of Phi; generic
level-set domains may supply callables or fall back to central differences.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import core


@dataclass(frozen=True)
class ExteriorBall:
    xi0: core.GroupPoint
    eta0: core.GroupPoint
    r0: float


@dataclass
class DomainSpec:
    n: int
    kind: str  # {gauge_ball, gauge_annulus, level_set_general}
    value_fn: Callable  # coords (2n+1,) -> float
    gradient_fn: Callable | None = None
    hessian_fn: Callable | None = None
    bounding_box: np.ndarray | None = None  # (2n+1, 2) of (lo, hi)
    exterior_balls: list = field(default_factory=list)
    fd_step: float = 1e-6

    # -- defining function ------------------------------------------------
    def level_value(self, xi) -> float:
        return float(self.value_fn(self._coords(xi)))

    def level_gradient(self, xi) -> np.ndarray:
        c = self._coords(xi)
        if self.gradient_fn is not None:
            return np.asarray(self.gradient_fn(c), dtype=float)
        return self._fd_gradient(c)

    def level_hessian(self, xi) -> np.ndarray:
        c = self._coords(xi)
        if self.hessian_fn is not None:
            h = np.asarray(self.hessian_fn(c), dtype=float)
            return 0.5 * (h + h.T)
        return self._fd_hessian(c)

    def inside(self, xi) -> bool:
        return self.level_value(xi) > 0.0

    def level_values(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized Phi over an (N, 2n+1) array (loop fallback)."""
        return np.array([self.value_fn(p) for p in pts])

    def _coords(self, xi):
        if isinstance(xi, core.GroupPoint):
            return xi.coords
        return np.asarray(xi, dtype=float)

    def _fd_gradient(self, c):
        g = np.empty(c.size)
        for i in range(c.size):
            step = np.zeros(c.size)
            step[i] = self.fd_step
            g[i] = (self.value_fn(c + step) - self.value_fn(c - step)) / (2 * self.fd_step)
        return g

    def _fd_hessian(self, c):
        m = c.size
        h = np.empty((m, m))
        s = self.fd_step ** 0.5  # larger step for second differences
        f0 = self.value_fn(c)
        for i in range(m):
            ei = np.zeros(m)
            ei[i] = s
            h[i, i] = (self.value_fn(c + ei) - 2 * f0 + self.value_fn(c - ei)) / (s * s)
            for j in range(i + 1, m):
                ej = np.zeros(m)
                ej[j] = s
                hij = (self.value_fn(c + ei + ej) - self.value_fn(c + ei - ej)
                       - self.value_fn(c - ei + ej) + self.value_fn(c - ei - ej)) / (4 * s * s)
                h[i, j] = h[j, i] = hij
        return h


# -- gauge ball / annulus ------------------------------------------------

def _translate_parts(center: core.GroupPoint):
    """Affine map xi -> center^-1 o xi and its (constant) Jacobian."""
    n = center.n
    c = center.coords
    jac = np.eye(2 * n + 1)
    jac[2 * n, :n] = -2.0 * c[n:2 * n]
    jac[2 * n, n:2 * n] = 2.0 * c[:n]

    def zeta(coords):
        out = coords.copy()
        out[: 2 * n] -= c[: 2 * n]
        twist = 2.0 * (np.dot(coords[:n], c[n:2 * n]) - np.dot(coords[n:2 * n], c[:n]))
        out[2 * n] = coords[2 * n] - c[2 * n] - twist
        return out

    return zeta, jac


def _gauge4(z, n):
    w = float(np.dot(z[: 2 * n], z[: 2 * n]))
    return w * w + z[2 * n] ** 2, w


def _gauge4_grad(z, n):
    _, w = _gauge4(z, n)
    g = np.empty(2 * n + 1)
    g[: 2 * n] = 4.0 * w * z[: 2 * n]
    g[2 * n] = 2.0 * z[2 * n]
    return g


def _gauge4_hess(z, n):
    _, w = _gauge4(z, n)
    h = np.zeros((2 * n + 1, 2 * n + 1))
    zh = z[: 2 * n]
    h[: 2 * n, : 2 * n] = 4.0 * w * np.eye(2 * n) + 8.0 * np.outer(zh, zh)
    h[2 * n, 2 * n] = 2.0
    return h


def _axis_point(center: core.GroupPoint, dt: float) -> core.GroupPoint:
    out = center.coords.copy()
    out[2 * center.n] += dt
    return core.GroupPoint(center.n, out)


def gauge_ball(center: core.GroupPoint, radius: float,
               exterior_radius: float | None = None) -> DomainSpec:
    """Omega = {rho(center^-1 o xi) < radius}, Phi = radius^4 - rho^4.

    The two characteristic boundary points are the poles center o (0,..,0,
    +-radius^2); vertical exterior balls tangent there are registered (a
    gauge ball centered on the axis above/below touches exactly at its pole).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = center.n
    zeta, jac = _translate_parts(center)
    r4 = radius ** 4

    def value(c):
        return r4 - _gauge4(zeta(c), n)[0]

    def grad(c):
        return -(jac.T @ _gauge4_grad(zeta(c), n))

    def hess(c):
        return -(jac.T @ _gauge4_hess(zeta(c), n) @ jac)

    box = np.empty((2 * n + 1, 2))
    cc = center.coords
    box[: 2 * n, 0] = cc[: 2 * n] - radius
    box[: 2 * n, 1] = cc[: 2 * n] + radius
    box[2 * n] = (cc[2 * n] - radius ** 2, cc[2 * n] + radius ** 2)

    r0 = exterior_radius if exterior_radius is not None else radius
    balls = []
    for sgn in (+1.0, -1.0):
        pole = _axis_point(center, sgn * radius ** 2)
        eta0 = _axis_point(center, sgn * (radius ** 2 + r0 ** 2))
        balls.append(ExteriorBall(pole, eta0, r0))

    dom = DomainSpec(n, "gauge_ball", value, grad, hess, box, balls)
    dom.level_values = lambda pts: r4 - _gauge4_batch(pts, center)  # type: ignore
    return dom


def gauge_annulus(center: core.GroupPoint, r1: float, r2: float,
                  exterior_radius: float | None = None) -> DomainSpec:
    """Omega = {r1 < rho(center^-1 o xi) < r2}; Phi is the min of the two
    sphere defining functions (the active branch supplies derivatives)."""
    if not (0 < r1 < r2):
        raise ValueError("requires 0 < R1 < R2")
    n = center.n
    zeta, jac = _translate_parts(center)

    def value(c):
        q, _ = _gauge4(zeta(c), n)
        return min(r2 ** 4 - q, q - r1 ** 4)

    def grad(c):
        z = zeta(c)
        q, _ = _gauge4(z, n)
        sgn = -1.0 if (r2 ** 4 - q) <= (q - r1 ** 4) else 1.0
        return sgn * (jac.T @ _gauge4_grad(z, n))

    def hess(c):
        z = zeta(c)
        q, _ = _gauge4(z, n)
        sgn = -1.0 if (r2 ** 4 - q) <= (q - r1 ** 4) else 1.0
        return sgn * (jac.T @ _gauge4_hess(z, n) @ jac)

    box = np.empty((2 * n + 1, 2))
    cc = center.coords
    box[: 2 * n, 0] = cc[: 2 * n] - r2
    box[: 2 * n, 1] = cc[: 2 * n] + r2
    box[2 * n] = (cc[2 * n] - r2 ** 2, cc[2 * n] + r2 ** 2)

    r0 = exterior_radius if exterior_radius is not None else 0.5 * r1
    balls = []
    for sgn in (+1.0, -1.0):
        # outer boundary poles: vertical balls outside, externally tangent
        pole = _axis_point(center, sgn * r2 ** 2)
        eta0 = _axis_point(center, sgn * (r2 ** 2 + r0 ** 2))
        balls.append(ExteriorBall(pole, eta0, r0))
        # inner boundary poles: balls inside the hole, internally tangent
        pole_in = _axis_point(center, sgn * r1 ** 2)
        eta_in = _axis_point(center, sgn * (r1 ** 2 - r0 ** 2))
        balls.append(ExteriorBall(pole_in, eta_in, r0))

    dom = DomainSpec(n, "gauge_annulus", value, grad, hess, box, balls)

    def batch(pts):
        q = _gauge4_batch(pts, center)
        return np.minimum(r2 ** 4 - q, q - r1 ** 4)

    dom.level_values = batch  # type: ignore
    return dom


def _gauge4_batch(pts: np.ndarray, center: core.GroupPoint) -> np.ndarray:
    n = center.n
    c = center.coords
    zh = pts[:, : 2 * n] - c[: 2 * n]
    twist = 2.0 * (pts[:, :n] @ c[n:2 * n] - pts[:, n:2 * n] @ c[:n])
    zt = pts[:, 2 * n] - c[2 * n] - twist
    w = np.einsum("ij,ij->i", zh, zh)
    return w * w + zt * zt


def level_set_domain(n, value_fn, gradient_fn=None, hessian_fn=None,
                     bounding_box=None, exterior_balls=None) -> DomainSpec:
    return DomainSpec(n, "level_set_general", value_fn, gradient_fn, hessian_fn,
                      None if bounding_box is None else np.asarray(bounding_box, float),
                      list(exterior_balls or []))


# -- canonical characteristic-point model --------------------------------

def vertical_tangent_domain(t0: float, n: int = 1) -> DomainSpec:
    """The model domain for the characteristic-point ratio: the origin is a
    characteristic boundary point and the exterior gauge ball is centered at
    (0,..,0,t0), t0 < 0, radius sqrt(|t0|).

    Near the origin the boundary is the graph t = h(w), w = sum xi_i^2,
    h = t0 (1 - sqrt(1 - w^2/t0^2)), and the defining function is the scaled
    graph function Phi = s0 (t - h) with

        s0 = sqrt(1 + t0^2) / (2 |t0|),

    the normalization under which the gradient ratio
    |grad_H Phi| / |grad_H rho(eta0^-1 o xi)| tends to the model constant
    sqrt(|t0| + 1/|t0|) (see characteristic_ratio_limit).
    """
    if t0 >= 0:
        raise ValueError("t0 must be negative")
    if n < 1:
        raise ValueError("n must be >= 1")
    s0 = np.sqrt(1.0 + t0 * t0) / (2.0 * abs(t0))
    m = 2 * n

    def hfun(w):
        arg = max(0.0, 1.0 - (w * w) / (t0 * t0))
        return t0 * (1.0 - np.sqrt(arg))

    def value(c):
        w = float(np.dot(c[:m], c[:m]))
        return s0 * (c[m] - hfun(w))

    def grad(c):
        w = float(np.dot(c[:m], c[:m]))
        arg = 1.0 - (w * w) / (t0 * t0)
        if arg <= 0.0:
            raise ValueError("outside the graph chart of the model domain")
        dh_dw = w / (t0 * np.sqrt(arg))
        g = np.empty(m + 1)
        g[:m] = -s0 * dh_dw * 2.0 * c[:m]
        g[m] = s0
        return g

    rad = np.sqrt(abs(t0))
    box = np.empty((m + 1, 2))
    box[:m] = (-rad, rad)
    box[m] = (-abs(t0), abs(t0))
    ball = ExteriorBall(core.origin(n),
                        core.GroupPoint(n, np.r_[np.zeros(m), t0]),
                        np.sqrt(abs(t0)))
    return DomainSpec(n, "level_set_general", value, grad, None, box, [ball])


def characteristic_ratio_limit(t0: float) -> float:
    """Closed-form ratio limit for the model domain: sqrt(|t0| + 1/|t0|);
    it blows up as the exterior ball degenerates (t0 -> 0)."""
    if t0 >= 0:
        raise ValueError("t0 must be negative")
    a = abs(t0)
    return float(np.sqrt(a + 1.0 / a))
