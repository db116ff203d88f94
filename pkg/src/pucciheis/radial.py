"""Closed-form intrinsic calculus for gauge-radial functions f(rho).

For u(xi) = f(rho(xi)) the intrinsic Hessian is

    D^2 u = f'(rho) D^2 rho + f''(rho) g (x) g,      g = grad_H rho,

and its spectrum is explicit: |g|^2 f'' (simple), 3 |g|^2 f'/rho (simple) and
|g|^2 f'/rho with multiplicity 2n-2; on the vertical axis (g = 0) every
eigenvalue vanishes.  This makes the extremal operators on radial functions a
pair of one-dimensional expressions in (f', f''), grouped by the signs that a
concave-increasing or convex-decreasing profile fixes.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core
from .pucci import Ellipticity, Spectrum

TAGS = ("concave_increasing", "convex_decreasing", "none")


@dataclass(frozen=True)
class RadialProfile:
    """Scalar profile rho -> phi(rho) with first and second derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    monotonicity_tag: str = "none"

    def __post_init__(self):
        if self.monotonicity_tag not in TAGS:
            raise ValueError(f"unknown monotonicity tag {self.monotonicity_tag!r}")


def verify_tag(profile: RadialProfile, rho_interval=(0.1, 10.0), points: int = 64,
               slack: float = 1e-12) -> bool:
    """Sample phi', phi'' on the interval and check the signs the tag claims."""
    if profile.monotonicity_tag == "none":
        return True
    rhos = np.linspace(rho_interval[0], rho_interval[1], points)
    d1 = np.array([profile.d1(r) for r in rhos])
    d2 = np.array([profile.d2(r) for r in rhos])
    scale = 1.0 + max(np.abs(d1).max(), np.abs(d2).max())
    tol = slack * scale
    if profile.monotonicity_tag == "concave_increasing":
        return bool((d1 >= -tol).all() and (d2 <= tol).all())
    return bool((d1 <= tol).all() and (d2 >= -tol).all())


def radial_hessian(profile: RadialProfile, xi: core.GroupPoint) -> np.ndarray:
    """Assemble f' D^2 rho + f'' g (x) g at xi (rho > 0)."""
    rho = core.gauge_norm(xi)
    if rho < core.RHO_SINGULAR:
        raise ValueError("radial Hessian undefined at rho = 0")
    g = core.gauge_gradient(xi)
    return profile.d1(rho) * core.gauge_hessian(xi) + profile.d2(rho) * np.outer(g, g)


def radial_spectrum(profile: RadialProfile, xi: core.GroupPoint) -> Spectrum:
    """Eigenvalues of the radial Hessian without assembling it:
    {|g|^2 f'', 3 |g|^2 f'/rho, |g|^2 f'/rho (x (2n-2))}, ascending;
    all zero when the horizontal gradient of rho vanishes."""
    n = xi.n
    rho = core.gauge_norm(xi)
    if rho < core.RHO_SINGULAR:
        raise ValueError("radial spectrum undefined at rho = 0")
    w = float(np.dot(xi.coords[: 2 * n], xi.coords[: 2 * n]))
    gnorm2 = w / rho**2
    if gnorm2 == 0.0:
        return Spectrum(np.zeros(2 * n))
    fp = profile.d1(rho)
    fpp = profile.d2(rho)
    evs = np.concatenate((
        [gnorm2 * fpp, 3.0 * gnorm2 * fp / rho],
        np.full(2 * n - 2, gnorm2 * fp / rho),
    ))
    return Spectrum(np.sort(evs))


@dataclass
class RadialEigenbasis:
    """Distinguished eigenbasis at xi: w (the f''-direction), v (the 3 f'/rho
    direction), and 2n-2 orthonormal vectors spanning the kernel of the
    coupling block [[B, C], [-C, B]]."""

    w: np.ndarray
    v: np.ndarray
    kernel: np.ndarray  # shape (2n-2, 2n)
    max_residual: float  # worst ||H q - e q|| over all emitted vectors


def _kernel_candidates(g: np.ndarray, xi: core.GroupPoint):
    """Candidate kernel vectors built from products of first derivatives of
    rho, following the explicit construction (pair families indexed by
    k = 1..floor(n/2), the odd-n special pair, and the tangential vectors
    orthogonal to both the x and y blocks)."""
    n = xi.n
    cands = []
    for k in range(1, n // 2 + 1):
        i2k, i2k1 = 2 * k - 1, 2 * k - 2  # zero-based: 2k -> 2k-1, 2k-1 -> 2k-2
        eta = np.zeros(2 * n)
        eta[i2k] = g[i2k] * g[n + i2k1] - g[i2k1] * g[n + i2k]
        eta[n + i2k1] = -(g[i2k] ** 2 + g[n + i2k] ** 2)
        eta[n + i2k] = g[i2k1] * g[i2k] + g[n + i2k1] * g[n + i2k]
        cands.append(eta)
        etah = np.zeros(2 * n)
        etah[i2k1] = eta[n + i2k1]
        etah[i2k] = eta[n + i2k]
        etah[n + i2k] = -eta[i2k]
        cands.append(etah)
    if n % 2 == 1 and n >= 2:
        x, y = xi.x, xi.y
        bnn = x[n - 1] ** 2 + y[n - 1] ** 2
        if bnn > 1e-14 * (1.0 + float(np.dot(x, x) + np.dot(y, y))):
            eta = np.zeros(2 * n)
            eta[n - 1] = (x[n - 2] * y[n - 1] - x[n - 1] * y[n - 2]) / bnn
            eta[2 * n - 2] = 1.0
            eta[2 * n - 1] = -(x[n - 2] * x[n - 1] + y[n - 1] * y[n - 2]) / bnn
            cands.append(eta)
            etah = np.zeros(2 * n)
            etah[n - 2] = eta[2 * n - 2]
            etah[n - 1] = eta[2 * n - 1]
            etah[2 * n - 1] = -eta[n - 1]
            cands.append(etah)
    if n >= 3:
        # tangential family: (eta_1..eta_n, 0..0) with eta orthogonal to both
        # the x block and the y block
        basis = _null_space(np.vstack((xi.x, xi.y)))
        for col in basis.T:
            vec = np.zeros(2 * n)
            vec[:n] = col
            cands.append(vec)
    return cands


def _null_space(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    _, s, vt = np.linalg.svd(a)
    rank = int((s > tol * max(1.0, s.max(initial=0.0))).sum())
    return vt[rank:].T


def radial_eigenvectors(xi: core.GroupPoint,
                        profile: RadialProfile | None = None) -> RadialEigenbasis:
    """Construct and verify the distinguished eigenbasis at xi (needs g != 0).

    The verification profile defaults to phi(rho) = rho^3 + 2 rho, which makes
    all three closed-form eigenvalues distinct at generic points.
    """
    n = xi.n
    rho = core.gauge_norm(xi)
    g = core.gauge_gradient(xi)
    gnorm = float(np.linalg.norm(g))
    if gnorm < 1e-13:
        raise ValueError("no distinguished eigenbasis: grad_H rho vanishes here")
    if profile is None:
        profile = RadialProfile(
            value=lambda r: r**3 + 2.0 * r,
            d1=lambda r: 3.0 * r**2 + 2.0,
            d2=lambda r: 6.0 * r,
        )
    w = g / gnorm
    v = np.concatenate((g[n:], -g[:n]))
    v = v / np.linalg.norm(v)

    kernel = []
    for cand in _kernel_candidates(g, xi):
        vec = cand.astype(float)
        # orthogonalize against w, v and already accepted kernel vectors
        for q in [w, v] + kernel:
            vec -= np.dot(vec, q) * q
        norm = np.linalg.norm(vec)
        if norm > 1e-8 * (1.0 + np.linalg.norm(cand)):
            kernel.append(vec / norm)
        if len(kernel) == 2 * n - 2:
            break
    if len(kernel) != 2 * n - 2:
        raise ValueError(
            f"kernel construction degenerate at this point: found {len(kernel)} "
            f"of {2 * n - 2} vectors"
        )

    hmat = radial_hessian(profile, xi)
    gnorm2 = gnorm * gnorm
    fp, fpp = profile.d1(rho), profile.d2(rho)
    groups = [(w, gnorm2 * fpp), (v, 3.0 * gnorm2 * fp / rho)]
    groups += [(q, gnorm2 * fp / rho) for q in kernel]
    max_res = 0.0
    for q, ev in groups:
        max_res = max(max_res, float(np.linalg.norm(hmat @ q - ev * q)))
    return RadialEigenbasis(w, v, np.array(kernel).reshape(2 * n - 2, 2 * n),
                            max_res)


def pucci_radial(profile: RadialProfile, xi: core.GroupPoint, e: Ellipticity,
                 sign: str) -> float:
    """Extremal operator on f(rho) via the sign grouping the tag fixes:

        plus  on concave-increasing  (= minus on convex-decreasing):
            |g|^2 [ -lam (2n+1) f'/rho - Lam f'' ]
        plus  on convex-decreasing   (= minus on concave-increasing):
            |g|^2 [ -lam f'' - Lam (2n+1) f'/rho ]
    """
    tag = profile.monotonicity_tag
    if tag == "none":
        raise ValueError("profile tag is 'none': extremal grouping is ambiguous")
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    n = xi.n
    rho = core.gauge_norm(xi)
    if rho < core.RHO_SINGULAR:
        raise ValueError("undefined at rho = 0")
    w = float(np.dot(xi.coords[: 2 * n], xi.coords[: 2 * n]))
    gnorm2 = w / rho**2
    fp, fpp = profile.d1(rho), profile.d2(rho)
    m = 2 * n + 1
    if (sign == "plus") == (tag == "concave_increasing"):
        bracket = -e.lam * m * fp / rho - e.Lam * fpp
    else:
        bracket = -e.lam * fpp - e.Lam * m * fp / rho
    return float(gnorm2 * bracket)
