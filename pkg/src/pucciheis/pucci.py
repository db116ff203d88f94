"""Pucci extremal operators and their Heisenberg compositions.

With ellipticity constants 0 < lambda <= Lambda and e_i the eigenvalues of a
symmetric matrix M:

    pucci_minus(M) = -Lambda * sum_{e_i > 0} e_i - lambda * sum_{e_i < 0} e_i
    pucci_plus(M)  = -Lambda * sum_{e_i < 0} e_i - lambda * sum_{e_i > 0} e_i

These are the inf / sup of -tr(B M) over symmetric B with spectrum in
[lambda, Lambda], satisfy pucci_plus(M) = -pucci_minus(-M), and collapse to
-lambda * tr(M) when lambda = Lambda.  Composed with the intrinsic Heisenberg
Hessian they give the extremal operators bounding every admissible F.
"""

from dataclasses import dataclass, field

import numpy as np

from . import core
from .rng import SplitMix64

EIG_ZERO_REL = 1e-12  # |e| below EIG_ZERO_REL * (1 + ||M||) counts as zero


@dataclass(frozen=True)
class Ellipticity:
    """The pair 0 < lam <= Lam."""

    lam: float
    Lam: float

    def __post_init__(self):
        if not (0.0 < self.lam <= self.Lam):
            raise ValueError(
                f"requires 0 < lambda <= Lambda, got ({self.lam}, {self.Lam})"
            )


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray | None = None  # orthonormal columns, if computed


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = 1.0 + np.abs(m).max(initial=0.0)
    if np.abs(m - m.T).max(initial=0.0) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return 0.5 * (m + m.T)


def eigen_sym(m, tol: float = 1e-13, max_sweeps: int = 50) -> Spectrum:
    """Full spectral decomposition of a small symmetric matrix by cyclic
    Jacobi rotations (dimensions up to ~16; deterministic, dependency-free).
    """
    a = _check_symmetric(m).copy()
    dim = a.shape[0]
    v = np.eye(dim)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0)
        if off <= tol * scale:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                if abs(apq) <= 0.25 * tol * scale / (dim * dim):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(dim)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = 0.5 * (a + a.T)
                v = v @ rot
    evs = np.diag(a).copy()
    order = np.argsort(evs, kind="stable")
    return Spectrum(evs[order], v[:, order])


def _signed_sums(m, e: Ellipticity):
    evs = eigen_sym(m).eigenvalues
    thresh = EIG_ZERO_REL * (1.0 + np.abs(evs).max(initial=0.0))
    pos = evs[evs > thresh].sum()
    neg = evs[evs < -thresh].sum()
    return pos, neg


def pucci_minus(m, e: Ellipticity) -> float:
    pos, neg = _signed_sums(m, e)
    return float(-e.Lam * pos - e.lam * neg)


def pucci_plus(m, e: Ellipticity) -> float:
    pos, neg = _signed_sums(m, e)
    return float(-e.Lam * neg - e.lam * pos)


def pucci_of_sign(m, e: Ellipticity, sign: str) -> float:
    if sign == "minus":
        return pucci_minus(m, e)
    if sign == "plus":
        return pucci_plus(m, e)
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def pucci_heisenberg(d: core.SecondOrderData, xi: core.GroupPoint,
                     e: Ellipticity, sign: str) -> float:
    """Extremal operator applied to the intrinsic Hessian of u at xi."""
    return pucci_of_sign(core.heisenberg_hessian(d, xi), e, sign)


def pucci_operator(sign: str, e: Ellipticity):
    """Operator F(xi, H) acting on the 2n x 2n intrinsic Hessian."""

    def f(xi, hmat):
        return pucci_of_sign(hmat, e, sign)

    return f


def linear_trace_operator(a_matrix, e: Ellipticity | None = None):
    """F = -tr(A H) with A symmetric; admissible when spec(A) in [lam, Lam]."""
    a = _check_symmetric(a_matrix)
    if e is not None:
        evs = eigen_sym(a).eigenvalues
        if evs[0] < e.lam - 1e-12 or evs[-1] > e.Lam + 1e-12:
            raise ValueError("linear_trace matrix spectrum not inside [lambda, Lambda]")

    def f(xi, hmat):
        return float(-np.trace(a @ hmat))

    return f


@dataclass
class EllipticityReport:
    """Result of sampling the structural (degenerate ellipticity) conditions."""

    samples: int
    worst_lower_violation: float  # max over samples of lam*tr(..) - (F(M)-F(M+P))
    worst_upper_violation: float  # max over samples of (F(M)-F(M+P)) - Lam*tr(..)
    worst_zero_violation: float  # max |F(xi, 0)|
    tol: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        worst = max(self.worst_lower_violation, self.worst_upper_violation,
                    self.worst_zero_violation)
        return worst <= self.tol


def check_degenerate_ellipticity(f, e: Ellipticity, n: int, samples: int = 200,
                                 seed: int = 0, tol: float = 1e-10) -> EllipticityReport:
    """Sample random symmetric M and P >= 0 on S_{2n+1} and verify

        lam tr(sig P sig^T) <= F(sig M sig^T) - F(sig (M+P) sig^T)
                            <= Lam tr(sig P sig^T),

    together with F(xi, 0) = 0.  The report carries the worst violations.
    """
    rng = SplitMix64(seed)
    dim = 2 * n + 1
    worst_lo = worst_hi = worst_zero = 0.0
    failures = []
    for k in range(samples):
        xi = core.GroupPoint(n, rng.uniform(dim, -2.0, 2.0))
        sig = core.sigma_matrix(xi)
        m = rng.uniform((dim, dim), -2.0, 2.0)
        m = 0.5 * (m + m.T)
        r = rng.uniform((dim, dim), -1.0, 1.0)
        p = r @ r.T  # nonnegative definite
        lower = e.lam * float(np.trace(sig @ p @ sig.T))
        upper = e.Lam * float(np.trace(sig @ p @ sig.T))
        drop = f(xi, sig @ m @ sig.T) - f(xi, sig @ (m + p) @ sig.T)
        zero_dev = abs(f(xi, np.zeros((2 * n, 2 * n))))
        scale = 1.0 + abs(lower) + abs(upper)
        lo_viol = max(0.0, lower - drop) / scale
        hi_viol = max(0.0, drop - upper) / scale
        worst_lo = max(worst_lo, lo_viol)
        worst_hi = max(worst_hi, hi_viol)
        worst_zero = max(worst_zero, zero_dev)
        if max(lo_viol, hi_viol, zero_dev) > tol:
            failures.append((k, lo_viol, hi_viol, zero_dev))
    return EllipticityReport(samples, worst_lo, worst_hi, worst_zero, tol, failures)
