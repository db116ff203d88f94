"""Nonlinear dimensions and the explicit radial solutions of the extremal
equations.

With Q = 2n + 2 the ellipticity pair defines two exponents

    alpha = (lam / Lam) (Q - 1) + 1,    beta = (Lam / lam) (Q - 1) + 1,

which both equal Q exactly when lam = Lam.  The profile

    phi1(r) = C1 r^(2-alpha) + C2   (alpha < 2)
            = C1 log r + C2         (alpha = 2)
            = -C1 r^(2-alpha) + C2  (alpha > 2)

is concave increasing and phi2(r) = C1 r^(2-beta) + C2 is convex decreasing
(C1 >= 0); both solve pucci_plus(D^2 .) = 0 away from the pole, and their
negatives psi1 = -phi2, psi2 = -phi1 solve pucci_minus(D^2 .) = 0.  For
lam = Lam, n = 1 the phi2 profile with C1 = 1, C2 = 0 is rho^-2, the classical
fundamental solution of the Heisenberg Laplacian.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import core
from .pucci import Ellipticity, eigen_sym, pucci_of_sign
from .radial import RadialProfile, radial_hessian

FAMILIES = ("phi1", "phi2", "psi1", "psi2")
ALPHA_TWO_TOL = 1e-12


@dataclass(frozen=True)
class Exponents:
    alpha: float
    beta: float
    q: int
    alpha_is_two: bool

    def __post_init__(self):
        if not (self.alpha <= self.q <= self.beta):
            raise ValueError("exponents must satisfy alpha <= Q <= beta")


def exponents(e: Ellipticity, n: int) -> Exponents:
    q = 2 * n + 2
    alpha = (e.lam / e.Lam) * (q - 1) + 1.0
    beta = (e.Lam / e.lam) * (q - 1) + 1.0
    # log-branch detection: exact in rational arithmetic on the binary values,
    # with a tolerance fallback; silent misbranching would corrupt the
    # Hadamard checks downstream
    try:
        exact = Fraction(e.lam) / Fraction(e.Lam) * (q - 1) + 1 == 2
    except (TypeError, ValueError):
        exact = False
    return Exponents(alpha, beta, q, exact or abs(alpha - 2.0) <= ALPHA_TWO_TOL)


@dataclass(frozen=True)
class FundamentalSolution:
    """One of the four radial families, with free constants and a pole.

    phi1 / phi2 solve the 'plus' extremal equation, psi1 / psi2 the 'minus'
    one.  The pole (default: origin) enters through left translation:
    the function evaluates its profile at r = rho(pole^-1 o xi).
    """

    family: str
    exponents: Exponents
    n: int
    c1: float = 1.0
    c2: float = 0.0
    pole: core.GroupPoint | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.c1 < 0.0:
            raise ValueError("C1 must be nonnegative")
        if self.pole is not None and self.pole.n != self.n:
            raise ValueError("pole dimension mismatch")

    # profile sign: psi families are the negatives of the phi ones
    def _base_and_flip(self):
        if self.family in ("phi1", "psi2"):
            return "one", -1.0 if self.family == "psi2" else 1.0
        return "two", -1.0 if self.family == "psi1" else 1.0

    @property
    def operator_sign(self) -> str:
        """Which extremal equation the family solves away from the pole."""
        return "plus" if self.family in ("phi1", "phi2") else "minus"

    @property
    def monotonicity_tag(self) -> str:
        return ("concave_increasing"
                if self.family in ("phi1", "psi1") else "convex_decreasing")

    def profile_value(self, r: float) -> float:
        base, flip = self._base_and_flip()
        if base == "one":
            a = self.exponents.alpha
            if self.exponents.alpha_is_two:
                raw = self.c1 * np.log(r) + self.c2
            elif a < 2.0:
                raw = self.c1 * r ** (2.0 - a) + self.c2
            else:
                raw = -self.c1 * r ** (2.0 - a) + self.c2
        else:
            raw = self.c1 * r ** (2.0 - self.exponents.beta) + self.c2
        return float(flip * raw)

    def profile_d1(self, r: float) -> float:
        base, flip = self._base_and_flip()
        if base == "one":
            a = self.exponents.alpha
            if self.exponents.alpha_is_two:
                raw = self.c1 / r
            elif a < 2.0:
                raw = self.c1 * (2.0 - a) * r ** (1.0 - a)
            else:
                raw = self.c1 * (a - 2.0) * r ** (1.0 - a)
        else:
            b = self.exponents.beta
            raw = self.c1 * (2.0 - b) * r ** (1.0 - b)
        return float(flip * raw)

    def profile_d2(self, r: float) -> float:
        base, flip = self._base_and_flip()
        if base == "one":
            a = self.exponents.alpha
            if self.exponents.alpha_is_two:
                raw = -self.c1 / (r * r)
            elif a < 2.0:
                raw = self.c1 * (2.0 - a) * (1.0 - a) * r ** (-a)
            else:
                raw = self.c1 * (a - 2.0) * (1.0 - a) * r ** (-a)
        else:
            b = self.exponents.beta
            raw = self.c1 * (2.0 - b) * (1.0 - b) * r ** (-b)
        return float(flip * raw)

    def profile(self) -> RadialProfile:
        return RadialProfile(self.profile_value, self.profile_d1, self.profile_d2,
                             self.monotonicity_tag)

    def shifted(self, xi: core.GroupPoint) -> core.GroupPoint:
        """pole^-1 o xi (identity when the pole is the origin)."""
        if self.pole is None:
            return xi
        return core.group_compose(core.group_inverse(self.pole), xi)

    def radius(self, xi: core.GroupPoint) -> float:
        r = core.gauge_norm(self.shifted(xi))
        if r < core.RHO_SINGULAR:
            raise ValueError("evaluation at the pole")
        return r

    def __call__(self, xi: core.GroupPoint) -> float:
        return self.profile_value(self.radius(xi))

    def eval_with_derivatives(self, xi: core.GroupPoint):
        """(value, phi', phi'') at r = rho(pole^-1 o xi), for downstream use."""
        r = self.radius(xi)
        return self.profile_value(r), self.profile_d1(r), self.profile_d2(r)


def fundamental_solution(family: str, e: Ellipticity, n: int, c1: float = 1.0,
                         c2: float = 0.0,
                         pole: core.GroupPoint | None = None) -> FundamentalSolution:
    return FundamentalSolution(family, exponents(e, n), n, c1, c2, pole)


def verify_residual(fs: FundamentalSolution, e: Ellipticity, sample) -> float:
    """Max scaled residual of the matching extremal operator over the sample.

    The Hessian is assembled from the closed-form radial calculus at the
    left-translated point and fed to the generic eigenvalue-based operator;
    the scale at each point is 1 + the largest eigenvalue magnitude, so the
    tolerance stays relative near the pole where derivatives blow up.
    """
    worst = 0.0
    prof = fs.profile()
    for xi in sample:
        zeta = fs.shifted(xi)
        hmat = radial_hessian(prof, zeta)
        evs = eigen_sym(hmat).eigenvalues
        scale = 1.0 + float(np.abs(evs).max(initial=0.0))
        val = pucci_of_sign(hmat, e, fs.operator_sign)
        worst = max(worst, abs(val) / scale)
    return worst
