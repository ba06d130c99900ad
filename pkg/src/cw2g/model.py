"""Model parameters, Hamiltonian, regime classification, and the free-energy
surface of the two-group Curie-Weiss model.

The model couples two groups of +/-1 spins through a symmetric 2x2 coupling
matrix J = [[J1, Jbar], [Jbar, J2]].  Its inverse L = J^-1 enters the
free-energy function F whose minima control the large-N behaviour of the
group magnetizations.  The critical surface is where J^-1 - diag(alpha) is
singular with positive diagonal; there the Hessian of F at the origin is
degenerate along one direction and fluctuations scale as N^(3/4).

Sign convention: we store Lbar = Jbar / det(J) >= 0, so the off-diagonal of
J^-1 is -Lbar and F carries the cross term -Lbar*y1*y2.  This keeps
Lbar = sqrt((L1-alpha1)(L2-alpha2)) on the critical surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "CouplingMatrix",
    "GroupStructure",
    "InverseCoupling",
    "RegimeTag",
    "Regime",
    "MinimumReport",
    "ln_cosh",
    "invert_coupling",
    "classify_regime",
    "hamiltonian",
    "free_energy",
    "grad_free_energy",
    "directional_second_derivative",
    "verify_unique_minimum",
]


def ln_cosh(y):
    """Overflow-safe log(cosh(y)), valid for |y| up to ~1e308.

    Uses ln cosh y = |y| + log((1 + exp(-2|y|)) / 2).
    """
    a = np.abs(y)
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


@dataclass(frozen=True)
class CouplingMatrix:
    """Symmetric 2x2 interaction matrix with positive determinant.

    J1, J2 are the intra-group couplings, Jbar the inter-group coupling.
    """

    J1: float
    J2: float
    Jbar: float

    def __post_init__(self):
        if not (self.J1 > 0 and self.J2 > 0):
            raise ValueError(f"diagonal couplings must be positive, got ({self.J1}, {self.J2})")
        if self.Jbar < 0:
            raise ValueError(f"inter-group coupling must be nonnegative, got {self.Jbar}")
        if self.det <= 0:
            raise ValueError(f"coupling matrix must be positive definite, det={self.det}")

    @property
    def det(self) -> float:
        return self.J1 * self.J2 - self.Jbar**2

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.J1, self.Jbar], [self.Jbar, self.J2]])


@dataclass(frozen=True)
class GroupStructure:
    """Group fractions alpha1 + alpha2 = 1, optionally with finite sizes.

    When built from finite sizes via ``from_sizes``, alpha_v = N_v / (N1+N2)
    exactly.  Asymptotic fractions may also be given directly, e.g. for limit
    formulas where no finite system is involved.
    """

    alpha1: float
    alpha2: float
    N1: int | None = None
    N2: int | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha1 < 1.0 and 0.0 < self.alpha2 < 1.0):
            raise ValueError(f"fractions must lie in (0,1), got ({self.alpha1}, {self.alpha2})")
        if abs(self.alpha1 + self.alpha2 - 1.0) > 1e-12:
            raise ValueError(f"fractions must sum to 1, got {self.alpha1 + self.alpha2}")
        for n in (self.N1, self.N2):
            if n is not None and (not isinstance(n, int) or n < 1):
                raise ValueError(f"group sizes must be positive integers, got {n}")

    @classmethod
    def from_sizes(cls, N1: int, N2: int) -> "GroupStructure":
        if N1 < 1 or N2 < 1:
            raise ValueError(f"group sizes must be >= 1, got ({N1}, {N2})")
        n = N1 + N2
        return cls(alpha1=N1 / n, alpha2=N2 / n, N1=N1, N2=N2)

    @property
    def n_total(self) -> int:
        if self.N1 is None or self.N2 is None:
            raise ValueError("group structure carries no finite sizes")
        return self.N1 + self.N2


@dataclass(frozen=True)
class InverseCoupling:
    """Entries of L = J^-1: diagonal (L1, L2) and Lbar = -offdiagonal >= 0."""

    L1: float
    L2: float
    Lbar: float

    def __post_init__(self):
        if not (self.L1 > 0 and self.L2 > 0):
            raise ValueError(f"diagonal entries must be positive, got ({self.L1}, {self.L2})")
        if self.Lbar < 0:
            raise ValueError(f"Lbar must be nonnegative, got {self.Lbar}")

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.L1, -self.Lbar], [-self.Lbar, self.L2]])


class RegimeTag(str, Enum):
    HIGH_TEMPERATURE = "HighTemperature"
    CRITICAL = "Critical"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class Regime:
    """Classification result.

    slack is the signed quantity (1/alpha1 - J1)(1/alpha2 - J2) - Jbar^2;
    inv_det is det(J^-1 - diag(alpha)), the equivalent singularity test;
    g1, g2 are the diagonal entries of J^-1 - diag(alpha).
    """

    tag: RegimeTag
    slack: float
    inv_det: float
    g1: float
    g2: float


def invert_coupling(J: CouplingMatrix) -> InverseCoupling:
    """Invert the coupling matrix: L1 = J2/det, L2 = J1/det, Lbar = Jbar/det."""
    d = J.det
    if d <= 0:
        raise ValueError(f"degenerate coupling matrix, det={d}")
    return InverseCoupling(L1=J.J2 / d, L2=J.J1 / d, Lbar=J.Jbar / d)


def classify_regime(J: CouplingMatrix, alpha: GroupStructure, tol: float = 1e-9) -> Regime:
    """Classify parameters as Critical, HighTemperature, or OutOfScope.

    Critical requires J1 < 1/alpha1, J2 < 1/alpha2 and
    Jbar^2 = (1/alpha1 - J1)(1/alpha2 - J2); slack measures the deviation
    from the last equality and is compared against tol * max(1, Jbar^2).
    HighTemperature is the same diagonal conditions with strictly positive
    slack.  The equivalent matrix condition (singularity of J^-1 - diag(alpha)
    with positive diagonal) is computed independently and cross-checked in
    the Critical branch.
    """
    a1, a2 = alpha.alpha1, alpha.alpha2
    slack = (1.0 / a1 - J.J1) * (1.0 / a2 - J.J2) - J.Jbar**2

    L = invert_coupling(J)
    g1 = L.L1 - a1
    g2 = L.L2 - a2
    inv_det = g1 * g2 - L.Lbar**2

    slack_tol = tol * max(1.0, J.Jbar**2)
    diagonal_ok = J.J1 < 1.0 / a1 and J.J2 < 1.0 / a2

    if diagonal_ok and abs(slack) <= slack_tol:
        # the two criticality tests are exactly proportional:
        # inv_det = alpha1*alpha2*slack/det(J)
        inv_det_tol = slack_tol * a1 * a2 / J.det * 8.0 + 1e-15
        if abs(inv_det) > inv_det_tol:
            raise AssertionError(
                f"criticality checks disagree: slack={slack}, det(J^-1 - alpha)={inv_det}"
            )
        if not (g1 > 0 and g2 > 0):
            raise AssertionError(f"critical slack with non-positive gaps ({g1}, {g2})")
        tag = RegimeTag.CRITICAL
    elif diagonal_ok and slack > slack_tol:
        tag = RegimeTag.HIGH_TEMPERATURE
    else:
        tag = RegimeTag.OUT_OF_SCOPE
    return Regime(tag=tag, slack=slack, inv_det=inv_det, g1=g1, g2=g2)


def hamiltonian(s1, s2, J: CouplingMatrix, N1: int, N2: int):
    """Energy of a configuration with group magnetizations (s1, s2).

    H = -(1/2N) [J1 s1^2 + J2 s2^2 + 2 Jbar s1 s2] with N = N1 + N2.
    Magnetizations must satisfy |s_v| <= N_v and s_v = N_v (mod 2).
    """
    s1 = np.asarray(s1)
    s2 = np.asarray(s2)
    if np.any(np.abs(s1) > N1) or np.any(np.abs(s2) > N2):
        raise ValueError("magnetization exceeds group size")
    if np.any((s1 - N1) % 2 != 0) or np.any((s2 - N2) % 2 != 0):
        raise ValueError("magnetization violates parity: s_v must equal N_v mod 2")
    n = N1 + N2
    e = -(J.J1 * s1.astype(float) ** 2 + J.J2 * s2.astype(float) ** 2
          + 2.0 * J.Jbar * s1 * s2) / (2.0 * n)
    return e if e.ndim else float(e)


def free_energy(y1, y2, L: InverseCoupling, alpha: GroupStructure):
    """F(y1,y2) = L1 y1^2/2 + L2 y2^2/2 - Lbar y1 y2 - a1 ln cosh y1 - a2 ln cosh y2."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    f = (0.5 * L.L1 * y1**2 + 0.5 * L.L2 * y2**2 - L.Lbar * y1 * y2
         - alpha.alpha1 * ln_cosh(y1) - alpha.alpha2 * ln_cosh(y2))
    return f if f.ndim else float(f)


def grad_free_energy(y1, y2, L: InverseCoupling, alpha: GroupStructure):
    """Gradient of the free energy, (dF/dy1, dF/dy2)."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    d1 = L.L1 * y1 - L.Lbar * y2 - alpha.alpha1 * np.tanh(y1)
    d2 = L.L2 * y2 - L.Lbar * y1 - alpha.alpha2 * np.tanh(y2)
    if d1.ndim:
        return d1, d2
    return float(d1), float(d2)


def directional_second_derivative(t, x0: float, y0: float,
                                  L: InverseCoupling, alpha: GroupStructure):
    """Second derivative of t -> F(t*x0, t*y0) along a unit direction.

    d2F/dt2 = L1 x0^2 + L2 y0^2 - 2 Lbar x0 y0
              - a1 x0^2 / cosh^2(t x0) - a2 y0^2 / cosh^2(t y0)
    """
    if abs(x0**2 + y0**2 - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, |d|^2={x0**2 + y0**2}")
    t = np.asarray(t, dtype=float)
    val = (L.L1 * x0**2 + L.L2 * y0**2 - 2.0 * L.Lbar * x0 * y0
           - alpha.alpha1 * x0**2 / np.cosh(t * x0) ** 2
           - alpha.alpha2 * y0**2 / np.cosh(t * y0) ** 2)
    return val if val.ndim else float(val)


@dataclass
class MinimumReport:
    """Outcome of the radial scan certifying the origin as the unique minimum."""

    n_directions: int
    n_radii: int
    min_f_margin: float          # min over samples of F(t x0, t y0), t > 0
    min_d2_margin: float         # min over samples of d2F/dt2, t > 0
    hessian_det: float           # det of the Hessian of F at the origin
    degenerate_d2_at_zero: float # d2F/dt2 at t=0 along the flat direction (critical only)
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_unique_minimum(L: InverseCoupling, alpha: GroupStructure,
                          n_directions: int = 360, radii=None) -> MinimumReport:
    """Scan directions and radii t > 0, checking F > 0 and d2F/dt2 > 0.

    At t = 0 the second derivative vanishes along the direction
    (x0, y0) ~ (sqrt(L2-alpha2), sqrt(L1-alpha1)) on the critical surface;
    that allowed exception is reported separately, not as a violation.
    """
    if radii is None:
        radii = np.linspace(0.05, 10.0, 200)
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("radii must be strictly positive")

    g1 = L.L1 - alpha.alpha1
    g2 = L.L2 - alpha.alpha2
    hessian_det = g1 * g2 - L.Lbar**2

    angles = np.linspace(0.0, 2.0 * np.pi, n_directions, endpoint=False)
    dirs = [(float(np.cos(a)), float(np.sin(a))) for a in angles]
    # include the exactly flat direction so the t=0 exception is exercised
    degenerate_d2 = np.nan
    if g1 > 0 and g2 > 0:
        norm = np.hypot(np.sqrt(g2), np.sqrt(g1))
        flat = (float(np.sqrt(g2) / norm), float(np.sqrt(g1) / norm))
        dirs.append(flat)
        degenerate_d2 = directional_second_derivative(0.0, flat[0], flat[1], L, alpha)

    min_f = np.inf
    min_d2 = np.inf
    violations = []
    for x0, y0 in dirs:
        f_vals = free_energy(radii * x0, radii * y0, L, alpha)
        d2_vals = directional_second_derivative(radii, x0, y0, L, alpha)
        fm = float(np.min(f_vals))
        dm = float(np.min(d2_vals))
        min_f = min(min_f, fm)
        min_d2 = min(min_d2, dm)
        if fm <= 0 or dm <= 0:
            t_bad = float(radii[int(np.argmin(np.minimum(f_vals, d2_vals)))])
            violations.append({"direction": (x0, y0), "t": t_bad, "F": fm, "d2F": dm})

    return MinimumReport(
        n_directions=len(dirs),
        n_radii=len(radii),
        min_f_margin=float(min_f),
        min_d2_margin=float(min_d2),
        hessian_det=float(hessian_det),
        degenerate_d2_at_zero=float(degenerate_d2),
        violations=violations,
    )
