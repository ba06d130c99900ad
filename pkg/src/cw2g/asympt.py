"""Closed-form limiting quantities on the critical surface.

The limiting law of (S1/N1^(3/4), S2/N2^(3/4)) is identified through its
moments; the correlation of finitely many distinct spins decays as
N^-(K+L)/4 with a prefactor built from the gaps g_v = L_v - alpha_v and
gamma-function values at quarter integers.  Note the crossed exponents: g1
carries L/2 and g2 carries K/2.  The quadrature module confirms this
numerically from the defining integrals.

Gamma values funnel through scipy.special.gamma (a Lanczos-class
implementation), validated against high-precision references in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from .exact import MomentTable
from .model import CouplingMatrix, GroupStructure, InverseCoupling, invert_coupling

__all__ = [
    "CriticalParams",
    "DominationReport",
    "limit_moment",
    "correlation_limit_constant",
    "correlation_asymptotic",
    "gamma_quartic_integral",
    "domination_constant_a",
    "check_domination",
    "limit_moment_table",
]

FORMULA_VERSION = "1"


@dataclass(frozen=True)
class CriticalParams:
    """Inverse-coupling entries and fractions pinned to the critical surface.

    Derived quantities: gaps g1 = L1 - alpha1 > 0, g2 = L2 - alpha2 > 0 with
    g1*g2 = Lbar^2, and the quartic coefficient
    c = (alpha1/g1^2 + alpha2/g2^2) / 192.
    """

    L1: float
    L2: float
    Lbar: float
    alpha1: float
    alpha2: float
    tol: float = 1e-9
    g1: float = field(init=False)
    g2: float = field(init=False)
    c: float = field(init=False)

    def __post_init__(self):
        g1 = self.L1 - self.alpha1
        g2 = self.L2 - self.alpha2
        if g1 <= 0 or g2 <= 0:
            raise ValueError(f"gaps must be positive, got ({g1}, {g2})")
        if abs(g1 * g2 - self.Lbar**2) > self.tol * max(1.0, self.Lbar**2):
            raise ValueError(
                f"not critical: g1*g2 - Lbar^2 = {g1 * g2 - self.Lbar**2}"
            )
        object.__setattr__(self, "g1", g1)
        object.__setattr__(self, "g2", g2)
        c = (self.alpha1 / g1**2 + self.alpha2 / g2**2) / (2**6 * 3)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_inverse(cls, L: InverseCoupling, alpha: GroupStructure,
                     tol: float = 1e-9) -> "CriticalParams":
        return cls(L1=L.L1, L2=L.L2, Lbar=L.Lbar,
                   alpha1=alpha.alpha1, alpha2=alpha.alpha2, tol=tol)

    @classmethod
    def from_coupling(cls, J: CouplingMatrix, alpha: GroupStructure,
                      tol: float = 1e-9) -> "CriticalParams":
        return cls.from_inverse(invert_coupling(J), alpha, tol=tol)

    @property
    def inverse(self) -> InverseCoupling:
        return InverseCoupling(L1=self.L1, L2=self.L2, Lbar=self.Lbar)

    @property
    def group(self) -> GroupStructure:
        return GroupStructure(alpha1=self.alpha1, alpha2=self.alpha2)


def correlation_limit_constant(K: int, L: int, params: CriticalParams) -> float:
    """Prefactor of the distinct-spin correlation: the limit of
    E[X_1...X_K Y_1...Y_L] * N^((K+L)/4) for even K+L.

    [12 / (a1 g2^2 + a2 g1^2)]^((K+L)/4) g1^(L/2) g2^(K/2)
        * Gamma((K+L+1)/4) / Gamma(1/4)
    """
    if K < 0 or L < 0:
        raise ValueError("orders must be nonnegative")
    if (K + L) % 2 == 1:
        return 0.0
    bracket = 12.0 / (params.alpha1 * params.g2**2 + params.alpha2 * params.g1**2)
    return float(
        bracket ** ((K + L) / 4)
        * params.g1 ** (L / 2)
        * params.g2 ** (K / 2)
        * gamma_fn((K + L + 1) / 4) / gamma_fn(0.25)
    )


def limit_moment(K: int, L: int, params: CriticalParams) -> float:
    """Moment m_KL of the limiting law of (S1/N1^(3/4), S2/N2^(3/4)).

    Zero for odd K+L (short-circuited, no gamma evaluation); otherwise the
    correlation limit constant times alpha1^(K/4) alpha2^(L/4).
    """
    if K < 0 or L < 0:
        raise ValueError("orders must be nonnegative")
    if (K + L) % 2 == 1:
        return 0.0
    return (correlation_limit_constant(K, L, params)
            * params.alpha1 ** (K / 4) * params.alpha2 ** (L / 4))


def correlation_asymptotic(K: int, L: int, N: int, params: CriticalParams) -> float:
    """Asymptotic distinct-spin correlation at total size N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if (K + L) % 2 == 1:
        return 0.0
    return correlation_limit_constant(K, L, params) / float(N) ** ((K + L) / 4)


def gamma_quartic_integral(c: float, k: int) -> float:
    """Full-line integral of exp(-c v^4) v^k dv.

    Zero for odd k; Gamma((k+1)/4) / (2 c^((k+1)/4)) for even k, by the
    substitution t = c v^4.
    """
    if c <= 0:
        raise ValueError(f"quartic coefficient must be positive, got {c}")
    if k < 0:
        raise ValueError("power must be nonnegative")
    if k % 2 == 1:
        return 0.0
    return float(gamma_fn((k + 1) / 4) / (2.0 * c ** ((k + 1) / 4)))


def domination_constant_a(params: CriticalParams) -> float:
    """Quartic decay rate of the dominating function, closed form.

    With A = alpha1/g1^2, B = alpha2/g2^2:
        a = A (2 B^(1/3) / (A^(1/3)+B^(1/3)))^(1/4)
          + B (2 A^(1/3) / (A^(1/3)+B^(1/3)))^(1/4)
    Symmetric under swapping the groups and strictly positive.  For equal
    groups (A = B) this is exactly the minimum of the quartic form over the
    Gaussian direction; see check_domination for how it is scaled into the
    integrand's normalization.
    """
    A = params.alpha1 / params.g1**2
    B = params.alpha2 / params.g2**2
    ca, cb = A ** (1.0 / 3.0), B ** (1.0 / 3.0)
    a = A * (2.0 * cb / (ca + cb)) ** 0.25 + B * (2.0 * ca / (ca + cb)) ** 0.25
    if not a > 0:
        raise AssertionError(f"domination constant must be positive, got {a}")
    return float(a)


@dataclass
class DominationReport:
    """Pointwise comparison of the scaled integrand against its dominating bound."""

    N: int | None            # None means the limiting integrand
    K: int
    L: int
    grid_points: int
    n_violations: int
    worst_margin: float      # min over the grid of (bound - integrand)
    violation_coords: list   # up to 20 offending (u, v) pairs
    boundary_max: float      # largest value of either function on the grid edge

    @property
    def passed(self) -> bool:
        return self.n_violations == 0


def _dominating_function(u, v, K: int, L: int, a_scaled: float) -> np.ndarray:
    base = np.exp(-0.5 * (u**2 + a_scaled * v**4))
    poly = np.zeros(np.broadcast_shapes(np.shape(u), np.shape(v)))
    for k in range(K + 1):
        for l in range(L + 1):
            poly += (math.comb(K, k) * math.comb(L, l)
                     * np.abs(u) ** (L + k - l) * np.abs(v) ** (K + l - k))
    return base * poly


def check_domination(N: int | None, K: int, L: int, params: CriticalParams,
                     grid_n: int = 201, grid_half: float = 10.0) -> DominationReport:
    """Verify the integrand of the scaled correlation integral is dominated.

    Compares, pointwise on a (grid_n x grid_n) grid over [-half, half]^2,
    the integrand at size N (or its N -> infinity limit when N is None)
    against sum_{k,l} C(K,k) C(L,l) exp(-(u^2 + a' v^4)/2) |u|^(L+k-l)
    |v|^(K+l-k), where a' = domination_constant_a / 96 carries the quartic
    normalization of the integrand.  For equal groups the bound is tight
    along the minimizing curve; violations are collected, never discarded.
    """
    if N is not None and N < 1:
        raise ValueError("N must be >= 1 (or None for the limit)")
    u = np.linspace(-grid_half, grid_half, grid_n)[:, None]
    v = np.linspace(-grid_half, grid_half, grid_n)[None, :]
    A = params.alpha1 / params.g1**2
    B = params.alpha2 / params.g2**2
    scale = 1.0 / (2**5 * 3)
    if N is None:
        integrand = np.exp(-0.5 * (u**2 + scale * (A + B) * v**4)) * v ** (K + L)
        integrand = np.broadcast_to(integrand, (grid_n, grid_n))
    else:
        p = u / N**0.25 + v
        q = v - u / N**0.25
        integrand = (np.exp(-0.5 * (u**2 + scale * (A * p**4 + B * q**4)))
                     * p**K * q**L)
    a_scaled = domination_constant_a(params) * scale
    bound = _dominating_function(u, v, K, L, a_scaled)

    # allow last-ulp ties where the bound is mathematically tight
    bad = integrand > bound * (1.0 + 1e-9) + 1e-280
    margin = bound - integrand
    coords = []
    if bad.any():
        ii, jj = np.nonzero(bad)
        order = np.argsort(margin[ii, jj])
        for t in order[:20]:
            coords.append((float(u[ii[t], 0]), float(v[0, jj[t]])))
    edge = np.zeros((grid_n, grid_n), dtype=bool)
    edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
    boundary_max = float(max(np.abs(integrand[edge]).max(), bound[edge].max()))
    return DominationReport(
        N=N, K=K, L=L,
        grid_points=grid_n * grid_n,
        n_violations=int(bad.sum()),
        worst_margin=float(margin.min()),
        violation_coords=coords,
        boundary_max=boundary_max,
    )


def limit_moment_table(params: CriticalParams, Kmax: int, Lmax: int) -> MomentTable:
    """Table of limiting moments, tagged with the critical normalization."""
    values = np.empty((Kmax + 1, Lmax + 1))
    for k in range(Kmax + 1):
        for l in range(Lmax + 1):
            values[k, l] = limit_moment(k, l, params)
    return MomentTable(Kmax=Kmax, Lmax=Lmax, values=values, normalization="critical")


def limit_table_metadata(params: CriticalParams) -> dict:
    return {
        "L1": params.L1, "L2": params.L2, "Lbar": params.Lbar,
        "alpha1": params.alpha1, "alpha2": params.alpha2,
        "g1": params.g1, "g2": params.g2, "c": params.c,
        "formula_version": FORMULA_VERSION,
    }
