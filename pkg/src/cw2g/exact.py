"""Exact finite-N Gibbs law of the pair of group magnetizations (S1, S2).

The Hamiltonian depends on a configuration only through the two group sums,
so the joint law of (S1, S2) on its parity lattice determines every moment
and, via exchangeability, every distinct-spin correlation.  The distribution
is built by magnetization-level enumeration in O(N1*N2); a literal 2^N sweep
over configurations serves as the oracle for small systems.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .model import CouplingMatrix

__all__ = [
    "MagnetizationDistribution",
    "MomentTable",
    "NORMALIZATIONS",
    "magnetization_distribution",
    "brute_force_distribution",
    "exact_moment",
    "exact_correlation",
    "moment_table",
    "total_variation",
]

# normalization tag -> divisor exponents (e1, e2) applied as N1^(e1*K) * N2^(e2*L)
NORMALIZATIONS = {
    "raw": 0.0,
    "per_spin": 1.0,
    "critical": 0.75,
    "sqrt": 0.5,
}

BRUTE_FORCE_MAX_SPINS = 24


@dataclass
class MagnetizationDistribution:
    """Joint law p(s1, s2) on the lattice s_v in {-N_v, -N_v+2, ..., N_v}.

    The table is symmetrized so that p(s1, s2) == p(-s1, -s2) holds exactly
    (bitwise), which makes odd moments vanish at machine precision.
    """

    N1: int
    N2: int
    s1: np.ndarray       # shape (N1+1,), ascending
    s2: np.ndarray       # shape (N2+1,), ascending
    p: np.ndarray        # shape (N1+1, N2+1)
    logZ: float

    def to_csv(self, path) -> None:
        """Write the table as CSV with columns s1, s2, p."""
        with open(path, "w") as fh:
            fh.write("s1,s2,p\n")
            for i, a in enumerate(self.s1):
                for j, b in enumerate(self.s2):
                    fh.write(f"{int(a)},{int(b)},{self.p[i, j]!r}\n")


@dataclass
class MomentTable:
    """Array of moments m[K][L] up to (Kmax, Lmax) under one normalization."""

    Kmax: int
    Lmax: int
    values: np.ndarray   # shape (Kmax+1, Lmax+1)
    normalization: str

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def __getitem__(self, kl):
        k, l = kl
        return self.values[k, l]

    def to_json(self, metadata: dict | None = None) -> str:
        """Serialize keyed by "K,L" with an optional metadata block."""
        entries = {
            f"{k},{l}": self.values[k, l]
            for k in range(self.Kmax + 1)
            for l in range(self.Lmax + 1)
        }
        blob = {"normalization": self.normalization, "moments": entries}
        if metadata is not None:
            blob["meta"] = metadata
        return json.dumps(blob, indent=2)


def _log_binomials(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _symmetrize(p: np.ndarray) -> np.ndarray:
    # zero-field flip symmetry, enforced bitwise
    return 0.5 * (p + p[::-1, ::-1])


def magnetization_distribution(J: CouplingMatrix, N1: int, N2: int,
                               max_table_entries: int = 10**8) -> MagnetizationDistribution:
    """Exact Gibbs law of (S1, S2) by magnetization-level enumeration.

    p(s1, s2) is proportional to C(N1, k1) C(N2, k2) exp(-H(s1, s2)) with
    k_v = (N_v + s_v)/2.  All accumulation happens in log space.
    """
    if N1 < 1 or N2 < 1:
        raise ValueError(f"group sizes must be >= 1, got ({N1}, {N2})")
    if N1 * N2 > max_table_entries:
        raise ValueError(
            f"table of {N1}*{N2} entries exceeds cap {max_table_entries}"
        )
    n = N1 + N2
    s1 = np.arange(-N1, N1 + 1, 2)
    s2 = np.arange(-N2, N2 + 1, 2)
    S1 = s1[:, None].astype(float)
    S2 = s2[None, :].astype(float)
    energy = -(J.J1 * S1**2 + J.J2 * S2**2 + 2.0 * J.Jbar * S1 * S2) / (2.0 * n)
    logw = _log_binomials(N1)[:, None] + _log_binomials(N2)[None, :] - energy
    log_z = float(logsumexp(logw))
    p = _symmetrize(np.exp(logw - log_z))
    return MagnetizationDistribution(N1=N1, N2=N2, s1=s1, s2=s2, p=p, logZ=log_z)


def brute_force_distribution(J: CouplingMatrix, N1: int, N2: int) -> MagnetizationDistribution:
    """Literal sum over all 2^(N1+N2) spin configurations.

    Every configuration contributes one exp(-H) term, bucketed by (s1, s2)
    through its popcounts; no binomial coefficient is ever computed, which
    keeps this path independent of magnetization_distribution.
    """
    if N1 < 1 or N2 < 1:
        raise ValueError(f"group sizes must be >= 1, got ({N1}, {N2})")
    if N1 + N2 > BRUTE_FORCE_MAX_SPINS:
        raise ValueError(
            f"brute force limited to N1+N2 <= {BRUTE_FORCE_MAX_SPINS}, got {N1 + N2}"
        )
    n = N1 + N2
    # iterate over the smaller group in Python, vectorize over the larger
    swap = N1 > N2
    Na, Nb = (N2, N1) if swap else (N1, N2)
    ka = np.bitwise_count(np.arange(2**Na, dtype=np.uint64)).astype(np.int64)
    kb = np.bitwise_count(np.arange(2**Nb, dtype=np.uint64)).astype(np.int64)
    sb = (2 * kb - Nb).astype(float)
    Ja, Jb = (J.J2, J.J1) if swap else (J.J1, J.J2)
    weights = np.zeros((Na + 1, Nb + 1))
    for mask in range(2**Na):
        sa = float(2 * int(ka[mask]) - Na)
        energy = -(Ja * sa**2 + Jb * sb**2 + 2.0 * J.Jbar * sa * sb) / (2.0 * n)
        weights[ka[mask]] += np.bincount(kb, weights=np.exp(-energy), minlength=Nb + 1)
    if swap:
        weights = weights.T
    total = weights.sum()
    p = _symmetrize(weights / total)
    return MagnetizationDistribution(
        N1=N1, N2=N2,
        s1=np.arange(-N1, N1 + 1, 2),
        s2=np.arange(-N2, N2 + 1, 2),
        p=p, logZ=float(np.log(total)),
    )


def _normalizer(normalization: str, N1: int, N2: int, K: int, L: int) -> float:
    try:
        e = NORMALIZATIONS[normalization]
    except KeyError:
        raise ValueError(f"unknown normalization {normalization!r}") from None
    return float(N1) ** (e * K) * float(N2) ** (e * L)


def exact_moment(dist: MagnetizationDistribution, K: int, L: int,
                 normalization: str = "raw") -> float:
    """E[S1^K S2^L] divided by the chosen normalizer.

    Summation pairs each lattice point with its negation, so odd-total
    moments cancel exactly rather than to rounding error.
    """
    if K < 0 or L < 0:
        raise ValueError("moment orders must be nonnegative")
    term = (dist.s1[:, None].astype(float) ** K) * (dist.s2[None, :].astype(float) ** L) * dist.p
    raw = 0.5 * float(np.sum(term + term[::-1, ::-1]))
    return raw / _normalizer(normalization, dist.N1, dist.N2, K, L)


def _hypergeometric_sign_weights(order: int, n_group: int) -> np.ndarray:
    """h[k] = E[product of `order` distinct spins | k positive spins in group].

    Conditioned on the magnetization, spins are exchangeable and the positive
    set is a uniform k-subset, so the product's law is hypergeometric:
    h[k] = sum_j (-1)^(order-j) C(k,j) C(n-k, order-j) / C(n, order).
    """
    h = np.zeros(n_group + 1)
    denom = math.comb(n_group, order)
    for k in range(n_group + 1):
        acc = 0
        for j in range(max(0, order - (n_group - k)), min(order, k) + 1):
            acc += (-1) ** (order - j) * math.comb(k, j) * math.comb(n_group - k, order - j)
        h[k] = acc / denom
    return h


def exact_correlation(dist: MagnetizationDistribution, K: int, L: int) -> float:
    """E[X_1 ... X_K Y_1 ... Y_L] for K, L distinct spins from each group."""
    if K < 0 or L < 0:
        raise ValueError("correlation orders must be nonnegative")
    if K > dist.N1 or L > dist.N2:
        raise ValueError(
            f"cannot pick {K} distinct spins from group of {dist.N1} "
            f"(or {L} from {dist.N2})"
        )
    h1 = _hypergeometric_sign_weights(K, dist.N1)
    h2 = _hypergeometric_sign_weights(L, dist.N2)
    return float(h1 @ dist.p @ h2)


def moment_table(dist: MagnetizationDistribution, Kmax: int, Lmax: int,
                 normalization: str = "raw") -> MomentTable:
    values = np.empty((Kmax + 1, Lmax + 1))
    for k in range(Kmax + 1):
        for l in range(Lmax + 1):
            values[k, l] = exact_moment(dist, k, l, normalization)
    return MomentTable(Kmax=Kmax, Lmax=Lmax, values=values, normalization=normalization)


def total_variation(a: MagnetizationDistribution, b: MagnetizationDistribution) -> float:
    """Total variation distance between two laws on the same lattice."""
    if a.N1 != b.N1 or a.N2 != b.N2:
        raise ValueError("distributions live on different lattices")
    return 0.5 * float(np.abs(a.p - b.p).sum())
