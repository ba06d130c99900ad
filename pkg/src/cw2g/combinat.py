"""Moment-method combinatorics: index-tuple profiles and their multiplicities.

A K-tuple of indices from {1..N} has a profile r = (r_1, ..., r_K) where r_m
counts the distinct indices appearing exactly m times.  Summing the number of
tuples per profile times the profile's correlation reassembles the power-sum
moment E[(sum X)^K (sum Y)^L] from distinct-spin correlations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import MagnetizationDistribution, exact_correlation

__all__ = [
    "Profile",
    "ProfileBound",
    "enumerate_profiles",
    "multiplicity_w",
    "moment_via_profiles",
    "dominant_profile_bound",
]

MAX_PROFILE_ORDER = 8


@dataclass(frozen=True)
class Profile:
    """Multiplicity-count vector of a K-tuple; counts[m-1] indices occur m times."""

    counts: tuple

    def __post_init__(self):
        k = len(self.counts)
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative count in profile {self.counts}")
        if sum(m * c for m, c in enumerate(self.counts, start=1)) != k:
            raise ValueError(f"profile {self.counts} does not describe a {k}-tuple")

    @property
    def order(self) -> int:
        """Tuple length K."""
        return len(self.counts)

    @property
    def n_distinct(self) -> int:
        """Number of distinct indices used."""
        return sum(self.counts)

    @property
    def n_odd(self) -> int:
        """Distinct indices with odd multiplicity; the effective correlation order."""
        return sum(c for m, c in enumerate(self.counts, start=1) if m % 2 == 1)


def _partitions(k: int, max_part: int):
    # integer partitions of k in weakly decreasing part order
    if k == 0:
        yield []
        return
    for part in range(min(k, max_part), 0, -1):
        for rest in _partitions(k - part, part):
            yield [part] + rest


def enumerate_profiles(K: int, N: int) -> list[Profile]:
    """All profiles of K-tuples over an index set of size N, each once.

    One profile per integer partition of K with at most N parts.
    """
    if K < 0:
        raise ValueError("tuple length must be nonnegative")
    if N < 1:
        raise ValueError("index-set size must be >= 1")
    out = []
    for parts in _partitions(K, K) if K else [[]]:
        if len(parts) > N:
            continue
        counts = [0] * K
        for p in parts:
            counts[p - 1] += 1
        out.append(Profile(counts=tuple(counts)))
    return out


def multiplicity_w(profile: Profile, N: int) -> int:
    """Number of K-tuples in {1..N}^K with the given profile, exact integer.

    w = [N falling Sum(r)] / prod(r_m!) * K! / prod((m!)^(r_m))
    """
    k = profile.order
    used = profile.n_distinct
    if used > N:
        raise ValueError(
            f"profile needs {used} distinct indices but only {N} available"
        )
    falling = 1
    for i in range(used):
        falling *= N - i
    distinct_orderings = falling
    for c in profile.counts:
        distinct_orderings //= math.factorial(c)
    placements = math.factorial(k)
    for m, c in enumerate(profile.counts, start=1):
        placements //= math.factorial(m) ** c
    return distinct_orderings * placements


def moment_via_profiles(K: int, L: int, dist: MagnetizationDistribution) -> float:
    """E[(S1)^K (S2)^L] reassembled from distinct-spin correlations.

    Each profile pair contributes w_K(r) w_L(s) E(X(r) Y(s)); since spins
    square to one, E(X(r) Y(s)) reduces to the distinct-spin correlation of
    order (odd-count of r, odd-count of s).
    """
    if K > MAX_PROFILE_ORDER or L > MAX_PROFILE_ORDER:
        raise ValueError(f"orders capped at {MAX_PROFILE_ORDER}, got ({K}, {L})")
    corr_cache: dict[tuple, float] = {}
    total = 0.0
    for r in enumerate_profiles(K, dist.N1):
        wr = multiplicity_w(r, dist.N1)
        for s in enumerate_profiles(L, dist.N2):
            ws = multiplicity_w(s, dist.N2)
            key = (r.n_odd, s.n_odd)
            if key not in corr_cache:
                if key[0] > dist.N1 or key[1] > dist.N2:
                    raise ValueError(f"reduced correlation order {key} exceeds group sizes")
                corr_cache[key] = exact_correlation(dist, key[0], key[1])
            total += float(wr * ws) * corr_cache[key]
    return total


@dataclass(frozen=True)
class ProfileBound:
    """Decay of one normalized summand in the moment-method sum.

    The summand with reduced orders (k, l) is O(N1^-e1 * N2^-e2) after
    critical normalization; only (k, l) = (K, L) survives the limit.
    """

    exponent1: float
    exponent2: float
    survives: bool
    alpha_prefactor: float
    decay: float


def dominant_profile_bound(K: int, L: int, k: int, l: int,
                           N1: int, N2: int, alpha) -> ProfileBound:
    """Bound exponents ((K-k)/4, (L-l)/4) for a normalized moment summand."""
    if not (0 <= k <= K and 0 <= l <= L):
        raise ValueError(f"reduced orders must satisfy 0 <= k <= K, 0 <= l <= L")
    e1 = (K - k) / 4.0
    e2 = (L - l) / 4.0
    return ProfileBound(
        exponent1=e1,
        exponent2=e2,
        survives=(k == K and l == L),
        alpha_prefactor=(alpha.alpha1 * alpha.alpha2) ** 0.25,
        decay=N1 ** (-e1) * N2 ** (-e2),
    )
