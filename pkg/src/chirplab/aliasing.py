"""Ideal aliased chirps and their conditional orthogonality.

Sampling the ideal chirp basis at the base rate N/T folds its instantaneous
frequency back into the band [-N/(2T), N/(2T)); reinterpreting those samples
as a band-limited signal yields a piecewise chirp whose frequency offset
index jumps at the boundaries t_{n,q}.  Whether two such aliased chirps stay
orthogonal is decided by whether the integer function

    eta(eps) = (n - n') - N * (floor(eps + n/N) - floor(eps + n'/N))

ever lands on a multiple of the fold count C = 2 N |c1| as eps sweeps [0, 1):
it never does when C >= N, and it does exactly for index separations that
are multiples of C when C < N.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial.legendre import leggauss

from .transforms import ChirpConfig
from .waveform import Waveform


class ChirpPairing(Enum):
    ORTHOGONAL = "orthogonal"
    ALIASED = "aliased"


@dataclass(frozen=True)
class AliasedChirpSpec:
    """One aliased chirp: owning frame configuration and subcarrier index."""

    cfg: ChirpConfig
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.n < self.cfg.N:
            raise ValueError(f"chirp index {self.n} outside [0, {self.cfg.N})")

    def boundaries(self) -> np.ndarray:
        """Interval edges 0 = t_0 < t_1 < ... < T where the fold index jumps."""
        cfg = self.cfg
        c = cfg.chirp_span
        if c <= 0:
            return np.array([0.0, cfg.T])
        # interior crossings of (C/T) t + n/N through integers
        q_lo = int(np.floor(self.n / cfg.N)) + 1
        q_hi = int(np.ceil(c + self.n / cfg.N))
        qs = np.arange(q_lo, q_hi)
        interior = (qs - self.n / cfg.N) * cfg.T / c
        interior = interior[(interior > 0) & (interior < cfg.T)]
        return np.concatenate([[0.0], interior, [cfg.T]])


def q_index(cfg: ChirpConfig, n: int, t: float) -> int:
    """Fold interval index q_n(t) = floor((C/T) t + n/N)."""
    if not 0 <= n < cfg.N:
        raise ValueError(f"chirp index {n} outside [0, {cfg.N})")
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t >= cfg.T)):
        raise ValueError("t must lie in [0, T)")
    q = np.floor(cfg.chirp_span * t / cfg.T + n / cfg.N).astype(int)
    return int(q) if q.ndim == 0 else q


def _aliased_phase_rate(cfg: ChirpConfig, n: int, q: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Phase (in cycles) of the aliased chirp at times t in fold interval q."""
    dt = cfg.dt
    return (
        cfg.c2 * n**2
        + cfg.c1 * (t / dt) ** 2
        + n * t / cfg.T
        - q * t / dt
    )


def ideal_aliased_chirp(spec: AliasedChirpSpec, oversampling: int) -> Waveform:
    """Sample the piecewise aliased chirp at rate O*N/T on [0, T)."""
    cfg = spec.cfg
    n_samp = cfg.N * oversampling
    t = np.arange(n_samp) * (cfg.T / n_samp)
    q = np.floor(cfg.chirp_span * t / cfg.T + spec.n / cfg.N)
    phase = _aliased_phase_rate(cfg, spec.n, q, t)
    return Waveform(np.exp(2j * np.pi * phase), sample_rate=n_samp / cfg.T, t0=0.0)


@dataclass
class OrthogonalityMatrix:
    """|<phi_hat_n, phi_hat_n'>| for all chirp pairs of one configuration."""

    entries: np.ndarray
    cfg: ChirpConfig
    method: str

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "n_prime", "abs_I_over_T"])
            for n in range(self.cfg.N):
                for n2 in range(self.cfg.N):
                    writer.writerow(
                        [n, n2, f"{self.entries[n, n2] / self.cfg.T:.12g}"]
                    )


def _pair_inner_product(
    cfg: ChirpConfig,
    spec_a: AliasedChirpSpec,
    spec_b: AliasedChirpSpec,
    edges: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
) -> complex:
    """Boundary-aligned Gauss-Legendre quadrature of phi_hat_n phi_hat_n'^*."""
    lo = edges[:-1]
    hi = edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    # quadrature points per interval, shape (intervals, nodes)
    t = mid[:, None] + half[:, None] * nodes[None, :]
    qa = np.floor(cfg.chirp_span * t / cfg.T + spec_a.n / cfg.N)
    qb = np.floor(cfg.chirp_span * t / cfg.T + spec_b.n / cfg.N)
    phase = _aliased_phase_rate(cfg, spec_a.n, qa, t) - _aliased_phase_rate(
        cfg, spec_b.n, qb, t
    )
    vals = np.exp(2j * np.pi * phase)
    return complex(np.sum(half * np.sum(vals * weights[None, :], axis=1)))


def inner_product_matrix(cfg: ChirpConfig, oversampling: int = 32) -> OrthogonalityMatrix:
    """Quadrature matrix |I_{n,n'}| of aliased-chirp inner products over [0, T).

    Each piecewise-smooth interval (between fold boundaries of either chirp)
    is integrated with a Gauss-Legendre rule; the oversampling argument sets
    the minimum node density and must be >= 32 to resolve the boundaries.
    """
    if oversampling < 32:
        raise ValueError("oversampling must be >= 32 to resolve fold boundaries")
    # node count per interval: intervals are at most T/C long and the
    # integrand oscillates at most ~N/C cycles there; 16 nodes covers the
    # N = 32 figures with large margin, denser for finer configurations.
    order = max(16, int(np.ceil(2 * cfg.N / max(cfg.chirp_span, 1.0))) + 8)
    nodes, weights = leggauss(order)
    specs = [AliasedChirpSpec(cfg, n) for n in range(cfg.N)]
    bounds = [s.boundaries() for s in specs]
    entries = np.zeros((cfg.N, cfg.N))
    for n in range(cfg.N):
        entries[n, n] = cfg.T
        for n2 in range(n + 1, cfg.N):
            edges = np.unique(np.concatenate([bounds[n], bounds[n2]]))
            val = _pair_inner_product(cfg, specs[n], specs[n2], edges, nodes, weights)
            entries[n, n2] = entries[n2, n] = abs(val)
    return OrthogonalityMatrix(entries, cfg, method=f"gauss-legendre-{order}")


def predict_orthogonality(cfg: ChirpConfig, n: int, n_prime: int) -> ChirpPairing:
    """Closed-form orthogonality verdict for a pair of aliased chirps.

    Enumerates the (at most three) constant pieces of eta over eps in [0, 1)
    and reports ALIASED iff some piece value is divisible by the fold count
    C, which must be a positive integer for the geometric-sum argument.
    """
    if n == n_prime:
        raise ValueError("orthogonality prediction needs two distinct chirps")
    for idx in (n, n_prime):
        if not 0 <= idx < cfg.N:
            raise ValueError(f"chirp index {idx} outside [0, {cfg.N})")
    c = cfg.chirp_span
    c_int = round(c)
    if c_int <= 0 or abs(c - c_int) > 1e-9:
        raise ValueError(
            f"prediction requires an integer fold count C = 2N|c1|, got {c}"
        )
    if c_int >= cfg.N:
        return ChirpPairing.ORTHOGONAL
    breaks = sorted({0.0, 1.0 - n / cfg.N, 1.0 - n_prime / cfg.N, 1.0})
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        eps = 0.5 * (lo + hi)
        delta_q = int(np.floor(eps + n / cfg.N)) - int(np.floor(eps + n_prime / cfg.N))
        eta = (n - n_prime) - cfg.N * delta_q
        if eta % c_int == 0:
            return ChirpPairing.ALIASED
    return ChirpPairing.ORTHOGONAL
