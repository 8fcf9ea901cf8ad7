"""Analytic and empirical power spectral densities of chirp-domain frames.

The chirp prototype pulse has the Fresnel-type spectrum

    G(f) = int_0^T exp(j 2 pi c1 N^2 (t/T)^2) exp(-j 2 pi f t) dt,

evaluated here in closed form via Fresnel integrals (the quadrature route is
kept in the tests as an independent oracle).  The frame PSD is the shifted
sum sigma^2/(N T) * sum_n |G(f - n/T)|^2 over the N subcarrier positions,
and the occupied bandwidth is well approximated by (2 c1 N^2 + N - 1)/T.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import welch
from scipy.special import fresnel

from .transforms import ChirpConfig
from .waveform import Waveform


@dataclass
class PsdCurve:
    """One-dimensional PSD sampled on a strictly increasing frequency grid."""

    freq: np.ndarray
    psd: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.freq = np.asarray(self.freq, dtype=float)
        self.psd = np.asarray(self.psd, dtype=float)
        if np.any(np.diff(self.freq) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(self.psd < 0):
            raise ValueError("PSD values must be non-negative")

    def db(self, floor: float = 1e-300) -> np.ndarray:
        return 10.0 * np.log10(np.maximum(self.psd, floor))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["freq_hz", "psd_db"])
            for f, p in zip(self.freq, self.db()):
                writer.writerow([f"{f:.12g}", f"{p:.12g}"])


def _fresnel_segment(alpha: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """int_lo^hi exp(j alpha v^2) dv for alpha > 0, vectorized in the limits."""
    scale = np.sqrt(2.0 * alpha / np.pi)

    def antideriv(u):
        s, c = fresnel(u * scale)
        return np.sqrt(np.pi / (2.0 * alpha)) * (c + 1j * s)

    return antideriv(hi) - antideriv(lo)


def prototype_spectrum(cfg: ChirpConfig, freqs: np.ndarray) -> np.ndarray:
    """Spectrum of the chirp prototype pulse on the given frequencies."""
    freqs = np.asarray(freqs, dtype=float)
    if cfg.c1 < 0:
        mirrored = ChirpConfig(cfg.N, cfg.T, -cfg.c1, cfg.c2)
        return np.conj(prototype_spectrum(mirrored, -freqs))
    if cfg.c1 == 0:
        w = 2.0 * np.pi * freqs
        out = np.empty(freqs.shape, dtype=np.complex128)
        small = np.abs(w) * cfg.T < 1e-12
        out[small] = cfg.T
        ws = w[~small]
        out[~small] = (np.exp(-1j * ws * cfg.T) - 1.0) / (-1j * ws)
        return out
    alpha = 2.0 * np.pi * cfg.c1 * cfg.N**2 / cfg.T**2
    w = 2.0 * np.pi * freqs
    t_peak = w / (2.0 * alpha)
    # complete the square: exp(j alpha t^2 - j w t) = exp(-j w^2/(4 alpha)) exp(j alpha (t - t_peak)^2)
    return np.exp(-1j * w**2 / (4.0 * alpha)) * _fresnel_segment(
        alpha, -t_peak, cfg.T - t_peak
    )


def analytic_psd(cfg: ChirpConfig, sigma2: float, freqs: np.ndarray) -> PsdCurve:
    """Pulse-shaped-OFDM PSD of the ideal chirp frame.

    Uses the uncentered subcarrier indexing n = 0..N-1; the centered form of
    the shifted sum is identical up to the re-labeling n -> n - N/2.
    """
    freqs = np.asarray(freqs, dtype=float)
    total = np.zeros(freqs.shape, dtype=float)
    # chunk the N shifted spectra to bound peak memory
    block = max(1, int(4e6 / max(len(freqs), 1)))
    shifts = np.arange(cfg.N) / cfg.T
    for start in range(0, cfg.N, block):
        sub = shifts[start : start + block]
        g = prototype_spectrum(cfg, (freqs[:, None] - sub[None, :]).ravel())
        total += np.sum(
            np.abs(g.reshape(len(freqs), len(sub))) ** 2, axis=1
        )
    psd = sigma2 / (cfg.N * cfg.T) * total
    return PsdCurve(freqs, psd, meta={"kind": "analytic", "sigma2": sigma2, "N": cfg.N})


def empirical_psd(
    frames: list[Waveform],
    nfft: int,
    window: str = "hann",
) -> PsdCurve:
    """Averaged two-sided periodogram of independently generated frames.

    The frames are concatenated into one stream before segmenting so every
    instant of a frame carries equal weight; windowing isolated frames would
    under-weight the frame edges, which is where a chirp emits its spectral
    extremes, and bias the band-edge estimate low.
    """
    if len(frames) < 10:
        raise ValueError("need at least 10 frames for a stable estimate")
    rate = frames[0].sample_rate
    for wf in frames[1:]:
        if abs(wf.sample_rate - rate) > 1e-6 * rate:
            raise ValueError("all frames must share one sample rate")
    stream = np.concatenate([wf.samples for wf in frames])
    nperseg = min(nfft, len(stream))
    f, pxx = welch(
        stream,
        fs=rate,
        window=window,
        nperseg=nperseg,
        nfft=nfft,
        noverlap=nperseg // 2,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    psd = np.fft.fftshift(pxx)
    freq = np.fft.fftshift(f)
    return PsdCurve(freq, psd, meta={"kind": "empirical", "frames": len(frames)})


def bandwidth_estimate(cfg: ChirpConfig) -> float:
    """Closed-form occupied bandwidth (2 c1 N^2 + N - 1) / T for c1 >= 0."""
    if cfg.c1 < 0:
        raise ValueError("bandwidth estimate is stated for c1 >= 0")
    return (2.0 * cfg.c1 * cfg.N**2 + cfg.N - 1) / cfg.T


def occupied_bandwidth(curve: PsdCurve, drop_db: float = 20.0) -> float:
    """Width of the region within drop_db of the PSD peak."""
    level = curve.db()
    above = np.where(level > level.max() - drop_db)[0]
    if len(above) < 2:
        return 0.0
    return float(curve.freq[above[-1]] - curve.freq[above[0]])
