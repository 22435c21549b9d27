"""ISI + AWGN channel simulation and channel-matrix builders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRESETS = {
    "proakis-c": [0.227, 0.46, 0.688, 0.46, 0.227],
    "chan3": [0.407, 0.815, 0.407],
}


@dataclass(frozen=True)
class ChannelModel:
    taps: np.ndarray      # (L,) complex CIR
    noise_var: float      # total variance of the circular complex noise

    def __post_init__(self):
        taps = np.atleast_1d(np.asarray(self.taps, dtype=complex))
        if taps.size < 1 or not np.all(np.isfinite(taps)):
            raise ValueError("taps must be a non-empty finite vector")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be positive")
        object.__setattr__(self, "taps", taps)

    @property
    def L(self) -> int:
        return self.taps.size


def make_channel(taps, ebn0_db: float, rate: float, bits_per_symbol: int,
                 es: float = 1.0) -> ChannelModel:
    """Channel with noise variance from Eb/N0: sigma_w^2 = Es/(R*Q*10^(dB/10))."""
    if isinstance(taps, str):
        taps = PRESETS[taps]
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return ChannelModel(taps=np.asarray(taps, dtype=complex),
                        noise_var=es / (rate * bits_per_symbol * ebn0))


@dataclass(frozen=True)
class WindowSpec:
    """Observation window of W = N1 + N2 + 1 samples around each symbol."""

    N1: int
    N2: int

    def __post_init__(self):
        if self.N1 < 0 or self.N2 < 0:
            raise ValueError("N1, N2 must be nonnegative")

    @property
    def W(self) -> int:
        return self.N1 + self.N2 + 1


def default_window(L: int) -> WindowSpec:
    """Window sizing N1 = 2L, N2 = L + 1 used throughout the experiments."""
    return WindowSpec(N1=2 * L, N2=L + 1)


def transmit(u: np.ndarray, ch: ChannelModel, rng: np.random.Generator) -> np.ndarray:
    """Convolve symbols with the CIR and add circular complex AWGN.

    Returns V + L - 1 observations; symbols outside the frame are zero.
    """
    u = np.asarray(u, dtype=complex)
    y = np.convolve(ch.taps, u)
    scale = np.sqrt(ch.noise_var / 2.0)
    noise = rng.normal(scale=scale, size=y.size) + \
        1j * rng.normal(scale=scale, size=y.size)
    return y + noise


def build_block_matrix(ch: ChannelModel, V: int) -> np.ndarray:
    """Banded Toeplitz (V+L-1) x V matrix with the CIR down each column."""
    H = np.zeros((V + ch.L - 1, V), dtype=complex)
    for k in range(V):
        H[k:k + ch.L, k] = ch.taps
    return H


def build_window_matrix(ch: ChannelModel, ws: WindowSpec):
    """W x (W+L-1) window matrix with reversed taps along each row.

    Returns (H_W, h_W) where h_W is the column aligned with the symbol
    being estimated (index N2 + L, 1-based).
    """
    W, L = ws.W, ch.L
    if W < L:
        raise ValueError(f"window W={W} must be >= L={L}")
    Hw = np.zeros((W, W + L - 1), dtype=complex)
    for r in range(W):
        Hw[r, r:r + L] = ch.taps[::-1]
    return Hw, Hw[:, ws.N2 + L - 1].copy()
