"""Constellations, bit<->symbol mapping and soft (de)mapping.

LLR sign convention everywhere: L = log p(bit=0) / p(bit=1). Gray
labelings are fixed tables: ring Gray code for PSK, per-axis Gray code
for square QAM (I bits first, then Q bits). All constellations are
normalized to unit mean symbol energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

LLR_CLIP = 5.0
VAR_FLOOR = 1e-8

# Gray sequence for 2^b levels/phases, b = 1..3
_GRAY = {
    1: [0, 1],
    2: [0, 1, 3, 2],
    3: [0, 1, 3, 2, 6, 7, 5, 4],
}


@dataclass(frozen=True)
class Constellation:
    kind: str
    points: np.ndarray   # (M,) complex
    labels: np.ndarray   # (M, Q) bits, labels[i] is the bit block of points[i]

    @property
    def M(self) -> int:
        return len(self.points)

    @property
    def Q(self) -> int:
        return self.labels.shape[1]

    @property
    def Es(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))


def _int_to_bits(x: int, q: int) -> list[int]:
    return [(x >> (q - 1 - j)) & 1 for j in range(q)]


def _gray_pam(bits_per_axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude levels -(2^b-1)..(2^b-1) with per-level Gray labels."""
    nlev = 1 << bits_per_axis
    levels = np.arange(-(nlev - 1), nlev, 2, dtype=float)
    labels = np.array([_int_to_bits(_GRAY[bits_per_axis][i], bits_per_axis)
                       for i in range(nlev)])
    return levels, labels


def build_constellation(kind: str) -> Constellation:
    kind = kind.lower()
    if kind == "bpsk":
        points = np.array([1.0 + 0j, -1.0 + 0j])
        labels = np.array([[0], [1]])
    elif kind == "8psk":
        phases = np.exp(2j * np.pi * np.arange(8) / 8)
        labels = np.array([_int_to_bits(_GRAY[3][i], 3) for i in range(8)])
        points = phases
    elif kind in ("16qam", "64qam"):
        b = 2 if kind == "16qam" else 3
        levels, axis_labels = _gray_pam(b)
        pts, labs = [], []
        for i, li in enumerate(levels):
            for q, lq in enumerate(levels):
                pts.append(li + 1j * lq)
                labs.append(list(axis_labels[i]) + list(axis_labels[q]))
        points = np.array(pts)
        points /= np.sqrt(np.mean(np.abs(points) ** 2))
        labels = np.array(labs)
    else:
        raise ValueError(f"unsupported constellation kind: {kind!r}")
    return Constellation(kind=kind, points=points, labels=labels)


def map_bits(c: np.ndarray, cst: Constellation) -> np.ndarray:
    """Map coded bits to symbols, Q bits per symbol, MSB-first labels."""
    c = np.asarray(c, dtype=np.uint8)
    if c.size % cst.Q:
        raise ValueError(f"bit count {c.size} not divisible by Q={cst.Q}")
    blocks = c.reshape(-1, cst.Q)
    weights = 1 << np.arange(cst.Q - 1, -1, -1)
    idx_of_label = np.full(1 << cst.Q, -1)
    idx_of_label[cst.labels @ weights] = np.arange(cst.M)
    return cst.points[idx_of_label[blocks @ weights]]


def hard_demap(u: np.ndarray, cst: Constellation) -> np.ndarray:
    """Nearest-point demapping back to bits."""
    idx = np.argmin(np.abs(np.asarray(u)[:, None] - cst.points[None, :]), axis=1)
    return cst.labels[idx].ravel().astype(np.uint8)


@dataclass
class SymbolPriors:
    """Per-symbol discrete priors over the constellation, with moments."""

    pmf: np.ndarray    # (V, M)
    mean: np.ndarray   # (V,) complex, first moment
    var: np.ndarray    # (V,) real, central second moment (floored)


def uniform_priors(V: int, cst: Constellation) -> SymbolPriors:
    pmf = np.full((V, cst.M), 1.0 / cst.M)
    mean = np.full(V, np.mean(cst.points))
    var = np.full(V, float(np.mean(np.abs(cst.points - np.mean(cst.points)) ** 2)))
    return SymbolPriors(pmf=pmf, mean=mean, var=var)


def priors_from_pmf(pmf: np.ndarray, cst: Constellation,
                    floor: float = VAR_FLOOR) -> SymbolPriors:
    pmf = np.asarray(pmf, dtype=float)
    pmf = pmf / pmf.sum(axis=1, keepdims=True)
    mean = pmf @ cst.points
    var = np.einsum("vm,vm->v", pmf, np.abs(cst.points[None, :] - mean[:, None]) ** 2)
    return SymbolPriors(pmf=pmf, mean=mean, var=np.maximum(var, floor))


def prior_from_llr(llr: np.ndarray, cst: Constellation,
                   floor: float = VAR_FLOOR) -> SymbolPriors:
    """Symbol priors from per-bit decoder LLRs, shape (V, Q) or (Q,).

    pmf(a) is the product over bits of p(c_j = label_j(a)) with
    p(c=0) = sigmoid(L); moments are the pmf's exact first two central
    moments, variance floored at `floor`.
    """
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    if llr.shape[1] != cst.Q:
        raise ValueError(f"expected Q={cst.Q} LLRs per symbol, got {llr.shape[1]}")
    # log p(c=0) = -log(1+e^-L), log p(c=1) = -log(1+e^L)
    logp0 = -np.logaddexp(0.0, -llr)
    logp1 = -np.logaddexp(0.0, llr)
    lab = cst.labels.T  # (Q, M)
    logpmf = logp0 @ (1 - lab) + logp1 @ lab
    logpmf -= logpmf.max(axis=1, keepdims=True)
    pmf = np.exp(logpmf)
    return priors_from_pmf(pmf, cst, floor=floor)


def demap_extrinsic(z: np.ndarray, v2: np.ndarray, cst: Constellation,
                    clip: float | None = LLR_CLIP) -> np.ndarray:
    """Demap Gaussian extrinsics (z, v2) per symbol into Q bit LLRs.

    Uses the complex-Gaussian density exp(-|z-a|^2/v2) with log-sum-exp
    over the constellation; output shape (V, Q), clipped to [-clip, clip]
    unless clip is None.
    """
    z = np.atleast_1d(np.asarray(z))
    v2 = np.broadcast_to(np.asarray(v2, dtype=float), z.shape)
    if np.any(v2 <= 0):
        raise ValueError("extrinsic variances must be positive")
    loglik = -np.abs(z[:, None] - cst.points[None, :]) ** 2 / v2[:, None]
    return llr_from_logpmf(loglik, cst, clip=clip)


def llr_from_logpmf(logpmf: np.ndarray, cst: Constellation,
                    clip: float | None = LLR_CLIP) -> np.ndarray:
    """Per-bit LLRs from per-symbol log pmfs/log likelihoods (V, M)."""
    V = logpmf.shape[0]
    out = np.empty((V, cst.Q))
    for j in range(cst.Q):
        mask0 = cst.labels[:, j] == 0
        l0 = logsumexp(logpmf[:, mask0], axis=1)
        l1 = logsumexp(logpmf[:, ~mask0], axis=1)
        out[:, j] = l0 - l1
    if clip is not None:
        np.clip(out, -clip, clip, out=out)
    return out
