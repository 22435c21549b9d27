"""Equalizers: nuBEP / BEP block EP, block LMMSE, LMMSE filter, EP-F, BCJR.

All equalizers consume the observation vector plus per-symbol discrete
priors and emit per-symbol extrinsic Gaussians (extrinsic pmfs for
BCJR). The block posterior moments are computed through a banded
Cholesky factorization of the observation covariance, shared by all
symbols of an EP pass; window solves for the filter equalizers are
batched over symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import cholesky_banded, cho_solve_banded

from .channel import ChannelModel, WindowSpec, build_block_matrix, build_window_matrix
from .modem import Constellation, SymbolPriors
from .numerics import extrinsic_divide_arrays, hermitian_solve

BCJR_MAX_STATES = 4096
DEGENERATE_FILTER_TOL = 1e-12


def beta_schedule(t: int, cap: float = 0.7) -> float:
    """Damping factor: exponential growth saturating at `cap`."""
    return min(math.exp(t / 1.5) / 10.0, cap)


@dataclass(frozen=True)
class EpParams:
    """EP iteration counts, variance floor and damping policy.

    The standalone pass (turbo index 0) runs `iters_first` EP
    iterations; once the turbo exchange starts `iters_turbo` are used.
    `beta_fixed` overrides the growth schedule (the BEP baseline runs a
    constant 0.1).
    """

    iters_first: int = 10
    iters_turbo: int = 3
    eps: float = 1e-8
    beta_cap: float = 0.7
    beta_fixed: float | None = None
    prior_mode: str = "decoder"  # "decoder" (nuBEP/EP-F) or "uniform" (BEP)

    def __post_init__(self):
        if self.iters_first < 0 or self.iters_turbo < 0:
            raise ValueError("iteration counts must be >= 0")
        if self.eps <= 0:
            raise ValueError("variance floor must be positive")

    def n_iters(self, t: int) -> int:
        return self.iters_first if t == 0 else self.iters_turbo

    def beta(self, t: int) -> float:
        if self.beta_fixed is not None:
            return self.beta_fixed
        return beta_schedule(t, cap=self.beta_cap)


BEP_PARAMS = EpParams(iters_first=10, iters_turbo=10, beta_fixed=0.1,
                      prior_mode="uniform")


@dataclass
class EqualizerReport:
    """Per-symbol extrinsics handed across the turbo interface."""

    z: np.ndarray | None            # (V,) extrinsic means (Gaussian equalizers)
    v2: np.ndarray | None           # (V,) extrinsic variances, all > 0
    pmf: np.ndarray | None = None   # (V, M) extrinsic pmfs (BCJR)
    iterations: int = 0
    neg_var_reverts: int = 0
    division_skips: int = 0
    fallbacks: int = 0
    first_z: np.ndarray | None = None   # extrinsic of the first pass, pre-MM
    first_v2: np.ndarray | None = None


# ---------------------------------------------------------------------------
# moment matching and damping


def tilted_moments(z, v2, pmf, points, eps):
    """Mean/variance of p_hat(a) ~ CN(a; z, v2) * pmf(a), variance floored."""
    logw = np.log(np.maximum(pmf, 1e-300)) \
        - np.abs(z[:, None] - points[None, :]) ** 2 / v2[:, None]
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    w /= w.sum(axis=1, keepdims=True)
    mu = w @ points
    sig = np.einsum("vm,vm->v", w, np.abs(points[None, :] - mu[:, None]) ** 2)
    return mu, np.maximum(sig, eps)


def moment_match_damp(mu_p, sig_p, z, v2, m_old, eta_old, beta):
    """Moment matching followed by damping in natural parameters.

    Matches the moments of q_E * N(m_new, eta_new) to (mu_p, sig_p),
    then convex-combines precisions and precision-weighted means with
    weight `beta` on the new values. Entries whose damped variance is
    not positive (or not finite) revert to the old values; the returned
    mask flags those reverts.
    """
    mu_p = np.asarray(mu_p, dtype=complex)
    sig_p = np.asarray(sig_p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta_new = sig_p * v2 / (v2 - sig_p)
        m_new = eta_new * (mu_p / sig_p - z / v2)
        inv_eta = beta / eta_new + (1.0 - beta) / eta_old
        eta_d = 1.0 / inv_eta
        m_d = eta_d * (beta * m_new / eta_new + (1.0 - beta) * m_old / eta_old)
    bad = ~np.isfinite(eta_d) | (eta_d <= 0) | ~np.isfinite(m_d)
    return np.where(bad, m_old, m_d), np.where(bad, eta_old, eta_d), bad


# ---------------------------------------------------------------------------
# block posterior moments (shared banded factorization)


def _band_inverse_py(cb: np.ndarray) -> np.ndarray:
    """Band of C^-1 from the lower-banded Cholesky factor of C.

    cb[d, j] = L[j+d, j]; returns Zu with Zu[d, j] = (C^-1)[j-d, j] for
    d = 0..bandwidth (upper band; the lower band is its conjugate).
    Classic O(N b^2) inverse-band recursion.
    """
    b, N = cb.shape[0] - 1, cb.shape[1]
    Zu = np.zeros((b + 1, N), dtype=np.complex128)
    D = np.real(cb[0]) ** 2
    # unit-triangular multipliers Lt[d, j] = L[j+d, j] / L[j, j]
    Lt = cb / cb[0]
    for j in range(N - 1, -1, -1):
        for i in range(j, max(j - b, 0) - 1, -1):
            acc = (1.0 / D[i]) if i == j else 0.0
            kmax = min(i + b, N - 1)
            for k in range(i + 1, kmax + 1):
                if k <= j:
                    zkj = Zu[j - k, j]
                else:
                    zkj = np.conj(Zu[k - j, k])
                acc -= np.conj(Lt[k - i, i]) * zkj
            Zu[j - i, j] = acc
    return Zu


try:  # jitted hot path; the pure-python version doubles as its oracle
    import numba as _numba

    _band_inverse = _numba.njit(cache=True)(_band_inverse_py)
except ImportError:  # pragma: no cover
    _band_inverse = _band_inverse_py


def _quad_forms_from_band(Zu: np.ndarray, taps: np.ndarray, V: int) -> np.ndarray:
    """q_k = h_k^H C^-1 h_k for every column h_k of the block channel matrix."""
    L = taps.size
    q = np.zeros(V)
    for t in range(L):
        for s in range(L):
            d = s - t
            if d >= 0:
                zd = Zu[d, d:]          # Z[i, i+d]
                contrib = np.conj(taps[t]) * taps[s] * zd[t:t + V]
            else:
                zd = np.conj(Zu[-d, -d:])  # Z[i, i+d] = conj(Z[i+d, i - ...])
                contrib = np.conj(taps[t]) * taps[s] * zd[s:s + V]
            q += np.real(contrib)
    return q


def _observation_cov_bands(taps: np.ndarray, sigma2: float, eta: np.ndarray):
    """Lower-banded storage of C = sigma2*I + H diag(eta) H^H."""
    L = taps.size
    N = eta.size + L - 1
    ab = np.zeros((L, N), dtype=complex)
    for d in range(L):
        coeffs = np.zeros(L, dtype=complex)
        coeffs[d:] = taps[d:] * np.conj(taps[:L - d])
        band = np.convolve(coeffs, eta)
        ab[d, :N - d] = band[d:]
    ab[0] += sigma2
    return ab


def block_posterior_moments(y, ch: ChannelModel, m, eta):
    """Per-symbol posterior moments (mu_k, s2_k) of the Gaussian model.

    Implements the per-symbol marginals of the approximated posterior
    through a single banded Cholesky factorization of the observation
    covariance, reused for every symbol.
    """
    taps = ch.taps
    V = len(m)
    ab = _observation_cov_bands(taps, ch.noise_var, eta)
    cb = cholesky_banded(ab, lower=True)
    r = y - np.convolve(taps, m)
    x = cho_solve_banded((cb, True), r)
    g = np.convolve(x, np.conj(taps)[::-1])[taps.size - 1:taps.size - 1 + V]
    mu = m + eta * g
    Zu = _band_inverse(np.ascontiguousarray(cb))
    q = _quad_forms_from_band(Zu, taps, V)
    s2 = eta - eta ** 2 * q
    return mu, s2


def posterior_moments_direct(y, H, sigma2, m, eta):
    """Dense symbol-domain form of the posterior moments.

    Independent route used to validate block_posterior_moments: builds
    the V x V posterior covariance from the information-form expression
    and solves it with the Hermitian kernel.
    """
    H = np.asarray(H)
    V = H.shape[1]
    A = H.conj().T @ H / sigma2 + np.diag(1.0 / np.asarray(eta))
    Sigma = hermitian_solve(A, np.eye(V, dtype=complex))
    mu = Sigma @ (H.conj().T @ y / sigma2 + np.asarray(m) / np.asarray(eta))
    return mu, np.real(np.diag(Sigma))


# ---------------------------------------------------------------------------
# block EP equalizers


def nubep_equalize(y, ch: ChannelModel, cst: Constellation,
                   priors: SymbolPriors, params: EpParams, t: int,
                   n_iters: int | None = None) -> EqualizerReport:
    """Block EP equalizer with discrete priors in the moment matching.

    With params.prior_mode == "decoder" the decoder pmfs drive the
    moment matching (nuBEP); with "uniform" the discrete prior is the
    flat constellation pmf at every turbo iteration (BEP baseline).
    Initialization always uses the decoder moments.
    """
    y = np.asarray(y, dtype=complex)
    V = priors.mean.size
    m = priors.mean.astype(complex).copy()
    eta = np.maximum(priors.var.astype(float), params.eps)
    if params.prior_mode == "uniform":
        pmf = np.full((V, cst.M), 1.0 / cst.M)
    else:
        pmf = priors.pmf
    S = params.n_iters(t) if n_iters is None else n_iters
    beta = params.beta(t)
    report = EqualizerReport(z=None, v2=None, iterations=S)
    for _ in range(S):
        mu, s2 = block_posterior_moments(y, ch, m, eta)
        z, v2, ok = extrinsic_divide_arrays(mu, s2, m, eta)
        if report.first_z is None:
            report.first_z = np.where(ok, z, mu)
            report.first_v2 = np.where(ok, v2, s2)
        report.division_skips += int(np.count_nonzero(~ok))
        mu_p, sig_p = tilted_moments(z, v2, pmf, cst.points, params.eps)
        m_new, eta_new, bad = moment_match_damp(mu_p, sig_p, z, v2, m, eta, beta)
        report.neg_var_reverts += int(np.count_nonzero(bad & ok))
        m = np.where(ok, m_new, m)
        eta = np.where(ok, eta_new, eta)
    mu, s2 = block_posterior_moments(y, ch, m, eta)
    z, v2, ok = extrinsic_divide_arrays(mu, s2, m, eta)
    # degenerate final division: report the posterior (counted, never silent)
    report.fallbacks = int(np.count_nonzero(~ok))
    report.z = np.where(ok, z, mu)
    report.v2 = np.maximum(np.where(ok, v2, s2), params.eps)
    if report.first_z is None:
        report.first_z = report.z.copy()
        report.first_v2 = report.v2.copy()
    return report


def bep_equalize(y, ch, cst, priors, params=BEP_PARAMS, t=0) -> EqualizerReport:
    """BEP baseline: uniform moment-matching priors, S=10, fixed damping."""
    return nubep_equalize(y, ch, cst, priors, params, t)


def block_lmmse_equalize(y, ch, cst, priors,
                         eps: float = 1e-8) -> EqualizerReport:
    """Single Gaussian pass with decoder moments; no EP refinement."""
    params = EpParams(iters_first=0, iters_turbo=0, eps=eps)
    return nubep_equalize(y, ch, cst, priors, params, t=0)


# ---------------------------------------------------------------------------
# filter equalizers


def _window_arrays(y, m, eta, ws: WindowSpec, L: int):
    V = m.size
    pad_front_u = ws.N2 + L - 1
    mpad = np.concatenate([np.zeros(pad_front_u, dtype=complex), m,
                           np.zeros(ws.N1, dtype=complex)])
    etapad = np.concatenate([np.zeros(pad_front_u), eta, np.zeros(ws.N1)])
    back = max(0, V - 1 + ws.N1 - (len(y) - 1))
    ypad = np.concatenate([np.zeros(ws.N2, dtype=complex), y,
                           np.zeros(back, dtype=complex)])
    y_win = sliding_window_view(ypad, ws.W)[:V]
    m_win = sliding_window_view(mpad, ws.W + L - 1)[:V]
    eta_win = sliding_window_view(etapad, ws.W + L - 1)[:V]
    return y_win, m_win, eta_win


def _window_extrinsic(y_win, m_win, eta_win, m, eta, Hw, hw, sigma2, es):
    """Batched per-symbol Wiener filter and true-symbol extrinsic.

    Returns (z, v2, fh, uhat, sighat, ok): uhat/sighat are the
    estimated-symbol extrinsic statistics, (z, v2) the true-symbol ones
    obtained by the 1/f^H h transform; ok flags non-degenerate filters.
    """
    V, W = y_win.shape
    Sigma = np.einsum("wj,kj,vj->kwv", Hw, eta_win, Hw.conj())
    Sigma += sigma2 * np.eye(W)
    A = Sigma + (es - eta)[:, None, None] * np.outer(hw, hw.conj())
    f = es * np.linalg.solve(A, np.broadcast_to(hw, (V, W))[..., None])[..., 0]
    fh = np.real(np.einsum("kw,w->k", f.conj(), hw))
    resid = y_win - np.einsum("wj,kj->kw", Hw, m_win) + m[:, None] * hw
    uhat = np.einsum("kw,kw->k", f.conj(), resid)
    sighat = fh * es * (1.0 - fh)
    ok = fh > DEGENERATE_FILTER_TOL
    safe = np.where(ok, fh, 1.0)
    z = uhat / safe
    v2 = sighat / safe ** 2
    return z, v2, fh, uhat, sighat, ok


def _epf_pass_py(ypad, cm, mpad, etapad, taps, N1, N2, sigma2, es, V,
                 tol, refresh):
    """One EP-F pass with a sliding-window inverse recursion.

    The window covariance of symbol k+1 shares its leading principal
    submatrix with symbol k's trailing one, so the inverse is carried
    along by two O(W^2) Schur updates per symbol instead of a fresh
    O(W^3) solve; the per-symbol rank-one prior-exclusion term enters
    through the Sherman-Morrison identity. The inverse is rebuilt from
    scratch every `refresh` symbols to bound drift. Total cost is
    O(V W^2), quadratic in the window length.

    `cm` is convolve(taps, mpad); returns (z, v2, fh, ok).
    """
    L = taps.size
    W = N1 + N2 + 1
    kk = N2 + L - 1
    z = np.zeros(V, dtype=np.complex128)
    v2 = np.zeros(V)
    fh_out = np.zeros(V)
    ok = np.zeros(V, dtype=np.bool_)
    Sigma = np.zeros((W, W), dtype=np.complex128)
    A = np.zeros((W, W), dtype=np.complex128)
    S = np.zeros((W - 1, W - 1), dtype=np.complex128) if W > 1 else \
        np.zeros((1, 1), dtype=np.complex128)
    q = np.zeros(W, dtype=np.complex128)
    c = np.zeros(W, dtype=np.complex128)
    w = np.zeros(max(W - 1, 1), dtype=np.complex128)
    for k in range(V):
        if k % refresh == 0:
            # direct build of Sigma_k = sigma2 I + H_W diag(eta) H_W^H
            for i in range(W):
                for j in range(i, min(i + L, W)):
                    acc = 0.0 + 0.0j
                    for l in range(j, i + L):
                        acc += taps[L - 1 - (l - i)] \
                            * np.conj(taps[L - 1 - (l - j)]) * etapad[k + l]
                    Sigma[i, j] = acc
                    Sigma[j, i] = np.conj(acc)
                for j in range(i + L, W):
                    Sigma[i, j] = 0.0
                    Sigma[j, i] = 0.0
                Sigma[i, i] += sigma2
            A = np.linalg.inv(Sigma)
        # q = Sigma_k^{-1} h_W; h_W has L nonzeros taps[r] at rows N2+r
        for i in range(W):
            acc = 0.0 + 0.0j
            for r in range(L):
                acc += A[i, N2 + r] * taps[r]
            q[i] = acc
        a = 0.0
        for r in range(L):
            a += (np.conj(taps[r]) * q[N2 + r]).real
        eta_k = etapad[k + kk]
        m_k = mpad[k + kk]
        denom = 1.0 + (es - eta_k) * a
        fh = es * a / denom
        fh_out[k] = fh
        if fh > tol:
            acc = 0.0 + 0.0j
            for i in range(W):
                acc += np.conj(q[i]) * (ypad[k + i] - cm[k + i + L - 1])
            uhat = (es / denom) * acc + m_k * fh
            sighat = fh * es * (1.0 - fh)
            z[k] = uhat / fh
            v2[k] = sighat / fh ** 2
            ok[k] = True
        if k + 1 >= V or (k + 1) % refresh == 0:
            continue
        # shrink: inverse of Sigma_k[1:, 1:] by one Schur update
        a11 = A[0, 0].real
        for i in range(W - 1):
            for j in range(W - 1):
                S[i, j] = A[i + 1, j + 1] \
                    - A[i + 1, 0] * np.conj(A[j + 1, 0]) / a11
        # append the new trailing row/column of Sigma_{k+1} (L nonzeros)
        for i in range(W):
            c[i] = 0.0
        for i in range(max(0, W - L), W):
            acc = 0.0 + 0.0j
            for l in range(W - 1, i + L):
                acc += taps[L - 1 - (l - i)] \
                    * np.conj(taps[L - 1 - (l - (W - 1))]) * etapad[k + 1 + l]
            c[i] = acc
        c[W - 1] += sigma2
        for i in range(W - 1):
            acc = 0.0 + 0.0j
            for j in range(max(0, W - L), W - 1):
                acc += S[i, j] * c[j]
            w[i] = acc
        s = c[W - 1].real
        for j in range(max(0, W - L), W - 1):
            s -= (np.conj(c[j]) * w[j]).real
        for i in range(W - 1):
            for j in range(W - 1):
                A[i, j] = S[i, j] + w[i] * np.conj(w[j]) / s
            A[i, W - 1] = -w[i] / s
            A[W - 1, i] = np.conj(A[i, W - 1])
        A[W - 1, W - 1] = 1.0 / s
    return z, v2, fh_out, ok


try:
    _epf_pass = _numba.njit(cache=True)(_epf_pass_py)
except NameError:  # pragma: no cover - numba imported above or not at all
    _epf_pass = _epf_pass_py

EPF_INVERSE_REFRESH = 128


def _window_extrinsic_recursive(y, m, eta, ws: WindowSpec, taps, sigma2, es):
    """All per-symbol window extrinsics of one pass via the O(V W^2) kernel."""
    V = m.size
    L = taps.size
    pad_front_u = ws.N2 + L - 1
    mpad = np.concatenate([np.zeros(pad_front_u, dtype=complex), m,
                           np.zeros(ws.N1, dtype=complex)])
    etapad = np.concatenate([np.zeros(pad_front_u), eta, np.zeros(ws.N1)])
    back = max(0, V - 1 + ws.N1 - (len(y) - 1))
    ypad = np.concatenate([np.zeros(ws.N2, dtype=complex), y,
                           np.zeros(back, dtype=complex)])
    cm = np.convolve(taps, mpad)
    return _epf_pass(ypad, cm, mpad, etapad,
                     np.ascontiguousarray(taps, dtype=np.complex128),
                     ws.N1, ws.N2, float(sigma2), float(es), V,
                     DEGENERATE_FILTER_TOL, EPF_INVERSE_REFRESH)


def epf_equalize(y, ch: ChannelModel, cst: Constellation, ws: WindowSpec,
                 priors: SymbolPriors, params: EpParams, t: int,
                 es: float = 1.0, n_iters: int | None = None) -> EqualizerReport:
    """Filter-type EP equalizer on a sliding observation window.

    Each pass runs the windowed Wiener filter with the current Gaussian
    prior surrogates, divides out the symbol's own factor, moment-matches
    against the discrete prior and damps; the delivered extrinsic is
    recomputed with the post-EP surrogates. Out-of-frame symbols are
    known zeros (mean 0, variance 0).
    """
    y = np.asarray(y, dtype=complex)
    if ws.W < ch.L:
        raise ValueError(f"window W={ws.W} must be >= L={ch.L}")
    V = priors.mean.size
    m = priors.mean.astype(complex).copy()
    eta = np.maximum(priors.var.astype(float), params.eps)
    pmf = priors.pmf if params.prior_mode != "uniform" \
        else np.full((V, cst.M), 1.0 / cst.M)
    S = params.n_iters(t) if n_iters is None else n_iters
    beta = params.beta(t)
    report = EqualizerReport(z=None, v2=None, iterations=S)
    for _ in range(S):
        z, v2, fh, ok = _window_extrinsic_recursive(
            y, m, eta, ws, ch.taps, ch.noise_var, es)
        if report.first_z is None:
            report.first_z = np.where(ok, z, m)
            report.first_v2 = np.where(ok, v2, np.maximum(eta, params.eps))
        report.fallbacks += int(np.count_nonzero(~ok))
        mu_p, sig_p = tilted_moments(np.where(ok, z, m),
                                     np.where(ok, v2, np.maximum(eta, params.eps)),
                                     pmf, cst.points, params.eps)
        m_new, eta_new, bad = moment_match_damp(mu_p, sig_p, z, v2, m, eta, beta)
        report.neg_var_reverts += int(np.count_nonzero(bad & ok))
        m = np.where(ok, m_new, m)
        eta = np.where(ok, eta_new, eta)
    z, v2, fh, ok = _window_extrinsic_recursive(
        y, m, eta, ws, ch.taps, ch.noise_var, es)
    report.fallbacks += int(np.count_nonzero(~ok))
    report.z = np.where(ok, z, priors.mean)
    report.v2 = np.maximum(np.where(ok, v2, priors.var), params.eps)
    if report.first_z is None:
        report.first_z = report.z.copy()
        report.first_v2 = report.v2.copy()
    return report


def lmmse_filter_equalize(y, ch, cst, ws, priors, es: float = 1.0,
                          eps: float = 1e-8) -> EqualizerReport:
    """Windowed Wiener filter with extrinsic prior removal, no EP."""
    params = EpParams(iters_first=0, iters_turbo=0, eps=eps)
    return epf_equalize(y, ch, cst, ws, priors, params, t=0, es=es)


# ---------------------------------------------------------------------------
# BCJR


def bcjr_equalize(y, ch: ChannelModel, cst: Constellation,
                  priors: SymbolPriors) -> EqualizerReport:
    """Forward-backward over the ISI trellis; extrinsic pmf output.

    The trellis alphabet is augmented with the known zero symbol that
    pads the frame edges, so the first/last L-1 observations are
    handled exactly.
    """
    y = np.asarray(y, dtype=complex)
    L, M = ch.L, cst.M
    if M ** (L - 1) > BCJR_MAX_STATES:
        raise ValueError(
            f"trellis has M^(L-1) = {M ** (L - 1)} states, "
            f"exceeding the limit {BCJR_MAX_STATES}")
    V = priors.pmf.shape[0]
    steps = V + L - 1
    points = np.concatenate([cst.points, [0.0]])
    Ma = M + 1
    mem = L - 1
    n_states = Ma ** mem if mem > 0 else 1

    # state digits: state = sum(digit_j * Ma^j), digit_0 = most recent symbol
    digits = np.empty((n_states, max(mem, 1)), dtype=int)
    for j in range(max(mem, 1)):
        digits[:, j] = (np.arange(n_states) // Ma ** j) % Ma if mem > 0 else Ma - 1

    out = np.full((n_states, Ma), 0.0 + 0.0j)
    out += ch.taps[0] * points[None, :]
    for j in range(1, L):
        out += ch.taps[j] * points[digits[:, j - 1]][:, None]
    if mem > 0:
        # new state digits: (input, digit_0, ..., digit_{mem-2})
        keep = np.arange(n_states) % Ma ** (mem - 1)
        next_state = np.arange(Ma)[None, :] + Ma * keep[:, None]
    else:
        next_state = np.zeros((1, Ma), dtype=int)

    # per-step log priors over the augmented alphabet
    logprior = np.full((steps, Ma), -np.inf)
    logprior[:V, :M] = np.log(np.maximum(priors.pmf, 1e-300))
    logprior[V:, M] = 0.0

    sig2 = ch.noise_var
    loggamma = -np.abs(y[:, None, None] - out[None, :, :]) ** 2 / sig2 \
        + logprior[:, None, :]
    loggamma -= loggamma.max(axis=(1, 2), keepdims=True)
    gamma = np.exp(loggamma)

    # initial state: all zero symbols
    zero_state = 0
    for j in range(mem):
        zero_state += M * Ma ** j
    alpha = np.zeros(n_states)
    alpha[zero_state] = 1.0
    alphas = np.empty((steps, n_states))
    for i in range(steps):
        alphas[i] = alpha
        w = alpha[:, None] * gamma[i]
        alpha = np.bincount(next_state.ravel(), weights=w.ravel(),
                            minlength=n_states)
        s = alpha.sum()
        alpha = alpha / s if s > 0 else np.full(n_states, 1.0 / n_states)

    beta = np.ones(n_states) / n_states
    post = np.empty((V, M))
    for i in range(steps - 1, -1, -1):
        bnext = beta[next_state]                  # (n_states, Ma)
        joint = alphas[i][:, None] * gamma[i] * bnext
        if i < V:
            p = joint[:, :M].sum(axis=0)
            s = p.sum()
            post[i] = p / s if s > 0 else np.full(M, 1.0 / M)
        beta = (gamma[i] * bnext).sum(axis=1)
        s = beta.sum()
        beta = beta / s if s > 0 else np.full(n_states, 1.0 / n_states)

    prior = priors.pmf
    with np.errstate(divide="ignore", invalid="ignore"):
        ext = np.where(prior > 0, post / np.maximum(prior, 1e-300), 0.0)
    ssum = ext.sum(axis=1, keepdims=True)
    flat = ssum[:, 0] <= 0
    ext = np.where(flat[:, None], 1.0 / M, ext / np.where(ssum > 0, ssum, 1.0))
    return EqualizerReport(z=None, v2=None, pmf=ext, iterations=1)


# ---------------------------------------------------------------------------
# registry

EQUALIZER_NAMES = ("bcjr", "lmmse-block", "lmmse-filter", "bep", "nubep", "ep-f")


def equalize(name: str, y, ch, cst, priors, ws=None,
             params: EpParams | None = None, t: int = 0,
             es: float = 1.0) -> EqualizerReport:
    """Dispatch an equalizer by its configuration name."""
    if name == "bcjr":
        return bcjr_equalize(y, ch, cst, priors)
    if name == "lmmse-block":
        return block_lmmse_equalize(y, ch, cst, priors)
    if name == "nubep":
        return nubep_equalize(y, ch, cst, priors, params or EpParams(), t)
    if name == "bep":
        return bep_equalize(y, ch, cst, priors, params or BEP_PARAMS, t)
    if name == "lmmse-filter":
        return lmmse_filter_equalize(y, ch, cst, ws, priors, es=es)
    if name == "ep-f":
        return epf_equalize(y, ch, cst, ws, priors, params or EpParams(), t, es=es)
    raise ValueError(f"unknown equalizer {name!r}; choose from {EQUALIZER_NAMES}")
