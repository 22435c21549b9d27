"""Self-check suites: independent oracles for the equalizer math.

Each suite returns (name, worst_residual, tolerance, passed). The
oracles here deliberately recompute everything from first principles
(dense enumeration, direct formulas, per-window loops) so they share no
code path with the production implementations they check.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .channel import ChannelModel, WindowSpec, build_block_matrix, build_window_matrix
from .equalizers import (EpParams, block_lmmse_equalize, block_posterior_moments,
                         bcjr_equalize, epf_equalize, lmmse_filter_equalize,
                         nubep_equalize, posterior_moments_direct)
from .modem import SymbolPriors, build_constellation, priors_from_pmf


def brute_force_extrinsic_pmf(y, ch: ChannelModel, points, prior_pmf):
    """Symbol-wise extrinsic pmfs by exhaustive sequence enumeration."""
    V, M = prior_pmf.shape
    H = build_block_matrix(ch, V)
    seqs = np.array(list(product(range(M), repeat=V)))
    U = points[seqs]                                   # (M^V, V)
    resid = y[None, :] - U @ H.T
    loglik = -np.sum(np.abs(resid) ** 2, axis=1) / ch.noise_var
    logpri = np.sum(np.log(np.maximum(prior_pmf[np.arange(V), seqs], 1e-300)),
                    axis=1)
    w = loglik + logpri
    w = np.exp(w - w.max())
    post = np.zeros((V, M))
    for k in range(V):
        for a in range(M):
            post[k, a] = w[seqs[:, k] == a].sum()
    post /= post.sum(axis=1, keepdims=True)
    ext = post / np.maximum(prior_pmf, 1e-300)
    return ext / ext.sum(axis=1, keepdims=True)


def _random_priors(rng, V, cst):
    pmf = rng.dirichlet(np.ones(cst.M), size=V)
    return priors_from_pmf(pmf, cst)


def check_bcjr(n_instances: int = 100, seed: int = 0):
    """BCJR extrinsic pmfs vs exhaustive enumeration (V<=8, L<=3, BPSK)."""
    rng = np.random.default_rng(seed)
    cst = build_constellation("bpsk")
    worst = 0.0
    for _ in range(n_instances):
        V = int(rng.integers(2, 9))
        L = int(rng.integers(1, 4))
        taps = rng.normal(size=L) + 1j * rng.normal(size=L)
        taps /= np.linalg.norm(taps)
        ch = ChannelModel(taps=taps, noise_var=float(rng.uniform(0.05, 1.0)))
        priors = _random_priors(rng, V, cst)
        u = cst.points[rng.integers(0, cst.M, size=V)]
        y = np.convolve(ch.taps, u)
        y += np.sqrt(ch.noise_var / 2) * (rng.normal(size=y.size)
                                          + 1j * rng.normal(size=y.size))
        ref = brute_force_extrinsic_pmf(y, ch, cst.points, priors.pmf)
        got = bcjr_equalize(y, ch, cst, priors).pmf
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return ("bcjr-vs-brute-force", worst, 1e-10, worst <= 1e-10)


def check_woodbury(n_instances: int = 100, seed: int = 1):
    """Banded observation-domain moments vs dense symbol-domain formula."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        V = int(rng.integers(2, 33))
        L = int(rng.integers(1, 6))
        taps = rng.normal(size=L) + 1j * rng.normal(size=L)
        ch = ChannelModel(taps=taps, noise_var=float(rng.uniform(0.05, 2.0)))
        m = rng.normal(size=V) + 1j * rng.normal(size=V)
        eta = rng.uniform(0.05, 2.0, size=V)
        y = rng.normal(size=V + L - 1) + 1j * rng.normal(size=V + L - 1)
        mu_a, s2_a = block_posterior_moments(y, ch, m, eta)
        H = build_block_matrix(ch, V)
        mu_b, s2_b = posterior_moments_direct(y, H, ch.noise_var, m, eta)
        scale = max(np.max(np.abs(mu_b)), np.max(np.abs(s2_b)), 1.0)
        worst = max(worst,
                    float(np.max(np.abs(mu_a - mu_b)) / scale),
                    float(np.max(np.abs(s2_a - s2_b)) / scale))
    return ("posterior-moments-dual-path", worst, 1e-9, worst <= 1e-9)


def window_extrinsic_reference(y_win, m_win, eta_win, m_k, eta_k, Hw, hw,
                               sigma2, es):
    """Single-window reference: estimated-symbol extrinsic then transform."""
    W = Hw.shape[0]
    Sigma = sigma2 * np.eye(W) + Hw @ np.diag(eta_win) @ Hw.conj().T
    A = Sigma + (es - eta_k) * np.outer(hw, hw.conj())
    f = np.linalg.solve(A, es * hw)
    fh = np.real(np.vdot(f, hw))
    uhat = np.vdot(f, y_win - Hw @ m_win + m_k * hw)
    sighat = fh * es * (1.0 - fh)
    return uhat / fh, sighat / fh ** 2, uhat, sighat, fh


def check_appendix_b(n_instances: int = 100, seed: int = 2):
    """Windowed true-symbol extrinsic vs the transformed estimated-symbol one."""
    from .equalizers import _window_extrinsic

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        L = int(rng.integers(1, 5))
        ws = WindowSpec(N1=int(rng.integers(L, 2 * L + 2)),
                        N2=int(rng.integers(0, L + 2)))
        ch = ChannelModel(taps=rng.normal(size=L) + 1j * rng.normal(size=L),
                          noise_var=float(rng.uniform(0.1, 1.0)))
        Hw, hw = build_window_matrix(ch, ws)
        W = ws.W
        eta_win = rng.uniform(0.05, 1.5, size=W + L - 1)
        m_win = rng.normal(size=W + L - 1) + 1j * rng.normal(size=W + L - 1)
        y_win = rng.normal(size=W) + 1j * rng.normal(size=W)
        kk = ws.N2 + L - 1
        z_ref, v2_ref, uhat, sighat, fh = window_extrinsic_reference(
            y_win, m_win, eta_win, m_win[kk], eta_win[kk], Hw, hw,
            ch.noise_var, 1.0)
        z, v2, fh2, uhat2, sighat2, ok = _window_extrinsic(
            y_win[None, :], m_win[None, :], eta_win[None, :],
            m_win[kk:kk + 1], eta_win[kk:kk + 1], Hw, hw, ch.noise_var, 1.0)
        worst = max(worst,
                    float(abs(z[0] - uhat2[0] / fh2[0])),
                    float(abs(v2[0] - sighat2[0] / fh2[0] ** 2)),
                    float(abs(z[0] - z_ref)),
                    float(abs(v2[0] - v2_ref)))
    return ("window-extrinsic-transform", worst, 1e-12, worst <= 1e-12)


def check_first_pass_reductions(n_instances: int = 50, seed: int = 3):
    """nuBEP first extrinsic == block LMMSE; EP-F first == LMMSE filter."""
    rng = np.random.default_rng(seed)
    cst = build_constellation("bpsk")
    params = EpParams()
    worst = 0.0
    for _ in range(n_instances):
        V = int(rng.integers(4, 17))
        L = int(rng.integers(1, 4))
        ch = ChannelModel(taps=rng.normal(size=L) + 1j * rng.normal(size=L),
                          noise_var=float(rng.uniform(0.1, 1.0)))
        priors = _random_priors(rng, V, cst)
        y = rng.normal(size=V + L - 1) + 1j * rng.normal(size=V + L - 1)
        nb = nubep_equalize(y, ch, cst, priors, params, t=0)
        lm = block_lmmse_equalize(y, ch, cst, priors)
        worst = max(worst, float(np.max(np.abs(nb.first_z - lm.z))),
                    float(np.max(np.abs(nb.first_v2 - lm.v2))))
        ws = WindowSpec(N1=2 * L, N2=L + 1)
        ef = epf_equalize(y, ch, cst, ws, priors, params, t=0)
        lf = lmmse_filter_equalize(y, ch, cst, ws, priors)
        worst = max(worst, float(np.max(np.abs(ef.first_z - lf.z))),
                    float(np.max(np.abs(ef.first_v2 - lf.v2))))
    return ("first-pass-reductions", worst, 1e-12, worst <= 1e-12)


SUITES = {
    "bcjr": check_bcjr,
    "woodbury": check_woodbury,
    "appendix-b": check_appendix_b,
    "reductions": check_first_pass_reductions,
}


def run_suites(names=None):
    names = list(SUITES) if not names else list(names)
    return [SUITES[n]() for n in names]
