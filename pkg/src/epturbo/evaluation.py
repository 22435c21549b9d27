"""Monte-Carlo BER sweeps, EXIT-chart measurement and CSV emission."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from . import coding, modem
from .channel import transmit
from .equalizers import EpParams, equalize
from .turbo import LinkConfig, TurboLink

BER_CSV_COLUMNS = ("eb_n0_db", "turbo_iter", "frames", "bit_errors", "ber")
EXIT_CSV_COLUMNS = ("i_in", "i_out", "eb_n0_db", "equalizer")


@dataclass(frozen=True)
class BerRecord:
    eb_n0_db: float
    turbo_iter: int
    frames: int
    bit_errors: int
    ber: float


@dataclass(frozen=True)
class ExitRecord:
    i_in: float
    i_out: float
    eb_n0_db: float
    equalizer: str


# ---------------------------------------------------------------------------
# BER sweep


def _frame_seed(master_seed: int, point_idx: int, frame_idx: int):
    return np.random.SeedSequence([int(master_seed), 0xBE0, point_idx, frame_idx])


def _run_point(link: TurboLink, master_seed: int, point_idx: int,
               min_frames: int, min_errors: int):
    T = link.cfg.turbo_iters
    errors = np.zeros(T, dtype=np.int64)
    frames = 0
    while True:
        res = link.run_frame(_frame_seed(master_seed, point_idx, frames))
        errors += res.bit_errors
        frames += 1
        if frames >= min_frames or errors[-1] >= min_errors:
            break
    return frames, errors


def ber_sweep(cfg: LinkConfig, ebn0_grid, min_frames: int = 200,
              min_errors: int = 100, workers: int = 1) -> list[BerRecord]:
    """BER per (Eb/N0, turbo iteration) with deterministic per-frame seeds.

    Each grid point runs frames until min_frames are done or the
    final-iteration error count reaches min_errors. Error accounting is
    exact integer arithmetic.
    """
    ebn0_grid = list(ebn0_grid)
    if not ebn0_grid:
        raise ValueError("ebn0 grid must be nonempty")
    jobs = [(replace(cfg, ebn0_db=float(e)), i) for i, e in enumerate(ebn0_grid)]
    results = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_point_job, c, i, cfg.seed, min_frames,
                                min_errors): i for c, i in jobs}
            for f, i in futs.items():
                results[i] = f.result()
    else:
        for c, i in jobs:
            results[i] = _point_job(c, i, cfg.seed, min_frames, min_errors)
    records = []
    k = cfg.n // 2
    for i, e in enumerate(ebn0_grid):
        frames, errors = results[i]
        for t in range(cfg.turbo_iters):
            records.append(BerRecord(
                eb_n0_db=float(e), turbo_iter=t, frames=frames,
                bit_errors=int(errors[t]),
                ber=errors[t] / (frames * k)))
    return records


def _point_job(cfg, point_idx, master_seed, min_frames, min_errors):
    link = TurboLink(cfg)
    return _run_point(link, master_seed, point_idx, min_frames, min_errors)


def ber_threshold(records: list[BerRecord], turbo_iter: int,
                  target: float = 1e-3) -> float:
    """First Eb/N0 at which BER <= target, by two-point log interpolation.

    Returns +inf when the target is never reached on the grid.
    """
    pts = sorted((r.eb_n0_db, max(r.ber, 1e-12)) for r in records
                 if r.turbo_iter == turbo_iter)
    prev = None
    for e, b in pts:
        if b <= target:
            if prev is None or prev[1] <= target:
                return e
            e0, b0 = prev
            f = (np.log10(b0) - np.log10(target)) / (np.log10(b0) - np.log10(b))
            return e0 + f * (e - e0)
        prev = (e, b)
    return float("inf")


# ---------------------------------------------------------------------------
# J-function (binary-input AWGN mutual information of consistent LLRs)

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite_e.hermegauss(96)


def _j_exact(sigma):
    """J(sigma) by Gauss-Hermite quadrature of E[log2(1 + e^-L)]."""
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    l = sigma[:, None] ** 2 / 2.0 + sigma[:, None] * _GH_NODES[None, :]
    loss = np.logaddexp(0.0, -l) / np.log(2.0)
    val = 1.0 - (loss * _GH_WEIGHTS[None, :]).sum(axis=1) / np.sqrt(2 * np.pi)
    return np.clip(val, 0.0, 1.0)


_J_SIGMAS = np.concatenate([[0.0], np.geomspace(1e-4, 60.0, 3000)])
_J_TABLE = np.concatenate([[0.0], _j_exact(_J_SIGMAS[1:])])
_J_INTERP = PchipInterpolator(_J_SIGMAS, _J_TABLE)


def j_function(sigma):
    """Mutual information of a consistent Gaussian LLR with std sigma."""
    sigma = np.asarray(sigma, dtype=float)
    return np.clip(_J_INTERP(np.minimum(sigma, _J_SIGMAS[-1])), 0.0, 1.0)


def j_inverse(i):
    """Inverse of j_function on [0, 1)."""
    i = float(i)
    if not 0.0 <= i < 1.0:
        raise ValueError("mutual information must be in [0, 1)")
    if i == 0.0:
        return 0.0
    return float(brentq(lambda s: float(_J_INTERP(s)) - i,
                        1e-6, _J_SIGMAS[-1], xtol=1e-12))


def measure_mi(bits: np.ndarray, llrs: np.ndarray) -> float:
    """Time-average MI estimator 1 - E[log2(1 + e^{-(1-2c) L})]."""
    x = (1.0 - 2.0 * np.asarray(bits, dtype=float)) * np.asarray(llrs, dtype=float)
    return float(np.clip(1.0 - np.mean(np.logaddexp(0.0, -x)) / np.log(2.0),
                         0.0, 1.0))


def consistent_llrs(bits: np.ndarray, sigma: float,
                    rng: np.random.Generator) -> np.ndarray:
    """A-priori LLRs L ~ N((1-2c) sigma^2/2, sigma^2) for bits c."""
    c = np.asarray(bits, dtype=float)
    return (1.0 - 2.0 * c) * sigma ** 2 / 2.0 + sigma * rng.normal(size=c.size)


# ---------------------------------------------------------------------------
# EXIT measurement


def exit_equalizer(equalizer: str, channel_taps, ebn0_db: float,
                   i_in_grid, n_symbols: int = 20000,
                   frame_symbols: int = 1024, seed: int = 0,
                   ws=None, params: EpParams | None = None,
                   llr_clip: float = modem.LLR_CLIP) -> list[ExitRecord]:
    """Extrinsic-information transfer of an equalizer under BPSK.

    A-priori bit LLRs follow the consistent-Gaussian model with
    J(sigma) = i_in; the output MI is measured on the equalizer's
    extrinsic bit LLRs at the decoder-interface clip, i.e. on the
    information the decoder actually receives. (The time-average
    estimator penalizes overconfident unclipped LLRs, which would
    misrepresent equalizers whose extrinsic variances are optimistic.)
    """
    from .channel import default_window, make_channel

    cst = modem.build_constellation("bpsk")
    ch = make_channel(channel_taps, ebn0_db, 0.5, cst.Q)
    ws = ws or default_window(ch.L)
    records = []
    for gi, i_in in enumerate(i_in_grid):
        sigma = j_inverse(float(i_in))
        rng = np.random.default_rng(
            np.random.SeedSequence([seed, 0xE71, gi]))
        done = 0
        bits_all, llrs_all = [], []
        while done < n_symbols:
            V = min(frame_symbols, n_symbols - done)
            bits = rng.integers(0, 2, size=V)
            u = modem.map_bits(bits, cst)
            y = transmit(u, ch, rng)
            la = consistent_llrs(bits, sigma, rng)
            priors = modem.prior_from_llr(la.reshape(V, 1), cst)
            rep = equalize(equalizer, y, ch, cst, priors, ws=ws,
                           params=params, t=0)
            if rep.pmf is not None:
                le = modem.llr_from_logpmf(
                    np.log(np.maximum(rep.pmf, 1e-300)), cst, clip=llr_clip)
            else:
                le = modem.demap_extrinsic(rep.z, rep.v2, cst, clip=llr_clip)
            bits_all.append(bits)
            llrs_all.append(le.ravel())
            done += V
        i_out = measure_mi(np.concatenate(bits_all), np.concatenate(llrs_all))
        records.append(ExitRecord(i_in=float(i_in), i_out=i_out,
                                  eb_n0_db=float(ebn0_db), equalizer=equalizer))
    return records


def exit_decoder(code: coding.LdpcCode, i_in_grid, n_frames: int = 10,
                 seed: int = 0) -> list[ExitRecord]:
    """Extrinsic-information transfer of the LDPC BP decoder."""
    records = []
    for gi, i_in in enumerate(i_in_grid):
        sigma = j_inverse(float(i_in))
        rng = np.random.default_rng(np.random.SeedSequence([seed, 0xDEC, gi]))
        bits_all, llrs_all = [], []
        for _ in range(n_frames):
            info = rng.integers(0, 2, size=code.k).astype(np.uint8)
            c = coding.encode(code, info)
            la = consistent_llrs(c, sigma, rng)
            _, ext, _ = coding.bp_decode(code, la)
            bits_all.append(c)
            llrs_all.append(ext)
        i_out = measure_mi(np.concatenate(bits_all), np.concatenate(llrs_all))
        records.append(ExitRecord(i_in=float(i_in), i_out=i_out,
                                  eb_n0_db=float("nan"), equalizer="decoder"))
    return records


# ---------------------------------------------------------------------------
# CSV emission


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(records, path) -> None:
    """Write BER or EXIT records with the documented column schema."""
    records = list(records)
    if records and isinstance(records[0], ExitRecord):
        columns = EXIT_CSV_COLUMNS
    else:
        columns = BER_CSV_COLUMNS
    try:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(columns)
            for r in records:
                w.writerow([_fmt(getattr(r, c)) for c in columns])
    except OSError as exc:
        raise OSError(f"failed writing CSV to {path}: {exc}") from exc
