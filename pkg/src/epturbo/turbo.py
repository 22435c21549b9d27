"""Turbo receiver loop: equalizer <-> LDPC decoder exchange per frame."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import coding, modem
from .channel import PRESETS, ChannelModel, WindowSpec, default_window, make_channel
from .equalizers import BEP_PARAMS, EQUALIZER_NAMES, EpParams, equalize
from .modem import Constellation, SymbolPriors, build_constellation

KNOWN_BIT_LLR = 40.0  # prior for zero-padding bits appended to fill a symbol


@dataclass(frozen=True)
class LinkConfig:
    """Everything needed to simulate one link deterministically."""

    constellation: str = "bpsk"
    channel: str | list = "chan3"
    n: int = 1024
    equalizer: str = "nubep"
    ebn0_db: float = 6.0
    turbo_iters: int = 5
    window: tuple[int, int] | None = None  # (N1, N2); default from L
    ep: EpParams = field(default_factory=EpParams)
    seed: int = 0
    max_bp_iters: int = 100
    llr_clip: float = 5.0

    def __post_init__(self):
        if self.equalizer not in EQUALIZER_NAMES:
            raise ValueError(f"unknown equalizer {self.equalizer!r}")
        if self.n % 2 or self.n < 128:
            raise ValueError("n must be even and >= 128")
        if self.turbo_iters < 1:
            raise ValueError("turbo_iters must be >= 1")


@dataclass
class FrameResult:
    bit_errors: np.ndarray       # (T,) info-bit errors after each turbo iteration
    converged: bool
    decoder_iters: np.ndarray    # (T,) BP iterations used (0 = not run)
    equalizer_reverts: int = 0
    equalizer_fallbacks: int = 0


class TurboLink:
    """Built once per configuration; caches code, interleaver, mapping."""

    def __init__(self, cfg: LinkConfig):
        self.cfg = cfg
        self.cst = build_constellation(cfg.constellation)
        taps = PRESETS[cfg.channel] if isinstance(cfg.channel, str) else cfg.channel
        rate = 0.5
        self.ch = make_channel(taps, cfg.ebn0_db, rate, self.cst.Q)
        base = np.random.SeedSequence([cfg.seed, 0x10DC])
        code_seed, il_seed = base.generate_state(2)
        self.code = coding.build_ldpc(cfg.n, int(code_seed))
        self.interleaver = coding.Interleaver(cfg.n, int(il_seed))
        self.n_pad = (-cfg.n) % self.cst.Q
        self.V = (cfg.n + self.n_pad) // self.cst.Q
        if cfg.window is not None:
            self.ws = WindowSpec(*cfg.window)
        else:
            self.ws = default_window(self.ch.L)
        if cfg.equalizer == "bep":
            self.params = BEP_PARAMS
        else:
            self.params = cfg.ep

    def _priors_from_decoder_llr(self, llr_coded: np.ndarray) -> SymbolPriors:
        padded = np.concatenate([llr_coded, np.full(self.n_pad, KNOWN_BIT_LLR)])
        return modem.prior_from_llr(padded.reshape(self.V, self.cst.Q), self.cst)

    def run_frame(self, frame_seed) -> FrameResult:
        cfg, cst, code = self.cfg, self.cst, self.code
        if isinstance(frame_seed, np.random.SeedSequence):
            ss = frame_seed
        else:
            ss = np.random.SeedSequence(frame_seed)
        bits_rng, noise_rng = [np.random.default_rng(s) for s in ss.spawn(2)]
        info = bits_rng.integers(0, 2, size=code.k).astype(np.uint8)
        c = coding.encode(code, info)
        x = self.interleaver.interleave(c)
        x_padded = np.concatenate([x, np.zeros(self.n_pad, dtype=np.uint8)])
        u = modem.map_bits(x_padded, cst)
        from .channel import transmit
        y = transmit(u, self.ch, noise_rng)

        T = cfg.turbo_iters
        errors = np.zeros(T, dtype=int)
        dec_iters = np.zeros(T, dtype=int)
        reverts = fallbacks = 0
        priors = modem.uniform_priors(self.V, cst)
        converged = False
        for t in range(T):
            rep = equalize(cfg.equalizer, y, self.ch, cst, priors,
                           ws=self.ws, params=self.params, t=t)
            reverts += rep.neg_var_reverts
            fallbacks += rep.fallbacks
            if rep.pmf is not None:
                le = modem.llr_from_logpmf(
                    np.log(np.maximum(rep.pmf, 1e-300)), cst, clip=cfg.llr_clip)
            else:
                le = modem.demap_extrinsic(rep.z, rep.v2, cst, clip=cfg.llr_clip)
            le_coded = le.ravel()[:cfg.n]  # drop padding positions
            llr_dec = self.interleaver.deinterleave(le_coded)
            info_hat, ext, iters = coding.bp_decode(
                code, llr_dec, max_iter=cfg.max_bp_iters)
            dec_iters[t] = iters
            errors[t] = int(np.count_nonzero(info_hat != info))
            hard = np.zeros(cfg.n, dtype=np.uint8)
            post = llr_dec + ext
            hard = (post < 0).astype(np.uint8)
            if not code.syndrome(hard).any():
                errors[t:] = errors[t]
                dec_iters[t + 1:] = 0
                converged = True
                break
            if t + 1 < T:
                ld = self.interleaver.interleave(ext)
                priors = self._priors_from_decoder_llr(ld)
        return FrameResult(bit_errors=errors, converged=converged,
                           decoder_iters=dec_iters,
                           equalizer_reverts=reverts,
                           equalizer_fallbacks=fallbacks)


def run_frame(cfg: LinkConfig, frame_seed) -> FrameResult:
    """One-shot convenience wrapper; builds the link then runs a frame."""
    return TurboLink(cfg).run_frame(frame_seed)


def with_ebn0(cfg: LinkConfig, ebn0_db: float) -> LinkConfig:
    return replace(cfg, ebn0_db=ebn0_db)
