"""Command-line entry point: BER sweeps, EXIT charts, validation suites.

Runs are reproducible from (config, seed): the resolved configuration,
seed and build fingerprint are echoed into a .meta.json sidecar next to
each CSV. Presets carry desk-scale frame counts; --full-scale restores
the 10^4-frame setting.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .coding import build_ldpc
from .equalizers import EQUALIZER_NAMES, EpParams
from .evaluation import ber_sweep, exit_decoder, exit_equalizer, write_csv
from .turbo import LinkConfig

FULL_SCALE_FRAMES = 10_000

_BER_KEYS = {"mode", "constellations", "channel", "n", "equalizers",
             "ebn0_grid", "turbo_iters", "window", "seed", "min_frames",
             "min_errors", "ep"}
_EXIT_KEYS = {"mode", "channel", "n", "equalizers", "ebn0_points",
              "i_in_grid", "exit_symbols", "decoder_frames", "seed", "ep"}
_EP_KEYS = {"iters_first", "iters_turbo", "eps", "beta_cap", "beta_fixed"}

_ALL_EQ = ["bcjr", "lmmse-block", "bep", "nubep", "ep-f"]
_NO_BCJR = ["lmmse-block", "bep", "nubep", "ep-f"]


def _grid(a, b, step):
    return [round(x, 6) for x in np.arange(a, b + step / 2, step).tolist()]


PRESETS = {
    # BPSK scenarios (proakis-c/4096 panels a-c, chan3/1024 panels d-f)
    "fig3a": {"mode": "ber", "constellations": ["bpsk"], "channel": "proakis-c",
              "n": 4096, "equalizers": _ALL_EQ, "ebn0_grid": _grid(2, 10, 0.5),
              "turbo_iters": 5},
    "fig3d": {"mode": "ber", "constellations": ["bpsk"], "channel": "chan3",
              "n": 1024, "equalizers": _ALL_EQ, "ebn0_grid": _grid(2, 9, 0.5),
              "turbo_iters": 5},
    # EXIT charts at 7 and 9 dB, BPSK, proakis-c
    "fig2": {"mode": "exit", "channel": "proakis-c", "n": 4096,
             "equalizers": ["bep", "nubep", "ep-f", "lmmse-block", "bcjr"],
             "ebn0_points": [7.0, 9.0], "i_in_grid": _grid(0, 0.95, 0.05)},
    # 8-PSK scenarios
    "fig4a": {"mode": "ber", "constellations": ["8psk"], "channel": "proakis-c",
              "n": 4096, "equalizers": _NO_BCJR, "ebn0_grid": _grid(6, 18, 1.0),
              "turbo_iters": 5},
    "fig4d": {"mode": "ber", "constellations": ["8psk"], "channel": "chan3",
              "n": 1024, "equalizers": _NO_BCJR, "ebn0_grid": _grid(6, 16, 1.0),
              "turbo_iters": 5},
    # 16/64-QAM after five turbo loops
    "fig5": {"mode": "ber", "constellations": ["16qam", "64qam"],
             "channel": "proakis-c", "n": 4096, "equalizers": _NO_BCJR,
             "ebn0_grid": _grid(10, 30, 1.0), "turbo_iters": 5},
    "fig6": {"mode": "ber", "constellations": ["8psk"], "channel": "proakis-c",
             "n": 1024, "equalizers": ["nubep", "ep-f"],
             "ebn0_grid": [13.0], "turbo_iters": 10},
}
# panels of one figure share their data; aliases keep the familiar names
for _alias, _base in [("fig3b", "fig3a"), ("fig3c", "fig3a"),
                      ("fig3e", "fig3d"), ("fig3f", "fig3d"),
                      ("fig4b", "fig4a"), ("fig4c", "fig4a"),
                      ("fig4e", "fig4d"), ("fig4f", "fig4d"),
                      ("fig4", "fig4a"), ("fig3", "fig3d")]:
    PRESETS[_alias] = PRESETS[_base]


class ConfigError(ValueError):
    pass


def _validate_keys(cfg: dict):
    mode = cfg.get("mode", "ber")
    allowed = _BER_KEYS if mode == "ber" else _EXIT_KEYS
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    ep = cfg.get("ep") or {}
    bad = set(ep) - _EP_KEYS
    if bad:
        raise ConfigError(f"unknown ep keys: {sorted(bad)}")
    for eq in cfg.get("equalizers", []):
        if eq not in EQUALIZER_NAMES:
            raise ConfigError(f"unknown equalizer {eq!r}")


def _load_config(args) -> dict:
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        with open(path) as f:
            cfg = yaml.safe_load(f) or {}
    elif args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; "
                              f"available: {sorted(set(PRESETS))}")
        cfg = dict(PRESETS[args.preset])
    else:
        raise ConfigError("either --config or --preset is required")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a mapping")
    _validate_keys(cfg)
    if getattr(args, "equalizer", None):
        if args.equalizer not in EQUALIZER_NAMES:
            raise ConfigError(f"unknown equalizer {args.equalizer!r}")
        cfg["equalizers"] = [args.equalizer]
    if getattr(args, "eb_n0", None) is not None:
        cfg["ebn0_grid"] = [float(args.eb_n0)]
    if args.seed is not None:
        cfg["seed"] = args.seed
    return cfg


def _out_dir(args) -> Path:
    out = os.environ.get("EPTURBO_OUT") or args.out or "."
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _fingerprint() -> dict:
    return {"package": "epturbo", "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__}


def _write_meta(csv_path: Path, cfg: dict, seed: int):
    meta = {"config": cfg, "seed": seed, "build": _fingerprint()}
    csv_path.with_suffix(".meta.json").write_text(json.dumps(meta, indent=2))


def _ep_params(cfg: dict) -> EpParams:
    return EpParams(**(cfg.get("ep") or {}))


def cmd_ber(args) -> int:
    cfg = _load_config(args)
    if cfg.get("mode", "ber") != "ber":
        raise ConfigError("config mode must be 'ber' for the ber command")
    out = _out_dir(args)
    seed = int(cfg.get("seed", 0))
    min_frames = FULL_SCALE_FRAMES if args.full_scale \
        else int(cfg.get("min_frames", 200))
    min_errors = int(cfg.get("min_errors", 100))
    tag = args.preset or Path(args.config).stem
    for kind in cfg.get("constellations", ["bpsk"]):
        for eq in cfg["equalizers"]:
            link = LinkConfig(
                constellation=kind, channel=cfg.get("channel", "chan3"),
                n=int(cfg.get("n", 1024)), equalizer=eq,
                turbo_iters=int(cfg.get("turbo_iters", 5)),
                window=tuple(cfg["window"]) if cfg.get("window") else None,
                ep=_ep_params(cfg), seed=seed)
            records = ber_sweep(link, cfg["ebn0_grid"],
                                min_frames=min_frames, min_errors=min_errors,
                                workers=args.workers)
            path = out / f"ber_{tag}_{kind}_{eq}.csv"
            write_csv(records, path)
            _write_meta(path, cfg, seed)
            print(f"wrote {path}")
    return 0


def cmd_exit(args) -> int:
    cfg = _load_config(args)
    if cfg.get("mode") != "exit":
        raise ConfigError("config mode must be 'exit' for the exit command")
    out = _out_dir(args)
    seed = int(cfg.get("seed", 0))
    grid = cfg.get("i_in_grid") or _grid(0, 0.95, 0.05)
    n_symbols = int(cfg.get("exit_symbols", 20000))
    records = []
    for ebn0 in cfg.get("ebn0_points", [7.0, 9.0]):
        for eq in cfg["equalizers"]:
            records += exit_equalizer(eq, cfg.get("channel", "proakis-c"),
                                      float(ebn0), grid, n_symbols=n_symbols,
                                      seed=seed, params=_ep_params(cfg))
    code = build_ldpc(int(cfg.get("n", 4096)), seed)
    records += exit_decoder(code, grid,
                            n_frames=int(cfg.get("decoder_frames", 5)),
                            seed=seed)
    tag = args.preset or Path(args.config).stem
    path = out / f"exit_{tag}.csv"
    write_csv(records, path)
    _write_meta(path, cfg, seed)
    print(f"wrote {path}")
    return 0


def cmd_validate(args) -> int:
    from .validate import SUITES, run_suites

    names = [args.filter] if args.filter else None
    if names and names[0] not in SUITES:
        print(f"unknown suite {args.filter!r}; available: {sorted(SUITES)}",
              file=sys.stderr)
        return 2
    failures = 0
    for name, resid, tol, passed in run_suites(names):
        status = "PASS" if passed else "FAIL"
        print(f"{status} {name}: residual {resid:.3e} (tol {tol:.0e})")
        failures += 0 if passed else 1
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="epturbo",
                                description="EP-based turbo equalization experiments")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="YAML config file")
        sp.add_argument("--preset", help="named experiment preset (e.g. fig3d)")
        sp.add_argument("--seed", type=int, default=None, help="master seed")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--out", help="output directory (env EPTURBO_OUT overrides)")
        sp.add_argument("--full-scale", action="store_true",
                        help="use the full 10^4-frame setting")

    b = sub.add_parser("ber", help="Monte-Carlo BER sweep")
    common(b)
    b.add_argument("--eb-n0", type=float, help="single-point grid override")
    b.add_argument("--equalizer", help="run only this equalizer")
    b.set_defaults(func=cmd_ber)

    e = sub.add_parser("exit", help="EXIT chart measurement")
    common(e)
    e.set_defaults(func=cmd_exit)

    v = sub.add_parser("validate", help="run the oracle self-check suites")
    v.add_argument("--filter", help="run a single suite (e.g. woodbury)")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
