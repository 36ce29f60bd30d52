"""Command-line front end.

    chaos-swipt wpt           --system lorenz --r 18,24,28 --out fig2.csv
    chaos-swipt sweep-phi     --beta 40 --phis 1,2,4,8,20,40 --n 5 --m 1 --k 4 --out fig5.csv
    chaos-swipt channel-sweep --k-factors 0,3,10,inf --omegas "1;0.5,0.5" --out k.csv
    chaos-swipt ris           --n 64 --m-sweep 8,16,32 --pe 1e-6 --pc 1e-5 --out ris.csv

Settings are resolved as defaults < ``--preset`` < ``CHAOS_SWIPT_SEED`` <
``--config`` file < explicit flags. A config file holds ``key=value`` lines
whose keys are flag names without the leading dashes; ``#`` starts a comment.
Every CSV written with ``--out`` gets a ``.manifest`` sidecar in the same
format, so ``--config run.manifest`` repeats the run exactly.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from chaos_swipt import __version__
from chaos_swipt.channel import ChannelProfile
from chaos_swipt.chaosgen import HenonParams, LorenzParams
from chaos_swipt.dcsk import FrameGeometry, validate_geometry
from chaos_swipt.errors import DivergenceError, DomainError, TrialError
from chaos_swipt.harvester import EhModelParams
from chaos_swipt.montecarlo import (
    ExperimentConfig,
    WaveformConfig,
    run_channel_sweep,
    run_phi_sweep,
    simulate,
)
from chaos_swipt.receivers import RisConfig, SimoSplit, sustainability_check

SEED_ENV = "CHAOS_SWIPT_SEED"
META_KEYS = {"command", "version", "started", "finished", "output"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# value parsing / formatting


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(fmt(x) for x in v)
    return str(v)


def _float(s: str) -> float:
    v = float(s)
    if math.isnan(v):
        raise ValueError("NaN")
    return v


def _int(s: str) -> int:
    return int(s)


def _bool(s: str) -> bool:
    t = s.strip().lower()
    if t in ("1", "true", "on", "yes"):
        return True
    if t in ("0", "false", "off", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _list(item):
    def parse(s: str):
        return [item(p) for p in s.replace(" ", "").split(",") if p]

    return parse


def _profile(s: str) -> tuple[float, ...]:
    return tuple(_float(p) for p in s.replace(":", ",").split(",") if p.strip())


def _profiles(s: str) -> list[tuple[float, ...]]:
    return [_profile(p) for p in s.split(";") if p.strip()]


def fmt_profile(p) -> str:
    return ":".join(fmt(float(x)) for x in p)


def _choice(*options):
    def parse(s: str):
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return s

    return parse


def _seed(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise ValueError("seed must fit in 64 unsigned bits")
    return v


# ---------------------------------------------------------------------------
# option tables: key -> (parser, default, help)

COMMON = {
    "trials": (_int, 100_000, "Monte Carlo trials per point"),
    "seed": (_seed, 0, "master seed (also CHAOS_SWIPT_SEED)"),
    "channel": (_choice("rayleigh", "rician", "awgn"), "rayleigh", "fading law"),
    "k_factor": (_float, 0.0, "Rician K for --channel rician (inf allowed)"),
    "omega": (_profile, (1.0,), "path power profile, e.g. 0.5,0.5"),
    "gamma0_db": (_float, 10.0, "average SNR in dB (inf disables noise)"),
    "k2": (_float, EhModelParams.k2, "diode 2nd-order coefficient"),
    "k4": (_float, EhModelParams.k4, "diode 4th-order coefficient"),
    "load_resistance": (_float, EhModelParams.load_resistance, "EH load in ohm"),
}

OPTIONS = {
    "wpt": {
        "system": (_list(_choice("lorenz", "henon", "multisine", "chebyshev")), ["lorenz"],
                   "waveform families, comma separated"),
        "r": (_list(_float), [28.0], "Lorenz r values"),
        "sigma": (_float, 10.0, "Lorenz sigma"),
        "lorenz_beta": (_float, 8.0 / 3.0, "Lorenz beta"),
        "gamma": (_list(_float), [0.96], "Henon gamma values (paired with --delta)"),
        "delta": (_list(_float), [0.2], "Henon delta values"),
        "tones": (_list(_int), [4], "multisine tone counts"),
        "window": (_int, 4096, "samples per trial window"),
        "transient": (_int, 1000, "samples discarded before the window"),
        "dt": (_float, 0.01, "RK4 step"),
        "init_jitter": (_float, 0.05, "std of the per-trial start-point offset"),
        "normalize": (_bool, True, "unit-power normalize each window"),
        **COMMON,
    },
    "sweep-phi": {
        "scenario": (_choice("simo", "dcsk"), "simo", "SIMO SWIPT or single-antenna WPT"),
        "beta": (_int, 40, "spreading factor"),
        "phis": (_list(_int), [1, 2, 4, 8, 20, 40], "reference lengths"),
        "n": (_int, 5, "antennas"),
        "m": (_int, 1, "EH antennas"),
        "k": (_int, 4, "IT antennas"),
        "correlator": (_bool, True, "analog correlator before the EH unit"),
        **COMMON,
    },
    "channel-sweep": {
        "scenario": (_choice("simo", "dcsk"), "dcsk", "SIMO SWIPT or single-antenna WPT"),
        "beta": (_int, 40, "spreading factor"),
        "phi": (_int, 1, "reference length"),
        "n": (_int, 5, "antennas"),
        "m": (_int, 1, "EH antennas"),
        "k": (_int, 4, "IT antennas"),
        "correlator": (_bool, True, "analog correlator before the EH unit"),
        "k_factors": (_list(_float), [0.0, 3.0, 10.0, math.inf], "Rician K grid"),
        "omegas": (_profiles, [(1.0,)], "profiles separated by ';', e.g. '1;0.5,0.5'"),
        **{k: v for k, v in COMMON.items() if k not in ("channel", "k_factor", "omega")},
    },
    "ris": {
        "n": (_int, 64, "RIS elements"),
        "m": (_int, 16, "EH elements"),
        "k": (_int, -1, "IT elements (default N - M)"),
        "m_sweep": (_list(_int), [], "several M values at fixed N (overrides --m)"),
        "pe": (_float, 0.0, "power per IT element (W)"),
        "pc": (_float, 0.0, "controller power (W)"),
        "beta": (_int, 40, "spreading factor"),
        "phi": (_int, 1, "reference length"),
        **{k: v for k, v in COMMON.items() if k != "omega"},
    },
}

PRESETS = {
    ("wpt", "fig2"): {
        "system": "lorenz,henon,multisine", "r": "18,24,28",
        "gamma": "0.35,0.0012", "delta": "0.3,0.95", "tones": "1,2,4,8",
        "channel": "rayleigh", "omega": "1", "trials": "100000", "seed": "7",
    },
    ("sweep-phi", "fig4"): {
        "scenario": "dcsk", "beta": "40", "phis": "1,2,4,8,20,40", "channel": "rayleigh",
        "omega": "1", "correlator": "true", "trials": "100000", "seed": "7",
    },
    ("channel-sweep", "fig4"): {
        "scenario": "dcsk", "beta": "40", "phi": "1", "k_factors": "0,3,10,inf",
        "omegas": "1;0.5,0.5", "trials": "100000", "seed": "7",
    },
    ("sweep-phi", "fig5"): {
        "scenario": "simo", "beta": "40", "phis": "1,2,4,8,20,40", "n": "5", "m": "1", "k": "4",
        "gamma0_db": "10", "channel": "rayleigh", "omega": "0.5,0.5", "trials": "100000",
        "seed": "7",
    },
}

CSV_HEADERS = {
    "wpt": ["system", "param_r", "param_gamma", "param_delta", "tones",
            "i_eta_mean", "i_eta_ci95", "trials", "seed"],
    "sweep-phi": ["phi", "sr", "sr_ci95", "i_eta_mean", "i_eta_ci95"],
    "channel-sweep": ["rician_k", "omega", "sr", "sr_ci95", "i_eta_mean", "i_eta_ci95",
                      "trials", "seed"],
    "ris": ["m", "k", "sr", "i_eta_mean", "harvested_w", "consumed_w", "margin_w", "pass"],
}


# ---------------------------------------------------------------------------
# settings resolution


def read_config(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def resolve(command: str, explicit: dict[str, str], preset: str | None,
            config: str | None, env: dict[str, str]) -> dict:
    table = OPTIONS[command]
    raw: dict[str, str] = {}
    if preset:
        if (command, preset) not in PRESETS:
            known = sorted(p for c, p in PRESETS if c == command)
            raise UsageError(f"no preset {preset!r} for {command} (available: {', '.join(known)})")
        raw.update(PRESETS[command, preset])
    if SEED_ENV in env:
        raw["seed"] = env[SEED_ENV]
    if config:
        for key, value in read_config(config).items():
            if key in META_KEYS or key in ("out", "threads", "preset"):
                continue
            if key not in table:
                raise UsageError(f"{config}: unknown key {key!r} for {command}")
            raw[key] = value
    raw.update(explicit)

    settings = {}
    for key, (parse, default, _) in table.items():
        if key in raw:
            try:
                settings[key] = parse(raw[key])
            except (ValueError, TypeError) as exc:
                raise UsageError(f"--{key.replace('_', '-')}: {exc}") from None
        else:
            settings[key] = default
    return settings


# ---------------------------------------------------------------------------
# builders


def _geometry(beta: int, phi: int) -> FrameGeometry:
    try:
        return validate_geometry(beta, phi)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _profile_from(s: dict) -> ChannelProfile:
    k = {"rayleigh": 0.0, "awgn": math.inf, "rician": s["k_factor"]}[s["channel"]]
    return ChannelProfile(tuple(s["omega"]), None, k, s["gamma0_db"])


def _eh(s: dict) -> EhModelParams:
    return EhModelParams(s["k2"], s["k4"], s["load_resistance"])


def _dcsk_config(s: dict, geometry: FrameGeometry, profile: ChannelProfile) -> ExperimentConfig:
    scenario = "swipt_simo" if s["scenario"] == "simo" else "wpt_dcsk"
    split = SimoSplit(s["n"], s["m"], s["k"])
    return ExperimentConfig(
        scenario=scenario, geometry=geometry, profile=profile, split=split,
        eh_model=_eh(s), correlator=s["correlator"], trials=s["trials"], master_seed=s["seed"],
    )


def run_wpt(s: dict, threads: int) -> list[list]:
    profile = _profile_from(s)
    base = WaveformConfig(
        window=s["window"], transient=s["transient"], dt=s["dt"],
        init_jitter=s["init_jitter"], normalize=s["normalize"],
    )
    if len(s["gamma"]) != len(s["delta"]):
        raise UsageError("--gamma and --delta need the same number of values")
    jobs = []
    for system in s["system"]:
        if system == "lorenz":
            for r in s["r"]:
                w = dataclasses.replace(base, system="lorenz",
                                        lorenz=LorenzParams(s["sigma"], r, s["lorenz_beta"]))
                jobs.append((["lorenz", r, "", "", ""], w))
        elif system == "henon":
            for g, d in zip(s["gamma"], s["delta"]):
                w = dataclasses.replace(base, system="henon", henon=HenonParams(g, d))
                jobs.append((["henon", "", g, d, ""], w))
        elif system == "multisine":
            for n in s["tones"]:
                w = dataclasses.replace(base, system="multisine", tones=n)
                jobs.append((["multisine", "", "", "", n], w))
        else:
            jobs.append((["chebyshev", "", "", "", ""], dataclasses.replace(base, system="chebyshev")))
    rows = []
    for label, w in jobs:
        cfg = ExperimentConfig(
            scenario="wpt_waveform", waveform=w, profile=profile, eh_model=_eh(s),
            trials=s["trials"], master_seed=s["seed"],
        )
        est = simulate(cfg, threads).i_eta_report
        rows.append(label + [est.mean, est.ci95, s["trials"], s["seed"]])
    return rows


def run_sweep_phi(s: dict, threads: int) -> list[list]:
    geometries = [_geometry(s["beta"], p) for p in s["phis"]]
    cfg = _dcsk_config(s, geometries[0], _profile_from(s))
    points = run_phi_sweep(cfg, [g.phi for g in geometries], threads)
    return [[p.phi, p.sr, p.sr_ci95, p.i_eta_mean, p.i_eta_ci95] for p in points]


def run_channel(s: dict, threads: int) -> list[list]:
    geometry = _geometry(s["beta"], s["phi"])
    profiles = s["omegas"]
    for om in profiles:
        try:
            ChannelProfile(om)
        except DomainError as exc:
            raise UsageError(f"--omegas: {exc}") from None
    base = ChannelProfile(profiles[0], None, 0.0, s["gamma0_db"])
    cfg = _dcsk_config(s, geometry, base)
    rows = []
    for row in run_channel_sweep(cfg, s["k_factors"], profiles, threads):
        sr = "" if row.sr is None else row.sr
        sr_ci = "" if row.sr_ci95 is None else row.sr_ci95
        rows.append([row.rician_k, fmt_profile(row.omega), sr, sr_ci,
                     row.i_eta.mean, row.i_eta.ci95, s["trials"], s["seed"]])
    return rows


def run_ris(s: dict, threads: int) -> list[list]:
    n = s["n"]
    ms = s["m_sweep"] or [s["m"]]
    if not s["m_sweep"] and s["k"] >= 0 and s["m"] + s["k"] != n:
        raise UsageError(f"M + K must equal N: {s['m']} + {s['k']} != {n}")
    geometry = _geometry(s["beta"], s["phi"])
    k = {"rayleigh": 0.0, "awgn": math.inf, "rician": s["k_factor"]}[s["channel"]]
    profile = ChannelProfile((1.0,), None, k, s["gamma0_db"])
    rows = []
    for m in ms:
        if not 0 <= m <= n:
            raise UsageError(f"M={m} outside [0, {n}]")
        ris = RisConfig(n, m, n - m, geometry, s["pe"], s["pc"], _eh(s), s["gamma0_db"])
        cfg = ExperimentConfig(
            scenario="swipt_ris", geometry=geometry, profile=profile, ris=ris,
            eh_model=_eh(s), trials=s["trials"], master_seed=s["seed"],
        )
        res = simulate(cfg, threads)
        sr = "" if res.errors is None else 1.0 - res.ber_report.mean
        harvested = float(res.harvested_w.mean())
        consumed = sustainability_check(0.0, ris).consumed_power_w
        margin = harvested - consumed
        rows.append([m, n - m, sr, res.i_eta_report.mean, harvested, consumed, margin,
                     margin >= 0])
    return rows


RUNNERS = {"wpt": run_wpt, "sweep-phi": run_sweep_phi, "channel-sweep": run_channel, "ris": run_ris}


# ---------------------------------------------------------------------------
# output


def render_csv(command: str, rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADERS[command])
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def manifest_text(command: str, settings: dict, out: Path, started: str, finished: str) -> str:
    lines = [f"command={command}", f"version={__version__}"]
    for key, value in settings.items():
        if key == "omegas":
            value = ";".join(fmt(list(p)) for p in value)
        lines.append(f"{key}={fmt(value)}")
    lines += [f"started={started}", f"finished={finished}", f"output={out}"]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaos-swipt", description="Chaotic-waveform WPT/SWIPT Monte Carlo simulator."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, table in OPTIONS.items():
        p = sub.add_parser(command, argument_default=argparse.SUPPRESS)
        for key, (_, default, help_text) in table.items():
            p.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE",
                           help=f"{help_text} (default: {fmt(default)})")
        p.add_argument("--preset", dest="preset", help="fig2 | fig4 | fig5")
        p.add_argument("--config", dest="config", help="key=value settings file")
        p.add_argument("--out", dest="out", help="CSV path (default: stdout)")
        p.add_argument("--threads", dest="threads", type=int, help="worker threads (default 1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    preset = args.pop("preset", None)
    config = args.pop("config", None)
    out = args.pop("out", None)
    threads = args.pop("threads", 1)
    try:
        if threads < 1:
            raise UsageError("--threads must be >= 1")
        settings = resolve(command, args, preset, config, dict(os.environ))
    except (UsageError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"chaos-swipt {command}: error: {exc}", file=sys.stderr)
        return 2

    started = datetime.now(timezone.utc).isoformat()
    try:
        rows = RUNNERS[command](settings, threads)
    except UsageError as exc:
        print(f"chaos-swipt {command}: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, DivergenceError, TrialError) as exc:
        print(f"chaos-swipt {command}: simulation error: {exc}", file=sys.stderr)
        return 1
    finished = datetime.now(timezone.utc).isoformat()

    text = render_csv(command, rows)
    if out is None:
        sys.stdout.write(text)
        return 0
    path = Path(out)
    path.write_text(text)
    path.with_suffix(".manifest").write_text(manifest_text(command, settings, path, started, finished))
    print(f"wrote {path} ({len(rows)} rows)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
