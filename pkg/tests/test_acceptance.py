"""Acceptance criteria 1-11.

Each test prints (and records for the terminal summary) one line of the form
``criterion N: PASS|FAIL  <measurements>``. Monte Carlo criteria run 10^5
trials per point; comparisons use 95% intervals as pinned below.
"""

import math
import time

import numpy as np
import pytest

from chaos_swipt.channel import ChannelProfile
from chaos_swipt.chaosgen import (
    HenonParams,
    LorenzParams,
    chebyshev_sequence,
    henon_fixed_points,
    henon_map,
    lorenz_equilibria,
    lorenz_rhs,
)
from chaos_swipt.cli import PRESETS, main
from chaos_swipt.dcsk import FrameGeometry, build_frame, demodulate, modulate, reference_chips
from chaos_swipt.harvester import EhModelParams
from chaos_swipt.montecarlo import (
    ExperimentConfig,
    WaveformConfig,
    estimate_ber,
    paired_difference,
    run_phi_sweep,
    simulate,
)
from chaos_swipt.receivers import RisConfig, SimoSplit, WptReceiverConfig, ris_swipt_link, wpt_receive

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow

TRIALS = 100_000
SEED = 7
RESIDUAL_TOL = 1e-9
ORACLE_TOL = 1e-9
MOMENT_TOL = 0.01
HARVEST_TOL = 1e-12  # chips absolute, harvest relative
PHIS_40 = [1, 2, 4, 5, 8, 10, 20, 40]
SWEEP_PHIS = [1, 2, 4, 8, 20, 40]
K_FACTORS = [0.0, 3.0, 10.0, math.inf]
R_VALUES = [18.0, 24.0, 28.0]
PRESET_TRIALS = 5000  # byte-identity check; spans several 1024-trial chunks


def record(n: int, ok: bool, detail: str, started: float):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - started:.1f} s]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def decreasing_beyond_paired_ci(samples):
    """Each consecutive mean drop must exceed its paired 95% half-width."""
    diffs = [paired_difference(a, b) for a, b in zip(samples, samples[1:])]
    return all(d.lower > 0 for d in diffs), diffs


def test_criterion_01_equilibria():
    t0 = time.perf_counter()
    lp = LorenzParams(10.0, 28.0, 8.0 / 3.0)
    rep = lorenz_equilibria(lp)
    s72 = math.sqrt(72.0)
    expected = [(0.0, 0.0, 0.0), (s72, s72, 27.0), (-s72, -s72, 27.0)]
    points_ok = len(rep.points) == 3 and all(
        np.allclose(p, e, rtol=0, atol=1e-12) for p, e in zip(rep.points, expected)
    )
    residual = max(float(np.max(np.abs(lorenz_rhs(p, lp)))) for p in rep.points)
    origin_unstable = rep.classifications[0] == "unstable"
    low = lorenz_equilibria(LorenzParams(10.0, 0.5, 8.0 / 3.0))
    origin_stable_low_r = len(low.points) == 1 and low.classifications == ["stable"]

    hp = HenonParams(0.35, 0.3)
    fp = henon_fixed_points(hp)
    d = math.sqrt(0.7**2 + 4 * 0.35)
    oracle = sorted([(-0.7 + d) / 0.7, (-0.7 - d) / 0.7], reverse=True)
    henon_err = max(abs(p[0] - x) + abs(p[1] - 0.3 * x) for p, x in zip(fp.points, oracle))
    henon_res = max(float(np.max(np.abs(henon_map(p, hp) - p))) for p in fp.points)

    ok = (points_ok and residual < RESIDUAL_TOL and origin_unstable and origin_stable_low_r
          and len(fp.points) == 2 and henon_err < ORACLE_TOL and henon_res < RESIDUAL_TOL)
    record(1, ok, f"lorenz residual={residual:.1e} origin(r=28)={rep.classifications[0]} "
                  f"origin(r=0.5)={low.classifications[0]} henon |err|={henon_err:.1e}", t0)


def test_criterion_02_chebyshev_invariant_measure():
    t0 = time.perf_counter()
    s = chebyshev_sequence(0.3141, 10**6).samples
    mean, m2 = float(s.mean()), float(np.mean(s * s))
    ok = abs(mean) < MOMENT_TOL and abs(m2 - 0.5) < MOMENT_TOL and bool(np.all(np.abs(s) <= 1.0))
    record(2, ok, f"mean={mean:+.5f} second_moment={m2:.5f}", t0)


def conventional_dcsk_frame(reference, bit):
    x = np.asarray(reference, dtype=float)
    x = x / math.sqrt(float(np.mean(x * x)))
    return np.concatenate([x, bit * x])


def test_criterion_03_modem_exactness():
    t0 = time.perf_counter()
    bits = np.random.default_rng(SEED).choice([-1, 1], 10_000)
    errors = {}
    for phi in PHIS_40:
        g = FrameGeometry(40, phi)
        frames = modulate(bits, g, chip_seed=SEED)
        est = np.array([demodulate(f.chips, g).bit_estimate for f in frames])
        errors[phi] = int(np.sum(est != bits))

    g = FrameGeometry(40, 40)
    rx = WptReceiverConfig(g, True, EhModelParams())
    worst_chip = worst_harvest = 0.0
    decisions_equal = True
    for l, bit in enumerate(bits[:2000]):
        ref = reference_chips(SEED, l, 40)
        ours = build_frame(ref, int(bit), g).chips
        conv = conventional_dcsk_frame(ref, int(bit))
        worst_chip = max(worst_chip, float(np.max(np.abs(ours - conv))))
        a, b = wpt_receive(ours, rx).i_eta, wpt_receive(conv, rx).i_eta
        worst_harvest = max(worst_harvest, abs(a - b) / max(abs(b), 1.0))  # b = 0 when bit = -1
        decisions_equal &= demodulate(ours, g).bit_estimate == demodulate(conv, g).bit_estimate
    ok = (all(v == 0 for v in errors.values()) and decisions_equal
          and worst_chip <= HARVEST_TOL and worst_harvest <= HARVEST_TOL)
    record(3, ok, f"roundtrip errors={sum(errors.values())} over {len(PHIS_40)} geometries; "
                  f"phi=beta |chip diff|={worst_chip:.1e} harvest rel diff={worst_harvest:.1e}", t0)


def dcsk_config(**kw):
    base = dict(scenario="wpt_dcsk", geometry=FrameGeometry(40, 1),
                profile=ChannelProfile.flat(rician_k=0.0), trials=TRIALS, master_seed=SEED)
    base.update(kw)
    return ExperimentConfig(**base)


def test_criterion_04_correlator_gain():
    t0 = time.perf_counter()
    on = simulate(dcsk_config(correlator=True)).i_eta_report
    off = simulate(dcsk_config(correlator=False)).i_eta_report
    gap = on.mean - off.mean
    ok = gap > on.ci95 + off.ci95
    record(4, ok, f"I_eta on={on.mean:.4g}±{on.ci95:.2g} off={off.mean:.4g}±{off.ci95:.2g}", t0)


def test_criterion_05_phi_monotonicity():
    t0 = time.perf_counter()
    pts = run_phi_sweep(dcsk_config(), SWEEP_PHIS, keep_samples=True)
    ok, diffs = decreasing_beyond_paired_ci([p.results.i_eta for p in pts])
    means = " ".join(f"{p.phi}:{p.i_eta_mean:.4g}" for p in pts)
    worst = min(d.mean / d.ci95 for d in diffs)
    record(5, ok, f"I_eta by phi {means}; smallest drop/CI={worst:.2f}", t0)


def test_criterion_06_fading_helps_eh():
    t0 = time.perf_counter()
    res = [simulate(dcsk_config(profile=ChannelProfile.flat(rician_k=k))) for k in K_FACTORS]
    ok, diffs = decreasing_beyond_paired_ci([r.i_eta for r in res])
    means = " ".join(f"K={k:g}:{r.i_eta_report.mean:.4g}" for k, r in zip(K_FACTORS, res))
    worst = min(d.mean / d.ci95 for d in diffs)
    record(6, ok, f"{means}; smallest drop/CI={worst:.2f}", t0)


def test_criterion_07_simo_tradeoff():
    t0 = time.perf_counter()
    cfg = ExperimentConfig(
        scenario="swipt_simo", geometry=FrameGeometry(40, 1), split=SimoSplit(5, 1, 4),
        profile=ChannelProfile((0.5, 0.5), gamma0_db=10.0), trials=TRIALS, master_seed=SEED,
    )
    sel = run_phi_sweep(cfg, SWEEP_PHIS, keep_samples=True)
    flat = run_phi_sweep(cfg.replace(profile=ChannelProfile((1.0, 0.0), gamma0_db=10.0)),
                         SWEEP_PHIS, keep_samples=True)
    sr_up = all(b.sr >= a.sr for a, b in zip(sel, sel[1:]))
    ie_down = all(b.i_eta_mean <= a.i_eta_mean for a, b in zip(sel, sel[1:]))
    gains = [paired_difference(s.results.i_eta, f.results.i_eta) for s, f in zip(sel, flat)]
    selective_better = all(g.lower > 0 for g in gains)
    ok = sr_up and ie_down and selective_better
    curve = " ".join(f"{p.phi}:({p.sr:.4f},{p.i_eta_mean:.4g})" for p in sel)
    worst = min(g.mean / g.ci95 for g in gains)
    record(7, ok, f"(SR, I_eta) by phi {curve}; selective-flat smallest gain/CI={worst:.2f}", t0)


def waveform_config(w: WaveformConfig):
    return ExperimentConfig(scenario="wpt_waveform", waveform=w,
                            profile=ChannelProfile.flat(rician_k=0.0), trials=TRIALS, master_seed=SEED)


def test_criterion_08_waveform_trends():
    t0 = time.perf_counter()
    lorenz = [simulate(waveform_config(WaveformConfig(system="lorenz", lorenz=LorenzParams(10.0, r, 8 / 3))))
              for r in R_VALUES]
    lorenz_ok, diffs = decreasing_beyond_paired_ci([r.i_eta for r in reversed(lorenz)])
    h1 = simulate(waveform_config(WaveformConfig(system="henon", henon=HenonParams(0.35, 0.3)))).i_eta_report
    h2 = simulate(waveform_config(WaveformConfig(system="henon", henon=HenonParams(0.0012, 0.95)))).i_eta_report
    henon_ok = abs(h1.mean - h2.mean) > h1.ci95 + h2.ci95
    means = " ".join(f"r={r:g}:{x.i_eta_report.mean:.4g}" for r, x in zip(R_VALUES, lorenz))
    record(8, lorenz_ok and henon_ok,
           f"lorenz {means} ({'increasing' if lorenz_ok else 'not separated'}); "
           f"henon (0.35,0.3)={h1.mean:.10g}±{h1.ci95:.1g} (0.0012,0.95)={h2.mean:.10g}±{h2.ci95:.1g} "
           f"({'separated' if henon_ok else 'not separated'})", t0)


def test_criterion_09_ber_sanity():
    t0 = time.perf_counter()
    g = FrameGeometry(40, 40)

    def ber(db, trials=TRIALS):
        return estimate_ber(ExperimentConfig(
            scenario="swipt_simo", geometry=g, split=SimoSplit(1, 0, 1),
            profile=ChannelProfile.flat(math.inf, db), trials=trials, master_seed=SEED,
        ))

    curve = [ber(db) for db in (0.0, 5.0, 10.0, 15.0)]
    strictly = all(b.upper < a.lower for a, b in zip(curve, curve[1:]))
    noiseless = ber(math.inf, trials=10_000)
    ok = strictly and noiseless.mean == 0.0
    pts = " ".join(f"{db:g}dB:{b.mean:.4g}[{b.lower:.2g},{b.upper:.2g}]"
                   for db, b in zip((0, 5, 10, 15), curve))
    record(9, ok, f"BER {pts}; noiseless={noiseless.mean}", t0)


def test_criterion_10_ris_sustainability():
    t0 = time.perf_counter()
    g = FrameGeometry(40, 1)
    n = 64

    def ris_cfg(m, pe, pc):
        return ExperimentConfig(
            scenario="swipt_ris", geometry=g, ris=RisConfig(n, m, n - m, g, pe, pc),
            profile=ChannelProfile.flat(), trials=2000, master_seed=SEED,
        )

    zero_ok = all(
        bool(np.all(simulate(ris_cfg(m, 0.0, 0.0)).harvested_w >= 0.0)) for m in (0, 8, 32, 64)
    )
    pe, pc = 1e3, 1e4
    consumed = {m: (n - m) * pe + pc for m in (8, 16, 32)}
    margins = {m: simulate(ris_cfg(m, pe, pc)).harvested_w - consumed[m] for m in (8, 16, 32)}
    monotone = bool(np.all(margins[16] >= margins[8]) and np.all(margins[32] >= margins[16]))

    rng = np.random.default_rng(SEED)
    cfg = RisConfig(n, 16, n - 16, g)
    additive = True
    for l in range(200):
        h1 = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
        h2 = (rng.standard_normal(n - 16) + 1j * rng.standard_normal(n - 16)) / math.sqrt(2)
        (frame,) = modulate([1], g, chip_seed=SEED, first_index=l)
        out, _ = ris_swipt_link(frame, cfg, h1, h2, rng)
        additive &= out.i_eta == math.fsum(out.per_branch["element_currents"])
    ok = zero_ok and monotone and additive
    record(10, ok, f"zero-consumption pass={zero_ok} margin monotone in M={monotone} "
                   f"EH sum exact={additive}", t0)


def test_criterion_11_preset_reproducibility(tmp_path, monkeypatch, capsys):
    t0 = time.perf_counter()
    monkeypatch.delenv("CHAOS_SWIPT_SEED", raising=False)
    failures = []
    for command, preset in PRESETS:
        stem = f"{command}-{preset}"
        first = tmp_path / f"{stem}.csv"
        extra = ["--window", "512"] if command == "wpt" else []
        assert main([command, "--preset", preset, "--trials", str(PRESET_TRIALS), *extra,
                     "--threads", "1", "--out", str(first)]) == 0
        for threads in ("1", "8"):
            again = tmp_path / f"{stem}-rerun{threads}.csv"
            code = main([command, "--config", str(first.with_suffix(".manifest")),
                         "--threads", threads, "--out", str(again)])
            if code != 0 or again.read_bytes() != first.read_bytes():
                failures.append(f"{stem}@{threads}")
    capsys.readouterr()
    ok = not failures
    record(11, ok, f"{len(PRESETS)} presets x threads 1/8 byte-identical"
                   + ("" if ok else f"; mismatches {failures}"), t0)
