"""Harvested current of unit-power Lorenz, Henon and multisine waveforms over Rayleigh fading."""

from _common import parser, write_csv

from chaos_swipt.channel import ChannelProfile
from chaos_swipt.chaosgen import HenonParams, LorenzParams
from chaos_swipt.montecarlo import ExperimentConfig, WaveformConfig, simulate

CASES = [
    ("lorenz r=18", WaveformConfig(system="lorenz", lorenz=LorenzParams(10.0, 18.0, 8 / 3))),
    ("lorenz r=24", WaveformConfig(system="lorenz", lorenz=LorenzParams(10.0, 24.0, 8 / 3))),
    ("lorenz r=28", WaveformConfig(system="lorenz", lorenz=LorenzParams(10.0, 28.0, 8 / 3))),
    ("henon (0.35,0.3)", WaveformConfig(system="henon", henon=HenonParams(0.35, 0.3))),
    ("henon (0.0012,0.95)", WaveformConfig(system="henon", henon=HenonParams(0.0012, 0.95))),
    *[(f"multisine N={n}", WaveformConfig(system="multisine", tones=n)) for n in (1, 2, 4, 8)],
]


def main():
    args = parser(__doc__, "waveform_comparison.csv").parse_args()
    rows = []
    for label, w in CASES:
        cfg = ExperimentConfig(scenario="wpt_waveform", waveform=w, profile=ChannelProfile.flat(),
                               trials=args.trials, master_seed=args.seed)
        est = simulate(cfg, args.threads).i_eta_report
        print(f"{label:22s} I_eta = {est.mean:.6g} ± {est.ci95:.2g}")
        rows.append([label, est.mean, est.ci95, args.trials, args.seed])
    write_csv(args.out, ["waveform", "i_eta_mean", "i_eta_ci95", "trials", "seed"], rows)


if __name__ == "__main__":
    main()
