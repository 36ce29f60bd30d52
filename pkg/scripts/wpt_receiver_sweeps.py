"""Single-antenna SR-DCSK WPT: correlator gain, reference-length sweep and Rician-K sweep."""

import math

from _common import parser, write_csv

from chaos_swipt.channel import ChannelProfile
from chaos_swipt.dcsk import FrameGeometry
from chaos_swipt.montecarlo import ExperimentConfig, run_channel_sweep, run_phi_sweep, simulate

PHIS = [1, 2, 4, 8, 20, 40]
K_FACTORS = [0.0, 3.0, 10.0, math.inf]
OMEGAS = [(1.0,), (0.5, 0.5)]


def main():
    args = parser(__doc__, "wpt_receiver_sweeps.csv").parse_args()
    base = ExperimentConfig(scenario="wpt_dcsk", geometry=FrameGeometry(40, 1),
                            profile=ChannelProfile.flat(), trials=args.trials, master_seed=args.seed)
    rows = []
    for corr in (True, False):
        est = simulate(base.replace(correlator=corr), args.threads).i_eta_report
        rows.append(["correlator", "on" if corr else "off", est.mean, est.ci95])
    for p in run_phi_sweep(base, PHIS, args.threads):
        rows.append(["phi", p.phi, p.i_eta_mean, p.i_eta_ci95])
    for r in run_channel_sweep(base, K_FACTORS, OMEGAS, args.threads):
        rows.append([f"K omega={':'.join(map(str, r.omega))}", r.rician_k, r.i_eta.mean, r.i_eta.ci95])
    for row in rows:
        print(*row, sep="\t")
    write_csv(args.out, ["sweep", "value", "i_eta_mean", "i_eta_ci95"], rows)


if __name__ == "__main__":
    main()
