"""SIMO SWIPT success-rate / harvested-current trade-off over the reference length."""

from _common import parser, write_csv

from chaos_swipt.channel import ChannelProfile
from chaos_swipt.dcsk import FrameGeometry
from chaos_swipt.montecarlo import ExperimentConfig, run_phi_sweep
from chaos_swipt.receivers import SimoSplit

PHIS = [1, 2, 4, 8, 20, 40]
PROFILES = {"selective": (0.5, 0.5), "flat": (1.0, 0.0)}


def main():
    p = parser(__doc__, "simo_tradeoff.csv")
    p.add_argument("--gamma0-db", type=float, default=10.0)
    args = p.parse_args()
    rows = []
    for name, omega in PROFILES.items():
        cfg = ExperimentConfig(
            scenario="swipt_simo", geometry=FrameGeometry(40, 1), split=SimoSplit(5, 1, 4),
            profile=ChannelProfile(omega, gamma0_db=args.gamma0_db),
            trials=args.trials, master_seed=args.seed,
        )
        for pt in run_phi_sweep(cfg, PHIS, args.threads):
            print(f"{name:9s} phi={pt.phi:2d} SR={pt.sr:.4f} I_eta={pt.i_eta_mean:.6g}")
            rows.append([name, pt.phi, pt.sr, pt.sr_ci95, pt.i_eta_mean, pt.i_eta_ci95])
    write_csv(args.out, ["profile", "phi", "sr", "sr_ci95", "i_eta_mean", "i_eta_ci95"], rows)


if __name__ == "__main__":
    main()
