"""Self-sustainable RIS: harvested versus consumed power as EH elements are added at fixed N."""

from _common import parser, write_csv

from chaos_swipt.channel import ChannelProfile
from chaos_swipt.dcsk import FrameGeometry
from chaos_swipt.montecarlo import ExperimentConfig, simulate
from chaos_swipt.receivers import RisConfig


def main():
    p = parser(__doc__, "ris_sustainability.csv")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--m", type=int, nargs="+", default=[8, 16, 32])
    p.add_argument("--pe", type=float, default=0.0, help="power per IT element")
    p.add_argument("--pc", type=float, default=0.0, help="controller power")
    args = p.parse_args()
    g = FrameGeometry(40, 1)
    rows = []
    for m in args.m:
        ris = RisConfig(args.n, m, args.n - m, g, args.pe, args.pc)
        cfg = ExperimentConfig(scenario="swipt_ris", geometry=g, ris=ris, profile=ChannelProfile.flat(),
                               trials=args.trials, master_seed=args.seed)
        res = simulate(cfg, args.threads)
        harvested = float(res.harvested_w.mean())
        consumed = (args.n - m) * args.pe + args.pc
        sr = 1.0 - res.ber_report.mean if res.errors is not None else float("nan")
        print(f"M={m:3d} SR={sr:.4f} harvested={harvested:.4g} consumed={consumed:.4g}")
        rows.append([m, args.n - m, sr, harvested, consumed, harvested - consumed, harvested >= consumed])
    write_csv(args.out, ["m", "k", "sr", "harvested_w", "consumed_w", "margin_w", "pass"], rows)


if __name__ == "__main__":
    main()
