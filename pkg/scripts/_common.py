"""Shared argument handling for the experiment scripts."""

import argparse
import csv
from pathlib import Path


def parser(description: str, default_out: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials per point")
    p.add_argument("--seed", type=int, default=7, help="master seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument("--out", type=Path, default=Path("results") / default_out, help="CSV path")
    return p


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")
