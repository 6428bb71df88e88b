#!/usr/bin/env python3
"""Fit the named calibration profiles by grid search over the simulator.

The simulator's named profiles (fig5, fig6) carry deployment constants that
cannot be derived from protocol specs alone: transport stack overheads,
backhaul distance, connection setup cost and the ordering service's
processing coefficients.  This script reproduces those constants by shelling
out to the CLI and minimising squared error against the published operating
points of the two bundled studies.

Fixed by structure, not fitted here:
  - profile.header_ul_bytes = 60: transport stack accounting for the uplink
    (UDP/IP + security + application framing on a constrained stack).
  - endorsement responses carry the proposal digest (32 B) plus the
    endorsement signature (72 B), not a payload echo.
  - the baseline server ack is 4 application bytes.

Fitted:
  - usecase1: profile.header_dl_bytes, pinned by the anchor configuration
    (P=50, E=2) whose mean UL/DL ratio must be 0.5.
  - usecase2: cell.connected_setup_ms, profile.block_proc_base_ms and
    profile.block_proc_per_tx_ms, pinned by the ledgerless baseline (0.832 s)
    and the block-size sweep (1.63 s at b=100, linear in between). The
    baseline row carries no ordering cost, which is what separates the setup
    constant from the block processing base.

Every latency row also absorbs the run's random-access occasion phase, a
per-seed constant drawn from a 40 ms window, so the loss is averaged over
several seeds and candidates within that jitter of the minimum are reported
as ties rather than pretending the anchors resolve single milliseconds.

Usage:
  tools/calibrate.py --cli build/tools/nbdlt [--quick] [--seeds N]
"""

import argparse
import csv
import subprocess
import sys
import tempfile
from pathlib import Path

RATIO_TARGETS = {(50, 2): 0.5}  # (P, E) -> mean UL/DL ratio

LATENCY_TARGETS = {  # block size -> seconds; 0 is the ledgerless baseline
    0: 0.832,
    10: 1.059,
    30: 1.179,
    50: 1.299,
    100: 1.630,
}


def run_cli(cli, scenario, seed, overrides, out_dir):
    cfg = Path(out_dir) / "candidate.cfg"
    cfg.write_text("".join(f"{k} = {v}\n" for k, v in overrides.items()))
    cmd = [
        cli, "run",
        "--scenario", scenario,
        "--seed", str(seed),
        "--config", str(cfg),
        "--out", str(Path(out_dir) / "run"),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")
    return Path(out_dir) / "run"


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def fit_ratio_overhead(cli, quick):
    """Sweep the downlink header overhead against the ratio anchor."""
    candidates = range(150, 176) if not quick else range(160, 166)
    best = None
    for h_dl in candidates:
        with tempfile.TemporaryDirectory() as tmp:
            out = run_cli(cli, "usecase1", 1, {
                "profile.header_dl_bytes": h_dl,
                "scenario.n_transactions": 30,
            }, tmp)
            rows = read_csv(out / "fig5.csv")
            loss = 0.0
            for row in rows:
                key = (int(row["P_bytes"]), int(row["E"]))
                if key in RATIO_TARGETS:
                    loss += (float(row["ratio_mean"]) - RATIO_TARGETS[key]) ** 2
        if best is None or loss < best[0]:
            best = (loss, h_dl)
        print(f"  header_dl_bytes={h_dl:4d}  loss={loss:.6f}")
    print(f"best: profile.header_dl_bytes = {best[1]} (loss {best[0]:.6f})")
    return best[1]


# Squared-error slack granted to the latency fit: a 20 ms phase shift at
# every target is indistinguishable from deployment constants.
JITTER_BAND = 0.020 ** 2 * len(LATENCY_TARGETS)


def fit_latency_profile(cli, quick, seeds):
    """Sweep setup time and ordering cost coefficients against the latency curve."""
    if quick:
        setups = [728]
        bases = [10]
        per_txs = [5, 6, 7]
    else:
        setups = range(678, 779, 25)
        bases = [5, 10, 15, 20]
        per_txs = [4, 5, 6, 7, 8]
    results = []
    for setup in setups:
        for base in bases:
            for per_tx in per_txs:
                loss = 0.0
                for seed in range(1, seeds + 1):
                    with tempfile.TemporaryDirectory() as tmp:
                        out = run_cli(cli, "usecase2", seed, {
                            "cell.connected_setup_ms": setup,
                            "profile.block_proc_base_ms": base,
                            "profile.block_proc_per_tx_ms": per_tx,
                            "scenario.n_transactions": 60,
                        }, tmp)
                        rows = read_csv(out / "fig6.csv")
                        loss += sum(
                            (float(r["e2e_mean_s"])
                             - LATENCY_TARGETS[int(r["b"])]) ** 2
                            for r in rows if int(r["b"]) in LATENCY_TARGETS)
                loss /= seeds
                results.append((loss, setup, base, per_tx))
                print(f"  setup={setup}ms base={base}ms per_tx={per_tx}ms"
                      f"  loss={loss:.6f}")
    results.sort()
    ties = [r for r in results if r[0] <= results[0][0] + JITTER_BAND]
    print("within the access-jitter band of the minimum:")
    for loss, setup, base, per_tx in ties:
        print(f"  cell.connected_setup_ms = {setup}, "
              f"profile.block_proc_base_ms = {base}, "
              f"profile.block_proc_per_tx_ms = {per_tx} (loss {loss:.6f})")
    return ties[0][1:]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cli", default="build/tools/nbdlt",
                    help="path to the simulator CLI")
    ap.add_argument("--study", choices=["ratio", "latency", "both"],
                    default="both")
    ap.add_argument("--quick", action="store_true",
                    help="narrow grids around the shipped profile values")
    ap.add_argument("--seeds", type=int, default=3,
                    help="seeds to average the latency loss over")
    args = ap.parse_args()

    if not Path(args.cli).exists():
        sys.exit(f"CLI not found at {args.cli}; build it first")

    if args.study in ("ratio", "both"):
        print("fitting downlink overhead for the traffic ratio study:")
        fit_ratio_overhead(args.cli, args.quick)
    if args.study in ("latency", "both"):
        print("fitting setup and ordering costs for the latency study:")
        fit_latency_profile(args.cli, args.quick, args.seeds)


if __name__ == "__main__":
    main()
