"""Freeze the regression baselines used by the acceptance suite.

Run once (or after an intentional statistics change) from the repo root:

    python3 scripts/freeze_baselines.py

Writes tests/data/regression_baselines.json: the d=2 singular fraction at
(n, trials) = (40, 10^4) and the kernel level-set histogram at (60, 2),
each with Wilson 95% intervals. Reruns at the recorded master seed are
byte-deterministic, so the acceptance check asserts interval containment
of freshly recomputed statistics.
"""

import json
import pathlib
import sys

from dreglab import GridSpec, SamplerConfig, run_grid, wilson_interval

MASTER_SEED = 20260819
SING_N, SING_D, SING_TRIALS = 40, 2, 10_000
HIST_N, HIST_D, HIST_TRIALS = 60, 2, 5_000


def singular_fraction_baseline() -> dict:
    grid = GridSpec(pairs=((SING_N, SING_D),), trials=SING_TRIALS, sampler=SamplerConfig())
    records = run_grid(grid, MASTER_SEED)
    done = [r for r in records if r.corank is not None]
    singular = sum(1 for r in done if r.corank >= 1)
    lo, hi = wilson_interval(singular, len(done))
    return {
        "n": SING_N,
        "d": SING_D,
        "trials": SING_TRIALS,
        "master_seed": MASTER_SEED,
        "kind": "stub_rejection",
        "completed": len(done),
        "singular": singular,
        "fraction": singular / len(done),
        "wilson_low": lo,
        "wilson_high": hi,
    }


def level_set_baseline() -> dict:
    grid = GridSpec(pairs=((HIST_N, HIST_D),), trials=HIST_TRIALS, sampler=SamplerConfig())
    records = run_grid(grid, MASTER_SEED)
    singular = [r for r in records if r.corank is not None and r.corank >= 1]
    counts: dict[int, int] = {}
    for rec in singular:
        counts[rec.max_kernel_level_set] = counts.get(rec.max_kernel_level_set, 0) + 1
    bins = {}
    for size in sorted(counts):
        k = counts[size]
        lo, hi = wilson_interval(k, len(singular))
        bins[str(size)] = {
            "count": k,
            "fraction": k / len(singular),
            "wilson_low": lo,
            "wilson_high": hi,
        }
    return {
        "n": HIST_N,
        "d": HIST_D,
        "trials": HIST_TRIALS,
        "master_seed": MASTER_SEED,
        "kind": "stub_rejection",
        "singular": len(singular),
        "bins": bins,
    }


def main() -> int:
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "singular_fraction": singular_fraction_baseline(),
        "level_set_histogram": level_set_baseline(),
    }
    target = out / "regression_baselines.json"
    target.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {target}")
    print(json.dumps(payload["singular_fraction"], indent=2))
    print(json.dumps({k: v for k, v in payload["level_set_histogram"].items() if k != "bins"}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
