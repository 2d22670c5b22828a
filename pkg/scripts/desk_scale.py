"""Run every harness mode over the desk-scale universes and write JSON reports.

    python3 scripts/desk_scale.py --out reports/
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from bzext.harness import UniverseSpec, log, run_suite
from bzext.serialization import dumps


@dataclass(frozen=True)
class DeskConfig:
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(4)
    step: Fraction = Fraction(1, 2)
    seed: int = 0
    # mode -> (max_degree, max_segments)
    modes: dict = field(default_factory=lambda: {
        "duality": (6, None),
        "truncation-lemma": (6, None),
        "confluence": (36, 4),
        "quotient": (6, None),
        "ext": (6, None),
        "ep": (4, None),
        "hecke": (0, None),
    })


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--only", nargs="*", help="subset of modes")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = DeskConfig(seed=args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for mode, (max_degree, max_segments) in cfg.modes.items():
        if args.only and mode not in args.only:
            continue
        spec = UniverseSpec(lo=cfg.lo, hi=cfg.hi, step=cfg.step, max_degree=max_degree, max_segments=max_segments)
        started = time.perf_counter()
        report = run_suite(mode, spec, seed=cfg.seed, command=["desk_scale", mode], progress=log)
        (args.out / f"{mode}.json").write_text(dumps(report.to_json()))
        summary[mode] = {"checked": report.checked, "failed": report.failed,
                         "seconds": round(time.perf_counter() - started, 2)}
        log(f"{mode}: {summary[mode]}")
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
