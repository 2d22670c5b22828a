"""Does the root Delta have to be a shortest segment?

For every generic pair (m1, m2) of degrees (n+1, n) in a window, force each
admissible root Delta in turn and tally the outcome by whether Delta is a
shortest choice.  Non-shortest choices that FAIL show the rule is needed;
their absence is evidence only.

    python3 scripts/shortest_choice.py --max-n 3
"""

from __future__ import annotations

import argparse
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from bzext.harness import UniverseSpec, delta_choice_evidence, enumerate_multisegments
from bzext.serialization import Encoder


@dataclass(frozen=True)
class ChoiceConfig:
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(3)
    step: Fraction = Fraction(1, 2)
    max_n: int = 3
    examples: int = 5


def run(cfg: ChoiceConfig) -> dict:
    spec = UniverseSpec(lo=cfg.lo, hi=cfg.hi, step=cfg.step, max_degree=cfg.max_n + 1, generic_only=True)
    data = enumerate_multisegments(spec)
    by_degree: dict[int, list] = {}
    for m in data:
        by_degree.setdefault(m.degree, []).append(m)
    tally: Counter = Counter()
    examples = []
    enc = Encoder()
    for n in range(cfg.max_n + 1):
        for m1 in by_degree.get(n + 1, ()):
            for m2 in by_degree.get(n, ()):
                for tag, outcome in delta_choice_evidence(m1, m2).items():
                    kind = "shortest" if tag.startswith("shortest ") else "other"
                    tally[f"{kind}:{outcome}"] += 1
                    if kind == "other" and outcome == "FAIL" and len(examples) < cfg.examples:
                        examples.append({"m1": enc.multisegment(m1), "m2": enc.multisegment(m2),
                                         "delta": tag})
    return {"window": [str(cfg.lo), str(cfg.hi)], "step": str(cfg.step), "max_n": cfg.max_n,
            "tally": dict(sorted(tally.items())), "non_shortest_fail_examples": examples}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--hi", default="3")
    args = ap.parse_args()
    print(json.dumps(run(ChoiceConfig(hi=Fraction(args.hi), max_n=args.max_n)), indent=2))


if __name__ == "__main__":
    main()
