"""Compare closed-form coefficients with the cellular oracle on random functors.

    python scripts/fuzz_oracle.py --count 500 --seed 1000 --radius 6
"""

import argparse
import sys
import time
from dataclasses import dataclass

from emq.coefficients import Window
from emq.mackey import random_mackey
from emq.oracle import cross_check


@dataclass
class FuzzConfig:
    count: int = 200
    seed: int = 0
    radius: int = 6
    size_bound: int = 4
    check_a: bool = True


def fuzz(cfg: FuzzConfig) -> int:
    window = Window.square(cfg.radius)
    t0 = time.perf_counter()
    failures = 0
    for s in range(cfg.seed, cfg.seed + cfg.count):
        found = cross_check(random_mackey(s, cfg.size_bound), window, check_a=cfg.check_a)
        if found:
            failures += 1
            print(f"seed {s}: " + "; ".join(map(str, found[:3])))
    print(f"{cfg.count} functors, {failures} with mismatches, {time.perf_counter() - t0:.1f} s")
    return failures


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for field, default in vars(FuzzConfig()).items():
        kind = (lambda v: v.lower() in ("1", "true", "yes")) if isinstance(default, bool) else int
        p.add_argument(f"--{field.replace('_', '-')}", type=kind, default=default)
    cfg = FuzzConfig(**vars(p.parse_args()))
    return 1 if fuzz(cfg) else 0


if __name__ == "__main__":
    sys.exit(main())
