"""Tabulate tropical counts N^trop(w) for two directions of a given pairing."""

import argparse
import itertools
from dataclasses import dataclass

from discwall.charges import Charge
from discwall.tropical import WeightVector, count_tropical


@dataclass
class Config:
    pairing: int = 1
    max_size: int = 3
    seed: int = 20240613


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def main(cfg: Config):
    dirs = [Charge(1, 0), Charge(0, cfg.pairing)]
    print("w1\tw2\tN\tN/|Aut|")
    for n1, n2 in itertools.product(range(1, cfg.max_size + 1), repeat=2):
        for p1 in partitions(n1):
            for p2 in partitions(n2):
                w = WeightVector((p1, p2))
                n = count_tropical(w, dirs, seed=cfg.seed)
                print(f"{p1}\t{p2}\t{n}\t{n / w.aut():g}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    main(Config(**vars(ap.parse_args())))
