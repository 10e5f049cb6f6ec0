#!/usr/bin/env python3
"""Divided-power counterexample across primes: T, T^p, Frobenius flatness, base size.

    python3 scripts/counterexample_table.py [--primes 2,3,5,7] [--precision 3]
"""
import argparse
import time
from dataclasses import dataclass, field
from typing import List

from prismlab.pdenv import counterexample_report


@dataclass
class TableConfig:
    primes: List[int] = field(default_factory=lambda: [2, 3, 5, 7])
    precision: int = 3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--precision", type=int, default=3)
    a = ap.parse_args()
    cfg = TableConfig([int(x) for x in a.primes.split(",")], a.precision)
    head = f"{'p':>3} {'M':>4} {'T!=0':>5} {'T^p=0':>6} {'gens':>5} {'len F_*S':>9} {'len S':>6} " \
           f"{'flat':>5} {'F_p':>14} {'dim A':>6} {'emdim+1':>8} {'secs':>6}"
    print(head)
    for p in cfg.primes:
        start = time.perf_counter()
        rep = counterexample_report(p, cfg.precision, p * p)
        secs = time.perf_counter() - start
        fl = rep.flatness
        print(f"{p:>3} {rep.top:>4} {str(rep.t_nonzero):>5} {str(rep.t_p_zero):>6} "
              f"{fl.generators_needed:>5} {fl.length_module:>9} {fl.length_ring:>6} "
              f"{str(fl.flat):>5} {rep.regularity.status.value:>14} {rep.small_base.dim_A:>6} "
              f"{rep.small_base.emdim + 1:>8} {secs:>6.3f}")


if __name__ == "__main__":
    main()
