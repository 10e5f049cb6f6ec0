#!/usr/bin/env python3
"""Run every spec-file command over the ex/ corpus and tabulate exit codes.

    python3 scripts/corpus_sweep.py [--ex DIR] [--commands a,b,...] [--seed N]
"""
import argparse
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

from prismlab.cli import run

SPEC_COMMANDS = ["verify-prism", "classify", "regseq", "regularity", "hilbert-samuel",
                 "lci-check", "kunz-artinian", "correspond", "axioms"]


@dataclass
class SweepConfig:
    ex_dir: Path = Path(__file__).resolve().parent.parent / "ex"
    commands: List[str] = field(default_factory=lambda: list(SPEC_COMMANDS))
    seed: int = 0


def sweep(cfg: SweepConfig):
    files = sorted(cfg.ex_dir.glob("*.spec")) + sorted((cfg.ex_dir / "invalid").glob("*.spec"))
    rows = []
    for path in files:
        codes = []
        for cmd in cfg.commands:
            argv = [cmd, "--spec", str(path), "--seed", str(cfg.seed)]
            if cmd == "axioms":
                argv += ["--samples", "20"]
            codes.append(run(argv, io.StringIO(), io.StringIO()))
        rows.append((path.relative_to(cfg.ex_dir).as_posix(), codes))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ex", type=Path, default=SweepConfig.ex_dir)
    ap.add_argument("--commands", default=",".join(SPEC_COMMANDS))
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = SweepConfig(a.ex, a.commands.split(","), a.seed)
    rows = sweep(cfg)
    width = max(len(name) for name, _ in rows)
    short = [c.split("-")[0][:6] for c in cfg.commands]
    print(" " * width + "  " + " ".join(f"{s:>6}" for s in short))
    for name, codes in rows:
        print(f"{name:<{width}}  " + " ".join(f"{c:>6}" for c in codes))


if __name__ == "__main__":
    main()
