"""Instance sizes of every model over a range of k, with log-log slopes.

    python3 scripts/model_sizes.py                 # built-in 8-word sample
    python3 scripts/model_sizes.py sample.txt --k-max 8 --solve
"""
import argparse
import time
from dataclasses import dataclass

import numpy as np

from nfainfer.encode import Model, ModelKind, encode
from nfainfer.sample import Sample, parse_sample
from nfainfer.solver import Budget, solve
from nfainfer.split import ils_split

DEFAULT = Sample.from_strings(["a", "ab", "abba", "baa"], ["aab", "b", "ba", "bab"], "ab")


@dataclass
class Config:
    k_min: int = 2
    k_max: int = 6
    solve: bool = False
    timeout: float = 60.0


def kind_for(model, sample, k):
    if model.hybrid:
        return ModelKind(model, ils_split(sample, k + 1 if model.plus_one else k))
    return ModelKind(model)


def measure(sample, cfg):
    rows = []
    for model in Model:
        for k in range(cfg.k_min, cfg.k_max + 1):
            enc = encode(sample, kind_for(model, sample, k), k)
            outcome, secs = "-", None
            if cfg.solve:
                t0 = time.perf_counter()
                outcome = solve(enc.cnf, Budget(cfg.timeout)).status
                secs = time.perf_counter() - t0
            rows.append((model.value, k, enc.cnf.num_vars, enc.cnf.num_clauses, outcome, secs))
    return rows


def slope(ks, ys):
    return float(np.polyfit(np.log(ks), np.log(ys), 1)[0])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sample", nargs="?")
    ap.add_argument("--k-min", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--solve", action="store_true", help="also solve each instance")
    ap.add_argument("--timeout", type=float, default=60.0)
    args = ap.parse_args()
    cfg = Config(args.k_min, args.k_max, args.solve, args.timeout)
    sample = parse_sample(open(args.sample).read()) if args.sample else DEFAULT

    rows = measure(sample, cfg)
    print("model\tk\tvars\tclauses\toutcome\tseconds")
    for m, k, v, c, out, secs in rows:
        print(f"{m}\t{k}\t{v}\t{c}\t{out}\t{'-' if secs is None else f'{secs:.3f}'}")
    print()
    print("model\tslope_vars\tslope_clauses")
    for model in Model:
        mine = [r for r in rows if r[0] == model.value]
        ks = [r[1] for r in mine]
        print(f"{model.value}\t{slope(ks, [r[2] for r in mine]):.2f}\t{slope(ks, [r[3] for r in mine]):.2f}")


if __name__ == "__main__":
    main()
