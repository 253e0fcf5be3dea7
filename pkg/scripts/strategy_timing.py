"""Wall-clock time and probe count of each search strategy on random samples.

    python3 scripts/strategy_timing.py --samples 20 --max-len 6 --words 14
"""
import argparse
import random
import statistics
from dataclasses import dataclass

from nfainfer.sample import gen_random_sample
from nfainfer.search import Strategy, infer_min_k

STRATEGIES = [
    Strategy("prefix"), Strategy("suffix"), Strategy("hybrid"),
    Strategy("prefix", plus_one=True), Strategy("suffix", plus_one=True),
    Strategy("hybrid", plus_one=True), Strategy(refined=True),
]


@dataclass
class Config:
    samples: int = 10
    seed: int = 0
    words: int = 12
    max_len: int = 6
    alphabet_size: int = 2
    probe_timeout: float = 30.0
    bisect: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--words", type=int, default=12)
    ap.add_argument("--max-len", type=int, default=6)
    ap.add_argument("--alphabet-size", type=int, default=2)
    ap.add_argument("--probe-timeout", type=float, default=30.0)
    ap.add_argument("--bisect", action="store_true")
    cfg = Config(**vars(ap.parse_args()))

    rng = random.Random(cfg.seed)
    samples = []
    for i in range(cfg.samples):
        npos = rng.randint(1, cfg.words - 1)
        samples.append(gen_random_sample(cfg.alphabet_size, npos, cfg.words - npos, cfg.max_len, cfg.seed + i))

    print("strategy\tmedian_s\tmax_s\tprobes\tunproven\tk_values")
    for strategy in STRATEGIES:
        times, probes, unproven, ks = [], 0, 0, []
        for s in samples:
            rep = infer_min_k(s, strategy, probe_timeout=cfg.probe_timeout, bisect=cfg.bisect)
            times.append(rep.total_seconds)
            probes += len(rep.probes)
            unproven += not rep.proven
            ks.append(rep.result[0] if rep.result else None)
        print(f"{strategy.label}\t{statistics.median(times):.3f}\t{max(times):.3f}\t{probes}\t{unproven}\t"
              + ",".join(map(str, ks)))


if __name__ == "__main__":
    main()
