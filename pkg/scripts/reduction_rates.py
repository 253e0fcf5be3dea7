"""How often a (k+1)-state solution reduces to a k-state NFA.

For random samples with a known minimum (from the exhaustive oracle), solve
each single-final model at k = k_min and k = k_min - 1, then try the reduction.
At k_min - 1 every reduction must fail; at k_min the refined model must always
succeed while the plain models may not.

    python3 scripts/reduction_rates.py --samples 300 --seed 0
"""
import argparse
import random
from collections import Counter
from dataclasses import dataclass

from nfainfer.encode import Model, ModelKind, decode_nfa, encode
from nfainfer.oracle import brute_min_k
from nfainfer.reduce import reduce_kp1
from nfainfer.sample import gen_random_sample
from nfainfer.solver import Sat, solve_embedded
from nfainfer.split import ils_split

PLUS_ONE = [m for m in Model if m.plus_one]


@dataclass
class Config:
    samples: int = 200
    seed: int = 0
    max_words: int = 8
    max_len: int = 4


def corpus(cfg):
    seed = cfg.seed
    while True:
        rng = random.Random(seed)
        npos = rng.randint(1, cfg.max_words - 1)
        s = gen_random_sample(2, npos, rng.randint(0, cfg.max_words - npos), cfg.max_len, seed)
        seed += 1
        res = brute_min_k(s, 3)
        if res.k_min is not None:
            yield s, res.k_min


def run(cfg):
    counts = Counter()
    gen = corpus(cfg)
    for _ in range(cfg.samples):
        s, k_min = next(gen)
        for model in PLUS_ONE:
            for k in {k_min - 1, k_min} - {0}:
                split = ils_split(s, k + 1) if model.hybrid else None
                enc = encode(s, ModelKind(model, split), k)
                out = solve_embedded(enc.cnf)
                if not isinstance(out, Sat):
                    counts[model.value, k - k_min, "unsat"] += 1
                    continue
                ok = reduce_kp1(decode_nfa(enc, out.assignment, s), s).ok
                counts[model.value, k - k_min, "reduced" if ok else "failed"] += 1
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-words", type=int, default=8)
    ap.add_argument("--max-len", type=int, default=4)
    args = ap.parse_args()
    counts = run(Config(args.samples, args.seed, args.max_words, args.max_len))
    print("model\tk-k_min\tunsat\treduced\tfailed")
    for model in PLUS_ONE:
        for off in (-1, 0):
            c = [counts[model.value, off, x] for x in ("unsat", "reduced", "failed")]
            print(f"{model.value}\t{off}\t" + "\t".join(map(str, c)))


if __name__ == "__main__":
    main()
