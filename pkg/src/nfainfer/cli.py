"""Command-line entry point.

Exit codes: 0 success, 1 a negative but correct answer (UNSAT, failed
reduction, inconsistent automaton), 2 usage or input errors, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import os
import sys

from .cnf import CnfError, Delta, Final, parse_dimacs, parse_varmap, render_varmap, to_dimacs
from .encode import EncodingError, ModelKind, encode, stats
from .nfa import Nfa, NfaError, parse_nfa, render_nfa, to_dot
from .oracle import OracleError, brute_min_k
from .reduce import FailedEmptyCandidates, Reduced, ReduceError, reduce_kp1, reduce_or_enumerate
from .sample import Sample, SampleError, gen_random_sample, parse_sample, render_sample
from .search import Strategy, infer_min_k, varmap_header
from .solver import Budget, Sat, Unsatisfiable, format_outcome, solve
from .split import IlsParams, Init, best_prefix_split, best_suffix_split, fitness, ils_split, parse_split, render_split

MODELS = ("prefix", "suffix", "hybrid-ils", "hybrid-bestpre", "hybrid-bestsuf")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def _load_sample(path: str) -> Sample:
    return parse_sample(_read(path))


def _strategy(args) -> Strategy:
    family, _, split = args.model.partition("-")
    return Strategy(
        family=family,
        split=split or None,
        plus_one=args.plus_one,
        refined=args.refined,
        clone_f4=not args.no_clone,
        seed=args.seed,
        ils_init=Init(args.ils_init),
        ils_iters=args.iters,
    )


def _add_model_flags(p):
    p.add_argument("--model", choices=MODELS, default="prefix")
    p.add_argument("--plus-one", action="store_true", help="use the (k+1)-state single-final model")
    p.add_argument("--refined", action="store_true", help="refined (k+1) model; implies --plus-one, prefix only")
    p.add_argument("--no-clone", action="store_true", help="omit the clone clauses of the (k+1) models")
    p.add_argument("--seed", type=int, default=0, help="seed of the local search split")
    p.add_argument("--ils-init", choices=[i.value for i in Init], default="random")
    p.add_argument("--iters", type=int, default=None, help="local search iterations (default 10*|S|)")


def cmd_infer(args) -> int:
    sample = _load_sample(args.sample)
    strategy = _strategy(args)
    if args.emit_cnf_dir:
        os.makedirs(args.emit_cnf_dir, exist_ok=True)
    rep = infer_min_k(
        sample, strategy,
        probe_timeout=args.probe_timeout,
        total_timeout=args.total_timeout,
        bisect=args.bisect,
        jobs=args.jobs,
        solver_command=args.solver_cmd,
        dump_dir=args.emit_cnf_dir,
    )
    timings = not args.no_timings
    if args.emit_report:
        _write(args.emit_report, rep.render(timings))
    if rep.result is None:
        print(f"no result: budget exhausted with bounds {rep.lower_bound}..{rep.upper_bound}")
        return EXIT_BUDGET
    k, nfa = rep.result
    dot = to_dot(nfa, sample.alphabet)
    if args.emit_dot:
        _write(args.emit_dot, dot)
    if rep.proven:
        print(f"k_min={k}")
    else:
        print(f"k={k} bounds={rep.lower_bound}..{rep.upper_bound} (not proven minimal)")
    sys.stdout.write(render_nfa(nfa, sample.alphabet))
    sys.stdout.write(dot)
    return EXIT_OK if rep.proven else EXIT_BUDGET


def cmd_encode(args) -> int:
    sample = _load_sample(args.sample)
    strategy = _strategy(args)
    if args.split_file:
        if strategy.family != "hybrid":
            raise UsageError("--split-file needs a hybrid model")
        split = parse_split(_read(args.split_file), sample)
        kind = ModelKind(strategy.model, split, strategy.clone_f4)
    else:
        kind = strategy.kind_for(sample, args.k)
    enc = encode(sample, kind, args.k)
    _write(args.out + ".cnf", to_dimacs(enc.cnf))
    _write(args.out + ".varmap", render_varmap(enc.cnf, sample.alphabet, varmap_header(enc)))
    st = stats(enc)
    print("model\tk\tstates\tvars\tclauses")
    print(f"{kind.label}\t{enc.k}\t{enc.k_target}\t{st.num_vars}\t{st.num_clauses}")
    return EXIT_OK


def cmd_solve(args) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    out = solve(cnf, Budget(args.timeout), args.solver_cmd)
    sys.stdout.write(format_outcome(out))
    if isinstance(out, Unsatisfiable):
        return EXIT_NEGATIVE
    if not isinstance(out, Sat):
        print(f"c {out.reason}", file=sys.stderr)
        return EXIT_BUDGET
    if args.varmap:
        text = _read(args.varmap)
        letters = _varmap_letters(text)
        varmap, header = parse_varmap(text, letters)
        states = int(header["states"])
        trans = {(s.a, s.i, s.j) for s, v in varmap.items() if isinstance(s, Delta) and out.assignment[v]}
        if "kp1" in header.get("model", ""):
            finals = {states}
        else:
            finals = {s.i for s, v in varmap.items() if isinstance(s, Final) and out.assignment[v]}
        sys.stdout.write(render_nfa(Nfa(states, len(letters), frozenset(trans), frozenset(finals)), letters))
    return EXIT_OK


def _varmap_letters(text: str) -> str:
    for line in text.splitlines():
        parts = line[1:].split() if line.startswith("#") else []
        if len(parts) == 2 and parts[0] == "alphabet":
            return parts[1]
    raise UsageError("varmap has no '# alphabet' header")


def cmd_reduce(args) -> int:
    nfa, letters = parse_nfa(_read(args.nfa))
    sample = _load_sample(args.sample)
    out = reduce_or_enumerate(nfa, sample) if args.enumerate else reduce_kp1(nfa, sample)
    if isinstance(out, Reduced):
        print("reduced finals " + " ".join(map(str, sorted(out.candidate_finals))))
        sys.stdout.write(render_nfa(out.nfa, letters))
        sys.stdout.write(to_dot(out.nfa, letters))
        return EXIT_OK
    if isinstance(out, FailedEmptyCandidates):
        print("failed: no candidate final state")
    else:
        print(f"failed: positive word {sample.show(out.word)} reaches no candidate final state")
    return EXIT_NEGATIVE


def cmd_check(args) -> int:
    nfa, _ = parse_nfa(_read(args.nfa))
    sample = _load_sample(args.sample)
    rejected, accepted = nfa.failures(sample)
    if not rejected and not accepted:
        print("consistent")
        return EXIT_OK
    print("inconsistent")
    if rejected:
        print(f"rejected positive: {sample.show(rejected[0])}")
    if accepted:
        print(f"accepted negative: {sample.show(accepted[0])}")
    return EXIT_NEGATIVE


def cmd_split(args) -> int:
    sample = _load_sample(args.sample)
    if args.strategy == "bestpre":
        split = best_prefix_split(sample)
    elif args.strategy == "bestsuf":
        split = best_suffix_split(sample)
    else:
        split = ils_split(sample, args.k, IlsParams(args.iters, args.seed, Init(args.ils_init)))
    text = render_split(split, sample)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"fitness {fitness(sample, split, args.k)}", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    sample = gen_random_sample(args.alphabet_size, args.pos, args.neg, args.max_len, args.seed,
                               allow_empty_positive=args.allow_empty_positive)
    text = render_sample(sample)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    sample = _load_sample(args.sample)
    print("# exhaustive search, exponential in the number of states", file=sys.stderr)
    res = brute_min_k(sample, args.k_max)
    if res.k_min is None:
        print(f"no consistent NFA with at most {args.k_max} states ({res.states_explored} candidates)")
        return EXIT_NEGATIVE
    print(f"k_min={res.k_min} candidates={res.states_explored}")
    sys.stdout.write(render_nfa(res.witness, sample.alphabet))
    return EXIT_OK


def cmd_stats(args) -> int:
    sample = _load_sample(args.sample)
    st = sample.stats()
    print(f"alphabet\t{sample.alphabet}")
    print(f"positives\t{len(sample.pos)}")
    print(f"negatives\t{len(sample.neg)}")
    print(f"total_length\t{st.sigma}")
    print(f"prefixes\t{st.num_prefixes}")
    print(f"suffixes\t{st.num_suffixes}")
    print(f"pta_states\t{st.pta_states}")
    if args.k is not None:
        strategy = _strategy(args)
        enc = encode(sample, strategy.kind_for(sample, args.k), args.k)
        es = stats(enc)
        print(f"model\t{enc.kind.label}")
        print(f"vars\t{es.num_vars}")
        print(f"clauses\t{es.num_clauses}")
        for kind, n in es.vars_by_kind.items():
            print(f"vars.{kind}\t{n}")
        for group, n in es.clauses_by_group.items():
            print(f"clauses.{group}\t{n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfainfer", description="Minimal NFA inference from labelled words via SAT.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="find the smallest consistent NFA")
    p.add_argument("sample")
    _add_model_flags(p)
    p.add_argument("--probe-timeout", type=float, default=None, metavar="S")
    p.add_argument("--total-timeout", type=float, default=None, metavar="S")
    p.add_argument("--bisect", action="store_true", help="binary search over the bounds")
    p.add_argument("--jobs", type=int, default=1, help="concurrent probes (linear scan only)")
    p.add_argument("--solver-cmd", default=None, help="external DIMACS solver command")
    p.add_argument("--emit-dot", metavar="PATH")
    p.add_argument("--emit-report", metavar="PATH")
    p.add_argument("--emit-cnf-dir", metavar="DIR", help="write every probed instance here")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock times from the report")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("encode", help="write one SAT instance as DIMACS plus varmap")
    p.add_argument("sample")
    _add_model_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--split-file", default=None)
    p.add_argument("-o", "--out", required=True, help="output stem")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="solve a DIMACS file")
    p.add_argument("cnf")
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--solver-cmd", default=None)
    p.add_argument("--varmap", default=None, help="decode the model into an NFA")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="drop the terminal state of a (k+1)-state NFA")
    p.add_argument("nfa")
    p.add_argument("sample")
    p.add_argument("--enumerate", action="store_true", help="fall back to trying every final set")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check", help="check an NFA against a sample")
    p.add_argument("nfa")
    p.add_argument("sample")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("split", help="compute a prefix/suffix split of the sample words")
    p.add_argument("sample")
    p.add_argument("--strategy", choices=["ils", "bestpre", "bestsuf"], default="ils")
    p.add_argument("--k", type=int, default=3, help="state count used by the fitness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--ils-init", choices=[i.value for i in Init], default="random")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("gen", help="random sample")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--pos", type=int, default=4)
    p.add_argument("--neg", type=int, default=4)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-empty-positive", action="store_true")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustive minimal NFA (exponential, tiny samples only)")
    p.add_argument("sample")
    p.add_argument("--k-max", type=int, default=3)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stats", help="sample statistics and, with --k, instance sizes")
    p.add_argument("sample")
    _add_model_flags(p)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, SampleError, NfaError, CnfError, EncodingError, ReduceError, OracleError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
