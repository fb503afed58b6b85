"""Command-line interface.

Subcommands::

    estimate       print the deviation table and the order estimate
    delta-profile  CSV of delta_hat for k = 0 .. k_max
    simulate       write a token file sampled from a chain / iid / HMM spec
    sweep          estimate the order over lengths x replicates, write CSV
    decide         YES (exit 0) if the estimated order is below --max-order, else NO (exit 1)

Usage errors and unreadable input exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from markov_order.estimator import (
    DEFAULT_BETA,
    DEFAULT_GAMMA,
    EstimatorParams,
    delta_profile,
    estimate_order,
)
from markov_order.generators import (
    DEFAULT_HMM,
    derived_seed,
    load_hmm_spec,
    sample_chain,
    sample_hmm,
    sample_iid,
)
from markov_order.oracle import ChainSpec, SpecError, load_chain_spec, stationary_distribution
from markov_order.sequence import Alphabet, read_sequence, write_tokens

SWEEP_HEADER = ["n", "replicate", "seed", "chi", "runtime_s"]
PROFILE_HEADER = ["k", "delta_hat", "threshold"]


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    return f"{value:.6g}"


def _params(args) -> EstimatorParams:
    try:
        return EstimatorParams(args.gamma, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_input(path):
    try:
        return read_sequence(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_sampler(model: str, spec_path):
    """Return ``sample(length, seed) -> Sequence`` for the requested model."""
    if model == "hmm":
        spec = load_hmm_spec(spec_path) if spec_path else DEFAULT_HMM
        spec.hidden_stationary()  # fail early on a non-ergodic hidden chain
        return lambda length, seed: sample_hmm(spec, length, seed)
    if spec_path is None:
        raise UsageError(f"--spec is required for model {model!r}")
    if model == "chain":
        spec = load_chain_spec(spec_path)
        pi = stationary_distribution(spec)
        return lambda length, seed: sample_chain(spec, pi, length, seed)
    if model == "iid":
        with open(spec_path, encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict) and "probabilities" in data:
            try:
                alphabet = Alphabet(tuple(data["alphabet"]))
            except (KeyError, TypeError, ValueError):
                raise SpecError("alphabet: must be an array of distinct strings") from None
            dist = data["probabilities"]
            if not isinstance(dist, list) or len(dist) != len(alphabet):
                raise SpecError("probabilities: must be an array aligned with alphabet")
        else:
            spec = ChainSpec.from_json(data)
            if spec.order != 0:
                raise SpecError("order: iid model needs an order-0 spec")
            alphabet, dist = spec.alphabet, spec.transitions[()]
        sample_iid(dist, 1, 0)  # validates dist
        return lambda length, seed: sample_iid(dist, length, seed, alphabet)
    raise UsageError(f"unknown model {model!r}")


def cmd_estimate(args) -> int:
    params = _params(args)
    seq = _read_input(args.input)
    report = estimate_order(seq, params)
    print(f"n = {report.n}")
    print(f"gamma = {fmt(params.gamma)}, beta = {fmt(params.beta)}")
    print(f"threshold n^-beta = {fmt(report.threshold)}")
    print(f"{'k':>4}  delta_hat")
    for k, value in report.per_k:
        print(f"{k:>4}  {fmt(value)}")
    print(f"chi = {report.chi}")
    return 0


def cmd_delta_profile(args) -> int:
    params = _params(args)
    if args.k_max < 0:
        raise UsageError("--k-max must be >= 0")
    seq = _read_input(args.input)
    report = delta_profile(seq, params, args.k_max)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(PROFILE_HEADER)
    for k, value in report.per_k:
        writer.writerow([k, fmt(value), fmt(report.threshold)])
    return 0


def cmd_simulate(args) -> int:
    if args.length < 1:
        raise UsageError("--length must be >= 1")
    sample = load_sampler(args.model, args.spec)
    write_tokens(args.output, sample(args.length, args.seed))
    return 0


def _run_replicate(job):
    model, spec_path, n, replicate, seed, gamma, beta = job
    seq = load_sampler(model, spec_path)(n + 1, seed)
    start = time.perf_counter()
    chi = estimate_order(seq, EstimatorParams(gamma, beta)).chi
    return n, replicate, seed, chi, time.perf_counter() - start


def parse_lengths(text: str) -> list[int]:
    try:
        lengths = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--lengths must be comma-separated integers") from None
    if not lengths or min(lengths) < 0 or lengths != sorted(lengths):
        raise UsageError("--lengths must be non-negative and ascending")
    return lengths


def cmd_sweep(args) -> int:
    params = _params(args)
    lengths = parse_lengths(args.lengths)
    if args.replicates < 1:
        raise UsageError("--replicates must be >= 1")
    load_sampler(args.model, args.spec)  # validate before spawning work
    jobs = [
        (args.model, args.spec, n, r, derived_seed(args.seed, r), params.gamma, params.beta)
        for n in lengths
        for r in range(args.replicates)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run_replicate, jobs))  # map keeps job order
    else:
        rows = [_run_replicate(job) for job in jobs]
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for n, r, seed, chi, runtime in rows:
            writer.writerow([n, r, seed, chi, f"{runtime:.6f}"])
    return 0


def cmd_decide(args) -> int:
    params = _params(args)
    if args.max_order is None or args.max_order <= 0:
        raise UsageError("--max-order must be a positive integer")
    seq = _read_input(args.input)
    chi = estimate_order(seq, params).chi
    if chi < args.max_order:
        print("YES")
        return 0
    print("NO")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markov-order", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def estimator_flags(p):
        p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="frequency floor exponent")
        p.add_argument("--beta", type=float, default=DEFAULT_BETA, help="threshold decay exponent")

    p = sub.add_parser("estimate", help="estimate the order of a token file")
    p.add_argument("--input", required=True)
    estimator_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("delta-profile", help="CSV of delta_hat over k")
    p.add_argument("--input", required=True)
    p.add_argument("--k-max", type=int, default=5)
    estimator_flags(p)
    p.set_defaults(func=cmd_delta_profile)

    p = sub.add_parser("simulate", help="sample a process into a token file")
    p.add_argument("--spec", help="chain / iid / HMM JSON spec (HMM defaults to the built-in one)")
    p.add_argument("--model", choices=["chain", "iid", "hmm"], default="chain")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="order estimates over lengths and seeded replicates")
    p.add_argument("--spec")
    p.add_argument("--model", choices=["chain", "iid", "hmm"], default="chain")
    p.add_argument("--lengths", required=True, help="comma-separated values of n")
    p.add_argument("--replicates", type=int, default=20)
    p.add_argument("--seed", type=int, default=0, help="base seed; replicate r uses seed + r")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--output", required=True)
    estimator_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("decide", help="is the order below --max-order?")
    p.add_argument("--input", required=True)
    p.add_argument("--max-order", type=int, required=True)
    estimator_flags(p)
    p.set_defaults(func=cmd_decide)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:  # SpecError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
