"""Command-line driver: build matrices, encode/decode, run seeded Monte
Carlo experiments, certify spectral bounds, emit CSV.

Every CSV embeds the tool version, matrix hash, PRNG identifier and master
seed, which is enough to reproduce it byte for byte.  Exit status is 0
only when everything requested succeeded (for certify: every claim passed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .analysis import (capacity, delta_gv, poltyrev_certificate,
                       prefix_length_for)
from .builder import (BuilderState, RowSearchError, STRICT, load_matrix,
                      matrix_sha256, parse_mode, save_matrix)
from .channel import PRNG_ID, ChannelSpec, noise_word, random_message
from .concat import ConcatCode, derive_params
from .gf2 import BitWord, encode_prefix
from .inner import InnerCode
from .spectrum import check_spectrum_bounds, weight_distribution

Z99 = 2.5758293035489004  # two-sided 99% normal quantile

BUILD_K_GUARD = 20


def wilson_interval(errors: int, trials: int, z: float = Z99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be positive")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ExperimentPoint:
    code: str
    k: int
    n: int
    p: float
    delta: float | None
    trials: int
    errors: int


def run_inner_point(inner: InnerCode, n: int, p: float, master_seed: int,
                    point_index: int, trials: int,
                    message_policy: str = "random") -> int:
    """Monte Carlo decoding errors for one (n, p) point.  Trial t uses
    stream index (point_index << 32) | t for both message and noise, so
    results are independent of execution order."""
    ch = ChannelSpec(p, master_seed)
    table = inner.codeword_values(n)
    k = inner.k
    errors = 0
    for t in range(trials):
        idx = (point_index << 32) | t
        if message_policy == "all-zero":
            msg = 0
        else:
            msg = random_message(master_seed, idx, k).value
        y = table[msg] ^ noise_word(ch, idx, n).value
        if inner.ml_decode_value(y, n) != msg:
            errors += 1
    return errors


def run_concat_point(code: ConcatCode, n: int, p: float, master_seed: int,
                     point_index: int, trials: int,
                     message_policy: str = "random") -> tuple[int, int, int]:
    """Concatenated Monte Carlo point; returns (message errors, wrong inner
    blocks, total inner blocks) so callers can estimate the inner error."""
    ch = ChannelSpec(p, master_seed)
    params = code.params
    errors = 0
    block_errors = 0
    blocks_total = 0
    for t in range(trials):
        idx = (point_index << 32) | t
        if message_policy == "all-zero":
            msg = BitWord(params.k, 0)
        else:
            msg = random_message(master_seed, idx, params.k)
        truth = code.inner_messages(msg)
        y = code.encode(msg, n) ^ noise_word(ch, idx, n)
        decoded_blocks, decoded = code.decode_with_blocks(y)
        block_errors += sum(1 for a, b in zip(decoded_blocks, truth) if a != b)
        blocks_total += len(truth)
        if decoded != msg:
            errors += 1
    return errors, block_errors, blocks_total


def experiment_csv(points, master_seed: int, matrix_hash: str,
                   params_dict: dict | None = None) -> str:
    lines = [
        f"# tool=rateless-bsc {__version__}",
        f"# matrix_sha256={matrix_hash}",
        f"# prng_id={PRNG_ID}",
        f"# master_seed={master_seed}",
    ]
    if params_dict is not None:
        lines.append(f"# params={json.dumps(params_dict, sort_keys=True)}")
    lines.append("code,k,n,p,delta,trials,errors,err_rate,"
                 "wilson_ci_lo,wilson_ci_hi,seed,prng_id")
    for pt in points:
        lo, hi = wilson_interval(pt.errors, pt.trials)
        lines.append(",".join([
            pt.code, str(pt.k), str(pt.n), repr(pt.p),
            "" if pt.delta is None else repr(pt.delta),
            str(pt.trials), str(pt.errors), repr(pt.errors / pt.trials),
            repr(lo), repr(hi), str(master_seed), PRNG_ID,
        ]))
    return "\n".join(lines) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_build(args) -> int:
    if args.k > BUILD_K_GUARD and not args.allow_large:
        print(f"refusing k={args.k} > {BUILD_K_GUARD} without --allow-large "
              "(2^k enumeration)", file=sys.stderr)
        return 1
    mode = parse_mode(args.mode)
    state = BuilderState(args.k, mode)
    try:
        state.extend_to(args.n)
    except RowSearchError as e:
        print(f"builder failed at n={e.n}: {e}", file=sys.stderr)
        return 1
    digest = save_matrix(args.out, state.matrix, mode)
    print(digest)
    return 0


def _load_for_codec(path):
    G, mode = load_matrix(path)
    return G, mode


def cmd_encode(args) -> int:
    G, _ = _load_for_codec(args.matrix)
    message = BitWord.from_bits(args.message)
    if args.beta is not None:
        params = derive_params(message.length, args.beta, n_out=args.n_out)
        code = ConcatCode(params, G)
        print(str(code.encode(message, args.n)))
    else:
        print(str(encode_prefix(G, message, args.n)))
    return 0


def cmd_decode(args) -> int:
    G, _ = _load_for_codec(args.matrix)
    received = BitWord.from_bits(args.received)
    if args.beta is not None:
        if args.k is None:
            print("--k (message bits) is required for concatenated decoding",
                  file=sys.stderr)
            return 2
        params = derive_params(args.k, args.beta, n_out=args.n_out)
        code = ConcatCode(params, G)
        decoded = code.decode(received)
        if decoded is None:
            print("DECODE-FAILURE", file=sys.stderr)
            return 1
        print(str(decoded))
    else:
        print(str(InnerCode(G).ml_decode(received)))
    return 0


def _simulation_lengths(args, k: int) -> list[tuple[float, float | None, int]]:
    points = []
    for p in args.p:
        if args.n is not None:
            for n in args.n:
                points.append((p, None, n))
        else:
            for delta in args.delta:
                if not delta < capacity(p):
                    raise ValueError(
                        f"delta={delta} is not below capacity({p})={capacity(p)}"
                    )
                points.append((p, delta, prefix_length_for(p, delta, k)))
    return points


def cmd_simulate(args) -> int:
    if (args.n is None) == (args.delta is None):
        print("exactly one of --n/--delta is required", file=sys.stderr)
        return 2
    if args.trials < 1:
        print("--trials must be at least 1", file=sys.stderr)
        return 2
    G, mode = load_matrix(args.matrix)

    if args.code == "concat":
        if args.k is None:
            print("--k (total message bits) is required for concat",
                  file=sys.stderr)
            return 2
        params = derive_params(args.k, args.beta or G.k, n_out=args.n_out)
        if params.k_in != G.k:
            print(f"matrix k={G.k} does not match k_in={params.k_in}",
                  file=sys.stderr)
            return 2
        raw_points = _simulation_lengths(args, params.k_in)
        # delta targets the inner rate; scale to full stream length.
        raw_points = [(p, d, n if d is None else n * params.L_in)
                      for (p, d, n) in raw_points]
        k_report = params.k
    else:
        params = None
        raw_points = _simulation_lengths(args, G.k)
        k_report = G.k

    n_max = max(n if params is None else n // params.L_in
                for (_, _, n) in raw_points)
    if n_max > G.n_rows:
        state = BuilderState.replay(G, mode)
        state.extend_to(n_max)
        G = state.matrix

    inner = InnerCode(G)
    code = ConcatCode(params, G) if params is not None else None
    points = []
    for index, (p, delta, n) in enumerate(raw_points):
        if params is None:
            errors = run_inner_point(inner, n, p, args.seed, index,
                                     args.trials, args.message)
            points.append(ExperimentPoint("inner", k_report, n, p, delta,
                                          args.trials, errors))
        else:
            errors, _, _ = run_concat_point(code, n, p, args.seed, index,
                                            args.trials, args.message)
            points.append(ExperimentPoint("concat", k_report, n, p, delta,
                                          args.trials, errors))
    csv_text = experiment_csv(
        points, args.seed, matrix_sha256(G, mode),
        None if params is None else params.as_dict(),
    )
    _write_output(csv_text, args.out)
    return 0


def cmd_certify(args) -> int:
    G, mode = load_matrix(args.matrix)
    n = G.n_rows
    code = InnerCode(G)

    # Deterministic reconstruction: the rows must equal what the
    # construction produces from (k, mode) alone.
    mismatches = 0
    try:
        rebuilt = BuilderState(G.k, mode).extend_to(n).matrix
        mismatches = sum(1 for a, b in zip(rebuilt.row_values, G.row_values)
                         if a != b)
    except RowSearchError:
        mismatches = -1  # construction dies before reaching n

    state = BuilderState.replay(G, mode)
    spectrum = check_spectrum_bounds(code, n, state.marked_count)

    lines = [f"# tool=rateless-bsc {__version__}",
             f"# matrix_sha256={matrix_sha256(G, mode)}",
             "claim,i,observed,bound,pass"]
    consistency_pass = mismatches == 0
    lines.append(f"class-consistency,,{mismatches},0,{consistency_pass}")
    for row in spectrum.rows:
        i_text = "" if row.i is None else str(row.i)
        lines.append(f"{row.claim},{i_text},{row.observed},{row.bound!r},{row.passed}")

    all_pass = consistency_pass and spectrum.passed
    if args.p is not None:
        tau = args.tau if args.tau is not None else delta_gv(n, G.k)
        report = poltyrev_certificate(weight_distribution(code, n),
                                      args.p, args.delta, tau)
        lines.append(f"poltyrev,,{report.observed!r},{report.bound_value!r},"
                     f"{report.passed}")
        all_pass = all_pass and report.passed
    _write_output("\n".join(lines) + "\n", args.out)
    return 0 if all_pass else 1


def cmd_params(args) -> int:
    params = derive_params(args.k, args.beta, n_out=args.n_out)
    print(json.dumps(params.as_dict(), sort_keys=True, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rateless",
        description="Deterministic rateless code for the binary symmetric "
                    "channel: build, encode, decode, simulate, certify.",
    )
    parser.add_argument("--version", action="version",
                        version=f"rateless-bsc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a generator matrix file")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--mode", default="strict",
                   help="strict or scaled:<factor> (default strict)")
    b.add_argument("--out", required=True)
    b.add_argument("--allow-large", action="store_true",
                   help=f"permit k > {BUILD_K_GUARD}")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("encode", help="encode a message to an n-bit prefix")
    e.add_argument("--matrix", required=True)
    e.add_argument("--message", required=True, help="bit string")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--beta", type=int, help="concatenated mode: alphabet size")
    e.add_argument("--n-out", type=int, dest="n_out",
                   help="override outer length (concatenated mode)")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="maximum-likelihood decode a received word")
    d.add_argument("--matrix", required=True)
    d.add_argument("--received", required=True, help="bit string")
    d.add_argument("--beta", type=int, help="concatenated mode: alphabet size")
    d.add_argument("--k", type=int, help="message bits (concatenated mode)")
    d.add_argument("--n-out", type=int, dest="n_out",
                   help="override outer length (concatenated mode)")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("simulate", help="seeded Monte Carlo error rates -> CSV")
    s.add_argument("--matrix", required=True)
    s.add_argument("--code", choices=["inner", "concat"], default="inner")
    s.add_argument("--p", type=float, action="append", required=True)
    s.add_argument("--n", type=int, action="append",
                   help="prefix length(s); alternative to --delta")
    s.add_argument("--delta", type=float, action="append",
                   help="capacity gap(s); lengths derived per p")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--message", choices=["random", "all-zero"], default="random")
    s.add_argument("--k", type=int, help="total message bits (concat)")
    s.add_argument("--beta", type=int, help="alphabet size (concat, default matrix k)")
    s.add_argument("--n-out", type=int, dest="n_out")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("certify", help="verify spectral claims of a matrix file")
    c.add_argument("--matrix", required=True)
    c.add_argument("--p", type=float, help="crossover for the heavy-codeword check")
    c.add_argument("--delta", type=float, default=0.1)
    c.add_argument("--tau", type=float,
                   help="weight threshold fraction (default: GV radius)")
    c.add_argument("--out", help="CSV path (default stdout)")
    c.set_defaults(func=cmd_certify)

    q = sub.add_parser("params", help="derive concatenation parameters")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--beta", type=int, required=True)
    q.add_argument("--n-out", type=int, dest="n_out")
    q.set_defaults(func=cmd_params)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
