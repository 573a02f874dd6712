"""Command-line interface.

Subcommands: `build-dict` turns a text corpus into a dictionary trie,
`stats` reports entropy/redundancy/sparsity as CSV, `simulate` runs a
configured Monte Carlo sweep, and `decode` runs one block through a chosen
decoder.  All randomness is governed by a single --seed; the worker count
for sweeps defaults to the POLARJSCD_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from typing import Dict, Optional

import numpy as np

from . import corpus as corpus_mod
from . import stats as stats_mod
from .huffman import HuffmanTree
from .jscd import (CRC16, TextSource, adaptive_decode, crc_append,
                   crc_scl_decode, jscd_scl_decode)
from .channel import make_channel, send_block
from .polar import construct_frozen_set, encode
from .sweep import SweepConfig, load_config_file, run_sweep
from .trie import DictTrie

PAPER_SCALE = (8192, 7561)


def read_kv_file(path) -> Dict[str, str]:
    """Plain `key = value` file; `#` comments; keys lowercased."""
    out: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for ln, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {ln}: expected key = value")
            key, val = line.split("=", 1)
            out[key.strip().lower().replace("-", "_")] = val.strip()
    return out


def _load_counts(corpus_path: Optional[str], dict_path: Optional[str],
                 max_words: Optional[int], min_count: int = 1):
    """Word-count table from a text corpus, a trie dump, or the bundled
    table; returns (counts, drop report or None)."""
    report = None
    if corpus_path is not None:
        words, _ = corpus_mod.ingest_corpus(corpus_path)
        counts = corpus_mod.count_words(words)
        counts, report = corpus_mod.filter_word_counts(
            counts, min_count=min_count, max_words=max_words)
        return counts, report
    if dict_path is not None:
        counts = dict(DictTrie.load(dict_path).words())
    else:
        counts = corpus_mod.bundled_word_counts()
    if max_words is not None and len(counts) > max_words:
        counts, report = corpus_mod.filter_word_counts(counts, max_words=max_words)
    return counts, report


def _print_drop_report(report, err=sys.stderr) -> None:
    if report and (report["dropped_words"] or report["rare_words"]
                   or report["capped_words"]):
        print(f"dropped {report['dropped_words']} out-of-alphabet words "
              f"({report['dropped_occurrences']} occurrences), "
              f"{report['rare_words']} rare, {report['capped_words']} over cap",
              file=err)


def cmd_build_dict(args) -> int:
    counts, report = _load_counts(args.corpus, None, args.max_words,
                                  args.min_count)
    _print_drop_report(report)
    from .trie import build_trie

    trie = build_trie(counts)
    trie.dump(args.out)
    total = sum(counts.values())
    print(f"wrote {args.out}: {len(counts)} distinct words, "
          f"{total} occurrences", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    counts, report = _load_counts(args.corpus, args.dict, args.max_words)
    _print_drop_report(report)
    trie, tree = corpus_mod.build_source_model(counts)
    entropy = stats_mod.word_entropy(counts)
    mean_bits = stats_mod.huffman_word_redundancy(trie, tree)
    profile = stats_mod.sparsity_profile(trie, tree, args.n_max)

    summary = [("distinct_words", trie.distinct_words()),
               ("word_entropy_bits", f"{entropy:.4f}"),
               ("mean_encoded_bits_per_word", f"{mean_bits:.4f}")]
    csv_sink = open(args.out, "w", newline="") if args.out else sys.stdout
    info_sink = sys.stdout if args.out else sys.stderr
    try:
        for key, val in summary:
            print(f"{key}: {val}", file=info_sink)
        w = csv.writer(csv_sink)
        w.writerow(["n", "words", "fraction", "neg_log10"])
        for pt in profile:
            x = "inf" if not np.isfinite(pt.neg_log10) else repr(pt.neg_log10)
            w.writerow([pt.n, pt.words, repr(pt.fraction), x])
    finally:
        if args.out:
            csv_sink.close()
    if args.figures:
        from .plots import render_stats_figures

        for path in render_stats_figures(profile, args.figures):
            print(f"wrote {path}", file=info_sink)
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config_file(args.config)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.workers is not None:
        over["workers"] = args.workers
    if args.paper_scale:
        over["n"], over["k"] = PAPER_SCALE
    if over:
        cfg = dataclasses.replace(cfg, **over)

    def progress(cell):
        if not args.quiet:
            print(f"{cell.decoder} @ {cell.param:g}: {cell.block_errors}/"
                  f"{cell.blocks} errors, bler={cell.bler:.3e}, "
                  f"mean_list={cell.mean_list:.2f}", file=sys.stderr)

    result = run_sweep(cfg, progress=progress)
    if args.out:
        result.to_csv(args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(result.csv_text())
    if args.figures:
        from .plots import render_sweep_figures

        for path in render_sweep_figures(result, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _code_from_file(path):
    raw = read_kv_file(path)
    try:
        n, k = int(raw["n"]), int(raw["k"])
        kind = raw.get("channel", "awgn")
        param = float(raw["param"])
    except KeyError as e:
        raise ValueError(f"{path}: missing code key {e.args[0]!r}") from None
    design = float(raw.get("design_param", param))
    code = construct_frozen_set(n, k, kind, design)
    channel = make_channel(kind, param, rate=k / n)
    return code, channel


def cmd_decode(args) -> int:
    code, channel = _code_from_file(args.code)
    crc = CRC16 if args.crc16 else None
    if args.adaptive is not None and not args.crc16:
        raise ValueError("--adaptive needs --crc16 to detect success")

    trie = tree = None
    if args.dict is not None:
        if args.dict == "bundled":
            counts = corpus_mod.bundled_word_counts()
        else:
            counts = dict(DictTrie.load(args.dict).words())
        trie, tree = corpus_mod.build_source_model(counts)

    sent = None
    if args.simulate:
        rng = np.random.default_rng(args.seed)
        payload_bits = code.k - (crc.width if crc else 0)
        if trie is not None:
            payload, text = TextSource(trie, tree).sample(payload_bits, rng)
        else:
            payload = rng.integers(0, 2, payload_bits, dtype=np.int8)
            text = ""
        frame = crc_append(payload, crc) if crc else payload
        cw = encode(code, frame)
        _, llrs = send_block(channel, cw, rng)
        sent = (frame, text)
        if text:
            print(f"sent text: {text!r}")
    else:
        llrs = np.loadtxt(args.llr, dtype=float).ravel()
        if llrs.size != code.n:
            raise ValueError(f"expected {code.n} llrs, file has {llrs.size}")

    if args.adaptive is not None:
        res = adaptive_decode(code, llrs, args.adaptive, trie, tree, crc)
    elif trie is not None:
        res = jscd_scl_decode(code, llrs, args.list_size, trie, tree, crc)
    else:
        res = crc_scl_decode(code, llrs, args.list_size, crc)

    print(f"list size used: {res.list_size_used}")
    if crc:
        print(f"crc pass: {res.success}")
    if res.prior_fallback_used:
        print("prior fallback engaged")
    if res.decoded_text:
        print(f"decoded text: {res.decoded_text!r}")
    if sent is not None:
        ok = bool(np.array_equal(res.decoded_info, sent[0]))
        print(f"recovered transmitted bits: {'yes' if ok else 'no'}")
    if args.out_bits:
        np.savetxt(args.out_bits, res.decoded_info, fmt="%d")
        print(f"wrote {args.out_bits}", file=sys.stderr)
    return 0 if (res.success or not crc) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarjscd",
        description="Polar-coded transmission of text with dictionary-aware "
                    "list decoding: build dictionaries, report source "
                    "statistics, sweep decoders, decode blocks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict",
                       help="build a dictionary trie from a text corpus")
    p.add_argument("--corpus", required=True, help="plain-text corpus file")
    p.add_argument("--out", required=True, help="trie dump destination")
    p.add_argument("--max-words", type=int, default=None,
                   help="keep only the N most frequent words")
    p.add_argument("--min-count", type=int, default=1,
                   help="drop words seen fewer times than this")
    p.set_defaults(func=cmd_build_dict)

    p = sub.add_parser("stats",
                       help="word entropy, mean encoded bits, sparsity CSV")
    p.add_argument("--corpus", help="plain-text corpus file")
    p.add_argument("--dict", help="trie dump (default: bundled table)")
    p.add_argument("--max-words", type=int, default=None)
    p.add_argument("--n-max", type=int, default=64,
                   help="largest encoded length in the census")
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.add_argument("--figures", help="directory for rendered figures")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("simulate", help="run a configured decoder sweep")
    p.add_argument("--config", required=True, help="key = value sweep file")
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.add_argument("--figures", help="directory for rendered figures")
    p.add_argument("--seed", type=int, default=None, help="override the seed")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${'{'}POLARJSCD_WORKERS{'}'} or 1)")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use the large n={PAPER_SCALE[0]}, k={PAPER_SCALE[1]} code")
    p.add_argument("--quiet", action="store_true",
                   help="suppress per-cell progress lines")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode", help="decode one block")
    p.add_argument("--code", required=True,
                   help="key = value file: n, k, channel, param[, design_param]")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--llr", help="file of n channel LLRs")
    g.add_argument("--simulate", action="store_true",
                   help="generate and transmit a random block instead")
    p.add_argument("--dict", default=None,
                   help="trie dump enabling the word prior ('bundled' for "
                        "the packaged table)")
    p.add_argument("--list-size", type=int, default=8)
    p.add_argument("--adaptive", type=int, default=None, metavar="LMAX",
                   help="grow the list until the check passes")
    p.add_argument("--crc16", action="store_true",
                   help="frame carries a 16-bit CRC")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-bits", help="write decoded info bits to a file")
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
