"""Monte Carlo block-error sweeps over decoders and channel grids.

Each grid point simulates random in-dictionary text: sample words, Huffman
encode to an exact-length payload, append the checksum for the decoders that
use one, polar encode, transmit, decode, and score the decoded information
bits against the transmitted ones.

Pairing: at a fixed grid point every decoder that shares a frame layout
(checksum or not) sees bit-identical payloads and noise, trial for trial, so
decoder orderings can be read off matched pairs.  Per-trial generators are
derived from (seed, point, trial, stream), which also makes results
independent of how trials are distributed over workers.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import io
import os
import re
import time
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import corpus as corpus_mod
from .channel import make_channel, send_block
from .jscd import (CRC16, TextSource, adaptive_decode, crc_append,
                   crc_scl_decode, extract_info, jscd_scl_decode)
from .polar import construct_frozen_set, encode, sc_decode, scl_decode
from .trie import DictTrie

WORKERS_ENV = "POLARJSCD_WORKERS"
_BATCH = 128

_TOKEN_RE = re.compile(r"(scl|crc-scl|jscd|adaptive|adaptive-jscd):(\d+)")


def parse_decoder(token: str) -> Tuple[str, int]:
    """Normalize a roster token to (kind, list size).

    Accepted: `sc`, `scl:L`, `crc-scl:L`, `jscd:L`, `adaptive:Lmax`,
    `adaptive-jscd:Lmax`.  List sizes must be powers of two.
    """
    t = token.strip().lower()
    if t == "sc":
        return ("sc", 1)
    m = _TOKEN_RE.fullmatch(t)
    if not m:
        raise ValueError(f"unknown decoder token: {token!r}")
    kind, size = m.group(1), int(m.group(2))
    if size < 1 or size & (size - 1):
        raise ValueError(f"list size must be a power of two: {token!r}")
    return (kind, size)


def canonical_token(token: str) -> str:
    kind, size = parse_decoder(token)
    return "sc" if kind == "sc" else f"{kind}:{size}"


# frame layouts: checksum-forming decoders vs raw-payload decoders
_CRC_KINDS = frozenset({"crc-scl", "jscd", "adaptive", "adaptive-jscd"})


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """One experiment matrix: code, channel grid, decoder roster, stopping."""

    n: int = 1024
    k: int = 945
    channel: str = "awgn"
    grid: Tuple[float, ...] = (3.5, 4.0, 4.5, 5.0)
    decoders: Tuple[str, ...] = ("sc", "scl:8", "crc-scl:8", "jscd:8")
    target_errors: int = 100
    max_trials: int = 10_000
    seed: int = 0
    dict_path: Optional[str] = None
    max_words: Optional[int] = None
    word_counts: Optional[Mapping[str, int]] = None
    design_param: Optional[float] = None
    workers: Optional[int] = None
    exact_metrics: bool = False

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        object.__setattr__(self, "decoders",
                           tuple(canonical_token(t) for t in self.decoders))
        if self.channel not in ("awgn", "bsc"):
            raise ValueError(f"unknown channel kind: {self.channel!r}")
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if not self.decoders:
            raise ValueError("decoder roster must be non-empty")
        if len(set(self.decoders)) != len(self.decoders):
            raise ValueError("duplicate decoder in roster")
        if self.target_errors < 1 or self.max_trials < 1:
            raise ValueError("trial counts must be positive")


@dataclasses.dataclass(frozen=True)
class SweepCell:
    """Tally for one (decoder, grid point)."""

    decoder: str
    channel: str
    param: float
    blocks: int
    block_errors: int
    bler: float
    mean_list: float
    mean_ms: float


@dataclasses.dataclass
class SweepResult:
    config: SweepConfig
    cells: List[SweepCell]

    CSV_FIELDS = ("decoder", "channel", "param", "blocks", "block_errors",
                  "bler", "mean_list", "mean_ms")

    def cell(self, decoder: str, param: float) -> SweepCell:
        decoder = canonical_token(decoder)
        for c in self.cells:
            if c.decoder == decoder and c.param == float(param):
                return c
        raise KeyError((decoder, param))

    def bler(self, decoder: str, param: float) -> float:
        return self.cell(decoder, param).bler

    def to_csv(self, path_or_file) -> None:
        if hasattr(path_or_file, "write"):
            self._write_csv(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as f:
                self._write_csv(f)

    def _write_csv(self, f) -> None:
        w = csv.writer(f)
        w.writerow(self.CSV_FIELDS)
        for c in self.cells:
            w.writerow([c.decoder, c.channel, repr(c.param), c.blocks,
                        c.block_errors, repr(c.bler),
                        round(c.mean_list, 6), round(c.mean_ms, 4)])

    def csv_text(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()


def load_sweep_model(cfg: SweepConfig):
    """Build (trie, tree) from the config's dictionary source.

    Precedence: in-memory word counts, then a saved trie dump, then the
    bundled English table.
    """
    if cfg.word_counts is not None:
        counts = dict(cfg.word_counts)
    elif cfg.dict_path is not None:
        trie = DictTrie.load(cfg.dict_path)
        counts = dict(trie.words())
    else:
        counts = corpus_mod.bundled_word_counts()
    if cfg.max_words is not None and len(counts) > cfg.max_words:
        counts, _ = corpus_mod.filter_word_counts(counts, max_words=cfg.max_words)
    return corpus_mod.build_source_model(counts)


def resolve_workers(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        n = explicit
    else:
        n = int(os.environ.get(WORKERS_ENV, "1"))
    if n < 1:
        raise ValueError("worker count must be positive")
    return n


# -- per-worker state --------------------------------------------------------

_CTX: dict = {}


def _init_worker(cfg: SweepConfig) -> None:
    trie, tree = load_sweep_model(cfg)
    _CTX.clear()
    _CTX.update(cfg=cfg, trie=trie, tree=tree, source=TextSource(trie, tree),
                points={})


def _point_context(point: int) -> dict:
    ctx = _CTX["points"].get(point)
    if ctx is not None:
        return ctx
    cfg: SweepConfig = _CTX["cfg"]
    param = cfg.grid[point]
    design = param if cfg.design_param is None else cfg.design_param
    rate = cfg.k / cfg.n
    code = construct_frozen_set(cfg.n, cfg.k, cfg.channel, design)
    channel = make_channel(cfg.channel, param, rate=rate)
    ctx = {"code": code, "channel": channel, "param": param}
    _CTX["points"][point] = ctx
    return ctx


def _run_one(token: str, code, llrs, frame) -> Tuple[bool, int, float]:
    """Decode one block; returns (block error, list size used, seconds)."""
    kind, size = parse_decoder(token)
    trie, tree = _CTX["trie"], _CTX["tree"]
    exact = _CTX["cfg"].exact_metrics
    t0 = time.perf_counter()
    if kind == "sc":
        u = sc_decode(code, llrs, exact=exact)
        decoded = extract_info(code, u)
        used = 1
    elif kind == "scl":
        paths = scl_decode(code, llrs, size, exact=exact)
        decoded = extract_info(code, paths[0].u)
        used = size
    elif kind == "crc-scl":
        res = crc_scl_decode(code, llrs, size, CRC16, exact=exact)
        decoded, used = res.decoded_info, size
    elif kind == "jscd":
        res = jscd_scl_decode(code, llrs, size, trie, tree, CRC16, exact=exact)
        decoded, used = res.decoded_info, size
    elif kind == "adaptive":
        res = adaptive_decode(code, llrs, size, crc=CRC16, exact=exact)
        decoded, used = res.decoded_info, res.list_size_used
    else:  # adaptive-jscd
        res = adaptive_decode(code, llrs, size, trie, tree, CRC16, exact=exact)
        decoded, used = res.decoded_info, res.list_size_used
    dt = time.perf_counter() - t0
    return (not np.array_equal(decoded, frame), used, dt)


def _run_batch(point: int, lo: int, hi: int,
               tokens: Sequence[str]) -> Dict[str, Tuple[int, int, int, float]]:
    """Decode trials [lo, hi) for the given decoders; return per-token
    (blocks, errors, list size sum, decode seconds sum)."""
    cfg: SweepConfig = _CTX["cfg"]
    ctx = _point_context(point)
    code, channel = ctx["code"], ctx["channel"]
    source: TextSource = _CTX["source"]
    groups = sorted({parse_decoder(t)[0] in _CRC_KINDS for t in tokens})
    tally = {t: [0, 0, 0, 0.0] for t in tokens}
    for trial in range(lo, hi):
        frames = {}
        for uses_crc in groups:
            gid = int(uses_crc)
            text_rng = np.random.default_rng((cfg.seed, point, trial, 2 * gid))
            noise_rng = np.random.default_rng((cfg.seed, point, trial, 2 * gid + 1))
            payload_bits = cfg.k - (CRC16.width if uses_crc else 0)
            payload, _ = source.sample(payload_bits, text_rng)
            frame = crc_append(payload, CRC16) if uses_crc else payload
            cw = encode(code, frame)
            _, llrs = send_block(channel, cw, noise_rng)
            frames[uses_crc] = (frame, llrs)
        for token in tokens:
            frame, llrs = frames[parse_decoder(token)[0] in _CRC_KINDS]
            err, used, dt = _run_one(token, code, llrs, frame)
            t = tally[token]
            t[0] += 1
            t[1] += int(err)
            t[2] += used
            t[3] += dt
    return {t: tuple(v) for t, v in tally.items()}


def _merge(total: Dict[str, list], part: Dict[str, tuple]) -> None:
    for token, (blocks, errors, lists, secs) in part.items():
        t = total[token]
        t[0] += blocks
        t[1] += errors
        t[2] += lists
        t[3] += secs


def run_sweep(cfg: SweepConfig, progress=None) -> SweepResult:
    """Run the full experiment matrix; stops each (decoder, point) cell once
    `target_errors` block errors are in or `max_trials` trials are spent.

    Stopping is evaluated at fixed batch boundaries so results do not depend
    on the worker count.  `progress`, when given, is called with each
    finished cell.
    """
    workers = resolve_workers(cfg.workers)
    pool = None
    if workers > 1:
        pool = concurrent.futures.ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(cfg,))
    _init_worker(cfg)

    def run_chunks(point, lo, hi, tokens):
        if pool is None or hi - lo < 2 * workers:
            return [_run_batch(point, lo, hi, tokens)]
        bounds = np.linspace(lo, hi, workers + 1).astype(int)
        futs = [pool.submit(_run_batch, point, int(a), int(b), tokens)
                for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        return [f.result() for f in futs]

    cells = []
    try:
        for point, param in enumerate(cfg.grid):
            total = {t: [0, 0, 0, 0.0] for t in cfg.decoders}
            active = list(cfg.decoders)
            trial = 0
            while active and trial < cfg.max_trials:
                hi = min(trial + _BATCH, cfg.max_trials)
                for part in run_chunks(point, trial, hi, tuple(active)):
                    _merge(total, part)
                trial = hi
                active = [t for t in active if total[t][1] < cfg.target_errors]
            for token in cfg.decoders:
                blocks, errors, lists, secs = total[token]
                cell = SweepCell(
                    decoder=token, channel=cfg.channel, param=param,
                    blocks=blocks, block_errors=errors,
                    bler=errors / blocks if blocks else 0.0,
                    mean_list=lists / blocks if blocks else 0.0,
                    mean_ms=1e3 * secs / blocks if blocks else 0.0)
                cells.append(cell)
                if progress is not None:
                    progress(cell)
    finally:
        if pool is not None:
            pool.shutdown()
    return SweepResult(config=cfg, cells=cells)


def load_config_file(path) -> SweepConfig:
    """Parse a plain `key = value` sweep description into a SweepConfig.

    Lists (grid, decoders) are comma-separated; `#` starts a comment.
    """
    raw: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for ln, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {ln}: expected key = value")
            key, val = line.split("=", 1)
            raw[key.strip().lower().replace("-", "_")] = val.strip()
    return config_from_mapping(raw)


def config_from_mapping(raw: Mapping[str, str]) -> SweepConfig:
    known = {f.name for f in dataclasses.fields(SweepConfig)} - {"word_counts"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kw: dict = {}
    for key, val in raw.items():
        if key in ("n", "k", "target_errors", "max_trials", "seed",
                   "max_words", "workers"):
            kw[key] = int(val)
        elif key in ("grid", "design_param"):
            parts = [p for p in str(val).split(",") if p.strip()]
            vals = tuple(float(p) for p in parts)
            kw[key] = vals if key == "grid" else vals[0]
        elif key == "decoders":
            kw[key] = tuple(p.strip() for p in str(val).split(",") if p.strip())
        elif key == "exact_metrics":
            kw[key] = str(val).lower() in ("1", "true", "yes", "on")
        else:
            kw[key] = val
    return SweepConfig(**kw)
