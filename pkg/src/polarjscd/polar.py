"""Polar code construction, encoding, and successive-cancellation decoding.

Conventions used throughout:

* ``n = 2**m`` block length, ``u`` is the length-``n`` input vector in decode
  order (index 0 decoded first), ``x = u @ G mod 2`` with
  ``G = R @ F2^{(x)m}`` where ``R`` is the bit-reversal permutation and
  ``F2 = [[1, 0], [1, 1]]``.
* Frozen positions carry 0.  The decision rule at an unfrozen leaf is
  "LLR >= 0 -> 0", so erasures and exact ties resolve to 0.
* LLRs are log(P(y|0)/P(y|1)); positive means "bit is probably 0".

The list decoder keeps per-path state in flat arrays indexed by a heap-like
depth layout so that forks reduce to row gathers, which keeps the Python
overhead per decoded bit constant.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Optional, Protocol, Sequence

import numpy as np

LLR_CLAMP = 40.0


def bit_reversal_permutation(n: int) -> np.ndarray:
    """Index permutation that reverses the bit order of each index."""
    m = n.bit_length() - 1
    if 1 << m != n:
        raise ValueError(f"n must be a power of two, got {n}")
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(m):
        rev |= ((idx >> b) & 1) << (m - 1 - b)
    return rev


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Apply the Kronecker power of F2 = [[1,0],[1,1]] in place-free form."""
    x = np.asarray(u, dtype=np.int8).copy()
    n = x.shape[-1]
    if n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    h = 1
    while h < n:
        blocks = x.reshape(-1, 2, h)
        blocks[:, 0, :] ^= blocks[:, 1, :]
        x = blocks.reshape(x.shape)
        h *= 2
    return x


@dataclasses.dataclass(frozen=True)
class PolarCodeConfig:
    """A constructed polar code: block length, dimension, and frozen pattern."""

    n: int
    k: int
    frozen_set: frozenset
    info_set: tuple
    channel_kind: str = ""
    design_param: float = float("nan")

    def __post_init__(self):
        if self.n & (self.n - 1) or self.n < 2:
            raise ValueError(f"n must be a power of two >= 2, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k out of range: {self.k}")
        if len(self.frozen_set) != self.n - self.k:
            raise ValueError("frozen set size must be n - k")
        if self.frozen_set & set(self.info_set):
            raise ValueError("frozen and info sets overlap")
        if len(self.info_set) != self.k or list(self.info_set) != sorted(self.info_set):
            raise ValueError("info_set must be the ascending complement of frozen_set")

    @property
    def m(self) -> int:
        return self.n.bit_length() - 1

    @property
    def rate(self) -> float:
        return self.k / self.n


def _phi(x: np.ndarray) -> np.ndarray:
    # mean-LLR reliability functional for Gaussian densities; the two-branch
    # closed form is accurate enough for code construction
    x = np.asarray(x, dtype=float)
    small = x < 10.0
    out = np.empty_like(x)
    xs = np.where(small, x, 1.0)
    out_small = np.exp(-0.4527 * xs**0.86 + 0.0218)
    xl = np.where(small, 10.0, x)
    out_large = np.sqrt(np.pi / xl) * np.exp(-xl / 4.0) * (1.0 - 10.0 / (7.0 * xl))
    out = np.where(small, out_small, out_large)
    return np.clip(out, 0.0, 1.0)


def _log_phi(x: float) -> float:
    if x < 10.0:
        return -0.4527 * x**0.86 + 0.0218
    return 0.5 * math.log(math.pi / x) - x / 4.0 + math.log1p(-10.0 / (7.0 * x))


def _log_phi_inverse(target: float) -> float:
    """Solve log(phi(x)) = target for x by bisection; phi is decreasing."""
    if target >= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while _log_phi(hi) > target:
        hi *= 2.0
        if hi > 1e9:
            return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_phi(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def _ga_means(n: int, design_llr_mean: float) -> np.ndarray:
    """Density-evolution mean LLR of every bit channel under the Gaussian
    approximation, in decode order."""
    means = np.array([design_llr_mean], dtype=float)
    while means.size < n:
        nxt = np.empty(means.size * 2, dtype=float)
        for i, mv in enumerate(means):
            if mv <= 0.0:
                worse = 0.0
            else:
                lp = _log_phi(mv)
                # 1 - (1 - phi)^2 = phi * (2 - phi), stable in log domain
                worse = _log_phi_inverse(lp + math.log(2.0 - math.exp(max(lp, -745.0)))) if lp > -700.0 else _log_phi_inverse(lp + math.log(2.0))
            nxt[2 * i] = worse
            nxt[2 * i + 1] = 2.0 * mv
        means = nxt
    return means


def _bhattacharyya(n: int, z0: float) -> np.ndarray:
    """Exact Bhattacharyya parameter recursion, in decode order."""
    z = np.array([z0], dtype=float)
    while z.size < n:
        nxt = np.empty(z.size * 2, dtype=float)
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def construct_frozen_set(n: int, k: int, channel_kind: str,
                         design_param: float) -> PolarCodeConfig:
    """Pick the k most reliable bit channels for information.

    ``channel_kind="awgn"`` runs Gaussian-approximation density evolution at a
    design Eb/N0 in dB; ``"bsc"`` runs the exact Bhattacharyya recursion at the
    design crossover probability.
    """
    if n & (n - 1) or n < 2:
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k out of range: {k}")
    if channel_kind == "awgn":
        rate = k / n if k else 1.0 / n
        sigma_sq = 1.0 / (2.0 * rate * 10.0 ** (design_param / 10.0))
        means = _ga_means(n, 2.0 / sigma_sq)
        order = np.argsort(means, kind="stable")  # ascending reliability
    elif channel_kind == "bsc":
        p = design_param
        if not 0.0 < p < 0.5:
            raise ValueError(f"crossover must be in (0, 0.5), got {p}")
        z = _bhattacharyya(n, 2.0 * math.sqrt(p * (1.0 - p)))
        order = np.argsort(-z, kind="stable")  # ascending reliability
    else:
        raise ValueError(f"unknown channel kind: {channel_kind!r}")
    frozen = frozenset(int(i) for i in order[: n - k])
    info = tuple(int(i) for i in sorted(order[n - k:]))
    return PolarCodeConfig(n=n, k=k, frozen_set=frozen, info_set=info,
                           channel_kind=channel_kind, design_param=float(design_param))


construct = construct_frozen_set


def assemble_u(config: PolarCodeConfig, info_bits: Sequence[int]) -> np.ndarray:
    """Place information bits on the unfrozen positions (ascending order)."""
    info_bits = np.asarray(info_bits, dtype=np.int8)
    if info_bits.shape != (config.k,):
        raise ValueError(f"expected {config.k} info bits, got {info_bits.shape}")
    u = np.zeros(config.n, dtype=np.int8)
    u[list(config.info_set)] = info_bits
    return u


def encode(config: PolarCodeConfig, bits: Sequence[int]) -> np.ndarray:
    """Encode to a codeword: x = (u R) F2^{(x)m}.

    Accepts either the k information bits (frozen positions are filled with
    zeros) or a full length-n input vector whose frozen positions must already
    be zero.
    """
    u = np.asarray(bits, dtype=np.int8)
    if u.shape == (config.k,):
        u = assemble_u(config, u)
    elif u.shape != (config.n,):
        raise ValueError(f"expected {config.k} info bits or a length-{config.n} "
                         f"input vector, got {u.shape}")
    if np.any(u[sorted(config.frozen_set)]):
        raise ValueError("frozen positions must be zero")
    return polar_transform(u[bit_reversal_permutation(config.n)])


# ---------------------------------------------------------------------------
# successive cancellation (single path and list)
# ---------------------------------------------------------------------------


class PathPrior(Protocol):
    """Per-path source prior plugged into the list decoder.

    ``extend`` returns the successor state and the absolute log prior
    log P(u_1^i) of the extended bit prefix (``-inf`` marks an impossible
    extension).  ``fallback`` selects the behaviour when every candidate at a
    bit is impossible: True means "score that bit on the channel only and stop
    updating" (the states are deadened), False means keep the -inf metrics.
    """

    fallback: bool

    def initial(self):
        ...

    def extend(self, state, ordinal: int, bit: int):
        ...

    def log_prior(self, state) -> float:
        ...

    def deaden(self, state):
        ...


@dataclasses.dataclass
class DecoderPath:
    """One surviving list-decoder path."""

    u: np.ndarray
    channel_metric: float
    total_metric: float
    prior_state: object = None
    prior_fallback: bool = False


def _min_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def _exact_f(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # log((1 + e^{a+b}) / (e^a + e^b)) without overflow
    s = a + b
    return (np.maximum(s, 0.0) - np.maximum(a, b)
            + np.log1p(np.exp(-np.abs(s))) - np.log1p(np.exp(-np.abs(a - b))))


class _Engine:
    """Shared LLR/partial-sum machinery for SC and SCL decoding.

    Depth d in 1..m owns a slice of length 2**(m-d) at offset ``off[d]`` in
    both the LLR buffer and the partial-sum buffer; depth 0 is the (shared)
    channel LLR vector.  All buffers carry one row per active path.
    """

    def __init__(self, config: PolarCodeConfig, channel_llrs: np.ndarray, exact: bool):
        n, m = config.n, config.m
        llr = np.asarray(channel_llrs, dtype=float)
        if llr.shape != (n,):
            raise ValueError(f"expected {n} channel LLRs, got {llr.shape}")
        self.n, self.m = n, m
        self.chan = llr[bit_reversal_permutation(n)]
        self.f = _exact_f if exact else _min_sum
        off = np.zeros(m + 1, dtype=np.int64)
        for d in range(2, m + 1):
            off[d] = off[d - 1] + (1 << (m - d + 1))
        self.off = off
        # schedule[i] = (g_depth or 0 for none, first_f_depth)
        sched = []
        for i in range(n):
            if i == 0:
                sched.append((0, 1))
            else:
                z = (i & -i).bit_length() - 1  # trailing zeros
                sched.append((m - z, m - z + 1))
        self.sched = sched

    def init_paths(self, num: int):
        n = self.n
        self.lam = np.zeros((num, max(n - 1, 1)), dtype=float)
        self.beta = np.zeros((num, max(n - 1, 1)), dtype=np.int8)
        self.dec = np.zeros((num, n), dtype=np.int8)

    def parent_slice(self, d: int):
        if d == 1:
            return None  # channel level
        h2 = 1 << (self.m - d + 1)
        return slice(self.off[d - 1], self.off[d - 1] + h2)

    def update_llrs(self, i: int) -> np.ndarray:
        """Refresh the LLR chain for bit i; returns the leaf LLR per path."""
        m, off, lam = self.m, self.off, self.lam
        g_depth, f_start = self.sched[i]
        if g_depth:
            h = 1 << (m - g_depth)
            ps = self.parent_slice(g_depth)
            parent = self.chan[None, :] if ps is None else lam[:, ps]
            left = parent[:, :h]
            right = parent[:, h:]
            sgn = 1.0 - 2.0 * self.beta[:, off[g_depth]: off[g_depth] + h]
            lam[:, off[g_depth]: off[g_depth] + h] = right + sgn * left
        for d in range(f_start, m + 1):
            h = 1 << (m - d)
            ps = self.parent_slice(d)
            parent = self.chan[None, :] if ps is None else lam[:, ps]
            lam[:, off[d]: off[d] + h] = self.f(parent[:, :h], parent[:, h:])
        return lam[:, off[m]] if m >= 1 else None

    def update_partial_sums(self, i: int, bits: np.ndarray):
        m, off, beta = self.m, self.off, self.beta
        cur = bits.reshape(-1, 1).astype(np.int8)
        d = m
        while d >= 1 and (i >> (m - d)) & 1:
            h = cur.shape[1]
            cur = np.concatenate([beta[:, off[d]: off[d] + h] ^ cur, cur], axis=1)
            d -= 1
        if d >= 1:
            beta[:, off[d]: off[d] + cur.shape[1]] = cur

    def gather(self, rows: np.ndarray):
        self.lam = self.lam[rows]
        self.beta = self.beta[rows]
        self.dec = self.dec[rows]


def sc_decode(config: PolarCodeConfig, channel_llrs: np.ndarray,
              exact: bool = False, return_llrs: bool = False):
    """Plain successive cancellation; ties decide 0.

    Returns the length-n input estimate, plus the per-bit decision LLRs when
    ``return_llrs`` is set.
    """
    eng = _Engine(config, channel_llrs, exact)
    eng.init_paths(1)
    frozen = np.zeros(config.n, dtype=bool)
    frozen[sorted(config.frozen_set)] = True
    llr_trace = np.zeros(config.n) if return_llrs else None
    for i in range(config.n):
        leaf = eng.update_llrs(i)
        lam = float(leaf[0])
        if return_llrs:
            llr_trace[i] = lam
        bit = 0 if frozen[i] else int(lam < 0.0)
        eng.dec[0, i] = bit
        eng.update_partial_sums(i, np.array([bit], dtype=np.int8))
    u = eng.dec[0].copy()
    return (u, llr_trace) if return_llrs else u


def genie_llrs(config: PolarCodeConfig, channel_llrs: np.ndarray, u_true: np.ndarray,
               exact: bool = True) -> np.ndarray:
    """Per-bit decision LLRs along a forced input path (diagnostic)."""
    eng = _Engine(config, channel_llrs, exact)
    eng.init_paths(1)
    u_true = np.asarray(u_true, dtype=np.int8)
    out = np.zeros(config.n)
    for i in range(config.n):
        out[i] = float(eng.update_llrs(i)[0])
        eng.dec[0, i] = u_true[i]
        eng.update_partial_sums(i, u_true[i: i + 1])
    return out


def _penalties(leaf: np.ndarray, exact: bool):
    """Log-metric increments for deciding 0 and 1 at the given leaf LLRs."""
    if exact:
        pen0 = -np.logaddexp(0.0, -leaf)
        pen1 = -np.logaddexp(0.0, leaf)
    else:
        pen0 = np.where(leaf < 0.0, leaf, 0.0)
        pen1 = np.where(leaf >= 0.0, -leaf, 0.0)
    return pen0, pen1


def scl_decode(config: PolarCodeConfig, channel_llrs: np.ndarray, list_size: int,
               prior: Optional[PathPrior] = None, exact: bool = False):
    """Successive-cancellation list decoding with an optional source prior.

    Returns the surviving paths sorted by descending total metric.  The total
    metric is the channel metric plus the path's log prior (zero when no prior
    is supplied).  Tie-breaks are deterministic: prefer the path whose latest
    decision was 0, then the lower path index.
    """
    if list_size < 1 or list_size & (list_size - 1):
        raise ValueError(f"list size must be a power of two >= 1, got {list_size}")
    eng = _Engine(config, channel_llrs, exact)
    eng.init_paths(1)
    n = config.n
    frozen = np.zeros(n, dtype=bool)
    frozen[sorted(config.frozen_set)] = True
    metric = np.zeros(1)
    states = [prior.initial()] if prior is not None else None
    log_prior = np.zeros(1)
    fallback_used = False
    ordinal = 0  # index among unfrozen bits

    for i in range(n):
        leaf = eng.update_llrs(i)
        if frozen[i]:
            pen0, _ = _penalties(leaf, exact)
            metric = metric + pen0
            eng.dec[:, i] = 0
            eng.update_partial_sums(i, np.zeros(len(metric), dtype=np.int8))
            continue

        pen0, pen1 = _penalties(leaf, exact)
        cand_channel = np.concatenate([metric + pen0, metric + pen1])
        cand_bits = np.concatenate([np.zeros(len(metric), dtype=np.int8),
                                    np.ones(len(metric), dtype=np.int8)])
        cand_parent = np.concatenate([np.arange(len(metric)), np.arange(len(metric))])

        if prior is not None:
            cand_states = []
            cand_lp = np.empty(len(cand_channel))
            for j in range(len(cand_channel)):
                st, lp = prior.extend(states[cand_parent[j]], ordinal, int(cand_bits[j]))
                cand_states.append(st)
                cand_lp[j] = lp
            if not np.any(np.isfinite(cand_lp)) and prior.fallback:
                fallback_used = True
                cand_states = [prior.deaden(states[p]) for p in cand_parent]
                cand_lp = log_prior[cand_parent]
            cand_total = cand_channel + cand_lp
        else:
            cand_total = cand_channel

        rho = min(len(cand_total), list_size)
        order = np.lexsort((cand_parent, cand_bits, -cand_total))
        keep = order[:rho]

        eng.gather(cand_parent[keep])
        eng.dec[:, i] = cand_bits[keep]
        metric = cand_channel[keep]
        if prior is not None:
            states = [cand_states[j] for j in keep]
            log_prior = cand_lp[keep]
        eng.update_partial_sums(i, cand_bits[keep])
        ordinal += 1

    total = metric + log_prior if prior is not None else metric
    last_bits = eng.dec[:, n - 1]
    final = np.lexsort((np.arange(len(total)), last_bits, -total))
    paths = []
    for j in final:
        paths.append(DecoderPath(
            u=eng.dec[j].copy(),
            channel_metric=float(metric[j]),
            total_metric=float(total[j]),
            prior_state=states[j] if prior is not None else None,
        ))
    if fallback_used:
        for p in paths:
            p.prior_fallback = True
    return paths
