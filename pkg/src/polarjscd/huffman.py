"""Huffman coding over a character alphabet.

Trees are deterministic for a given distribution: when merge candidates tie on
probability they are ordered by their smallest contained symbol, and the
smaller of the two merged subtrees becomes the left child (bit 0).  Every node
carries the set of symbols below it, which lets a decoder walk partial
codewords and know exactly which symbols remain reachable.
"""

from __future__ import annotations

import dataclasses
import heapq
import math
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

DEFAULT_ALPHABET = "abcdefghijklmnopqrstuvwxyz "


@dataclasses.dataclass
class SymbolDistribution:
    """Probability mass over a finite symbol alphabet."""

    symbols: Tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        self.symbols = tuple(self.symbols)
        self.probs = np.asarray(self.probs, dtype=float)
        if len(self.symbols) != len(set(self.symbols)):
            raise ValueError("duplicate symbols")
        if any(len(s) != 1 for s in self.symbols):
            raise ValueError("symbols must be single characters")
        if self.probs.shape != (len(self.symbols),):
            raise ValueError("probability vector shape mismatch")
        if np.any(self.probs <= 0.0):
            raise ValueError("probabilities must be strictly positive")
        total = float(self.probs.sum())
        if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=1e-9):
            raise ValueError(f"probabilities sum to {total}, not 1")

    @classmethod
    def from_counts(cls, counts: Mapping[str, float]) -> "SymbolDistribution":
        items = sorted((s, c) for s, c in counts.items() if c > 0)
        total = float(sum(c for _, c in items))
        if total <= 0.0:
            raise ValueError("counts must sum to a positive value")
        return cls(tuple(s for s, _ in items),
                   np.array([c / total for _, c in items]))

    def prob(self, symbol: str) -> float:
        return float(self.probs[self.symbols.index(symbol)])

    def entropy(self) -> float:
        """Shannon entropy in bits per symbol."""
        p = self.probs[self.probs > 0.0]
        return float(-(p * np.log2(p)).sum())


class HuffNode:
    __slots__ = ("p", "left", "right", "symbol", "sym_set")

    def __init__(self, p, left=None, right=None, symbol=None):
        self.p = p
        self.left = left
        self.right = right
        self.symbol = symbol
        if symbol is not None:
            self.sym_set = frozenset((symbol,))
        else:
            self.sym_set = left.sym_set | right.sym_set

    @property
    def is_leaf(self) -> bool:
        return self.symbol is not None


class HuffmanTree:
    """A binary prefix code; left edges emit 0, right edges emit 1."""

    def __init__(self, root: HuffNode):
        self.root = root
        self._codes: Dict[str, str] = {}
        self._leaves: Dict[str, HuffNode] = {}
        self._collect(root, "")
        self._code_bits = {s: np.frombuffer(b.encode(), dtype=np.uint8) - ord("0")
                           for s, b in self._codes.items()}

    def _collect(self, node: HuffNode, prefix: str):
        if node.is_leaf:
            self._codes[node.symbol] = prefix or "0"
            self._leaves[node.symbol] = node
            return
        self._collect(node.left, prefix + "0")
        self._collect(node.right, prefix + "1")

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(sorted(self._codes))

    def codes(self) -> Dict[str, str]:
        return dict(self._codes)

    def code_length(self, symbol: str) -> int:
        return len(self._codes[symbol])

    def kraft_sum(self) -> float:
        return float(sum(2.0 ** -len(b) for b in self._codes.values()))

    def mean_length(self, dist: Optional[SymbolDistribution] = None) -> float:
        if dist is None:
            return float(sum(self._leaves[s].p * len(b) for s, b in self._codes.items()))
        return float(sum(dist.prob(s) * len(b) for s, b in self._codes.items()))

    def encode(self, text: Iterable[str]) -> np.ndarray:
        try:
            parts = [self._code_bits[s] for s in text]
        except KeyError as e:
            raise ValueError(f"symbol not in code: {e.args[0]!r}") from None
        if not parts:
            return np.zeros(0, dtype=np.int8)
        return np.concatenate(parts).astype(np.int8)

    def decode(self, bits: np.ndarray) -> Tuple[str, np.ndarray]:
        """Instantaneous decode; returns (symbols, unconsumed residual bits)."""
        bits = np.asarray(bits)
        out = []
        node = self.root
        start = 0
        for i, b in enumerate(bits):
            node = node.left if b == 0 else node.right
            if node.is_leaf:
                out.append(node.symbol)
                node = self.root
                start = i + 1
        return "".join(out), bits[start:].astype(np.int8)

    # -- serialization ------------------------------------------------------

    def save_code_table(self, path):
        with open(path, "w", encoding="utf-8") as f:
            for s in sorted(self._codes):
                f.write(f"{s}\t{self._codes[s]}\n")

    @classmethod
    def load_code_table(cls, path) -> "HuffmanTree":
        codes = {}
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if not line:
                    continue
                sym, bits = line.split("\t")
                codes[sym] = bits
        return cls.from_code_table(codes)

    @classmethod
    def from_code_table(cls, codes: Mapping[str, str],
                        dist: Optional[SymbolDistribution] = None) -> "HuffmanTree":
        """Rebuild a tree from symbol -> bitstring pairs.

        The code must be prefix-free and complete (every internal node has two
        children).  Leaf masses default to 2^-length, which makes the root
        mass exactly 1.
        """
        if not codes:
            raise ValueError("empty code table")
        leaves = {}
        for sym, bits in codes.items():
            if len(sym) != 1 or not bits or set(bits) - {"0", "1"}:
                raise ValueError(f"bad code table entry: {sym!r} -> {bits!r}")
            leaves[bits] = sym

        def build(prefix: str) -> HuffNode:
            if prefix in leaves:
                sym = leaves[prefix]
                p = dist.prob(sym) if dist is not None else 2.0 ** -len(prefix)
                return HuffNode(p, symbol=sym)
            left = build(prefix + "0") if any(k.startswith(prefix + "0") for k in leaves) else None
            right = build(prefix + "1") if any(k.startswith(prefix + "1") for k in leaves) else None
            if left is None or right is None:
                raise ValueError("code table is not a complete prefix code")
            return HuffNode(left.p + right.p, left, right)

        for a in leaves:
            for b in leaves:
                if a != b and b.startswith(a):
                    raise ValueError(f"code table is not prefix-free: {a!r} prefixes {b!r}")
        return cls(build(""))


def huffman_encode(tree: HuffmanTree, text: Iterable[str]) -> np.ndarray:
    """Concatenated codewords for the given symbol sequence."""
    return tree.encode(text)


def huffman_decode(tree: HuffmanTree, bits: np.ndarray) -> Tuple[str, np.ndarray]:
    """Instantaneous decode; returns (symbols, unconsumed residual bits)."""
    return tree.decode(bits)


def build_huffman(dist: SymbolDistribution) -> HuffmanTree:
    """Standard bottom-up Huffman construction with deterministic tie-breaks."""
    if len(dist.symbols) < 2:
        raise ValueError("need at least two symbols")
    heap = []
    for s, p in zip(dist.symbols, dist.probs):
        heapq.heappush(heap, (float(p), s, HuffNode(float(p), symbol=s)))
    while len(heap) > 1:
        p1, m1, n1 = heapq.heappop(heap)
        p2, m2, n2 = heapq.heappop(heap)
        merged = HuffNode(p1 + p2, n1, n2)
        heapq.heappush(heap, (p1 + p2, min(m1, m2), merged))
    return HuffmanTree(heap[0][2])
