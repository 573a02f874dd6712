"""Source statistics: word entropy, code redundancy, and dictionary sparsity.

These quantify how much structure a word dictionary puts on the encoded bit
stream: the entropy of the word distribution is the floor on bits per word,
the count-weighted mean codeword length says what the character-level prefix
code actually spends, and the sparsity profile counts how few of the 2^n
length-n bit patterns begin a valid encoded word.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Dict, Iterable, List, Mapping, Union

from .huffman import HuffmanTree
from .trie import WORD_END, DictTrie


def word_entropy(words: Union[Mapping[str, float], Iterable[str]]) -> float:
    """Shannon entropy in bits of the word distribution.

    Accepts a word -> count mapping or a plain word sequence (terminating
    spaces ignored).
    """
    if isinstance(words, Mapping):
        counts = dict(words)
    else:
        counts = {}
        for w in words:
            w = w.rstrip(WORD_END)
            counts[w] = counts.get(w, 0) + 1
    total = float(sum(counts.values()))
    if total <= 0.0:
        raise ValueError("no words")
    h = 0.0
    for c in counts.values():
        if c < 0:
            raise ValueError("negative count")
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def encoded_word_length(tree: HuffmanTree, word: str) -> int:
    """Bits spent encoding `word` plus its terminating space."""
    return sum(tree.code_length(ch) for ch in word) + tree.code_length(WORD_END)


def huffman_word_redundancy(trie: DictTrie, tree: HuffmanTree) -> float:
    """Count-weighted mean encoded bits per word, terminator included.

    Always at least the entropy of the word distribution; the gap is the
    price of coding characters independently instead of whole words.
    """
    total = 0
    weighted = 0
    for word, count in trie.words():
        weighted += count * encoded_word_length(tree, word)
        total += count
    if total == 0:
        raise ValueError("empty dictionary")
    return weighted / total


@dataclasses.dataclass(frozen=True)
class SparsityPoint:
    """Census of one encoded length: how many distinct dictionary words
    encode to exactly `n` bits, and what fraction of n-bit patterns that is."""

    n: int
    words: int
    fraction: float
    neg_log10: float


def sparsity_profile(trie: DictTrie, tree: HuffmanTree,
                     n_max: int) -> List[SparsityPoint]:
    """Per-length census of encoded dictionary words for n = 1 .. n_max.

    For each n, counts distinct words whose encoding (terminator included)
    is exactly n bits, the fraction of the 2^n patterns those occupy, and
    its negative base-10 log (infinite where no word has that length).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    hist: Dict[int, int] = {}
    for word, _ in trie.words():
        n = encoded_word_length(tree, word)
        hist[n] = hist.get(n, 0) + 1
    out = []
    for n in range(1, n_max + 1):
        m = hist.get(n, 0)
        p = m / 2.0 ** n
        x = -math.log10(p) if m > 0 else math.inf
        out.append(SparsityPoint(n, m, p, x))
    return out
