"""Corpus ingestion: tokenization, word counts, and bundled data.

Text is case-folded and every character outside a-z becomes a space, so
tokens contain lowercase letters only; a space is appended to each token
before any structure is built.  A moderate-size English word-count table
derived from a film-subtitle frequency corpus ships with the package for
out-of-the-box dictionaries.
"""

from __future__ import annotations

import gzip
import importlib.resources
from typing import Dict, Iterable, List, Mapping, Tuple

from .huffman import DEFAULT_ALPHABET, SymbolDistribution
from .trie import WORD_END, DictTrie, build_trie

_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")
_FOLD = {c: c if c in _LETTERS else " " for c in map(chr, range(128))}


def tokenize(text: str) -> List[str]:
    """Lowercase word tokens; every non-letter separates tokens."""
    folded = text.casefold()
    out = []
    cur = []
    for ch in folded:
        if ch in _LETTERS:
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def ingest_corpus(path) -> Tuple[List[str], SymbolDistribution]:
    """Read a text file into a space-terminated word stream and its 1-gram
    symbol distribution (over the symbols that actually occur)."""
    with open(path, "r", encoding="utf-8", errors="replace") as f:
        tokens = tokenize(f.read())
    if not tokens:
        raise ValueError(f"no words found in corpus: {path}")
    words = [t + WORD_END for t in tokens]
    counts: Dict[str, int] = {}
    for w in words:
        for ch in w:
            counts[ch] = counts.get(ch, 0) + 1
    return words, SymbolDistribution.from_counts(counts)


def one_gram_counts(word_counts: Mapping[str, int]) -> Dict[str, int]:
    """Symbol occurrence counts over the terminated word stream implied by
    the given word counts."""
    counts: Dict[str, int] = {}
    for word, c in word_counts.items():
        for ch in word:
            counts[ch] = counts.get(ch, 0) + c
        counts[WORD_END] = counts.get(WORD_END, 0) + c
    return counts


def count_words(words: Iterable[str]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for w in words:
        w = w.rstrip(WORD_END)
        counts[w] = counts.get(w, 0) + 1
    return counts


def load_word_counts(path) -> Dict[str, int]:
    """Read a `word<TAB>count` table (gzip-compressed when the name ends in
    .gz); returns an ordered word -> count mapping."""
    opener = gzip.open if str(path).endswith(".gz") else open
    counts: Dict[str, int] = {}
    with opener(path, "rt", encoding="utf-8") as f:
        for ln, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                word, count_s = line.split("\t")
                count = int(count_s)
            except ValueError:
                raise ValueError(f"{path}: malformed line {ln}: {line!r}") from None
            counts[word] = counts.get(word, 0) + count
    if not counts:
        raise ValueError(f"empty word-count table: {path}")
    return counts


def save_word_counts(counts: Mapping[str, int], path) -> None:
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wt", encoding="utf-8") as f:
        for word in sorted(counts, key=lambda w: (-counts[w], w)):
            f.write(f"{word}\t{counts[word]}\n")


def bundled_word_counts() -> Dict[str, int]:
    """The packaged English word-frequency table (subtitle corpus)."""
    ref = importlib.resources.files("polarjscd").joinpath(
        "data/english_word_counts.tsv.gz")
    with importlib.resources.as_file(ref) as path:
        return load_word_counts(path)


def filter_word_counts(counts: Mapping[str, int], min_count: int = 1,
                       max_words: int | None = None
                       ) -> Tuple[Dict[str, int], Dict[str, int]]:
    """Drop malformed, rare, or over-cap words; report what was dropped.

    Words with symbols outside a-z are dropped (never mangled).  When
    `max_words` is set, only the most frequent survive.  Returns the kept
    mapping and a report with dropped word and occurrence tallies.
    """
    report = {"dropped_words": 0, "dropped_occurrences": 0,
              "rare_words": 0, "rare_occurrences": 0,
              "capped_words": 0, "capped_occurrences": 0}
    clean: Dict[str, int] = {}
    for word, c in counts.items():
        if not word or set(word) - _LETTERS:
            report["dropped_words"] += 1
            report["dropped_occurrences"] += c
        elif c < min_count:
            report["rare_words"] += 1
            report["rare_occurrences"] += c
        else:
            clean[word] = c
    if max_words is not None and len(clean) > max_words:
        ranked = sorted(clean, key=lambda w: (-clean[w], w))
        for word in ranked[max_words:]:
            report["capped_words"] += 1
            report["capped_occurrences"] += clean.pop(word)
    if not clean:
        raise ValueError("no words left after filtering")
    return clean, report


def build_source_model(word_counts: Mapping[str, int],
                       alphabet: str | None = None):
    """Dictionary trie plus Huffman tree from one word-count table.

    The Huffman distribution is the 1-gram distribution of the terminated
    word stream.  The alphabet defaults to the symbols that occur.
    """
    from .huffman import build_huffman

    grams = one_gram_counts(word_counts)
    if alphabet is None:
        alphabet = "".join(sorted(grams))
    else:
        missing = set(grams) - set(alphabet)
        if missing:
            raise ValueError(f"alphabet lacks corpus symbols: {sorted(missing)!r}")
        grams = {s: grams.get(s, 0) for s in alphabet}
    trie = build_trie(word_counts, alphabet=alphabet)
    tree = build_huffman(SymbolDistribution.from_counts(grams))
    return trie, tree
