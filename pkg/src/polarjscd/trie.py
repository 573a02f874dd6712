"""Count-weighted dictionary trie.

Words are stored with a trailing space so that every complete word ends at a
space-labelled node.  Inserting a word increments the occurrence count of
every node on its path, root included; the root count therefore equals the
total number of word insertions, and any node's count is the number of
inserted words passing through it.  A word's probability is its end node's
count divided by the root count.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from .huffman import DEFAULT_ALPHABET

WORD_END = " "


class DictNode:
    __slots__ = ("symbol", "count", "is_word", "children")

    def __init__(self, symbol: str):
        self.symbol = symbol
        self.count = 0
        self.is_word = False
        self.children: Dict[str, DictNode] = {}

    def __repr__(self):
        return f"DictNode({self.symbol!r}, count={self.count}, words={self.is_word})"


class DictTrie:
    def __init__(self, alphabet: str = DEFAULT_ALPHABET):
        if WORD_END not in alphabet:
            raise ValueError("alphabet must contain the word terminator (space)")
        self.alphabet = frozenset(alphabet)
        self.root = DictNode("")

    @property
    def total(self) -> int:
        """Total number of word occurrences inserted."""
        return self.root.count

    def insert(self, word: str, count: int = 1) -> None:
        """Insert a terminated word (trailing space) `count` times."""
        if not word.endswith(WORD_END):
            raise ValueError(f"word must end with a space: {word!r}")
        if WORD_END in word[:-1]:
            raise ValueError(f"interior space in word: {word!r}")
        if count <= 0:
            raise ValueError("count must be positive")
        bad = set(word) - self.alphabet
        if bad:
            raise ValueError(f"symbols outside alphabet: {sorted(bad)!r}")
        node = self.root
        node.count += count
        for sym in word:
            child = node.children.get(sym)
            if child is None:
                child = DictNode(sym)
                node.children[sym] = child
            child.count += count
            node = child
        node.is_word = True

    def word_probability(self, word: str) -> float:
        """Empirical probability of `word` (terminator optional)."""
        if not word.endswith(WORD_END):
            word = word + WORD_END
        node = self.root
        for sym in word:
            node = node.children.get(sym)
            if node is None:
                return 0.0
        return node.count / self.root.count if node.is_word else 0.0

    def words(self) -> Iterator[Tuple[str, int]]:
        """Yield (word_without_terminator, occurrence_count), sorted."""

        def walk(node: DictNode, prefix: str):
            for sym in sorted(node.children):
                child = node.children[sym]
                if child.is_word:
                    yield prefix, child.count
                else:
                    yield from walk(child, prefix + sym)

        yield from walk(self.root, "")

    def distinct_words(self) -> int:
        return sum(1 for _ in self.words())

    # -- serialization ------------------------------------------------------

    def dump(self, path) -> None:
        """Write preorder `depth<TAB>symbol<TAB>count<TAB>is_word` lines."""

        def walk(node: DictNode, depth: int, out):
            for sym in sorted(node.children):
                child = node.children[sym]
                out.write(f"{depth}\t{sym}\t{child.count}\t{int(child.is_word)}\n")
                walk(child, depth + 1, out)

        with open(path, "w", encoding="utf-8") as f:
            walk(self.root, 1, f)

    @classmethod
    def load(cls, path, alphabet: str = DEFAULT_ALPHABET) -> "DictTrie":
        trie = cls(alphabet)
        stack: List[DictNode] = [trie.root]
        with open(path, "r", encoding="utf-8") as f:
            for ln, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    depth_s, sym, count_s, is_word_s = line.split("\t")
                    depth = int(depth_s)
                    count = int(count_s)
                    is_word = bool(int(is_word_s))
                except ValueError:
                    raise ValueError(f"{path}: malformed line {ln}: {line!r}") from None
                if not 1 <= depth <= len(stack):
                    raise ValueError(f"{path}: bad depth {depth} at line {ln}")
                del stack[depth:]
                parent = stack[-1]
                node = DictNode(sym)
                node.count = count
                node.is_word = is_word
                parent.children[sym] = node
                stack.append(node)
        trie.root.count = sum(c.count for c in trie.root.children.values())
        return trie


def word_probability(trie: DictTrie, node: DictNode) -> float:
    """Occurrence probability of the word ending at `node`: its count over
    the root count."""
    return node.count / trie.root.count


def trace_dict(trie: DictTrie, node: DictNode, symbol_set) -> Dict[str, DictNode]:
    """Children of `node` whose symbol lies in `symbol_set`."""
    children = node.children
    if len(children) <= len(symbol_set):
        return {s: c for s, c in children.items() if s in symbol_set}
    return {s: children[s] for s in symbol_set if s in children}


def build_trie(word_counts: Mapping[str, int] | Iterable[str],
               alphabet: str = DEFAULT_ALPHABET) -> DictTrie:
    """Build a trie from words, terminating each with a space if it has none.

    Accepts either a word -> count mapping or an iterable of word tokens.
    """
    trie = DictTrie(alphabet)
    if isinstance(word_counts, Mapping):
        items: Iterable[Tuple[str, int]] = word_counts.items()
    else:
        items = ((w, 1) for w in word_counts)
    for word, count in items:
        if not word.endswith(WORD_END):
            word = word + WORD_END
        trie.insert(word, count)
    return trie
