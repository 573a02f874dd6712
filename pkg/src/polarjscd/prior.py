"""Incremental word-sequence prior over prefix-code bitstreams.

A state tracks, for a partially decoded bitstream, the current position in
the Huffman tree (the partially received codeword), the current position in
the dictionary trie (the partially spelled word), and the accumulated
probability of the words completed so far.  Extending the state by one bit
multiplies in the probability mass of dictionary words still consistent with
the bits seen, so the tracked value is exactly the prior probability of the
bit prefix under the word-sequence source model.

States are immutable; `extend` returns a new state.  A state with no
consistent dictionary continuation is infeasible and carries probability
zero, as do all its extensions.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

from .huffman import HuffNode, HuffmanTree
from .trie import DictNode, DictTrie

NEG_INF = float("-inf")


class PriorState:
    __slots__ = ("dict_node", "huff_node", "log_p_words", "log_prior", "dead")

    def __init__(self, dict_node: Optional[DictNode], huff_node: Optional[HuffNode],
                 log_p_words: float, log_prior: float, dead: bool = False):
        self.dict_node = dict_node
        self.huff_node = huff_node
        self.log_p_words = log_p_words
        self.log_prior = log_prior
        self.dead = dead

    @property
    def feasible(self) -> bool:
        return self.log_prior > NEG_INF

    def __repr__(self):
        return (f"PriorState(log_prior={self.log_prior:.4f}, "
                f"log_p_words={self.log_p_words:.4f}, dead={self.dead})")


def trace_huffman(tree: HuffmanTree, node: HuffNode, bit: int) -> HuffNode:
    """Follow one code bit down the Huffman tree."""
    return node.left if bit == 0 else node.right


def matching_child_mass(dict_node: DictNode, sym_set: frozenset) -> Tuple[int, Optional[DictNode]]:
    """Total count of children whose symbol lies in sym_set.

    Also returns the child itself when sym_set is a singleton, saving a
    second lookup on codeword completion.
    """
    children = dict_node.children
    if len(sym_set) == 1:
        (sym,) = sym_set
        child = children.get(sym)
        return (child.count, child) if child is not None else (0, None)
    if len(children) <= len(sym_set):
        total = sum(c.count for s, c in children.items() if s in sym_set)
    else:
        total = sum(children[s].count for s in sym_set if s in children)
    return total, None


def fresh_state(trie: DictTrie, tree: HuffmanTree) -> PriorState:
    """State at the empty prefix: both walks at their roots, prior 1."""
    return PriorState(trie.root, tree.root, 0.0, 0.0)


def extend_state(trie: DictTrie, tree: HuffmanTree, state: PriorState,
                 bit: int) -> PriorState:
    """Advance the prior by one source-code bit.

    The new state's log_prior is the log prior probability of the whole bit
    prefix consumed so far: the product of completed-word probabilities times
    the mass of dictionary words consistent with the trailing partial word
    and partial codeword.
    """
    if not state.feasible:
        return state
    huff = trace_huffman(tree, state.huff_node, bit)
    mass, child = matching_child_mass(state.dict_node, huff.sym_set)
    if mass == 0:
        return PriorState(None, None, state.log_p_words, NEG_INF)
    log_mass = math.log(mass) - math.log(trie.root.count)
    if not huff.is_leaf:
        return PriorState(state.dict_node, huff, state.log_p_words,
                          state.log_p_words + log_mass)
    # codeword complete: move one symbol deeper in the dictionary
    if child.is_word:
        # word complete: fold its probability in and start a fresh word
        log_p_words = state.log_p_words + log_mass
        return PriorState(trie.root, tree.root, log_p_words, log_p_words)
    return PriorState(child, tree.root, state.log_p_words,
                      state.log_p_words + log_mass)


def update_prior(trie: DictTrie, tree: HuffmanTree, state: PriorState,
                 bit: int) -> Tuple[PriorState, float, bool]:
    """One-bit prior update; returns (new state, log prior, feasible)."""
    new = extend_state(trie, tree, state, bit)
    return new, new.log_prior, new.feasible


class WordPrior:
    """Path prior for list decoding driven by the word-sequence model.

    Bits beyond `payload_bits` (trailing check bits appended after the source
    payload) leave the state untouched and keep the current prior, so they are
    effectively scored by the channel alone.  When `fallback` is set, a
    decoding step where every candidate is infeasible is allowed to fall back
    to channel-only scoring rather than losing all paths; the decoder signals
    this by calling `deaden`, after which the state stops updating.
    """

    def __init__(self, trie: DictTrie, tree: HuffmanTree,
                 payload_bits: Optional[int] = None, fallback: bool = True):
        if trie.root.count <= 0:
            raise ValueError("empty dictionary")
        missing = trie.alphabet - set(tree.codes())
        if missing:
            raise ValueError(f"code lacks dictionary symbols: {sorted(missing)!r}")
        self.trie = trie
        self.tree = tree
        self.payload_bits = payload_bits
        self.fallback = fallback

    def initial(self) -> PriorState:
        return fresh_state(self.trie, self.tree)

    def extend(self, state: PriorState, ordinal: int, bit: int) -> Tuple[PriorState, float]:
        if state.dead or (self.payload_bits is not None and ordinal >= self.payload_bits):
            return state, state.log_prior
        new = extend_state(self.trie, self.tree, state, bit)
        return new, new.log_prior

    def log_prior(self, state: PriorState) -> float:
        return state.log_prior

    def deaden(self, state: PriorState) -> PriorState:
        """Freeze a state after a channel-only fallback step; it stops updating."""
        return PriorState(state.dict_node, state.huff_node, state.log_p_words,
                          state.log_prior, dead=True)
