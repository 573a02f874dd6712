"""Polar-coded transmission of natural-language text with dictionary-aware
list decoding.

The pipeline: Huffman-encode words from a frequency dictionary, frame with a
CRC, protect with a polar code, and decode with successive-cancellation list
search whose path metric carries a word-level prior read off a count-weighted
dictionary trie.
"""

from .channel import (AwgnChannel, BscChannel, block_rng, channel_llr,
                      ebn0_to_sigma, make_channel, send_block, transmit)
from .corpus import (build_source_model, bundled_word_counts, count_words,
                     filter_word_counts, ingest_corpus, load_word_counts,
                     one_gram_counts, save_word_counts, tokenize)
from .huffman import (DEFAULT_ALPHABET, HuffmanTree, SymbolDistribution,
                      build_huffman, huffman_decode, huffman_encode)
from .jscd import (CRC16, CrcSpec, JscdResult, TextSource, adaptive_decode,
                   crc_append, crc_check, crc_scl_decode, encode_frame,
                   extract_info, frame_text, jscd_scl_decode, sample_text_bits)
from .polar import (LLR_CLAMP, DecoderPath, PathPrior, PolarCodeConfig,
                    assemble_u, bit_reversal_permutation, construct,
                    construct_frozen_set, encode, genie_llrs, polar_transform,
                    sc_decode, scl_decode)
from .prior import (PriorState, WordPrior, extend_state, fresh_state,
                    matching_child_mass, trace_huffman, update_prior)
from .stats import (SparsityPoint, encoded_word_length,
                    huffman_word_redundancy, sparsity_profile, word_entropy)
from .sweep import (SweepCell, SweepConfig, SweepResult, load_config_file,
                    parse_decoder, run_sweep)
from .trie import (WORD_END, DictNode, DictTrie, build_trie, trace_dict,
                   word_probability)

__version__ = "0.1.0"

__all__ = [
    "AwgnChannel", "BscChannel", "CRC16", "CrcSpec", "DEFAULT_ALPHABET",
    "DecoderPath", "DictNode", "DictTrie", "HuffmanTree", "JscdResult",
    "LLR_CLAMP", "PathPrior", "PolarCodeConfig", "PriorState", "SparsityPoint",
    "SweepCell", "SweepConfig", "SweepResult", "SymbolDistribution",
    "TextSource", "WORD_END", "WordPrior", "adaptive_decode", "assemble_u",
    "bit_reversal_permutation", "block_rng", "build_huffman",
    "build_source_model", "build_trie", "bundled_word_counts", "channel_llr",
    "construct", "construct_frozen_set", "count_words", "crc_append",
    "crc_check", "crc_scl_decode", "ebn0_to_sigma", "encode", "encode_frame",
    "encoded_word_length", "extend_state", "extract_info",
    "filter_word_counts", "frame_text", "fresh_state", "genie_llrs",
    "huffman_decode", "huffman_encode", "huffman_word_redundancy",
    "ingest_corpus", "jscd_scl_decode", "load_config_file", "load_word_counts",
    "make_channel", "matching_child_mass", "one_gram_counts", "parse_decoder",
    "polar_transform", "run_sweep", "sample_text_bits", "save_word_counts",
    "sc_decode", "scl_decode", "send_block", "sparsity_profile", "tokenize",
    "trace_dict", "trace_huffman", "transmit", "update_prior", "word_entropy",
    "word_probability",
]
