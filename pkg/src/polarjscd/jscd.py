"""Joint source-channel list decoding with CRC selection.

A transmitted frame carries a Huffman-coded word stream in the first
k - 16 information positions and a CRC-16 of those payload bits in the last
16.  List decoding scores paths by channel likelihood plus the word-sequence
log prior over the payload region (check bits are channel-only), and the
decoder output is the best-metric path that passes the CRC, falling back to
the overall best path when none does.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Tuple

import numpy as np

from .huffman import HuffmanTree
from .polar import PolarCodeConfig, assemble_u, encode, scl_decode
from .prior import WordPrior
from .trie import DictTrie


@dataclasses.dataclass(frozen=True)
class CrcSpec:
    """Bitwise cyclic redundancy check over a raw bit stream.

    The default orientation shifts the register left and emits check bits
    most significant first.  `reflect` selects the right-shifting variant
    (poly applied bit-reversed, check bits emitted least significant first),
    which matches reflected standards when callers present each byte least
    significant bit first.  `xor_out` is applied to the final register.
    """

    poly: int
    init: int
    width: int
    reflect: bool = False
    xor_out: int = 0

    def checksum(self, bits: np.ndarray) -> int:
        bit_list = np.asarray(bits, dtype=np.int8).tolist()
        reg = self.init
        if self.reflect:
            rpoly = int(f"{self.poly:0{self.width}b}"[::-1], 2)
            for b in bit_list:
                feedback = (reg ^ b) & 1
                reg >>= 1
                if feedback:
                    reg ^= rpoly
        else:
            mask = (1 << self.width) - 1
            top = 1 << (self.width - 1)
            for b in bit_list:
                feedback = ((reg & top) != 0) ^ (b != 0)
                reg = (reg << 1) & mask
                if feedback:
                    reg ^= self.poly
        return reg ^ self.xor_out

    def checksum_bits(self, bits: np.ndarray) -> np.ndarray:
        reg = self.checksum(bits)
        positions = range(self.width) if self.reflect else \
            range(self.width - 1, -1, -1)
        return np.array([(reg >> i) & 1 for i in positions], dtype=np.int8)

    def append(self, bits: np.ndarray) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.int8)
        return np.concatenate([bits, self.checksum_bits(bits)])

    def check(self, framed_bits: np.ndarray) -> bool:
        """True when the trailing check bits match the payload in front."""
        framed_bits = np.asarray(framed_bits, dtype=np.int8)
        if len(framed_bits) < self.width:
            return False
        payload, tail = framed_bits[:-self.width], framed_bits[-self.width:]
        return bool(np.array_equal(self.checksum_bits(payload), tail))


CRC16 = CrcSpec(poly=0x1021, init=0xFFFF, width=16)


def crc_append(info: np.ndarray, spec: CrcSpec = CRC16) -> np.ndarray:
    return spec.append(info)


def crc_check(bits: np.ndarray, spec: CrcSpec = CRC16) -> bool:
    return spec.check(bits)


@dataclasses.dataclass
class JscdResult:
    u: np.ndarray
    decoded_info: np.ndarray
    payload_bits: np.ndarray
    decoded_text: str
    success: bool
    list_size_used: int
    prior_fallback_used: bool
    total_metric: float


def extract_info(config: PolarCodeConfig, u: np.ndarray) -> np.ndarray:
    return np.asarray(u)[np.fromiter(config.info_set, dtype=int)]


def frame_text(text: str, tree: HuffmanTree, payload_bits: int) -> np.ndarray:
    """Encode text into exactly `payload_bits` bits.

    Shorter encodings are padded by repeating the space codeword; the final
    codeword may be cut mid-symbol.  Longer encodings are rejected.
    """
    bits = tree.encode(text)
    if bits.size > payload_bits:
        raise ValueError(f"text needs {bits.size} bits, payload holds {payload_bits}")
    if bits.size < payload_bits:
        pad = tree.encode(" " * (payload_bits - bits.size))
        bits = np.concatenate([bits, pad])[:payload_bits]
    return bits.astype(np.int8)


def encode_frame(config: PolarCodeConfig, payload: np.ndarray,
                 crc: Optional[CrcSpec] = CRC16) -> np.ndarray:
    """Build the codeword for payload bits (CRC appended when given)."""
    payload = np.asarray(payload, dtype=np.int8)
    info = crc.append(payload) if crc is not None else payload
    if len(info) != config.k:
        raise ValueError(f"framed length {len(info)} != k = {config.k}")
    return encode(config, assemble_u(config, info))


class TextSource:
    """Samples word streams from the dictionary's empirical distribution.

    Precomputes each word's encoding so that drawing a block's worth of text
    is cheap inside simulation loops.
    """

    def __init__(self, trie: DictTrie, tree: HuffmanTree):
        self.words = []
        self.encoded = []
        counts = []
        for w, c in trie.words():
            self.words.append(w + " ")
            self.encoded.append(tree.encode(w + " "))
            counts.append(c)
        if not self.words:
            raise ValueError("empty dictionary")
        self._cdf = np.cumsum(np.asarray(counts, dtype=float))
        self._cdf /= self._cdf[-1]
        self._mean_bits = float(np.mean([b.size for b in self.encoded]))

    def sample(self, payload_bits: int,
               rng: np.random.Generator) -> Tuple[np.ndarray, str]:
        """Word stream encoded into exactly payload_bits bits; the final
        codeword may be cut short.  Returns (bits, text)."""
        parts = []
        text = []
        size = 0
        while size < payload_bits:
            need = max(1, int((payload_bits - size) // self._mean_bits) + 1)
            for idx in np.searchsorted(self._cdf, rng.random(need)):
                parts.append(self.encoded[idx])
                text.append(self.words[idx])
                size += self.encoded[idx].size
                if size >= payload_bits:
                    break
        bits = np.concatenate(parts)[:payload_bits].astype(np.int8)
        return bits, "".join(text)


def sample_text_bits(trie: DictTrie, tree: HuffmanTree, payload_bits: int,
                     rng: np.random.Generator) -> Tuple[np.ndarray, str]:
    return TextSource(trie, tree).sample(payload_bits, rng)


def _select(paths, crc: Optional[CrcSpec], config: PolarCodeConfig):
    """First CRC-passing path in metric order, else the best path."""
    if crc is not None:
        for p in paths:
            if crc.check(extract_info(config, p.u)):
                return p, True
    return paths[0], crc is None


def _result(config: PolarCodeConfig, path, success: bool, list_size: int,
            tree: Optional[HuffmanTree], crc: Optional[CrcSpec]) -> JscdResult:
    info = extract_info(config, path.u)
    payload = info[:-crc.width] if crc is not None else info
    text = tree.decode(payload)[0] if tree is not None else ""
    return JscdResult(u=path.u, decoded_info=info, payload_bits=payload,
                      decoded_text=text, success=success,
                      list_size_used=list_size,
                      prior_fallback_used=path.prior_fallback,
                      total_metric=path.total_metric)


def jscd_scl_decode(config: PolarCodeConfig, llrs: np.ndarray, list_size: int,
                    trie: DictTrie, tree: HuffmanTree, crc: Optional[CrcSpec] = CRC16,
                    fallback: bool = True, exact: bool = False) -> JscdResult:
    """List decode with the word prior; select by CRC when present."""
    payload = config.k - (crc.width if crc is not None else 0)
    if payload <= 0:
        raise ValueError("payload would be empty after the check bits")
    prior = WordPrior(trie, tree, payload_bits=payload, fallback=fallback)
    paths = scl_decode(config, llrs, list_size, prior=prior, exact=exact)
    path, success = _select(paths, crc, config)
    return _result(config, path, success, list_size, tree, crc)


def crc_scl_decode(config: PolarCodeConfig, llrs: np.ndarray, list_size: int,
                   crc: CrcSpec = CRC16, tree: Optional[HuffmanTree] = None,
                   exact: bool = False) -> JscdResult:
    """CRC-aided list decoding without any source prior."""
    paths = scl_decode(config, llrs, list_size, exact=exact)
    path, success = _select(paths, crc, config)
    return _result(config, path, success, list_size, tree, crc)


def adaptive_decode(config: PolarCodeConfig, llrs: np.ndarray, max_list: int,
                    trie: Optional[DictTrie] = None,
                    tree: Optional[HuffmanTree] = None,
                    crc: CrcSpec = CRC16, fallback: bool = True,
                    exact: bool = False) -> JscdResult:
    """Retry with doubled list size until the CRC passes.

    Runs the word-prior decoder when a dictionary is supplied, otherwise
    plain CRC-aided list decoding.  Returns the first passing result, or the
    largest-list attempt when none passes.
    """
    if max_list < 1 or max_list & (max_list - 1):
        raise ValueError(f"max list size must be a power of two, got {max_list}")
    if trie is not None and tree is None:
        raise ValueError("a dictionary prior needs the source code tree")
    result = None
    list_size = 1
    while True:
        if trie is not None:
            result = jscd_scl_decode(config, llrs, list_size, trie, tree, crc,
                                 fallback=fallback, exact=exact)
        else:
            result = crc_scl_decode(config, llrs, list_size, crc, tree, exact=exact)
        if result.success or list_size >= max_list:
            return result
        list_size *= 2
