"""Binary-input channels and their LLR front ends.

AWGN uses BPSK mapping 0 -> +1, 1 -> -1; the BSC flips bits independently.
Both produce log(P(y|x=0)/P(y|x=1)) clamped to +-LLR_CLAMP so that downstream
log-domain arithmetic stays finite.  Noise is drawn from a generator seeded by
(seed, point, trial), which makes every block reproducible on its own,
independent of how trials are ordered or distributed across workers.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .polar import LLR_CLAMP


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for a given Eb/N0 in dB at unit symbol energy."""
    if rate <= 0.0 or rate > 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    return 1.0 / math.sqrt(2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def block_rng(seed: int, point: int = 0, trial: int = 0) -> np.random.Generator:
    """Independent generator for one simulated block."""
    return np.random.default_rng((seed, point, trial))


class AwgnChannel:
    """BPSK over additive white Gaussian noise."""

    kind = "awgn"

    def __init__(self, ebn0_db: float, rate: float):
        self.ebn0_db = float(ebn0_db)
        self.rate = float(rate)
        self.sigma = ebn0_to_sigma(ebn0_db, rate)

    @classmethod
    def from_sigma(cls, sigma: float) -> "AwgnChannel":
        if sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        ch = cls.__new__(cls)
        ch.ebn0_db = float("nan")
        ch.rate = float("nan")
        ch.sigma = float(sigma)
        return ch

    @property
    def param(self) -> float:
        return self.ebn0_db

    def transmit(self, codeword: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        x = 1.0 - 2.0 * np.asarray(codeword, dtype=float)
        return x + self.sigma * rng.standard_normal(len(x))

    def llr(self, received: np.ndarray) -> np.ndarray:
        raw = 2.0 * np.asarray(received, dtype=float) / (self.sigma ** 2)
        return np.clip(raw, -LLR_CLAMP, LLR_CLAMP)


class BscChannel:
    """Binary symmetric channel with crossover probability p."""

    kind = "bsc"

    def __init__(self, p: float):
        if not 0.0 < p < 0.5:
            raise ValueError(f"crossover probability must be in (0, 0.5), got {p}")
        self.p = float(p)
        self._llr_mag = min(math.log((1.0 - p) / p), LLR_CLAMP)

    @property
    def param(self) -> float:
        return self.p

    def transmit(self, codeword: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        flips = rng.random(len(codeword)) < self.p
        return (np.asarray(codeword, dtype=np.int8) ^ flips.astype(np.int8))

    def llr(self, received: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(received) == 0, self._llr_mag, -self._llr_mag)


def make_channel(kind: str, param: float, rate: Optional[float] = None):
    if kind == "awgn":
        if rate is None:
            raise ValueError("awgn channel needs the code rate")
        return AwgnChannel(param, rate)
    if kind == "bsc":
        return BscChannel(param)
    raise ValueError(f"unknown channel kind: {kind!r}")


def transmit(model, codeword: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One noisy channel use per codeword bit."""
    return model.transmit(codeword, rng)


def channel_llr(model, received: np.ndarray) -> np.ndarray:
    """Per-position log(P(y|0)/P(y|1)), clamped to +-LLR_CLAMP."""
    return model.llr(received)


def send_block(channel, codeword: np.ndarray,
               rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Transmit one codeword; returns (received, llrs)."""
    received = channel.transmit(codeword, rng)
    return received, channel.llr(received)
