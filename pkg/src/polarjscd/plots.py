"""Figure rendering for sweep results and dictionary statistics.

Everything draws to files through the Agg backend, so these work on headless
machines; the CLI report paths call them next to their CSV output.
"""

from __future__ import annotations

import math
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .stats import SparsityPoint  # noqa: E402
from .sweep import SweepResult  # noqa: E402

_CHANNEL_LABEL = {"awgn": "Eb/N0 (dB)", "bsc": "crossover probability"}


def _by_decoder(result: SweepResult):
    order = list(result.config.decoders)
    series = {d: ([], []) for d in order}
    for cell in result.cells:
        xs, ys = series[cell.decoder]
        xs.append(cell.param)
        ys.append(cell.bler)
    return [(d, *series[d]) for d in order]


def plot_bler(result: SweepResult, out_path) -> None:
    """Block error rate vs channel parameter, one curve per decoder."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for decoder, xs, ys in _by_decoder(result):
        shown = [(x, y) for x, y in zip(xs, ys) if y > 0]
        if not shown:
            continue
        ax.semilogy(*zip(*shown), marker="o", label=decoder)
    ax.set_xlabel(_CHANNEL_LABEL.get(result.config.channel, "channel parameter"))
    ax.set_ylabel("block error rate")
    ax.set_title(f"n={result.config.n}, k={result.config.k}, "
                 f"{result.config.channel.upper()}")
    ax.grid(True, which="both", alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_mean_list(result: SweepResult, out_path) -> None:
    """Mean list size actually used vs channel parameter."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for decoder in result.config.decoders:
        pts = [(c.param, c.mean_list) for c in result.cells
               if c.decoder == decoder and c.blocks > 0]
        if pts:
            ax.plot(*zip(*pts), marker="s", label=decoder)
    ax.set_xlabel(_CHANNEL_LABEL.get(result.config.channel, "channel parameter"))
    ax.set_ylabel("mean list size used")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_length_census(profile: Sequence[SparsityPoint], out_path) -> None:
    """Distinct dictionary words per encoded length, log scale."""
    occupied = [p for p in profile if p.words > 0]
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.bar([p.n for p in occupied], [p.words for p in occupied],
           color="tab:blue")
    ax.set_yscale("log")
    ax.set_xlabel("encoded word length n (bits)")
    ax.set_ylabel("distinct words of length n")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_sparsity_exponent(profile: Sequence[SparsityPoint], out_path) -> None:
    """x_n = -log10 of the occupied fraction of n-bit patterns, vs n."""
    pts = [(p.n, p.neg_log10) for p in profile
           if p.words > 0 and math.isfinite(p.neg_log10)]
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if pts:
        ax.plot(*zip(*pts), marker="o", color="tab:red")
    ax.set_xlabel("encoded word length n (bits)")
    ax.set_ylabel("-log10 fraction of n-bit patterns that are words")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_sweep_figures(result: SweepResult, out_dir) -> List[str]:
    """BLER curve plus, when any adaptive decoder ran, the list-size curve.
    Returns the written paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    written = [os.path.join(out_dir, "bler.png")]
    plot_bler(result, written[0])
    if any(parse_kind(d).startswith("adaptive") for d in result.config.decoders):
        path = os.path.join(out_dir, "mean_list.png")
        plot_mean_list(result, path)
        written.append(path)
    return written


def render_stats_figures(profile: Sequence[SparsityPoint], out_dir) -> List[str]:
    import os

    os.makedirs(out_dir, exist_ok=True)
    census = os.path.join(out_dir, "length_census.png")
    exponent = os.path.join(out_dir, "sparsity_exponent.png")
    plot_length_census(profile, census)
    plot_sparsity_exponent(profile, exponent)
    return [census, exponent]


def parse_kind(token: str) -> str:
    from .sweep import parse_decoder

    return parse_decoder(token)[0]
