"""Render a certificate as CSV tables and matplotlib figures.

Writes blocks.csv / chain.csv plus two PNGs: the block-size profile with its
cut pairs, and a lane view of the line with the wildcard segments marked.
Block sizes span many orders of magnitude, so positions are drawn as
fractions of their block.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .certificates import Certificate, encode_runs

_FILL_COLOURS = {1: "#4c72b0", 2: "#c44e52", 3: "#55a868", "active": "#ffd54d"}


def _block_rows(cert: Certificate) -> list[dict]:
    q1, q2 = cert.final_collision
    rows = []
    position = 0
    for k, size in enumerate(cert.block_sizes, start=1):
        lo, hi = cert.pair_table[k]
        if k <= q1:
            role = "cut"
        elif k <= q2:
            role = "active"
        else:
            role = "threes"
        rows.append(
            {
                "block": k,
                "size": size,
                "end": position + size,
                "pair_lo": lo,
                "pair_hi": hi,
                "role": role,
                "active_lo": position + lo + 1 if role == "active" else "",
                "active_hi": position + hi if role == "active" else "",
            }
        )
        position += size
    return rows


def write_blocks_csv(cert: Certificate, path: str) -> None:
    rows = _block_rows(cert)
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def write_chain_csv(cert: Certificate, path: str) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "kind", "ell", "letters", "from", "to"])
        for idx, step in enumerate(cert.chain):
            writer.writerow(
                [
                    idx,
                    step.kind,
                    step.ell if step.ell is not None else "",
                    "".join(str(a) for a in step.letters) if step.letters is not None else "",
                    encode_runs(step.start),
                    encode_runs(step.end),
                ]
            )


def plot_blocks(cert: Certificate, path: str) -> None:
    rows = _block_rows(cert)
    ks = [row["block"] for row in rows]
    sizes = [row["size"] for row in rows]
    lo_frac = [row["pair_lo"] / row["size"] for row in rows]
    hi_frac = [row["pair_hi"] / row["size"] for row in rows]

    fig, (ax_size, ax_cut) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax_size.bar(ks, sizes, color="#4c72b0")
    ax_size.set_yscale("log")
    ax_size.set_ylabel("block size")
    ax_size.set_title(f"block structure: r={cert.r}, mode={cert.mode}, n={cert.line.n}")

    ax_cut.vlines(ks, lo_frac, hi_frac, color="#c44e52", linewidth=4)
    ax_cut.scatter(ks, lo_frac, color="#c44e52", marker="_", s=200)
    ax_cut.scatter(ks, hi_frac, color="#c44e52", marker="_", s=200)
    ax_cut.set_ylim(-0.05, 1.05)
    ax_cut.set_ylabel("cut pair / block size")
    ax_cut.set_xlabel("block")
    ax_cut.set_xticks(ks)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_line(cert: Certificate, path: str) -> None:
    rows = _block_rows(cert)
    fig, ax = plt.subplots(figsize=(7, 1.2 + 0.6 * len(rows)))
    for row in rows:
        y = len(rows) - row["block"]
        size = row["size"]
        lo, hi = row["pair_lo"] / size, row["pair_hi"] / size
        mid = "active" if row["role"] == "active" else (1 if row["role"] == "cut" else 3)
        segments = [(0.0, lo, 1), (lo, hi, mid), (hi, 1.0, 2)]
        for left, right, fill in segments:
            if right - left <= 0:
                continue
            ax.barh(
                y,
                right - left,
                left=left,
                height=0.6,
                color=_FILL_COLOURS[fill],
                hatch="//" if fill == "active" else None,
                edgecolor="black",
                linewidth=0.4,
            )
    ax.set_yticks([len(rows) - row["block"] for row in rows])
    ax.set_yticklabels([f"block {row['block']} (n={row['size']})" for row in rows])
    ax.set_xlim(0, 1)
    ax.set_xlabel("position within block (fraction)")
    q1, q2 = cert.final_collision
    ax.set_title(f"line layout, collision ({q1},{q2}), colour {cert.shared_colour}")
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=_FILL_COLOURS[1]),
        plt.Rectangle((0, 0), 1, 1, color=_FILL_COLOURS[2]),
        plt.Rectangle((0, 0), 1, 1, color=_FILL_COLOURS[3]),
        plt.Rectangle((0, 0), 1, 1, color=_FILL_COLOURS["active"], hatch="//"),
    ]
    ax.legend(handles, ["ones", "twos", "threes", "wildcard"], loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(cert: Certificate, out_dir: str) -> list[str]:
    """Write all report artifacts into out_dir and return their paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, writer in (
        ("blocks.csv", write_blocks_csv),
        ("chain.csv", write_chain_csv),
        ("blocks.png", plot_blocks),
        ("line.png", plot_line),
    ):
        target = os.path.join(out_dir, name)
        writer(cert, target)
        paths.append(target)
    return paths
