"""Render policy trees to image files with matplotlib.

Uses Figure objects directly (no pyplot, no global state), so rendering
is deterministic and safe to call from library code.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence, Union

from matplotlib.figure import Figure

from .policy import ExistsNode, ForallNode, Leaf, Policy
from .semantics import format_value


def _edges(pi: Policy) -> list:
    if isinstance(pi, Leaf):
        return []
    if isinstance(pi, ExistsNode):
        return [(pi.value, pi.sub)]
    if isinstance(pi, ForallNode):
        return list(pi.branches)
    raise TypeError(f"not a policy: {pi!r}")


def _label(pi: Policy) -> str:
    return r"$\lambda$" if isinstance(pi, Leaf) else str(pi.var)


def _place(
    pi: Policy,
    depth: int,
    next_x: list[float],
    nodes: list,
    edges: list,
) -> tuple[float, float]:
    """Leaves get consecutive x slots; parents sit centered above.

    Subtrees can share objects (the leaf is a singleton), so geometry is
    collected per tree position rather than per object.
    """
    branch = _edges(pi)
    y = -float(depth)
    if not branch:
        x = next_x[0]
        next_x[0] += 1.0
    else:
        placed = [(value, _place(sub, depth + 1, next_x, nodes, edges)) for value, sub in branch]
        x = sum(pt[0] for _, pt in placed) / len(placed)
        for value, (cx, cy) in placed:
            edges.append((x, y, cx, cy, value))
    nodes.append((x, y, _label(pi), isinstance(pi, Leaf)))
    return x, y


def draw_policy(ax, pi: Policy, title: str = "") -> None:
    nodes: list = []
    edges: list = []
    _place(pi, 0, [0.0], nodes, edges)
    for x0, y0, x1, y1, value in edges:
        ax.plot([x0, x1], [y0, y1], color="0.4", linewidth=1.0, zorder=1)
        ax.text(
            (x0 + x1) / 2,
            (y0 + y1) / 2,
            format_value(value),
            fontsize=9,
            color="0.25",
            ha="center",
            va="center",
            bbox={"boxstyle": "round,pad=0.15", "fc": "white", "ec": "none"},
            zorder=2,
        )
    for x, y, label, leaf in nodes:
        ax.scatter(
            [x],
            [y],
            s=450,
            marker="o",
            facecolor="white" if leaf else "#dbe9f6",
            edgecolor="0.3",
            zorder=3,
        )
        ax.text(x, y, label, fontsize=10, ha="center", va="center", zorder=4)
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_axis_off()
    ax.margins(0.2)


def save_policy_figure(pi: Policy, path: Union[str, Path], title: str = "") -> Path:
    """Draw one policy tree and write it to path (format from suffix)."""
    path = Path(path)
    fig = Figure(figsize=(4.0, 3.0), dpi=150)
    ax = fig.add_subplot()
    draw_policy(ax, pi, title)
    fig.tight_layout()
    fig.savefig(path)
    return path


def save_policy_figures(
    policies: Sequence[Policy],
    outdir: Union[str, Path],
    stem: str = "policy",
    titles: Iterable[str] | None = None,
) -> list[Path]:
    """Write one numbered image per policy; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    titles = list(titles) if titles is not None else [""] * len(policies)
    paths = []
    for i, (pi, title) in enumerate(zip(policies, titles), start=1):
        paths.append(save_policy_figure(pi, outdir / f"{stem}_{i:02d}.png", title))
    return paths
