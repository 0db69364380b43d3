"""Figures written next to a report (matplotlib, Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import RunReport  # noqa: E402

plt.rcParams.update({"figure.figsize": (5.5, 3.6), "axes.spines.top": False,
                     "axes.spines.right": False, "savefig.dpi": 120})


def _save(fig, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    fig.tight_layout()
    # fixed metadata so repeated runs write identical files
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def _bar(ax, labels, values, title, ylabel="count"):
    ax.bar(range(len(values)), values, color="0.35")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    for i, v in enumerate(values):
        ax.annotate(str(v), (i, v), ha="center", va="bottom", fontsize=8)


def counts_figures(rep: RunReport, out_dir: str) -> list[str]:
    r = rep.results
    paths = []
    kinds = r.get("plane_counts", {})
    if kinds:
        fig, ax = plt.subplots()
        names = sorted(kinds)
        _bar(ax, names, [kinds[k] for k in names], f"subspaces by kind, q={rep.parameters['q']}")
        ax.set_yscale("symlog")
        paths.append(_save(fig, out_dir, "counts_kinds.png"))
    per_head = r.get("clubs_per_head", {})
    if per_head:
        fig, ax = plt.subplots()
        vals = sorted(per_head.values())
        ax.hist(vals, bins=range(min(vals), max(vals) + 2), color="0.35", align="left")
        ax.set_xlabel("clubs through P_inf per other head")
        ax.set_ylabel("heads")
        paths.append(_save(fig, out_dir, "counts_per_head.png"))
    return paths


def design_figures(rep: RunReport, out_dir: str) -> list[str]:
    s_types = rep.results.get("s_types", {})
    if not s_types:
        return []
    fig, ax = plt.subplots()
    names = sorted(s_types, key=int)
    _bar(ax, [f"s={s}" for s in names], [s_types[s] for s in names], "blocks by subfield degree")
    return [_save(fig, out_dir, "design_blocks.png")]


def exists_figures(rep: RunReport, out_dir: str) -> list[str]:
    rows = rep.results.get("table", [])
    if not rows:
        return []
    qs = [row["q"] for row in rows]
    ratio = [row["S_times_2"] / (2 * row["bound"]) for row in rows]
    fig, ax = plt.subplots()
    ax.plot(qs, ratio, "o-", color="0.2")
    ax.axhline(1.0, color="0.6", ls="--")
    ax.set_xlabel("q")
    ax.set_ylabel("|S| / bound")
    ax.set_title("covering count against the number of 6-tuples")
    return [_save(fig, out_dir, "exists_ratio.png")]


def abb_figures(rep: RunReport, out_dir: str) -> list[str]:
    r = rep.results
    keys = [k for k in ("clubs", "cones", "expected_cones", "sets", "images", "special_quadrics") if k in r]
    if not keys:
        return []
    fig, ax = plt.subplots()
    _bar(ax, keys, [r[k] for k in keys], "correspondence counts")
    return [_save(fig, out_dir, "abb_counts.png")]


FIGURES = {"counts": counts_figures, "design": design_figures, "hp exists": exists_figures, "abb": abb_figures}


def render(rep: RunReport, out_dir: str) -> list[str]:
    fn = FIGURES.get(rep.command)
    if fn is None:
        return []
    os.makedirs(out_dir, exist_ok=True)
    return fn(rep, out_dir)
