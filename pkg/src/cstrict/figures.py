"""Rendering of verifier reports: delimited gate tables and charts.

Everything here consumes a ``TheoremReport`` and writes files into a chosen
directory; nothing feeds back into the verdicts.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_VERDICT_COLOR = {"pass": "#2a9d4e", "fail": "#d43d3d", "skipped": "#b0b0b0"}


def write_gates_csv(report, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gate", "verdict", "witness"])
        for gate in report.gates:
            writer.writerow([gate.name, gate.verdict, gate.witness or ""])
    return path


def render_gate_chart(report, path: Path) -> Path:
    names = [g.name for g in report.gates]
    colors = [_VERDICT_COLOR[g.verdict] for g in report.gates]
    fig, ax = plt.subplots(figsize=(7, 0.4 * len(names) + 1.2))
    ax.barh(range(len(names)), [1] * len(names), color=colors)
    ax.set_yticks(range(len(names)), labels=names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xticks([])
    ax.set_title("gate verdicts", fontsize=10)
    for spine in ax.spines.values():
        spine.set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_stabilization_chart(report, path: Path) -> Path | None:
    data = report.figure_data.get("stabilization") or {}
    if not data:
        return None
    keys = sorted(data)
    at_t = [data[k][0] for k in keys]
    at_t1 = [data[k][1] for k in keys]
    xs = range(len(keys))
    fig, ax = plt.subplots(figsize=(max(6, 0.3 * len(keys)), 4))
    ax.bar([x - 0.2 for x in xs], at_t, width=0.4, label="truncation T")
    ax.bar([x + 0.2 for x in xs], at_t1, width=0.4, label="truncation T+1")
    ax.set_xticks(list(xs), labels=keys, rotation=90, fontsize=6)
    ax.set_ylabel("colimit classes")
    ax.set_title("stabilization of extension values", fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_component_chart(report, path: Path) -> Path | None:
    data = report.figure_data.get("sigma_sizes") or {}
    if not data:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    for label in sorted(data):
        sizes = data[label]
        probes = sorted(sizes)
        ax.plot(
            range(len(probes)),
            [sizes[p] for p in probes],
            marker="o",
            label=label,
        )
        ax.set_xticks(range(len(probes)), labels=probes, rotation=45, fontsize=6)
    ax.set_ylabel("component size")
    ax.set_title("final comparison component sizes per probe", fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_report(report, directory: str | Path) -> list[Path]:
    """Write gates.csv plus every chart the report has data for."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = [
        write_gates_csv(report, out / "gates.csv"),
        render_gate_chart(report, out / "gates.png"),
    ]
    stab = render_stabilization_chart(report, out / "stabilization.png")
    if stab is not None:
        written.append(stab)
    comp = render_component_chart(report, out / "sigma_components.png")
    if comp is not None:
        written.append(comp)
    return written
