"""Matplotlib figures for loops, zero sets and verify reports (Agg backend, files only)."""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DPI = 120


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_loop(values, path, title="", label=None, extra=None):
    """Image of a closed loop in the plane, origin marked.

    ``extra`` is an optional (values, label) pair drawn dashed underneath.
    """
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    if extra is not None:
        ev, elabel = extra
        ev = np.append(ev, ev[:1])
        ax.plot(ev.real, ev.imag, "--", lw=1, color="0.6", label=elabel)
    v = np.asarray(values, dtype=complex)
    v = np.append(v, v[:1])
    ax.plot(v.real, v.imag, lw=1.2, color="C0", label=label)
    ax.plot([0], [0], "k+", ms=10)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title, fontsize=10)
    if label or extra is not None:
        ax.legend(fontsize=8, loc="best")
    return _save(fig, path)


def plot_zeros(cert, path, title=""):
    """Zeros of a C^2 map by their first two real coordinates, colored by sign."""
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = np.linspace(0, 2 * np.pi, 200)
    ax.plot(np.cos(t), np.sin(t), color="0.8", lw=0.8)
    for z in cert.zeros:
        x = np.asarray(z.location)
        color = "C2" if z.jacobian_sign > 0 else "C3"
        ax.plot(x[0], x[1], "o", color=color, ms=6)
    ax.set_xlabel("Re z1")
    ax.set_ylabel("Im z1")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(title or f"degree {cert.degree} ({len(cert.zeros)} zeros)", fontsize=10)
    return _save(fig, path)


def plot_verify(report, path):
    """Runtime per experiment against its budget; failed ones in red."""
    recs = [r for r in report["records"] if r.get("budget")]
    names = [r["name"] for r in recs]
    y = np.arange(len(recs))
    fig, ax = plt.subplots(figsize=(6, 0.45 * len(recs) + 1.2))
    colors = ["C2" if r["passed"] else "C3" for r in recs]
    ax.barh(y, [r["runtime"] for r in recs], color=colors)
    ax.plot([r["budget"] for r in recs], y, "k|", ms=14, label="budget")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("runtime [s]")
    ax.legend(fontsize=8, loc="lower right")
    ax.set_title(f"seed {report['seed']}: {'pass' if report['passed'] else 'FAIL'}", fontsize=10)
    return _save(fig, path)


def plot_degrees(report, path):
    """Histogram of witness degrees from a verify report, if present."""
    rec = next((r for r in report["records"] if r["name"] == "witness"), None)
    degs = [w["degree"] for w in (rec or {}).get("details", {}).get("witnesses", [])]
    fig, ax = plt.subplots(figsize=(4.5, 3))
    if degs:
        lo, hi = min(degs), max(degs)
        ax.hist(degs, bins=np.arange(lo - 0.5, hi + 1.5), color="C0", rwidth=0.8)
    ax.set_xlabel("deg (Phi + P)")
    ax.set_ylabel("count")
    ax.set_title("witness degrees", fontsize=10)
    return _save(fig, path)
