"""Figure assembly from loaded preset artifacts.

Rendering is file-driven and pure: the same input directory produces the
same image bytes (fixed canvas size, dpi, fonts, and colors; no
timestamps).  Curves are drawn as F/N so the shot-noise reference sits at
1 and the Heisenberg reference at N on every panel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from matplotlib import rcParams
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .reading import DataError, load_preset_outputs

DPI = 150
CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                "#17becf")
REF_STYLE = dict(color="#555555", lw=1.0)
HEAT_CMAP = "viridis"

rcParams["font.family"] = "DejaVu Sans"
rcParams["svg.hashsalt"] = "tntplots"


@dataclass(frozen=True)
class FigureSpec:
    """What a figure needs and how its panels are arranged."""

    preset: str
    required: tuple[str, ...]
    layout: tuple[int, int]
    size: tuple[float, float]
    ylabel: str = "F / N"
    yscale: str = "log"
    references: tuple[str, ...] = ("SNL", "QCRB")

    def gather(self, in_dir: str) -> dict:
        data = load_preset_outputs(in_dir, self.preset)
        missing = [key for key in self.required if key not in data]
        if missing:
            raise DataError(f"{self.preset} outputs lack {missing}; "
                            f"found {sorted(set(data) - {'_manifest'})}")
        return data


SPECS = {
    "fig1": FigureSpec("fig1", ("curves", "q0", "q1", "q2", "q3"), (2, 4), (11.0, 5.5),
                       references=("SNL", "Heisenberg")),
    "fig2": FigureSpec("fig2", ("curves",), (1, 1), (6.5, 4.5),
                       references=("SNL",)),
    "fig3": FigureSpec("fig3", ("hellinger", "p0", "p1", "p2", "p3",
                                "q0", "q1", "q2", "q3"), (2, 4), (11.0, 5.5),
                       ylabel="P(m)", yscale="linear", references=()),
    "fig4": FigureSpec("fig4", ("panel_a", "panel_b"), (1, 2), (9.0, 4.0)),
    "fig5": FigureSpec("fig5", ("panel_a", "panel_b"), (1, 2), (9.0, 4.0)),
    "fig6": FigureSpec("fig6", ("sweep",), (1, 1), (6.0, 4.5)),
}


def _new_figure(spec: FigureSpec) -> Figure:
    fig = Figure(figsize=spec.size, dpi=DPI)
    FigureCanvasAgg(fig)
    return fig


def _heatmap(ax, grid, title: str) -> None:
    ax.imshow(grid.values, origin="upper", aspect="auto", cmap=HEAT_CMAP,
              vmin=0.0, vmax=1.0 if grid.normalized else None,
              extent=(0.0, 2.0 * np.pi, np.pi, 0.0))
    ax.set_title(title, fontsize=9)
    ax.set_xticks((0.0, np.pi, 2.0 * np.pi))
    ax.set_xticklabels(("0", "$\\pi$", "$2\\pi$"), fontsize=8)
    ax.set_yticks((0.0, np.pi / 2, np.pi))
    ax.set_yticklabels(("0", "$\\pi/2$", "$\\pi$"), fontsize=8)
    ax.set_xlabel("$\\varphi$", fontsize=8)
    ax.set_ylabel("$\\theta$", fontsize=8)


def _n_atoms(data: dict) -> float:
    return float(data["_manifest"]["config"]["n_atoms"])


def _t1_title(table) -> str:
    t1 = table.notes.get("t1")
    return f"$\\chi t_1 = {t1:g}$" if t1 is not None else ""


def render_fig1(data: dict) -> Figure:
    spec = SPECS["fig1"]
    n = _n_atoms(data)
    fig = _new_figure(spec)
    axes_top = [fig.add_subplot(2, 4, i + 1) for i in range(4)]
    ax = fig.add_subplot(2, 1, 2)
    frames = data["_manifest"]["config"]["frame_times"]
    for axq, key, t in zip(axes_top, ("q0", "q1", "q2", "q3"), frames):
        _heatmap(axq, data[key], f"$\\chi t = {t:g}$")

    curves = data["curves"]
    chi = curves.column("chi_t")
    ax.plot(chi, curves.column("fq_tnt") / n, color=CURVE_COLORS[0],
            label="$F_Q/N$, twist-and-turn")
    ax.plot(chi, curves.column("fq_oat") / n, color=CURVE_COLORS[1],
            label="$F_Q/N$, one-axis twisting")
    ax.plot(chi, curves.column("gain_tnt"), color=CURVE_COLORS[0], ls="--",
            label="$1/\\xi^2$, twist-and-turn")
    ax.plot(chi, curves.column("gain_oat"), color=CURVE_COLORS[1], ls="--",
            label="$1/\\xi^2$, one-axis twisting")
    ax.plot(chi, np.ones_like(chi), ls=":", **REF_STYLE, label="SNL")
    ax.plot(chi, np.full_like(chi, n), ls="-.", **REF_STYLE, label="Heisenberg")
    ax.set_yscale("log")
    ax.set_xlabel("$\\chi t$")
    ax.set_ylabel("F / N,  gain")
    ax.legend(fontsize=7, ncol=3, loc="lower right")
    fig.tight_layout()
    return fig


def render_fig2(data: dict) -> Figure:
    spec = SPECS["fig2"]
    n = _n_atoms(data)
    fig = _new_figure(spec)
    ax = fig.add_subplot(1, 1, 1)
    curves = data["curves"]
    chi = curves.column("chi_t")
    ax.plot(chi, curves.column("qfi") / n, color="black", lw=1.8, label="$F_Q/N$")
    for i, sigma in enumerate(("0.1", "1", "5")):
        ax.plot(chi, curves.column(f"fc_none_{sigma}") / n, color=CURVE_COLORS[i],
                ls="--", label=f"no echo, $\\sigma={sigma}$")
        ax.plot(chi, curves.column(f"fc_echo_{sigma}") / n, color=CURVE_COLORS[i],
                label=f"echo, $\\sigma={sigma}$")
    ax.plot(chi, np.ones_like(chi), ls=":", **REF_STYLE, label="SNL")
    ax.set_yscale("log")
    ax.set_ylim(1e-6, 2.0 * float(curves.column("qfi").max()) / n)
    ax.set_xlabel("$\\chi t$")
    ax.set_ylabel("F / N")
    ax.legend(fontsize=7, ncol=2, loc="lower right")
    fig.tight_layout()
    return fig


def render_fig3(data: dict) -> Figure:
    spec = SPECS["fig3"]
    fig = _new_figure(spec)
    summary = data["hellinger"]
    titles = ("no echo, $\\varphi=0$", "no echo, $\\varphi_0$",
              "echo, $\\varphi=0$", "echo, $\\varphi_0$")
    d2 = (summary["d2_blurred_trivial"], summary["d2_blurred_echo"])
    for i in range(4):
        axq = fig.add_subplot(2, 4, i + 1)
        _heatmap(axq, data[f"q{i}"], titles[i])
        axp = fig.add_subplot(2, 4, 5 + i)
        table = data[f"p{i}"]
        m = table.column("m")
        axp.step(m, table.column("p_ideal"), where="mid", color=CURVE_COLORS[0],
                 label="ideal")
        axp.step(m, table.column("p_blurred"), where="mid", color=CURVE_COLORS[1],
                 label="blurred")
        axp.set_xlabel("m", fontsize=8)
        if i == 0:
            axp.set_ylabel("P(m)", fontsize=8)
            axp.legend(fontsize=7)
        if i in (1, 3):
            axp.set_title(f"$d_H^2 = {d2[i // 2]:.3f}$ (blurred)", fontsize=8)
    fig.tight_layout()
    return fig


def _decay_panel(ax, table, n: float, title: str) -> None:
    sigma = table.column("sigma")
    series = (("fc_trivial", "no echo"), ("fc_echo", "echo"),
              ("fc_asym", "asymmetric echo"), ("fc_pseudo", "pseudo echo"))
    for color, (name, label) in zip(CURVE_COLORS, series):
        ax.plot(sigma, table.column(name) / n, color=color, label=label)
    ax.plot(sigma, table.column("qcrb") / n, ls="--", **REF_STYLE, label="QCRB")
    ax.plot(sigma, table.column("snl") / n, ls=":", **REF_STYLE, label="SNL")
    ax.set_yscale("log")
    ax.set_xlabel("detection noise $\\sigma$")
    ax.set_ylabel("F / N")
    ax.set_title(title, fontsize=9)
    ax.legend(fontsize=7)


def render_fig4(data: dict) -> Figure:
    spec = SPECS["fig4"]
    n = _n_atoms(data)
    fig = _new_figure(spec)
    for i, key in enumerate(("panel_a", "panel_b")):
        table = data[key]
        _decay_panel(fig.add_subplot(1, 2, i + 1), table, n, _t1_title(table))
    fig.tight_layout()
    return fig


def render_fig5(data: dict) -> Figure:
    spec = SPECS["fig5"]
    n = _n_atoms(data)
    fig = _new_figure(spec)
    for i, key in enumerate(("panel_a", "panel_b")):
        table = data[key]
        ax = fig.add_subplot(1, 2, i + 1)
        ratio = table.column("ratio")
        ax.plot(ratio, table.column("fc_0.1") / n, color=CURVE_COLORS[0],
                label="$\\sigma = 0.1$")
        ax.plot(ratio, table.column("fc_5") / n, color=CURVE_COLORS[1],
                label="$\\sigma = 5$")
        ax.plot(ratio, table.column("qcrb") / n, ls="--", **REF_STYLE, label="QCRB")
        ax.plot(ratio, table.column("snl") / n, ls=":", **REF_STYLE, label="SNL")
        ax.set_yscale("log")
        ax.set_xlabel("$t_2 / t_1$")
        ax.set_ylabel("F / N")
        ax.set_title(_t1_title(table), fontsize=9)
        ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_fig6(data: dict) -> Figure:
    spec = SPECS["fig6"]
    n = _n_atoms(data)
    fig = _new_figure(spec)
    ax = fig.add_subplot(1, 1, 1)
    sweep = data["sweep"]
    t1 = sweep.column("t1")
    for color, sigma in zip(CURVE_COLORS, ("0.1", "1", "5")):
        ax.plot(t1, sweep.column(f"fc_{sigma}") / n, color=color,
                label=f"$\\sigma = {sigma}$")
    ax.plot(t1, sweep.column("qcrb") / n, ls="--", **REF_STYLE, label="QCRB")
    ax.plot(t1, sweep.column("snl") / n, ls=":", **REF_STYLE, label="SNL")
    ax.set_yscale("log")
    ax.set_xlabel("$\\chi t_1$  (with $\\chi t_2 = \\chi T - \\chi t_1$)")
    ax.set_ylabel("F / N")
    ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
    "fig6": render_fig6,
}


def render(figure: str, in_dir: str, out_path: str) -> str:
    """Load a preset's outputs, draw the figure, write the image.

    The image file is only created after every input has loaded and drawn
    cleanly; a data error leaves no partial output behind.
    """
    if figure not in RENDERERS:
        raise DataError(f"unknown figure {figure!r}; have {sorted(RENDERERS)}")
    data = SPECS[figure].gather(in_dir)
    fig = RENDERERS[figure](data)
    parent = os.path.dirname(os.path.abspath(out_path))
    os.makedirs(parent, exist_ok=True)
    fig.savefig(out_path, dpi=DPI, metadata={"Software": "tntplots"})
    return out_path
