"""
Report Generator for Resolution Runs

This module turns polyhedra, traces and ledgers into pandas tables, SVG
drawings (matplotlib) and ASCII drawings of plane polyhedra.
"""

import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from config.config import PLOT_CONFIG  # noqa: E402
from src.errors import WrongDimension  # noqa: E402
from src.polyhedron import FSubset, delta_face, fraction_text, invariants2  # noqa: E402

logger = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "index", "action", "chart", "nearness", "delta", "alpha", "beta", "gamma_plus", "gamma_minus",
    "epsilon", "zeta", "beta_O", "orders", "extension_degree", "projection_ok", "vertices",
]


def _frac(x) -> float:
    return float(Fraction(x))


class ReportGenerator:
    """Builds tables and drawings from a JSON payload produced by the CLI."""

    def __init__(self, payload: Optional[Dict[str, Any]] = None):
        """
        Initialize the report generator.

        Args:
            payload (Dict[str, Any]): a CLI result payload (resolve, fundamental or blowup)
        """
        self.payload = payload or {}
        self.colors = {
            "vertex": PLOT_CONFIG["vertex_color"],
            "region": PLOT_CONFIG["region_color"],
            "delta_line": PLOT_CONFIG["delta_line_color"],
            "annotation": PLOT_CONFIG["annotation_color"],
        }

    # --- tables -----------------------------------------------------------

    @staticmethod
    def _step_row(step: Dict[str, Any]) -> Dict[str, Any]:
        state = step.get("state", {})
        inv = state.get("invariants", {})
        binv = state.get("boundary_invariants", {})
        return {
            "index": step.get("index"),
            "action": step.get("action"),
            "chart": step.get("chart", {}).get("text", ""),
            "nearness": step.get("nearness", {}).get("kind", ""),
            "delta": state.get("delta", ""),
            "alpha": inv.get("alpha", ""),
            "beta": inv.get("beta", ""),
            "gamma_plus": inv.get("gamma_plus", ""),
            "gamma_minus": inv.get("gamma_minus", ""),
            "epsilon": inv.get("epsilon", ""),
            "zeta": inv.get("zeta", ""),
            "beta_O": binv.get("beta", ""),
            "orders": " ".join(str(n) for n in state.get("orders", [])),
            "extension_degree": state.get("extension_degree", ""),
            "projection_ok": state.get("projection_ok", ""),
            "vertices": " ".join("(" + ",".join(v) + ")" for v in state.get("vertices", [])),
        }

    def trace_table(self) -> pd.DataFrame:
        """One row per trace state."""
        steps = self.payload.get("steps") or self.payload.get("trace") or []
        return pd.DataFrame([self._step_row(s) for s in steps], columns=TRACE_COLUMNS)

    def units_table(self) -> pd.DataFrame:
        rows = []
        for number, unit in enumerate(self.payload.get("units", []), start=1):
            rows.append({
                "unit": number,
                "chart": unit["chart"]["text"],
                "length": unit["length"],
                "nearness": unit["nearness"]["kind"],
                "extension_degree": unit["extension_degree"],
                "beta_O_before": unit["beta_O_before"],
                "beta_O_after": unit["beta_O_after"],
                "monotone": unit["monotone"],
            })
        return pd.DataFrame(rows, columns=["unit", "chart", "length", "nearness", "extension_degree",
                                           "beta_O_before", "beta_O_after", "monotone"])

    def ledger_table(self) -> pd.DataFrame:
        columns = ["unit", "beta_O_before", "beta_O_after", "zeta_O_before", "zeta_O_after", "epsilon_O",
                   "length", "quantized", "isolation_consistent"]
        return pd.DataFrame(self.payload.get("ledger", []), columns=columns)

    def tables(self) -> Dict[str, pd.DataFrame]:
        return {"Trace": self.trace_table(), "Units": self.units_table(), "Ledger": self.ledger_table()}

    @staticmethod
    def polyhedron_table(delta: FSubset) -> pd.DataFrame:
        """Vertices with their L_0 value and whether they lie on the delta-face."""
        if delta.is_empty:
            return pd.DataFrame(columns=[f"a{i + 1}" for i in range(delta.dim)] + ["L0", "on_delta_face"])
        _, face = delta_face(delta)
        rows = []
        for v in delta.vertices:
            row = {f"a{i + 1}": fraction_text(x) for i, x in enumerate(v)}
            row["L0"] = fraction_text(sum(v))
            row["on_delta_face"] = v in face.vertices
            rows.append(row)
        return pd.DataFrame(rows)

    # --- drawings ---------------------------------------------------------

    def plot_polyhedron(self, delta: FSubset, output_path: Optional[str] = None, title: str = "") -> str:
        """
        Draw a plane polyhedron as SVG.

        Args:
            delta (FSubset): a two-dimensional F-subset
            output_path (str): where to save; the SVG text is returned either way
            title (str): figure title

        Returns:
            str: the SVG document
        """
        if delta.dim != 2:
            raise WrongDimension(f"plots need e = 2, got {delta.dim}")
        fig, ax = plt.subplots(figsize=PLOT_CONFIG["figure_size"], dpi=PLOT_CONFIG["dpi"])
        if delta.is_empty:
            ax.text(0.5, 0.5, "empty", ha="center", va="center", transform=ax.transAxes)
        else:
            xs = [_frac(v[0]) for v in delta.vertices]
            ys = [_frac(v[1]) for v in delta.vertices]
            reach = max(max(xs), max(ys)) + 1.5
            outline_x = [xs[0]] + xs + [reach]
            outline_y = [reach] + ys + [ys[-1]]
            ax.fill(outline_x + [reach], outline_y + [reach], color=self.colors["region"], alpha=0.5)
            ax.plot(outline_x, outline_y, color=self.colors["vertex"], linewidth=1.5)
            ax.scatter(xs, ys, color=self.colors["vertex"], zorder=3)
            for v, x, y in zip(delta.vertices, xs, ys):
                ax.annotate(f"({fraction_text(v[0])}, {fraction_text(v[1])})", (x, y),
                            textcoords="offset points", xytext=(6, 6), fontsize=8)
            inv = invariants2(delta)
            level = _frac(inv.delta)
            ax.plot([0, level], [level, 0], linestyle="--", color=self.colors["delta_line"],
                    label=f"delta = {fraction_text(inv.delta)}")
            ax.annotate(f"alpha = {fraction_text(inv.alpha)}, beta = {fraction_text(inv.beta)}",
                        (_frac(inv.alpha), _frac(inv.beta)), textcoords="offset points", xytext=(6, -14),
                        fontsize=8, color=self.colors["annotation"])
            ax.axhline(_frac(inv.gamma_plus), color=self.colors["annotation"], linewidth=0.6, linestyle=":",
                       label=f"gamma+ = {fraction_text(inv.gamma_plus)}")
            ax.axhline(_frac(inv.gamma_minus), color=self.colors["annotation"], linewidth=0.6, linestyle="-.",
                       label=f"gamma- = {fraction_text(inv.gamma_minus)}")
            ax.set_xlim(0, reach)
            ax.set_ylim(0, reach)
            ax.legend(loc="upper right", fontsize=8)
        ax.set_xlabel("a1")
        ax.set_ylabel("a2")
        if title:
            ax.set_title(title)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg")
        plt.close(fig)
        svg = buffer.getvalue()
        if output_path:
            Path(output_path).parent.mkdir(parents=True, exist_ok=True)
            Path(output_path).write_text(svg, encoding="utf-8")
            logger.info(f"Polyhedron drawing saved to {output_path}")
        return svg

    @staticmethod
    def ascii_plot(delta: FSubset, width: Optional[int] = None, height: Optional[int] = None) -> str:
        """
        Character drawing: '#' region, 'o' vertices, '\\' the delta-line.

        Rows run from the top (large a2) down to a2 = 0.
        """
        if delta.dim != 2:
            raise WrongDimension(f"plots need e = 2, got {delta.dim}")
        width = width or PLOT_CONFIG["ascii_width"]
        height = height or PLOT_CONFIG["ascii_height"]
        if delta.is_empty:
            return "(empty polyhedron)\n"
        level = invariants2(delta).delta
        reach = max(max(v[0] for v in delta.vertices), max(v[1] for v in delta.vertices), level) + 1
        sx = Fraction(reach) / (width - 1)
        sy = Fraction(reach) / (height - 1)
        grid: List[List[str]] = [[" "] * width for _ in range(height)]
        for row in range(height):
            a2 = sy * (height - 1 - row)
            for col in range(width):
                a1 = sx * col
                if delta.contains((a1, a2)):
                    grid[row][col] = "#"
                elif abs(a1 + a2 - level) <= max(sx, sy) / 2:
                    grid[row][col] = "\\"
        for v in delta.vertices:
            col = min(width - 1, round(Fraction(v[0]) / sx))
            row = height - 1 - min(height - 1, round(Fraction(v[1]) / sy))
            grid[row][col] = "o"
        lines = ["|" + "".join(r) for r in grid]
        lines.append("+" + "-" * width)
        lines.append(f"vertices: {' '.join('(' + ','.join(fraction_text(x) for x in v) + ')' for v in delta.vertices)}"
                     f"  delta = {fraction_text(level)}")
        return "\n".join(lines) + "\n"

