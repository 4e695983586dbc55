from su11sim.plots.svg import render_heatmap, render_lines, write_svg

__all__ = ["render_heatmap", "render_lines", "write_svg"]
