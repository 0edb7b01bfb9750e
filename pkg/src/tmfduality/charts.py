"""ASCII and SVG rendering of spectral sequence pages and homotopy charts.

Layout: stem on the horizontal axis, s on the vertical axis (s grows
upwards).  Free classes are squares, Z/3 classes dots, d_r are arrows.
Cells outside the safe window are shaded.  Output is deterministic.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .ss_engine import BigradedPage, HomotopyChart, SpectralSequenceRun, Window

FREE, TORSION = "□", "•"
LEGEND = "legend: □ free Z[1/2], • Z/3, →r differential d_r"
PAGE_COLORS = {5: "#1f77b4", 9: "#d62728"}
CELL = 14


def _cell_glyph(classes) -> str:
    free = sum(1 for c in classes if c.order == 0)
    tors = len(classes) - free
    g = FREE * free + TORSION * tors
    return g if len(g) <= 3 else f"{len(classes)}*"


def render_page_ascii(page: BigradedPage, kind: str, window: Window, safe_only: bool = True) -> str:
    """Grid of one page plus a list of its differentials."""
    cells = {}
    for (s, t), e in page.entries.items():
        if not e.classes or (safe_only and not window.is_safe(kind, s, t)):
            continue
        cells[(s, t - s)] = _cell_glyph(e.classes)
    lines = [f"E{page.index} ({kind}), window sMax={window.s_max} t=[{window.t_min},{window.t_max}]"]
    if not cells:
        lines.append("(empty)")
    else:
        ss = [s for s, _ in cells]
        ns = [n for _, n in cells]
        lo, hi = min(ns), max(ns)
        for s in range(max(ss), min(ss) - 1, -1):
            row = "".join(f"{cells.get((s, n), '.'):<3}" for n in range(lo, hi + 1))
            lines.append(f"{s:>4} | {row.rstrip()}")
        lines.append(f"stems {lo} .. {hi}")
    for rec in page.log:
        if safe_only and not window.is_safe(kind, *rec.source):
            continue
        tgt = " + ".join(n if c == 1 else f"{c}·{n}" for n, c in rec.coefficients)
        lines.append(f"  {rec.source_name} {rec.source} →{rec.page} {tgt} {rec.target}")
    lines.append(LEGEND)
    return "\n".join(lines)


def render_run_ascii(run: SpectralSequenceRun, pages=None) -> str:
    pages = pages or sorted({2, *[r for r in range(2, 11) if run.page(r).log], 10})
    parts = []
    for r in pages:
        parts.append(render_page_ascii(run.page(r), run.kind, run.window))
    return "\n\n".join(parts)


def render_chart_ascii(chart: HomotopyChart) -> str:
    lines = [chart.name]
    for n in chart.stems:
        g = chart.at(n)
        if g.is_zero:
            continue
        flag = f"   [extension? {chart.flags[n]}]" if n in chart.flags else ""
        lines.append(f"{n:>5}: {g}{flag}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------


def _svg_panel(page: BigradedPage, kind: str, window: Window, y0: int, stems, srange) -> list[str]:
    lo, hi = stems
    smin, smax = srange
    width = (hi - lo + 3) * CELL
    height = (smax - smin + 3) * CELL

    def xy(s, n):
        return (n - lo + 1.5) * CELL, y0 + (smax - s + 1.5) * CELL

    out = [f'<g id="E{page.index}" class="page">']
    out.append(f'<text x="4" y="{y0 + 11}" font-size="11">E{page.index}</text>')
    out.append(
        f'<rect x="{CELL}" y="{y0 + CELL}" width="{width - 2 * CELL}" height="{height - 2 * CELL}" '
        'fill="none" stroke="#999" stroke-width="0.5"/>'
    )
    for s in range(smin, smax + 1):
        for n in range(lo, hi + 1):
            if not window.is_safe(kind, s, n + s):
                x, y = xy(s, n)
                out.append(
                    f'<rect x="{x - CELL / 2:.1f}" y="{y - CELL / 2:.1f}" width="{CELL}" height="{CELL}" '
                    'fill="#eee" class="unsafe"/>'
                )
    for (s, t), e in sorted(page.entries.items()):
        if not e.classes or not (lo <= t - s <= hi and smin <= s <= smax):
            continue
        x, y = xy(s, t - s)
        k = len(e.classes)
        for i, c in enumerate(e.classes):
            cx = x + (i - (k - 1) / 2) * 4
            title = f"<title>{escape(c.name)} ({s},{t})</title>"
            if c.order == 0:
                out.append(
                    f'<rect x="{cx - 3:.1f}" y="{y - 3:.1f}" width="6" height="6" fill="none" stroke="black">{title}</rect>'
                )
            else:
                out.append(f'<circle cx="{cx:.1f}" cy="{y:.1f}" r="2.5" fill="black">{title}</circle>')
    color = PAGE_COLORS.get(page.index, "#2ca02c")
    for rec in page.log:
        (s0, t0), (s1, t1) = rec.source, rec.target
        if not (lo <= t0 - s0 <= hi and lo <= t1 - s1 <= hi and smin <= s0 <= smax and smin <= s1 <= smax):
            continue
        x0, y0_ = xy(s0, t0 - s0)
        x1, y1 = xy(s1, t1 - s1)
        out.append(
            f'<line x1="{x0:.1f}" y1="{y0_:.1f}" x2="{x1:.1f}" y2="{y1:.1f}" stroke="{color}" '
            f'stroke-width="1" marker-end="url(#arrow)" class="d{rec.page}"/>'
        )
    out.append("</g>")
    return out


def render_run_svg(run: SpectralSequenceRun, pages=range(2, 11)) -> str:
    """One panel per page E2..E10, stacked vertically."""
    w = run.window
    srange = (min(w.s_range(run.kind)), max(w.s_range(run.kind)))
    stems = (w.t_min - srange[1], w.t_max - srange[0])
    panel_h = (srange[1] - srange[0] + 3) * CELL
    width = (stems[1] - stems[0] + 3) * CELL
    body = []
    for i, r in enumerate(pages):
        body.extend(_svg_panel(run.page(r), run.kind, w, i * (panel_h + CELL), stems, srange))
    return _svg_document(width, len(list(pages)) * (panel_h + CELL), body, f"{run.kind} spectral sequence")


def render_page_svg(page: BigradedPage, kind: str, window: Window) -> str:
    srange = (min(window.s_range(kind)), max(window.s_range(kind)))
    stems = (window.t_min - srange[1], window.t_max - srange[0])
    body = _svg_panel(page, kind, window, 0, stems, srange)
    return _svg_document((stems[1] - stems[0] + 3) * CELL, (srange[1] - srange[0] + 3) * CELL, body, f"{kind} E{page.index}")


def render_chart_svg(chart: HomotopyChart) -> str:
    """A homotopy chart: one column per stem, squares for Z[1/2], dots for Z/3."""
    stems = chart.stems or [0]
    lo, hi = min(stems), max(stems)
    tallest = max([chart.at(n).free_rank + len(chart.at(n).torsion) for n in stems] + [1])
    width = (hi - lo + 3) * CELL
    height = (tallest + 3) * CELL
    body = ['<g id="chart">']
    for n in stems:
        g = chart.at(n)
        x = (n - lo + 1.5) * CELL
        k = 0
        for _ in range(g.free_rank):
            y = height - (k + 1.5) * CELL
            body.append(f'<rect x="{x - 3:.1f}" y="{y - 3:.1f}" width="6" height="6" fill="none" stroke="black"/>')
            k += 1
        for _ in g.torsion:
            y = height - (k + 1.5) * CELL
            body.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.5" fill="black"/>')
            k += 1
        if n in chart.flags:
            body.append(f'<text x="{x - 3:.1f}" y="{CELL}" font-size="9" fill="red">?</text>')
    body.append("</g>")
    return _svg_document(width, height, body, chart.name)


def _svg_document(width, height, body, title) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f"<title>{escape(title)}</title>",
        '<defs><marker id="arrow" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z"/></marker></defs>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"
