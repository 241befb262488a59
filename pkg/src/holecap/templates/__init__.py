'''
Jinja 2 templates for the SVG line plots written by the CLI.

'''
import math

from pathlib import Path

from jinja2 import (
    Environment,
    FileSystemLoader,
    StrictUndefined
)

from holecap.utils import fmt_float


TEMPLATE_DIR = Path(__file__).parent

env = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    undefined=StrictUndefined,
    autoescape=True
)

lineplot_tmpl = env.get_template('lineplot.svg.j2')

_COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

_WIDTH, _HEIGHT, _MARGIN = 640, 420, 56


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]

    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def render_lineplot(
    series: dict[str, list[tuple[float, float]]],
    *,
    title: str = '',
    xlabel: str = '',
    ylabel: str = ''
) -> str:
    '''
    Render named ``(x, y)`` point lists as polylines on shared axes.
    Non finite points are dropped.

    '''
    clean = {
        name: [(float(x), float(y)) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
        for name, pts in series.items()
    }
    xs = [x for pts in clean.values() for x, _ in pts] or [0., 1.]
    ys = [y for pts in clean.values() for _, y in pts] or [0., 1.]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1., x1 + 1.

    if y1 == y0:
        y0, y1 = y0 - 1., y1 + 1.

    inner_w = _WIDTH - 2 * _MARGIN
    inner_h = _HEIGHT - 2 * _MARGIN

    def px(x: float) -> float:
        return _MARGIN + inner_w * (x - x0) / (x1 - x0)

    def py(y: float) -> float:
        return _HEIGHT - _MARGIN - inner_h * (y - y0) / (y1 - y0)

    lines = [
        {
            'name': name,
            'color': _COLORS[i % len(_COLORS)],
            'points': ' '.join(f'{px(x):.2f},{py(y):.2f}' for x, y in pts),
            'legend_y': _MARGIN + 16 * i
        }
        for i, (name, pts) in enumerate(clean.items())
    ]
    return lineplot_tmpl.render(
        width=_WIDTH,
        height=_HEIGHT,
        margin=_MARGIN,
        title=title,
        xlabel=xlabel,
        ylabel=ylabel,
        lines=lines,
        xticks=[{'pos': px(v), 'label': format(v, '.3g')} for v in _ticks(x0, x1)],
        yticks=[{'pos': py(v), 'label': format(v, '.3g')} for v in _ticks(y0, y1)],
        x0=fmt_float(x0), x1=fmt_float(x1)
    )

