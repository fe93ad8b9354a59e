"""Deterministic SVG pictures of cut diagrams and genus-one configurations."""

from __future__ import annotations

from fractions import Fraction

from .cuts import CutDiagram
from .strata import Singular, Smooth

SCALE = 40
BASELINE = 200
MARGIN = 40
LIFT = 40  # a flat cut still gets this much height


def _fmt(x: Fraction) -> str:
    return f"{float(x):.2f}"


class _Canvas:
    def __init__(self):
        self.items: list[str] = []
        self.xmin = self.xmax = Fraction(0)
        self.ymin = Fraction(BASELINE)
        self.ymax = Fraction(BASELINE)
        self.first = True

    def _grow(self, x, y):
        if self.first:
            self.xmin = self.xmax = x
            self.first = False
        self.xmin, self.xmax = min(self.xmin, x), max(self.xmax, x)
        self.ymin, self.ymax = min(self.ymin, y), max(self.ymax, y)

    def line(self, x, y1, y2, dashed=False):
        self._grow(x, y1)
        self._grow(x, y2)
        dash = ' stroke-dasharray="5,5"' if dashed else ""
        self.items.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y1)}" x2="{_fmt(x)}" y2="{_fmt(y2)}" '
            f'stroke="black" stroke-width="1.5"{dash}/>'
        )

    def dot(self, x, y):
        self._grow(x, y)
        self.items.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="black"/>')

    def arc(self, x1, x2):
        r = (x2 - x1) / 2
        self._grow(x1, BASELINE - r)
        self._grow(x2, BASELINE)
        self.items.append(
            f'<path d="M {_fmt(x1)} {BASELINE} A {_fmt(r)} {_fmt(r)} 0 0 1 {_fmt(x2)} {BASELINE}" '
            'fill="none" stroke="gray" stroke-width="1"/>'
        )

    def svg(self) -> str:
        x0, y0 = self.xmin - MARGIN, self.ymin - MARGIN
        w, h = self.xmax - self.xmin + 2 * MARGIN, self.ymax - self.ymin + 2 * MARGIN
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">\n'
            f'<line x1="{_fmt(x0)}" y1="{BASELINE}" x2="{_fmt(x0 + w)}" y2="{BASELINE}" '
            'stroke="lightgray" stroke-width="1"/>\n'
        )
        return head + "".join(item + "\n" for item in self.items) + "</svg>\n"


def _cut_pairs(pairs) -> str:
    pts = [x for pq in pairs for x in pq]
    base_im = min(p.im.embedded() for p in pts)
    c = _Canvas()
    for p, q in pairs:
        for x in (p, q):
            px = SCALE * x.re.embedded()
            top = BASELINE - LIFT - SCALE * (x.im.embedded() - base_im)
            c.line(px, top, Fraction(BASELINE))
            c.dot(px, top)
        c.arc(SCALE * p.re.embedded(), SCALE * q.re.embedded())
    return c.svg()


def render_cut_diagram(d: CutDiagram) -> str:
    return _cut_pairs(d.pairs)


def render_configuration(cfg: Smooth | Singular) -> str:
    if isinstance(cfg, Smooth):
        return _cut_pairs(cfg.pairs)
    re_, im = cfg.node.re.embedded(), cfg.node.im.embedded()
    pts = [(re_, im), (-re_, -im)]
    low = min(y for _, y in pts)
    c = _Canvas()
    tops: dict[Fraction, Fraction] = {}
    for x, y in pts:
        top = BASELINE - LIFT - SCALE * (y - low)
        px = SCALE * x
        tops[px] = min(tops.get(px, top), top)
    for px in sorted(tops):
        c.line(px, tops[px], Fraction(BASELINE), dashed=True)
    for x, y in pts:
        c.dot(SCALE * x, BASELINE - LIFT - SCALE * (y - low))
    return c.svg()
