"""Deterministic SVG rendering of construction states.

Output bytes are a pure function of (state, options): coordinates use
fixed 6-decimal formatting, elements follow construction order, and the
Y axis is flipped to the screen convention only at render time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .interpreter import ConstructionState
from .kernel import Angle, Circle, Line, Point, Ray, Segment, measure_angle_object


class EmptyStateError(ValueError):
    """The state contains nothing drawable."""


@dataclass(frozen=True)
class RenderOptions:
    width: int = 640
    height: int = 640
    margin_fraction: float = 0.1
    label_points: bool = True
    stroke_widths: dict = field(
        default_factory=lambda: {"line": 1.0, "segment": 1.5, "ray": 1.0, "circle": 1.0, "angle": 1.0}
    )

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if not 0 <= self.margin_fraction < 0.5:
            raise ValueError("margin_fraction must be in [0, 0.5)")


def _fmt(v: float) -> str:
    # avoid "-0.000000" so output is byte-stable across platforms
    if v == 0:
        v = 0.0
    return f"{v:.6f}"


def compute_viewport(state: ConstructionState, margin_fraction: float = 0.1):
    """Axis-aligned bounding box (xmin, ymin, xmax, ymax) with margins."""
    xs: list[float] = []
    ys: list[float] = []
    for obj in state.objects.values():
        if isinstance(obj, Point):
            xs.append(obj.x)
            ys.append(obj.y)
        elif isinstance(obj, Segment):
            xs.extend((obj.a.x, obj.b.x))
            ys.extend((obj.a.y, obj.b.y))
        elif isinstance(obj, Circle):
            xs.extend((obj.center.x - obj.radius, obj.center.x + obj.radius))
            ys.extend((obj.center.y - obj.radius, obj.center.y + obj.radius))
        elif isinstance(obj, (Line, Ray)):
            base = obj.base if isinstance(obj, Line) else obj.origin
            xs.append(base.x)
            ys.append(base.y)
        elif isinstance(obj, Angle):
            xs.append(obj.vertex.x)
            ys.append(obj.vertex.y)
    if not xs:
        raise EmptyStateError("nothing to render")
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    if xmax - xmin < 1e-12 and ymax - ymin < 1e-12:
        xmin, xmax = xmin - 0.5, xmax + 0.5
        ymin, ymax = ymin - 0.5, ymax + 0.5
    mx = (xmax - xmin) * margin_fraction
    my = (ymax - ymin) * margin_fraction
    # degenerate in one axis only: give it the other axis' margin
    if mx == 0:
        mx = my if my > 0 else 0.5
    if my == 0:
        my = mx
    return (xmin - mx, ymin - my, xmax + mx, ymax + my)


def _clip_line_to_box(base: Point, dx: float, dy: float, box, ray: bool = False):
    """Intersect a parametric line (or ray, t >= 0) with a box; None if outside."""
    xmin, ymin, xmax, ymax = box
    t0, t1 = (-math.inf, math.inf) if not ray else (0.0, math.inf)
    for p, d, lo, hi in ((base.x, dx, xmin, xmax), (base.y, dy, ymin, ymax)):
        if abs(d) < 1e-15:
            if not lo <= p <= hi:
                return None
            continue
        ta, tb = (lo - p) / d, (hi - p) / d
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    if t0 > t1:
        return None
    return (
        Point(base.x + t0 * dx, base.y + t0 * dy),
        Point(base.x + t1 * dx, base.y + t1 * dy),
    )


class _Mapper:
    """Uniform scale + translation from model space to pixel space."""

    def __init__(self, box, opts: RenderOptions):
        xmin, ymin, xmax, ymax = box
        self.scale = min(opts.width / (xmax - xmin), opts.height / (ymax - ymin))
        self.xmin = xmin
        self.ymax = ymax
        self.x_off = (opts.width - (xmax - xmin) * self.scale) / 2
        self.y_off = (opts.height - (ymax - ymin) * self.scale) / 2

    def map(self, p: Point) -> tuple[float, float]:
        return (
            self.x_off + (p.x - self.xmin) * self.scale,
            self.y_off + (self.ymax - p.y) * self.scale,
        )


def render(state: ConstructionState, opts: RenderOptions | None = None) -> str:
    """Render the state to an SVG document string."""
    opts = opts or RenderOptions()
    box = compute_viewport(state, opts.margin_fraction)
    mapper = _Mapper(box, opts)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{opts.width}" '
        f'height="{opts.height}" viewBox="0 0 {opts.width} {opts.height}">',
        f'<rect width="{opts.width}" height="{opts.height}" fill="white"/>',
    ]
    labels: list[str] = []
    for name, obj in state.objects.items():
        element = _draw(obj, name, box, mapper, opts, labels)
        if element:
            parts.append(element)
    parts.extend(labels)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _draw(obj, name: str, box, mapper: _Mapper, opts: RenderOptions, labels: list[str]) -> str:
    sw = opts.stroke_widths
    if isinstance(obj, Point):
        x, y = mapper.map(obj)
        if opts.label_points:
            labels.append(
                f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-size="12" '
                f'font-family="monospace">{name}</text>'
            )
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="black"/>'
    if isinstance(obj, Segment):
        x1, y1 = mapper.map(obj.a)
        x2, y2 = mapper.map(obj.b)
        return (
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="black" stroke-width="{sw["segment"]}"/>'
        )
    if isinstance(obj, (Line, Ray)):
        is_ray = isinstance(obj, Ray)
        base = obj.origin if is_ray else obj.base
        clipped = _clip_line_to_box(base, obj.dx, obj.dy, box, ray=is_ray)
        if clipped is None:
            return ""
        x1, y1 = mapper.map(clipped[0])
        x2, y2 = mapper.map(clipped[1])
        key = "ray" if is_ray else "line"
        return (
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="steelblue" stroke-width="{sw[key]}"/>'
        )
    if isinstance(obj, Circle):
        cx, cy = mapper.map(obj.center)
        r = obj.radius * mapper.scale
        return (
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" '
            f'stroke="black" stroke-width="{sw["circle"]}"/>'
        )
    if isinstance(obj, Angle):
        return _draw_angle_arc(obj, mapper, sw["angle"])
    # scalars and consts are not rendered
    return ""


def _draw_angle_arc(obj: Angle, mapper: _Mapper, stroke_width: float) -> str:
    magnitude, oriented = measure_angle_object(obj)
    r_px = 18.0
    a1 = math.atan2(obj.d1y, obj.d1x)
    span = math.radians(oriented if oriented <= 180.0 else oriented - 360.0)
    vx, vy = mapper.map(obj.vertex)
    x1 = vx + r_px * math.cos(a1)
    y1 = vy - r_px * math.sin(a1)
    x2 = vx + r_px * math.cos(a1 + span)
    y2 = vy - r_px * math.sin(a1 + span)
    sweep = 0 if span > 0 else 1  # screen Y is flipped
    return (
        f'<path d="M {_fmt(x1)} {_fmt(y1)} A {_fmt(r_px)} {_fmt(r_px)} 0 0 {sweep} '
        f'{_fmt(x2)} {_fmt(y2)}" fill="none" stroke="darkred" '
        f'stroke-width="{stroke_width}"/>'
        f'<text x="{_fmt(vx + r_px + 4)}" y="{_fmt(vy)}" font-size="10" '
        f'font-family="monospace" fill="darkred">{magnitude:.1f}°</text>'
    )


def render_to_file(state: ConstructionState, path, opts: RenderOptions | None = None) -> None:
    document = render(state, opts)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(document)
