"""
SVG figures of tile sets, windows, partitions and substitutions, with an
optional PNG conversion through Wand.

Edge colours follow the label class: 00* blue, 01* yellow, 11* white.
Partition atoms labelled by tiles are filled with the colour of the tile
family, green where the blue and yellow stripes overlap.
"""
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Any, Dict, Hashable, Optional, Sequence, Union

from script.coding import Window
from script.geometry import LabeledPartition
from script.logger import logger
from script.substitution import Substitution2d
from script.tiles import Family, LabelError, TileSet, WangTile, classify, metallic_tiles, render_label

SVG_NS = "http://www.w3.org/2000/svg"

BLUE = "#6fa8dc"
YELLOW = "#ffd966"
GREEN = "#93c47d"
WHITE = "#ffffff"
GRAY = "#b7b7b7"
STROKE = "#333333"

FAMILY_COLORS = {
    Family.WHITE: WHITE,
    Family.BLUE_H: BLUE,
    Family.BLUE_V: BLUE,
    Family.YELLOW_H: YELLOW,
    Family.YELLOW_V: YELLOW,
    Family.GREEN_H: GREEN,
    Family.GREEN_V: GREEN,
    Family.ANTIGREEN_H: GREEN,
    Family.ANTIGREEN_V: GREEN,
    Family.JUNCTION: GRAY,
}

DEFAULT_STYLE = {
    "tile_size": 48,
    "partition_size": 600,
    "stroke_width": 1,
    "font_size": 10,
    "png_density": 96,
}


class RenderError(RuntimeError):
    """Figure conversion failed."""


def _num(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def label_color(v: Sequence[int]) -> str:
    if v[0] == 0 and v[1] == 0:
        return BLUE
    if v[0] == 0:
        return YELLOW
    return WHITE


def _style(style: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    merged = dict(DEFAULT_STYLE)
    merged.update(style or {})
    return merged


def _root(width: float, height: float) -> ET.Element:
    return ET.Element("svg", xmlns=SVG_NS, version="1.1", width=_num(width), height=_num(height),
                      viewBox=f"0 0 {_num(width)} {_num(height)}")


def _tostring(root: ET.Element) -> str:
    return ET.tostring(root, encoding="unicode") + "\n"


def _draw_tile(parent: ET.Element, tile: WangTile, n: int, x: float, y: float, size: float,
               style: Dict[str, Any], labels: bool = True) -> None:
    """Tile whose top-left page corner is (x, y)."""
    cx, cy = x + size / 2, y + size / 2
    corners = {
        "right": ((x + size, y), (x + size, y + size)),
        "top": ((x, y), (x + size, y)),
        "left": ((x, y + size), (x, y)),
        "bottom": ((x + size, y + size), (x, y + size)),
    }
    group = ET.SubElement(parent, "g")
    try:
        group.set("class", classify(n, tile).family.value)
    except LabelError:
        pass
    for side, ((ax, ay), (bx, by)) in corners.items():
        label = getattr(tile, side)
        ET.SubElement(group, "polygon",
                      points=f"{_num(ax)},{_num(ay)} {_num(bx)},{_num(by)} {_num(cx)},{_num(cy)}",
                      fill=label_color(label), stroke=STROKE,
                      **{"stroke-width": _num(style["stroke_width"] / 2)})
    ET.SubElement(group, "rect", x=_num(x), y=_num(y), width=_num(size), height=_num(size),
                  fill="none", stroke=STROKE, **{"stroke-width": _num(style["stroke_width"])})
    if not labels:
        return
    font = style["font_size"]
    offsets = {
        "right": (x + size - font * 1.2, cy + font / 3),
        "top": (cx - font, y + font),
        "left": (x + 2, cy + font / 3),
        "bottom": (cx - font, y + size - 3),
    }
    for side, (tx, ty) in offsets.items():
        text = ET.SubElement(group, "text", x=_num(tx), y=_num(ty),
                             **{"font-size": _num(font * 0.7), "font-family": "monospace"})
        text.text = render_label(getattr(tile, side), n)


def _grid_svg(rows: Sequence[Sequence[WangTile]], n: int, style: Dict[str, Any],
              captions: Optional[Sequence[Sequence[str]]] = None, gap: float = 0) -> str:
    """``rows[j][i]`` with row 0 drawn at the bottom."""
    size = style["tile_size"]
    height = len(rows)
    width = max(len(r) for r in rows)
    step = size + gap
    caption_room = style["font_size"] * 1.5 if captions else 0
    root = _root(width * step + gap, height * (step + caption_room) + gap)
    for j, row in enumerate(rows):
        top = (height - 1 - j) * (step + caption_room) + gap
        for i, tile in enumerate(row):
            left = i * step + gap
            _draw_tile(root, tile, n, left, top, size, style)
            if captions:
                text = ET.SubElement(root, "text", x=_num(left + size / 2 - style["font_size"]),
                                     y=_num(top + size + style["font_size"]),
                                     **{"font-size": _num(style["font_size"]), "font-family": "monospace"})
                text.text = captions[j][i]
    return _tostring(root)


def tileset_svg(ts: TileSet, columns: int = 10, style: Optional[Dict[str, Any]] = None) -> str:
    """Tiles in canonical order, first tile at the top left, captioned by index."""
    style = _style(style)
    lines = [list(ts.tiles[k:k + columns]) for k in range(0, len(ts), columns)]
    captions = [[str(k + i) for i in range(len(line))] for k, line in zip(range(0, len(ts), columns), lines)]
    return _grid_svg(list(reversed(lines)), ts.n, style, list(reversed(captions)), gap=style["tile_size"] / 4)


def window_svg(w: Window, style: Optional[Dict[str, Any]] = None) -> str:
    return _grid_svg(w.tile_rows(), w.n, _style(style))


def atom_color(label: Hashable, n: int) -> str:
    if isinstance(label, WangTile):
        try:
            return FAMILY_COLORS[classify(n, label).family]
        except LabelError:
            return GRAY
    if isinstance(label, tuple) and len(label) == 3:
        return label_color(label)
    return GRAY


def _atom_name(label: Hashable, n: int) -> str:
    if isinstance(label, WangTile):
        return " ".join(render_label(v, n) for v in label)
    if isinstance(label, tuple) and len(label) == 3:
        return render_label(label, n)
    return str(label)


def partition_svg(P: LabeledPartition, n: int, style: Optional[Dict[str, Any]] = None,
                  colors: Optional[Dict[Hashable, str]] = None) -> str:
    """Atoms as filled polygons in a y-up frame over the domain's bounding box."""
    style = _style(style)
    size = style["partition_size"]
    x0, y0, x1, y1 = (float(v) for v in P.domain.bbox)
    scale = size / max(x1 - x0, y1 - y0)
    margin = style["font_size"]
    width, height = (x1 - x0) * scale + 2 * margin, (y1 - y0) * scale + 2 * margin
    root = _root(width, height)
    frame = ET.SubElement(root, "g", transform=(f"matrix({_num(scale)} 0 0 {_num(-scale)} "
                                                f"{_num(margin - x0 * scale)} {_num(margin + y1 * scale)})"))
    texts = ET.SubElement(root, "g", **{"font-size": _num(style["font_size"]), "font-family": "monospace"})
    for label, polys in P.atoms.items():
        fill = (colors or {}).get(label) or atom_color(label, n)
        for poly in polys:
            coords = poly.float_vertices()
            ET.SubElement(frame, "polygon", points=" ".join(f"{_num(x)},{_num(y)}" for x, y in coords),
                          fill=fill, stroke=STROKE,
                          **{"stroke-width": _num(style["stroke_width"] / scale), "data-label": _atom_name(label, n)})
            if isinstance(label, WangTile):
                continue
            cx = sum(x for x, _ in coords) / len(coords)
            cy = sum(y for _, y in coords) / len(coords)
            text = ET.SubElement(texts, "text", x=_num(margin + (cx - x0) * scale),
                                 y=_num(margin + (y1 - cy) * scale), **{"text-anchor": "middle"})
            text.text = _atom_name(label, n)
    return _tostring(root)


def substitution_svg(s: Substitution2d, n: int, ts: Optional[TileSet] = None,
                     columns: int = 6, style: Optional[Dict[str, Any]] = None) -> str:
    """Each rule drawn as its source tile followed by the image block."""
    style = _style(style)
    ts = ts or metallic_tiles(n)
    size = style["tile_size"]
    blocks = list(s.rules.items())
    cell_w = (1 + max(shape[0] for shape in s.shapes().values())) * size + size
    cell_h = max(shape[1] for shape in s.shapes().values()) * size + size
    rows_needed = (len(blocks) + columns - 1) // columns
    root = _root(min(columns, len(blocks)) * cell_w, rows_needed * cell_h)
    for k, (label, block) in enumerate(blocks):
        ox, oy = (k % columns) * cell_w + size / 4, (k // columns) * cell_h + size / 4
        height = len(block)
        _draw_tile(root, ts[label], n, ox, oy + (height - 1) * size / 2, size, style, labels=False)
        caption = ET.SubElement(root, "text", x=_num(ox), y=_num(oy + height * size + style["font_size"]),
                                **{"font-size": _num(style["font_size"]), "font-family": "monospace"})
        caption.text = f"{label} ↦"
        for j, row in enumerate(block):
            for i, image in enumerate(row):
                _draw_tile(root, ts[image], n, ox + (i + 1.25) * size, oy + (height - 1 - j) * size,
                           size, style, labels=False)
    return _tostring(root)


def render_svg(obj: Any, n: Optional[int] = None, style: Optional[Dict[str, Any]] = None) -> str:
    if isinstance(obj, TileSet):
        return tileset_svg(obj, style=style)
    if isinstance(obj, Window):
        return window_svg(obj, style=style)
    if isinstance(obj, LabeledPartition):
        if n is None:
            raise RenderError("rendering a partition needs n")
        return partition_svg(obj, n, style=style)
    if isinstance(obj, Substitution2d):
        if n is None:
            raise RenderError("rendering a substitution needs n")
        return substitution_svg(obj, n, style=style)
    raise RenderError(f"cannot render {type(obj).__name__}")


def svg_to_png(svg: str, path: Union[str, Path], density: int = 96) -> Path:
    """Rasterize through ImageMagick; raises RenderError when Wand is unusable."""
    try:
        from wand.image import Image as WandImage
        from wand.exceptions import WandException
    except ImportError as e:
        raise RenderError(f"PNG output needs Wand and ImageMagick: {e}") from e
    path = Path(path)
    try:
        with WandImage(blob=svg.encode("utf-8"), format="svg", resolution=density) as img:
            img.format = "png"
            img.save(filename=str(path))
    except WandException as e:
        raise RenderError(f"could not convert SVG to PNG: {e}") from e
    logger.info(f"Wrote {path}")
    return path
