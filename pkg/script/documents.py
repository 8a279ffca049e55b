"""
JSON and text encodings of tile sets, windows, partitions, substitutions and
check reports.  Every JSON document carries ``schema`` and ``generator``.
"""
import json
from pathlib import Path
from typing import Any, Dict, Hashable, List, Optional, Union

from script.coding import DomainError, Window
from script.geometry import LabeledPartition
from script.logger import logger
from script.quadfield import render
from script.substitution import Substitution2d
from script.tiles import Label, LabelError, TileSet, WangTile, classify, metallic_tiles, render_label
from script.version import generator_tag

SCHEMA = "metallic-tiler/v1"


class DocumentError(ValueError):
    """A document is malformed or of the wrong kind."""


def _envelope(kind: str, n: int, **body: Any) -> Dict[str, Any]:
    doc = {"schema": SCHEMA, "generator": generator_tag(), "kind": kind, "n": n}
    doc.update(body)
    return doc


def tile_to_json(tile: WangTile) -> Dict[str, List[int]]:
    return {side: list(label) for side, label in zip(WangTile._fields, tile)}


def tile_from_json(obj: Dict[str, Any]) -> WangTile:
    try:
        return WangTile(*(Label(*obj[side]) for side in WangTile._fields))
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed tile {obj!r}") from e


def tileset_document(ts: TileSet) -> Dict[str, Any]:
    tiles = []
    for idx, tile in enumerate(ts):
        entry = {"index": idx, **tile_to_json(tile)}
        try:
            entry["family"] = str(classify(ts.n, tile))
        except LabelError:
            pass
        tiles.append(entry)
    return _envelope("tileset", ts.n, set=ts.kind, count=len(ts), tiles=tiles)


def tileset_tsv(ts: TileSet) -> str:
    lines = ["index\tright\ttop\tleft\tbottom\tfamily"]
    for idx, tile in enumerate(ts):
        try:
            family = str(classify(ts.n, tile))
        except LabelError:
            family = ""
        words = "\t".join(render_label(label, ts.n) for label in tile)
        lines.append(f"{idx}\t{words}\t{family}")
    return "\n".join(lines) + "\n"


def window_document(w: Window, point: Optional[tuple] = None) -> Dict[str, Any]:
    """Cells are listed bottom row first, as indices into the base tile set."""
    doc = _envelope("window", w.n, tileset=w.tileset.kind, origin=list(w.origin), width=w.width, height=w.height,
                    cells=[list(row) for row in w.cells])
    if point is not None:
        doc["point"] = {"x": render(point[0]), "y": render(point[1])}
    return doc


def window_from_document(doc: Dict[str, Any]) -> Window:
    check_envelope(doc, "window")
    try:
        n = int(doc["n"])
        origin = tuple(int(v) for v in doc["origin"])
        cells = tuple(tuple(int(v) for v in row) for row in doc["cells"])
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed window document: {e}") from e
    if len(origin) != 2:
        raise DocumentError("window origin must have two coordinates")
    try:
        return Window(n, origin, cells, metallic_tiles(n))
    except (DomainError, LabelError) as e:
        raise DocumentError(str(e)) from e


def _label_key(label: Hashable, n: int) -> str:
    if isinstance(label, WangTile):
        return " ".join(render_label(v, n) for v in label)
    if isinstance(label, tuple) and len(label) == 3 and all(isinstance(v, int) for v in label):
        return render_label(label, n)
    return str(label)


def _label_json(label: Hashable) -> Any:
    if isinstance(label, WangTile):
        return [list(v) for v in label]
    if isinstance(label, tuple):
        return list(label)
    return label


def partition_document(P: LabeledPartition, n: int) -> Dict[str, Any]:
    """Coordinates are exact number objects {"a": p/q, "b": r/s} meaning a + b*beta."""
    atoms = []
    for label, polys in P.atoms.items():
        atoms.append({
            "label": _label_json(label),
            "name": _label_key(label, n),
            "area": render(P.atom_area(label)),
            "polygons": [[[x.to_json(), y.to_json()] for x, y in poly.vertices] for poly in polys],
        })
    return _envelope("partition", n, name=P.name, atom_count=len(P),
                     domain=[[x.to_json(), y.to_json()] for x, y in P.domain.vertices], atoms=atoms)


def substitution_document(s: Substitution2d, n: int, ts: Optional[TileSet] = None) -> Dict[str, Any]:
    """Rules keyed by label; blocks listed bottom row first."""
    ts = ts or metallic_tiles(n)
    rules = {str(a): [[str(x) for x in row] for row in block] for a, block in s.rules.items()}
    return _envelope("substitution", n, substitution_kind=s.kind, row_order="bottom-up", rules=rules,
                     tile_order=[tile_to_json(t) for t in ts])


def substitution_from_document(doc: Dict[str, Any]) -> Substitution2d:
    check_envelope(doc, "substitution")
    try:
        rules = {int(a): [[int(x) for x in row] for row in block] for a, block in doc["rules"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise DocumentError(f"malformed substitution document: {e}") from e
    return Substitution2d(rules, doc.get("substitution_kind", "block"))


def substitution_text(s: Substitution2d) -> str:
    """One rule per paragraph, top row of the block first."""
    width = max(len(str(x)) for block in s.rules.values() for row in block for x in row)
    paragraphs = []
    for label, block in s.rules.items():
        lines = [f"{label} ↦"]
        for row in reversed(block):
            lines.append("    " + " ".join(str(x).rjust(width) for x in row))
        paragraphs.append("\n".join(lines))
    return "\n\n".join(paragraphs) + "\n"


def report_document(kind: str, n: Optional[int], checks: Dict[str, Any]) -> Dict[str, Any]:
    """``checks`` maps a check name to whether it passed."""
    return _envelope(kind, n, checks={k: bool(v) for k, v in checks.items()}, passed=all(checks.values()))


def check_envelope(doc: Any, kind: Optional[str] = None) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise DocumentError(f"unsupported schema {doc.get('schema')!r}")
    if kind is not None and doc.get("kind") != kind:
        raise DocumentError(f"expected a {kind} document, found {doc.get('kind')!r}")


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save_document(doc: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(doc))
    logger.info(f"Wrote {doc.get('kind', 'document')} to {path}")
    return path


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise DocumentError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e}") from e
    check_envelope(doc)
    return doc

